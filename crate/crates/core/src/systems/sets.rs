use super::{
    compile, contains, intervals_intersect, jump, odometer_value, states, OpenSetSpec, PointRef, Region,
    System, SystemError,
};
use crate::intfam::IntWindowSet;
use crate::rational::{self, Rational};
use num_traits::Zero;

/// `{n in [0,H) : T^n x in U}`, evaluated through per-variant shortcuts.
pub fn return_set(sys: &System, x: &PointRef, u: &OpenSetSpec, horizon: usize) -> Result<IntWindowSet, SystemError> {
    sys.check_point(x)?;
    let region = compile(sys, u)?;
    Ok(fast_return(sys, x, &region, horizon))
}

/// The same set by stepping the point one map application at a time.
pub fn return_set_naive(
    sys: &System,
    x: &PointRef,
    u: &OpenSetSpec,
    horizon: usize,
) -> Result<IntWindowSet, SystemError> {
    sys.check_point(x)?;
    let region = compile(sys, u)?;
    let mut out = IntWindowSet::empty(horizon);
    let mut current = x.clone();
    for n in 0..horizon {
        if contains(sys, &region, &current) {
            out.insert(n);
        }
        current = jump(sys, &current, 1);
    }
    Ok(out)
}

fn residue_start(sys: &System, x: &PointRef) -> u64 {
    match (sys, x) {
        (System::CyclicRotation { .. }, PointRef::Residue { value }) => *value,
        (System::OdometerTruncation { radixes }, PointRef::Digits { digits }) => odometer_value(radixes, digits),
        _ => unreachable!("residue point"),
    }
}

pub(crate) fn fast_return(sys: &System, x: &PointRef, region: &Region, horizon: usize) -> IntWindowSet {
    match (sys, x, region) {
        (_, _, Region::Everything) => IntWindowSet::full(horizon),
        (System::Power { base, exponent }, ..) => {
            let e = *exponent as usize;
            fast_return(base, x, region, (horizon.max(1) - 1) * e + 1).subsample(e, 0, horizon)
        }
        (_, PointRef::Sequence { generator, shift }, Region::Word(w)) => {
            if w.is_empty() {
                return IntWindowSet::full(horizon);
            }
            let seq = generator.slice(*shift, horizon + w.len() - 1);
            IntWindowSet::from_fn(horizon, |n| seq[n..n + w.len()] == w[..])
        }
        (System::CyclicRotation { .. } | System::OdometerTruncation { .. }, _, Region::Residues(members)) => {
            let m = members.len() as u64;
            let start = residue_start(sys, x);
            let pattern: Vec<bool> = (0..m).map(|j| members[((start + j) % m) as usize]).collect();
            IntWindowSet::periodic(horizon, &pattern)
        }
        (System::CircleRotation { angle, .. }, PointRef::Circle { position }, Region::Interval(i)) => {
            let q = *angle.denom();
            let pattern: Vec<bool> = (0..q)
                .map(|j| i.contains(&rational::frac(&(position + angle * Rational::from_integer(j)))))
                .collect();
            IntWindowSet::periodic(horizon, &pattern)
        }
        (System::Product { factors }, PointRef::Tuple { coords }, Region::Product(rs)) => {
            let mut out = IntWindowSet::full(horizon);
            for ((f, c), r) in factors.iter().zip(coords).zip(rs) {
                out.intersect_with(&fast_return(f, c, r, horizon));
            }
            out
        }
        (System::Tower { base, height }, PointRef::Level { base: b, level }, Region::Level { level: l, base: r }) => {
            let h = *height as usize;
            let offset = *level as usize - 1;
            let inner = fast_return(base, b, r, (offset + horizon) / h + 1);
            IntWindowSet::from_fn(horizon, |n| {
                let t = offset + n;
                t % h == *l as usize - 1 && inner.contains(t / h)
            })
        }
        _ => {
            let mut out = IntWindowSet::empty(horizon);
            let mut current = x.clone();
            for n in 0..horizon {
                if contains(sys, region, &current) {
                    out.insert(n);
                }
                current = jump(sys, &current, 1);
            }
            out
        }
    }
}

/// `N_{T×S}((x,y), U×V)` as the intersection of the factor return sets.
pub fn transfer_set(
    sys_x: &System,
    sys_y: &System,
    x: &PointRef,
    y: &PointRef,
    u: &OpenSetSpec,
    v: &OpenSetSpec,
    horizon: usize,
) -> Result<IntWindowSet, SystemError> {
    let mut out = return_set(sys_x, x, u, horizon)?;
    out.intersect_with(&return_set(sys_y, y, v, horizon)?);
    Ok(out)
}

/// `{n in [0,H) : U ∩ T^{-n} V ≠ ∅}`.
pub fn hitting_set(sys: &System, u: &OpenSetSpec, v: &OpenSetSpec, horizon: usize) -> Result<IntWindowSet, SystemError> {
    let (ru, rv) = (compile(sys, u)?, compile(sys, v)?);
    hitting(sys, &ru, &rv, horizon)
}

/// Full-shift word extension: `[u]` and `σ^{-n}[v]` share a point iff the
/// words agree where they overlap.
fn compatible(u: &[u8], v: &[u8], n: usize) -> bool {
    v.iter().enumerate().all(|(i, b)| u.get(n + i).is_none_or(|a| a == b))
}

fn hitting(sys: &System, ru: &Region, rv: &Region, horizon: usize) -> Result<IntWindowSet, SystemError> {
    Ok(match (sys, ru, rv) {
        (System::Power { base, exponent }, ..) => {
            let e = *exponent as usize;
            hitting(base, ru, rv, (horizon.max(1) - 1) * e + 1)?.subsample(e, 0, horizon)
        }
        (System::FullShift { .. }, Region::Word(u), Region::Word(v)) => {
            IntWindowSet::from_fn(horizon, |n| compatible(u, v, n))
        }
        (System::SubshiftClosure { generator, language_window }, Region::Word(u), Region::Word(v)) => {
            // both words must occur in one factor of the generator prefix
            let lw = *language_window;
            let prefix = generator.prefix(lw + horizon + v.len() + u.len());
            let occurs = |w: &[u8], len: usize| {
                IntWindowSet::from_fn(len, |p| prefix[p..p + w.len()] == w[..])
            };
            let occ_u = occurs(u, lw);
            let occ_v = occurs(v, lw + horizon);
            let mut out = IntWindowSet::empty(horizon);
            for p in occ_u.iter() {
                out.union_with(&occ_v.offset_window(p, horizon));
            }
            out
        }
        (_, Region::Everything, _) | (_, _, Region::Everything) if !sys.is_shift() => IntWindowSet::full(horizon),
        (System::CircleRotation { angle, .. }, Region::Interval(a), Region::Interval(b)) => {
            let q = *angle.denom();
            let pattern: Vec<bool> = (0..q)
                .map(|n| intervals_intersect(a, &b.rotated(&-(angle * Rational::from_integer(n)))))
                .collect();
            IntWindowSet::periodic(horizon, &pattern)
        }
        (System::Product { factors }, Region::Product(us), Region::Product(vs)) => {
            let mut out = IntWindowSet::full(horizon);
            for ((f, u), v) in factors.iter().zip(us).zip(vs) {
                out.intersect_with(&hitting(f, u, v, horizon)?);
            }
            out
        }
        (System::Tower { base, height }, Region::Level { level: i, base: a }, Region::Level { level: j, base: b }) => {
            let h = *height as usize;
            let offset = *i as usize - 1;
            let inner = hitting(base, a, b, (offset + horizon) / h + 1)?;
            IntWindowSet::from_fn(horizon, |n| {
                let t = offset + n;
                t % h == *j as usize - 1 && inner.contains(t / h)
            })
        }
        (System::Ladder { base, .. }, Region::Rung { rung: i, base: a }, Region::Rung { rung: j, base: b }) => {
            let climb = *i as usize - 1;
            let inner = hitting(base, a, b, horizon.saturating_sub(climb).max(1))?;
            IntWindowSet::from_fn(horizon, |n| {
                if n <= climb {
                    *i as usize - n == *j as usize && inner.contains(0)
                } else {
                    *j == 1 && inner.contains(n - climb)
                }
            })
        }
        _ => match states(sys) {
            Some(all) => {
                let mut out = IntWindowSet::empty(horizon);
                for z in all.iter().filter(|z| contains(sys, ru, z)) {
                    out.union_with(&fast_return(sys, z, rv, horizon));
                }
                out
            }
            None => {
                return Err(SystemError::Unsupported(format!("hitting sets on {sys} for these open sets")))
            }
        },
    })
}

/// `{n in [0,H) : d(T^n x, T^n y) < eps}`.
pub fn proximal_run_set(
    sys: &System,
    x: &PointRef,
    y: &PointRef,
    eps: &Rational,
    horizon: usize,
) -> Result<IntWindowSet, SystemError> {
    sys.check_point(x)?;
    sys.check_point(y)?;
    if *eps <= Rational::zero() {
        return Err(SystemError::InvalidParameter("epsilon must be positive".into()));
    }
    Ok(proximal(sys, x, y, eps, horizon))
}

fn proximal(sys: &System, x: &PointRef, y: &PointRef, eps: &Rational, horizon: usize) -> IntWindowSet {
    match (sys, x, y) {
        (System::Power { base, exponent }, ..) => {
            let e = *exponent as usize;
            proximal(base, x, y, eps, (horizon.max(1) - 1) * e + 1).subsample(e, 0, horizon)
        }
        (_, PointRef::Sequence { .. }, PointRef::Sequence { .. }) => {
            let k = rational::agreement_depth(eps);
            let len = horizon + k;
            let (sx, sy) = (x.symbols(len).expect("sequence"), y.symbols(len).expect("sequence"));
            // next_bad[i]: first mismatch at or after i
            let mut next_bad = vec![len; len + 1];
            for i in (0..len).rev() {
                next_bad[i] = if sx[i] != sy[i] { i } else { next_bad[i + 1] };
            }
            IntWindowSet::from_fn(horizon, |n| next_bad[n] >= n + k)
        }
        // rotations are isometries
        (System::CyclicRotation { .. } | System::OdometerTruncation { .. } | System::CircleRotation { .. }, ..) => {
            if super::within(sys, x, y, eps) {
                IntWindowSet::full(horizon)
            } else {
                IntWindowSet::empty(horizon)
            }
        }
        (System::Product { factors }, PointRef::Tuple { coords: xs }, PointRef::Tuple { coords: ys }) => {
            let mut out = IntWindowSet::full(horizon);
            for (f, (a, b)) in factors.iter().zip(xs.iter().zip(ys)) {
                out.intersect_with(&proximal(f, a, b, eps, horizon));
            }
            out
        }
        (System::Tower { base, height }, PointRef::Level { base: a, level: i }, PointRef::Level { base: b, level: j })
            if i == j =>
        {
            let h = *height as usize;
            let offset = *i as usize - 1;
            let inner = proximal(base, a, b, eps, (offset + horizon) / h + 1);
            IntWindowSet::from_fn(horizon, |n| inner.contains((offset + n) / h))
        }
        _ => {
            let mut out = IntWindowSet::empty(horizon);
            let (mut a, mut b) = (x.clone(), y.clone());
            for n in 0..horizon {
                if super::within(sys, &a, &b, eps) {
                    out.insert(n);
                }
                a = jump(sys, &a, 1);
                b = jump(sys, &b, 1);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symseq::SymbolGenerator;

    fn members(w: &IntWindowSet) -> Vec<usize> {
        w.iter().collect()
    }

    #[test]
    fn shift_return_sets() {
        let w = return_set(&System::full_shift(2), &PointRef::periodic("01"), &OpenSetSpec::cylinder("0"), 10).unwrap();
        assert_eq!(members(&w), vec![0, 2, 4, 6, 8]);
    }

    #[test]
    fn cyclic_return_set() {
        let w = return_set(&System::cyclic(5), &PointRef::residue(0), &OpenSetSpec::residues([0]), 20).unwrap();
        assert_eq!(members(&w), vec![0, 5, 10, 15]);
    }

    #[test]
    fn fibonacci_gaps_are_one_or_two() {
        let fib = SymbolGenerator::substitution(&[('0', "01"), ('1', "0")], '0').unwrap();
        let sys = System::subshift(fib.clone());
        let w = return_set(&sys, &PointRef::sequence(fib.clone()), &OpenSetSpec::cylinder("0"), 1000).unwrap();
        // oracle: scan the prefix directly
        let prefix = fib.prefix(1000);
        let zeros: Vec<usize> = (0..1000).filter(|&i| prefix[i] == b'0').collect();
        assert_eq!(members(&w), zeros);
        assert!(zeros.windows(2).all(|p| matches!(p[1] - p[0], 1 | 2)));
    }

    #[test]
    fn transfer_examples() {
        let x = PointRef::periodic("011");
        let w = transfer_set(
            &System::full_shift(2),
            &System::cyclic(2),
            &x,
            &PointRef::residue(0),
            &OpenSetSpec::cylinder("011"),
            &OpenSetSpec::residues([0]),
            60,
        )
        .unwrap();
        assert_eq!(members(&w), (0..60).step_by(6).collect::<Vec<_>>());
        let w = transfer_set(
            &System::full_shift(2),
            &System::cyclic(2),
            &PointRef::eventually_periodic("1", "0"),
            &PointRef::residue(0),
            &OpenSetSpec::cylinder("1"),
            &OpenSetSpec::residues([1]),
            100,
        )
        .unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn hitting_examples() {
        let full = System::full_shift(2);
        let w = hitting_set(&full, &OpenSetSpec::cylinder("0"), &OpenSetSpec::cylinder("1"), 10).unwrap();
        assert_eq!(members(&w), (1..10).collect::<Vec<_>>());
        let w = hitting_set(&full, &OpenSetSpec::cylinder("0"), &OpenSetSpec::cylinder("0"), 10).unwrap();
        assert_eq!(members(&w), (0..10).collect::<Vec<_>>());
        let w = hitting_set(&System::cyclic(5), &OpenSetSpec::residues([0]), &OpenSetSpec::residues([2]), 20).unwrap();
        assert_eq!(members(&w), vec![2, 7, 12, 17]);
    }

    #[test]
    fn hitting_by_word_enumeration() {
        // oracle: enumerate all binary words of length n + |v| and test both cylinders
        let full = System::full_shift(2);
        let (u, v) = ("01", "110");
        let w = hitting_set(&full, &OpenSetSpec::cylinder(u), &OpenSetSpec::cylinder(v), 8).unwrap();
        for n in 0..8 {
            let len = (n + v.len()).max(u.len());
            let exists = (0..1u32 << len).any(|bits| {
                let word: Vec<u8> = (0..len).map(|i| b'0' + (bits >> i & 1) as u8).collect();
                word.starts_with(u.as_bytes()) && word[n..].starts_with(v.as_bytes())
            });
            assert_eq!(w.contains(n), exists, "n = {n}");
        }
    }

    #[test]
    fn circle_hitting_matches_exhaustive_grid() {
        let third = Rational::new(1, 3);
        let sys = System::circle(third, 6);
        let u = OpenSetSpec::arc(Rational::new(0, 1), Rational::new(1, 6));
        let v = OpenSetSpec::arc(Rational::new(1, 4), Rational::new(1, 2));
        let w = hitting_set(&sys, &u, &v, 9).unwrap();
        // oracle: T^n U = [n/3, n/3 + 1/6) never wraps here
        let expected: Vec<usize> = (0..9)
            .filter(|&n| {
                let shift = rational::frac(&(third * Rational::from_integer(n as i128)));
                let lo = shift;
                let hi = shift + Rational::new(1, 6);
                lo < Rational::new(1, 2) && hi > Rational::new(1, 4)
            })
            .collect();
        assert_eq!(members(&w), vec![1, 4, 7]);
        assert_eq!(members(&w), expected);
    }

    #[test]
    fn tower_and_power_sets() {
        let tower = System::tower(System::cyclic(3), 2);
        let x = PointRef::level(PointRef::residue(0), 1);
        let u = OpenSetSpec::level(1, OpenSetSpec::residues([0]));
        assert_eq!(members(&return_set(&tower, &x, &u, 20).unwrap()), vec![0, 6, 12, 18]);
        assert_eq!(return_set(&tower, &x, &u, 200).unwrap(), return_set_naive(&tower, &x, &u, 200).unwrap());
        let pow = System::power(System::full_shift(2), 2);
        let w = return_set(&pow, &PointRef::periodic("011"), &OpenSetSpec::cylinder("0"), 9).unwrap();
        assert_eq!(members(&w), vec![0, 3, 6]);
        let h = hitting_set(&tower, &u, &OpenSetSpec::level(2, OpenSetSpec::residues([1])), 12).unwrap();
        assert_eq!(members(&h), vec![3, 9]);
    }

    #[test]
    fn proximal_examples() {
        let full = System::full_shift(2);
        let x = PointRef::periodic("01");
        assert_eq!(proximal_run_set(&full, &x, &x, &Rational::new(1, 4), 50).unwrap().count(), 50);
        let c5 = System::cyclic(5);
        let p = proximal_run_set(&c5, &PointRef::residue(0), &PointRef::residue(1), &Rational::new(1, 5), 50).unwrap();
        assert!(p.is_empty());
        let a = PointRef::eventually_periodic("000111", "0");
        let b = PointRef::periodic("0");
        let p = proximal_run_set(&full, &a, &b, &Rational::new(1, 2), 12).unwrap();
        // agreement depth 2: positions n with a[n..n+2] = 00
        assert_eq!(members(&p), vec![0, 1, 6, 7, 8, 9, 10, 11]);
    }
}
