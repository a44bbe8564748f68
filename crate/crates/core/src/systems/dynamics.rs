use super::{odometer_digits, odometer_value, PointRef, System, SystemError};
use crate::rational::{self, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `T^n x` without membership checks.
pub(crate) fn jump(sys: &System, p: &PointRef, n: u64) -> PointRef {
    match (sys, p) {
        (System::Power { base, exponent }, p) => jump(base, p, n * *exponent as u64),
        (System::FullShift { .. } | System::SubshiftClosure { .. }, PointRef::Sequence { generator, shift }) => {
            PointRef::Sequence { generator: generator.clone(), shift: shift + n }.normalized()
        }
        (System::CyclicRotation { modulus }, PointRef::Residue { value }) => {
            PointRef::Residue { value: (value + n % modulus) % modulus }
        }
        (System::OdometerTruncation { radixes }, PointRef::Digits { digits }) => {
            let m = sys.residue_modulus().expect("odometer modulus");
            let v = (odometer_value(radixes, digits) + n % m) % m;
            PointRef::Digits { digits: odometer_digits(radixes, v) }
        }
        (System::CircleRotation { angle, .. }, PointRef::Circle { position }) => {
            let q = *angle.denom() as u64;
            let steps = Rational::from_integer((n % q) as i128);
            PointRef::Circle { position: rational::frac(&(position + angle * steps)) }
        }
        (System::Product { factors }, PointRef::Tuple { coords }) => PointRef::Tuple {
            coords: factors.iter().zip(coords).map(|(f, c)| jump(f, c, n)).collect(),
        },
        (System::Tower { base, height }, PointRef::Level { base: b, level }) => {
            let t = (*level - 1) as u64 + n;
            let h = *height as u64;
            PointRef::Level { base: Box::new(jump(base, b, t / h)), level: (t % h) as u32 + 1 }
        }
        (System::Ladder { base, .. }, PointRef::Rung { base: b, rung }) => {
            if *rung == 0 {
                p.clone()
            } else if n < *rung as u64 {
                PointRef::Rung { base: b.clone(), rung: rung - n as u32 }
            } else {
                let rest = n - (*rung as u64 - 1);
                PointRef::Rung { base: Box::new(jump(base, b, rest)), rung: 1 }
            }
        }
        _ => unreachable!("point {p} checked against {sys}"),
    }
}

pub fn advance(sys: &System, p: &PointRef, n: u64) -> Result<PointRef, SystemError> {
    sys.check_point(p)?;
    Ok(jump(sys, p, n))
}

pub fn step(sys: &System, p: &PointRef) -> Result<PointRef, SystemError> {
    advance(sys, p, 1)
}

/// `[x, Tx, ..., T^{H-1}x]`, built by repeated single steps.
pub fn trajectory(sys: &System, x: &PointRef, horizon: usize) -> Result<Vec<PointRef>, SystemError> {
    sys.check_point(x)?;
    let mut out = Vec::with_capacity(horizon);
    let mut current = x.clone();
    for _ in 0..horizon {
        let next = jump(sys, &current, 1);
        out.push(current);
        current = next;
    }
    Ok(out)
}

/// Every state of a finite system, in canonical order.
pub fn states(sys: &System) -> Option<Vec<PointRef>> {
    match sys {
        System::CyclicRotation { modulus } => Some((0..*modulus).map(PointRef::residue).collect()),
        System::OdometerTruncation { radixes } => {
            let m = sys.residue_modulus()?;
            Some((0..m).map(|v| PointRef::Digits { digits: odometer_digits(radixes, v) }).collect())
        }
        System::SubshiftClosure { generator, .. } => {
            let count = match generator.periodic_parts() {
                Some((pre, per)) => (pre.len() + per.len()) as u64,
                None => generator.period_bound()?,
            };
            let mut out: Vec<PointRef> = (0..count)
                .map(|s| PointRef::Sequence { generator: generator.clone(), shift: s }.normalized())
                .collect();
            // the prefix cache inside generators does not affect hashing
            #[allow(clippy::mutable_key_type)]
            let mut seen = std::collections::HashSet::new();
            out.retain(|p| seen.insert(p.clone()));
            Some(out)
        }
        System::Product { factors } => {
            let mut out = vec![Vec::new()];
            for f in factors {
                let fs = states(f)?;
                out = out
                    .into_iter()
                    .flat_map(|prefix: Vec<PointRef>| {
                        fs.iter().map(move |s| {
                            let mut p = prefix.clone();
                            p.push(s.clone());
                            p
                        })
                    })
                    .collect();
            }
            Some(out.into_iter().map(PointRef::tuple).collect())
        }
        System::Power { base, .. } => states(base),
        System::Tower { base, height } => {
            let bs = states(base)?;
            Some(bs.iter().flat_map(|b| (1..=*height).map(move |l| PointRef::level(b.clone(), l))).collect())
        }
        System::Ladder { base, depth } => {
            let bs = states(base)?;
            Some(
                bs.iter()
                    .flat_map(|b| {
                        (1..=*depth).chain([0]).map(move |rung| PointRef::Rung { base: Box::new(b.clone()), rung })
                    })
                    .collect(),
            )
        }
        System::FullShift { .. } | System::CircleRotation { .. } => None,
    }
}

/// A period of the orbit of `p` when `p` is periodic by construction.
pub fn point_period(sys: &System, p: &PointRef) -> Option<u64> {
    match (sys, p) {
        (System::Power { base, exponent }, p) => {
            let q = point_period(base, p)?;
            Some(q / q.gcd(&(*exponent as u64)))
        }
        (_, PointRef::Sequence { generator, shift }) => match generator.shifted(*shift) {
            Some(g) => g.period_bound(),
            None => generator.period_bound(),
        },
        (System::CyclicRotation { .. } | System::OdometerTruncation { .. }, _) => sys.residue_modulus(),
        (System::CircleRotation { angle, .. }, _) => Some(*angle.denom() as u64),
        (System::Product { factors }, PointRef::Tuple { coords }) => factors
            .iter()
            .zip(coords)
            .try_fold(1u64, |acc, (f, c)| Some(rational::lcm_u64(acc, point_period(f, c)?))),
        (System::Tower { base, height }, PointRef::Level { base: b, .. }) => {
            Some(point_period(base, b)? * *height as u64)
        }
        (System::Ladder { base, .. }, PointRef::Rung { base: b, rung }) => match rung {
            0 => Some(1),
            1 => point_period(base, b),
            _ => None,
        },
        _ => None,
    }
}

/// Minimal by construction: the system is minimal, the point is periodic, the
/// point generates a minimal subshift, or it is a tuple of periodic points with
/// at most one minimal non-periodic coordinate.
pub fn is_minimal_point(sys: &System, p: &PointRef) -> bool {
    if sys.is_minimal_by_construction() || point_period(sys, p).is_some() {
        return true;
    }
    match (sys, p) {
        (System::Power { base, .. }, p) => is_minimal_point(base, p),
        (System::FullShift { .. } | System::SubshiftClosure { .. }, PointRef::Sequence { generator, .. }) => {
            System::subshift(generator.clone()).is_minimal_by_construction()
        }
        (System::Tower { base, .. }, PointRef::Level { base: b, .. }) => is_minimal_point(base, b),
        (System::Product { factors }, PointRef::Tuple { coords }) => {
            let aperiodic: Vec<(&System, &PointRef)> =
                factors.iter().zip(coords).filter(|(f, c)| point_period(f, c).is_none()).collect();
            aperiodic.len() <= 1 && aperiodic.iter().all(|(f, c)| is_minimal_point(f, c))
        }
        _ => false,
    }
}

/// A distance value; `truncated` marks shift distances cut off at the
/// comparison depth and reported as 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distance {
    pub value: Rational,
    pub truncated: bool,
}

fn rung_height(rung: u32) -> Rational {
    if rung == 0 {
        Rational::zero()
    } else {
        Rational::new(1, rung as i128)
    }
}

fn residue_distance(m: u64, a: u64, b: u64) -> Rational {
    let d = a.abs_diff(b);
    Rational::new(d.min(m - d) as i128, m as i128)
}

/// Distance under the declared metric, comparing shift points on `depth` symbols.
pub fn distance(sys: &System, a: &PointRef, b: &PointRef, depth: usize) -> Result<Distance, SystemError> {
    sys.check_point(a)?;
    sys.check_point(b)?;
    Ok(dist(sys, a, b, depth))
}

fn dist(sys: &System, a: &PointRef, b: &PointRef, depth: usize) -> Distance {
    let exact = |value| Distance { value, truncated: false };
    match (sys, a, b) {
        (System::Power { base, .. }, ..) => dist(base, a, b, depth),
        (_, PointRef::Sequence { .. }, PointRef::Sequence { .. }) => {
            let (sa, sb) = (a.symbols(depth).expect("sequence"), b.symbols(depth).expect("sequence"));
            match sa.iter().zip(&sb).position(|(x, y)| x != y) {
                Some(k) => exact(rational::dyadic(k as u32)),
                None => Distance { value: Rational::zero(), truncated: a != b },
            }
        }
        (System::CyclicRotation { modulus }, PointRef::Residue { value: x }, PointRef::Residue { value: y }) => {
            exact(residue_distance(*modulus, *x, *y))
        }
        (System::OdometerTruncation { radixes }, PointRef::Digits { digits: x }, PointRef::Digits { digits: y }) => {
            let m = sys.residue_modulus().expect("odometer modulus");
            exact(residue_distance(m, odometer_value(radixes, x), odometer_value(radixes, y)))
        }
        (_, PointRef::Circle { position: x }, PointRef::Circle { position: y }) => {
            exact(rational::circle_distance(x, y))
        }
        (System::Product { factors }, PointRef::Tuple { coords: xs }, PointRef::Tuple { coords: ys }) => {
            factors.iter().zip(xs.iter().zip(ys)).fold(exact(Rational::zero()), |acc, (f, (x, y))| {
                let d = dist(f, x, y, depth);
                Distance { value: acc.value.max(d.value), truncated: acc.truncated || d.truncated }
            })
        }
        (System::Tower { base, .. }, PointRef::Level { base: x, level: i }, PointRef::Level { base: y, level: j }) => {
            if i != j {
                exact(Rational::one())
            } else {
                dist(base, x, y, depth)
            }
        }
        (System::Ladder { base, .. }, PointRef::Rung { base: x, rung: i }, PointRef::Rung { base: y, rung: j }) => {
            let d = dist(base, x, y, depth);
            let h = (rung_height(*i) - rung_height(*j)).abs();
            Distance { value: d.value.max(h), truncated: d.truncated }
        }
        _ => unreachable!("points checked against {sys}"),
    }
}

/// Exact test of `d(a, b) < eps`.
pub fn within(sys: &System, a: &PointRef, b: &PointRef, eps: &Rational) -> bool {
    match (sys, a, b) {
        (System::Power { base, .. }, ..) => within(base, a, b, eps),
        (_, PointRef::Sequence { .. }, PointRef::Sequence { .. }) => {
            let k = rational::agreement_depth(eps);
            a.symbols(k) == b.symbols(k)
        }
        (System::Product { factors }, PointRef::Tuple { coords: xs }, PointRef::Tuple { coords: ys }) => {
            factors.iter().zip(xs.iter().zip(ys)).all(|(f, (x, y))| within(f, x, y, eps))
        }
        (System::Tower { base, .. }, PointRef::Level { base: x, level: i }, PointRef::Level { base: y, level: j }) => {
            if i != j {
                Rational::one() < *eps
            } else {
                within(base, x, y, eps)
            }
        }
        (System::Ladder { base, .. }, PointRef::Rung { base: x, rung: i }, PointRef::Rung { base: y, rung: j }) => {
            (rung_height(*i) - rung_height(*j)).abs() < *eps && within(base, x, y, eps)
        }
        _ => dist(sys, a, b, 0).value < *eps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symseq::SymbolGenerator;

    #[test]
    fn cyclic_trajectory() {
        let t = trajectory(&System::cyclic(5), &PointRef::residue(0), 6).unwrap();
        let values: Vec<String> = t.iter().map(|p| p.to_string()).collect();
        assert_eq!(values, ["0", "1", "2", "3", "4", "0"]);
    }

    #[test]
    fn shift_step() {
        let next = step(&System::full_shift(2), &PointRef::periodic("01")).unwrap();
        assert_eq!(next, PointRef::periodic("10"));
    }

    #[test]
    fn tower_map_by_enumeration() {
        let sys = System::tower(System::cyclic(2), 3);
        let all = states(&sys).unwrap();
        assert_eq!(all.len(), 6);
        // oracle: the tower map written out by hand
        let oracle = |p: &PointRef| match p {
            PointRef::Level { base, level } if *level < 3 => PointRef::level((**base).clone(), level + 1),
            PointRef::Level { base, .. } => {
                let PointRef::Residue { value } = **base else { panic!() };
                PointRef::level(PointRef::residue((value + 1) % 2), 1)
            }
            _ => panic!(),
        };
        for p in &all {
            assert_eq!(step(&sys, p).unwrap(), oracle(p));
        }
        let x = PointRef::level(PointRef::residue(0), 1);
        assert_eq!(advance(&sys, &x, 3).unwrap(), PointRef::level(PointRef::residue(1), 1));
        assert_eq!(trajectory(&sys, &x, 4).unwrap()[3], PointRef::level(PointRef::residue(1), 1));
    }

    #[test]
    fn odometer_adds_with_carry() {
        let sys = System::odometer(&[2, 3]);
        let p = PointRef::Digits { digits: vec![1, 0] };
        assert_eq!(step(&sys, &p).unwrap(), PointRef::Digits { digits: vec![0, 1] });
        assert_eq!(advance(&sys, &p, 5).unwrap(), PointRef::Digits { digits: vec![0, 0] });
        assert_eq!(advance(&sys, &p, 6).unwrap(), p);
    }

    #[test]
    fn ladder_climbs_then_runs_the_base() {
        let sys = System::Ladder { base: Box::new(System::cyclic(3)), depth: 4 };
        let p = PointRef::Rung { base: Box::new(PointRef::residue(0)), rung: 3 };
        let t = trajectory(&sys, &p, 5).unwrap();
        assert_eq!(t[2], PointRef::Rung { base: Box::new(PointRef::residue(0)), rung: 1 });
        assert_eq!(t[4], PointRef::Rung { base: Box::new(PointRef::residue(2)), rung: 1 });
        assert_eq!(advance(&sys, &p, 4).unwrap(), t[4]);
        assert_eq!(states(&sys).unwrap().len(), 3 * 5);
    }

    #[test]
    fn distances() {
        let shift = System::full_shift(2);
        let d = distance(&shift, &PointRef::periodic("0"), &PointRef::periodic("1"), 64).unwrap();
        assert_eq!(d.value, Rational::one());
        let d = distance(&shift, &PointRef::periodic("01"), &PointRef::periodic("01"), 64).unwrap();
        assert_eq!(d, Distance { value: Rational::zero(), truncated: false });
        let a = PointRef::sequence(SymbolGenerator::substitution(&[('0', "01"), ('1', "10")], '0').unwrap());
        let b = PointRef::eventually_periodic("0110100110010110", "0");
        assert!(distance(&shift, &a, &b, 16).unwrap().truncated);
        let c8 = System::cyclic(8);
        assert_eq!(
            distance(&c8, &PointRef::residue(1), &PointRef::residue(7), 0).unwrap().value,
            Rational::new(1, 4)
        );
        assert!(within(&c8, &PointRef::residue(0), &PointRef::residue(1), &Rational::new(1, 7)));
        assert!(!within(&c8, &PointRef::residue(0), &PointRef::residue(1), &Rational::new(1, 8)));
    }

    #[test]
    fn periods() {
        assert_eq!(point_period(&System::cyclic(6), &PointRef::residue(2)), Some(6));
        assert_eq!(point_period(&System::power(System::cyclic(6), 4), &PointRef::residue(2)), Some(3));
        let tower = System::tower(System::cyclic(3), 2);
        assert_eq!(point_period(&tower, &PointRef::level(PointRef::residue(0), 1)), Some(6));
        assert_eq!(point_period(&System::full_shift(2), &PointRef::eventually_periodic("1", "0")), None);
        assert_eq!(point_period(&System::full_shift(2), &PointRef::periodic("011")), Some(3));
    }
}
