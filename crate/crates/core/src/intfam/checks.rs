use super::{ClaimKind, CorpusMember, Evidence, FamilyClaim, FamilyError, IntWindowSet, Outcome, Qualifier, Verdict};
use rayon::prelude::*;

fn claim(kind: ClaimKind, horizon: usize) -> FamilyClaim {
    FamilyClaim { kind, horizon }
}

fn bad_claim(msg: String) -> FamilyError {
    FamilyError::InvalidClaim(msg)
}

/// Verified iff every length-`g` subinterval of the window meets `s`.
pub fn check_syndetic(s: &IntWindowSet, g: usize) -> Result<Verdict, FamilyError> {
    let h = s.horizon();
    if g == 0 || g > h {
        return Err(bad_claim(format!("gap bound {g} outside 1..={h}")));
    }
    let c = claim(ClaimKind::Syndetic { gap: g }, h);
    Ok(match s.gaps().find(|&(_, len)| len >= g) {
        Some((start, length)) => {
            Verdict::new(Outcome::Refuted, Qualifier::OnWindow, c, Evidence::Gap { start, length })
        }
        None => Verdict::new(Outcome::Verified, Qualifier::OnWindow, c, Evidence::GapBound { longest_gap: s.longest_gap() }),
    })
}

/// Verified on the first run of at least `l` consecutive members.
pub fn check_thick(s: &IntWindowSet, l: usize) -> Result<Verdict, FamilyError> {
    let h = s.horizon();
    if l == 0 || l > h {
        return Err(bad_claim(format!("run length {l} outside 1..={h}")));
    }
    let c = claim(ClaimKind::Thick { run: l }, h);
    Ok(match s.runs().find(|&(_, len)| len >= l) {
        Some((start, length)) => Verdict::new(Outcome::Verified, Qualifier::OnWindow, c, Evidence::Run { start, length }),
        None => Verdict::new(Outcome::Refuted, Qualifier::OnWindow, c, Evidence::LongestRun { length: s.longest_run() }),
    })
}

/// Verified on the first interval `[a, a+l)` inside the window on which
/// every length-`g` subinterval meets `s`.
pub fn check_piecewise_syndetic(s: &IntWindowSet, g: usize, l: usize) -> Result<Verdict, FamilyError> {
    let h = s.horizon();
    if g == 0 || l < g || l > h {
        return Err(bad_claim(format!("need 1 <= g={g} <= L={l} <= H={h}")));
    }
    let c = claim(ClaimKind::PiecewiseSyndetic { gap: g, run: l }, h);
    // b is bad when [b, b+g) misses s; [a, a+l) works iff no bad b in [a, a+l-g]
    let mut clean_since = 0usize;
    for b in 0..=h - g {
        let bad = s.next_member(b).is_none_or(|m| m >= b + g);
        if bad {
            clean_since = b + 1;
        } else if b + g - clean_since >= l {
            return Ok(Verdict::new(
                Outcome::Verified,
                Qualifier::OnWindow,
                c,
                Evidence::Interval { start: clean_since, length: l },
            ));
        }
    }
    Ok(Verdict::new(
        Outcome::Refuted,
        Qualifier::OnWindow,
        c,
        Evidence::Note { text: format!("no interval of length {l} with gaps below {g}") },
    ))
}

/// Nonempty subset sums of `generators` below `horizon`.
pub fn finite_sums(generators: &[u64], horizon: usize) -> IntWindowSet {
    let mut reach = vec![false; horizon];
    let mut sums: Vec<usize> = vec![0];
    for &p in generators {
        let p = p as usize;
        let extended: Vec<usize> = sums.iter().map(|s| s + p).filter(|&t| t < horizon).collect();
        for t in extended {
            if !reach[t] {
                reach[t] = true;
                sums.push(t);
            }
        }
    }
    IntWindowSet::from_fn(horizon, |n| reach[n])
}

struct IpSearch<'a> {
    set: &'a IntWindowSet,
    k: usize,
    bound: u64,
    membership: u64,
    overflow: u64,
}

impl IpSearch<'_> {
    /// Depth-first over nondecreasing tuples; `sums` holds every nonempty
    /// subset sum of `chosen`.
    fn extend(&mut self, chosen: &mut Vec<u64>, sums: &[u64]) -> bool {
        if chosen.len() == self.k {
            return true;
        }
        let first = chosen.last().copied().unwrap_or(1);
        for p in first..=self.bound {
            let mut next: Vec<u64> = Vec::with_capacity(2 * sums.len() + 1);
            next.extend_from_slice(sums);
            next.push(p);
            next.extend(sums.iter().map(|s| s + p));
            let new_sums = &next[sums.len()..];
            if new_sums.iter().any(|&t| t as usize >= self.set.horizon()) {
                self.overflow += 1;
                continue;
            }
            if !new_sums.iter().all(|&t| self.set.contains(t as usize)) {
                self.membership += 1;
                continue;
            }
            chosen.push(p);
            if self.extend(chosen, &next) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Lexicographically least `p_1 <= ... <= p_k` in `[1, bound]` whose finite
/// sums all lie in `s` (and below the horizon).
pub fn find_ip_generators(s: &IntWindowSet, k: usize, bound: u64) -> Result<Verdict, FamilyError> {
    let h = s.horizon();
    if k == 0 || bound == 0 || bound as usize > h {
        return Err(bad_claim(format!("need k >= 1 and 1 <= B={bound} <= H={h}")));
    }
    let c = claim(ClaimKind::Ip { generators: k, bound }, h);
    let mut search = IpSearch { set: s, k, bound, membership: 0, overflow: 0 };
    let mut chosen = Vec::with_capacity(k);
    if search.extend(&mut chosen, &[]) {
        return Ok(Verdict::new(Outcome::Verified, Qualifier::OnWindow, c, Evidence::Generators { values: chosen }));
    }
    let evidence = Evidence::SearchExhausted {
        rejected_by_membership: search.membership,
        rejected_by_overflow: search.overflow,
    };
    let outcome = if search.membership == 0 && search.overflow > 0 { Outcome::Inconclusive } else { Outcome::Refuted };
    Ok(Verdict::new(outcome, Qualifier::OnWindow, c, evidence))
}

/// Refuted by the first corpus member (in corpus order) whose window misses
/// `s`; members with empty windows carry no information and are skipped.
pub fn dual_check(s: &IntWindowSet, corpus: &[CorpusMember], family: &str) -> Result<Verdict, FamilyError> {
    if corpus.is_empty() {
        return Err(bad_claim("empty corpus".into()));
    }
    let h = s.horizon();
    let c = claim(ClaimKind::Dual { family: family.to_string(), corpus_size: corpus.len() }, h);
    let windows: Vec<IntWindowSet> =
        corpus.par_iter().map(|m| m.generator.try_window(h)).collect::<Result<_, _>>()?;
    let skipped = windows.iter().filter(|w| w.is_empty()).count();
    let hit = windows.iter().position(|w| !w.is_empty() && w.is_disjoint(s));
    Ok(match hit {
        Some(i) => Verdict::new(
            Outcome::Refuted,
            Qualifier::AgainstCorpus,
            c,
            Evidence::CorpusMember { id: corpus[i].id.clone() },
        ),
        None => Verdict::new(
            Outcome::Verified,
            Qualifier::AgainstCorpus,
            c,
            Evidence::CorpusPassed { checked: corpus.len() - skipped, skipped_empty: skipped },
        ),
    })
}

/// Dispatches a window claim; dual claims need a corpus and are rejected here.
pub fn check(s: &IntWindowSet, kind: &ClaimKind) -> Result<Verdict, FamilyError> {
    match kind {
        ClaimKind::Syndetic { gap } => check_syndetic(s, *gap),
        ClaimKind::Thick { run } => check_thick(s, *run),
        ClaimKind::PiecewiseSyndetic { gap, run } => check_piecewise_syndetic(s, *gap, *run),
        ClaimKind::Ip { generators, bound } => find_ip_generators(s, *generators, *bound),
        other => Err(bad_claim(format!("{other:?} is not a single-window claim"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intfam::SetGenerator;
    use proptest::prelude::*;

    fn powers_of_two(h: usize) -> IntWindowSet {
        IntWindowSet::from_members(h, (0..20).map(|k| 1usize << k))
    }

    #[test]
    fn syndetic_examples() {
        let three = SetGenerator::progression(0, 3).window(100);
        assert!(check_syndetic(&three, 3).unwrap().is_verified());
        let v = check_syndetic(&SetGenerator::thick_schedule().window(100), 5).unwrap();
        assert!(v.is_refuted());
        assert_eq!(v.evidence, Evidence::Gap { start: 20, length: 5 });
        assert!(check_syndetic(&IntWindowSet::full(50), 1).unwrap().is_verified());
        assert!(check_syndetic(&three, 0).is_err());
    }

    #[test]
    fn thick_examples() {
        let v = check_thick(&SetGenerator::thick_schedule().window(200), 10).unwrap();
        assert_eq!(v.evidence, Evidence::Run { start: 100, length: 10 });
        let v = check_thick(&SetGenerator::progression(0, 3).window(100), 2).unwrap();
        assert!(v.is_refuted());
        assert_eq!(v.qualifier, Qualifier::OnWindow);
        assert!(check_thick(&IntWindowSet::full(64), 64).unwrap().is_verified());
    }

    #[test]
    fn piecewise_examples() {
        let three = SetGenerator::progression(0, 3).window(100);
        assert!(check_piecewise_syndetic(&three, 3, 97).unwrap().is_verified());
        let q = SetGenerator::Intersection { parts: vec![SetGenerator::progression(0, 2), SetGenerator::thick_schedule()] };
        assert!(check_piecewise_syndetic(&q.window(200), 2, 8).unwrap().is_verified());
        assert!(check_piecewise_syndetic(&powers_of_two(10_000), 3, 10).unwrap().is_refuted());
    }

    #[test]
    fn ip_examples() {
        let s = IntWindowSet::from_members(20, [1, 3, 4, 7]);
        let v = find_ip_generators(&s, 2, 5).unwrap();
        assert_eq!(v.evidence, Evidence::Generators { values: vec![1, 3] });
        let evens = SetGenerator::progression(0, 2).window(100);
        let v = find_ip_generators(&evens, 3, 10).unwrap();
        assert_eq!(v.evidence, Evidence::Generators { values: vec![2, 2, 2] });
        let v = find_ip_generators(&powers_of_two(1000), 3, 64).unwrap();
        assert!(v.is_refuted());
        // every candidate's sums leave the window
        let v = find_ip_generators(&IntWindowSet::full(4), 3, 4).unwrap();
        assert_eq!(v.outcome, Outcome::Verified);
        let v = find_ip_generators(&IntWindowSet::full(4), 4, 4).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
    }

    #[test]
    fn finite_sums_by_subsets() {
        let gens = [2u64, 5, 5, 11];
        let w = finite_sums(&gens, 40);
        // oracle: enumerate the 15 nonempty subsets
        let mut expected = std::collections::BTreeSet::new();
        for mask in 1u32..16 {
            let sum: u64 = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| gens[i]).sum();
            expected.insert(sum as usize);
        }
        assert_eq!(w.iter().collect::<std::collections::BTreeSet<_>>(), expected);
    }

    #[test]
    fn dual_examples() {
        let evens = SetGenerator::progression(0, 2).window(100);
        let corpus = vec![
            CorpusMember::new("ap-0-3", "syndetic", SetGenerator::progression(0, 3)),
            CorpusMember::new("ap-1-2", "syndetic", SetGenerator::progression(1, 2)),
        ];
        let v = dual_check(&evens, &corpus, "syndetic").unwrap();
        assert_eq!(v.evidence, Evidence::CorpusMember { id: "ap-1-2".into() });
        let cofinite = IntWindowSet::full(100).difference(&IntWindowSet::from_members(100, [3, 50]));
        assert!(dual_check(&cofinite, &corpus, "syndetic").unwrap().is_verified());
        assert!(dual_check(&cofinite, &[], "syndetic").is_err());
    }

    proptest! {
        #[test]
        fn syndetic_thick_duality(bits in proptest::collection::vec(any::<bool>(), 1..400), g in 1usize..20) {
            let s = IntWindowSet::from_fn(bits.len(), |n| bits[n]);
            prop_assume!(g <= bits.len());
            let syn = check_syndetic(&s, g).unwrap();
            let thick = check_thick(&s.complement(), g).unwrap();
            prop_assert_eq!(syn.is_verified(), thick.is_refuted());
        }

        #[test]
        fn ip_witnesses_recheck(bits in proptest::collection::vec(any::<bool>(), 30..200), k in 1usize..4) {
            let s = IntWindowSet::from_fn(bits.len(), |n| bits[n] || n % 4 == 0);
            let v = find_ip_generators(&s, k, 25).unwrap();
            if let Evidence::Generators { values } = &v.evidence {
                // independent recomputation over all subsets
                for mask in 1u32..(1 << values.len()) {
                    let sum: u64 = (0..values.len()).filter(|i| mask >> i & 1 == 1).map(|i| values[i]).sum();
                    prop_assert!(s.contains(sum as usize));
                }
            }
            prop_assert_eq!(find_ip_generators(&s, k, 25).unwrap(), v);
        }
    }
}
