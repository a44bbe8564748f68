//! Subsets of `Z₊`, their windows `[0,H)`, and window-relative certifiers for
//! families of subsets (syndetic, thick, IP, central and their duals).

mod central;
mod checks;
mod corpus;
mod verdict;
mod window;

pub use central::{central_from_dps, dps_from_central, CentralParams, CentralWitness, DpsDecomposition};
pub use checks::{check, check_piecewise_syndetic, check_syndetic, check_thick, dual_check, find_ip_generators, finite_sums};
pub use corpus::{central_corpus, default_corpus, ip_corpus, schedule_variants, CorpusMember};
pub use verdict::{ClaimKind, Evidence, FamilyClaim, Outcome, Qualifier, Verdict};
pub use window::{IntWindowSet, WindowParseError};

use crate::rational::{self, Rational};
use crate::systems::{self, OpenSetSpec, PointRef, System, SystemError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("invalid set generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid claim: {0}")]
    InvalidClaim(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// `start_i = scale * i^exponent + offset` for `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StartRule {
    pub scale: u64,
    pub exponent: u32,
    pub offset: u64,
}

impl Default for StartRule {
    fn default() -> Self {
        StartRule { scale: 1, exponent: 2, offset: 0 }
    }
}

/// `length_i = slope * i + intercept`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LengthRule {
    pub slope: u64,
    pub intercept: u64,
}

impl Default for LengthRule {
    fn default() -> Self {
        LengthRule { slope: 1, intercept: 0 }
    }
}

/// A finitely described subset of `Z₊ = {0, 1, 2, ...}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum SetGenerator {
    /// `{start + step * j : j >= 0}`.
    ArithmeticProgression { start: u64, step: u64 },
    /// Union of runs `[start_i, start_i + length_i)`, `i >= 1`.
    ThickSchedule {
        #[serde(default)]
        starts: StartRule,
        #[serde(default)]
        lengths: LengthRule,
    },
    /// Nonempty subset sums of a finite list.
    FiniteSums { generators: Vec<u64> },
    /// Finite sums of the infinite sequence cycling through `generators`,
    /// i.e. the additive semigroup they generate without 0.
    CycledSums { generators: Vec<u64> },
    ReturnSetRef { system: System, point: PointRef, open_set: OpenSetSpec },
    /// `N(y, V_y)` with `y` a minimal point and `y ∈ V_y`.
    DynSyndetic { system: System, point: PointRef, neighborhood: OpenSetSpec },
    /// `N(y, V)` with `y` a minimal point and `V` any basic open set.
    MSet { system: System, point: PointRef, open_set: OpenSetSpec },
    /// `{n : d(T^n x, T^n y) < epsilon}`.
    ProximalRuns {
        system: System,
        x: PointRef,
        y: PointRef,
        #[serde(with = "rational")]
        epsilon: Rational,
    },
    Explicit {
        members: BTreeSet<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<Box<SetGenerator>>,
    },
    Union { parts: Vec<SetGenerator> },
    Intersection { parts: Vec<SetGenerator> },
    Complement { inner: Box<SetGenerator> },
    /// `{n + by : n ∈ inner} ∩ Z₊`.
    Translate { inner: Box<SetGenerator>, by: i64 },
}

fn invalid(msg: impl Into<String>) -> FamilyError {
    FamilyError::InvalidGenerator(msg.into())
}

impl SetGenerator {
    pub fn progression(start: u64, step: u64) -> Self {
        SetGenerator::ArithmeticProgression { start, step }
    }

    pub fn thick_schedule() -> Self {
        SetGenerator::ThickSchedule { starts: StartRule::default(), lengths: LengthRule::default() }
    }

    pub fn explicit(members: impl IntoIterator<Item = u64>) -> Self {
        SetGenerator::Explicit { members: members.into_iter().collect(), tail: None }
    }

    pub fn translate(inner: SetGenerator, by: i64) -> Self {
        SetGenerator::Translate { inner: Box::new(inner), by }
    }

    pub fn complement(inner: SetGenerator) -> Self {
        SetGenerator::Complement { inner: Box::new(inner) }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        match self {
            SetGenerator::ArithmeticProgression { step, .. } => {
                if *step == 0 {
                    return Err(invalid("progression step must be >= 1"));
                }
            }
            SetGenerator::ThickSchedule { starts, lengths } => {
                if starts.scale == 0 || starts.exponent == 0 {
                    return Err(invalid("run starts must grow"));
                }
                if lengths.slope == 0 {
                    return Err(invalid("run lengths must tend to infinity"));
                }
            }
            SetGenerator::FiniteSums { generators } | SetGenerator::CycledSums { generators } => {
                if generators.is_empty() || generators.contains(&0) {
                    return Err(invalid("sum generators must be a nonempty list of positive integers"));
                }
            }
            SetGenerator::ReturnSetRef { system, point, open_set } => {
                system.validate()?;
                systems::return_set(system, point, open_set, 0)?;
            }
            SetGenerator::DynSyndetic { system, point, neighborhood } => {
                system.validate()?;
                if !systems::is_minimal_point(system, point) {
                    return Err(invalid(format!("{point} is not a minimal point of {system} by construction")));
                }
                if !systems::return_set(system, point, neighborhood, 1)?.contains(0) {
                    return Err(invalid(format!("{neighborhood} does not contain {point}")));
                }
            }
            SetGenerator::MSet { system, point, open_set } => {
                system.validate()?;
                if !systems::is_minimal_point(system, point) {
                    return Err(invalid(format!("{point} is not a minimal point of {system} by construction")));
                }
                systems::return_set(system, point, open_set, 0)?;
            }
            SetGenerator::ProximalRuns { system, x, y, epsilon } => {
                system.validate()?;
                systems::proximal_run_set(system, x, y, epsilon, 0)?;
            }
            SetGenerator::Explicit { tail, .. } => {
                if let Some(t) = tail {
                    t.validate()?;
                }
            }
            SetGenerator::Union { parts } | SetGenerator::Intersection { parts } => {
                if parts.is_empty() {
                    return Err(invalid("combinator over no sets"));
                }
                parts.iter().try_for_each(SetGenerator::validate)?;
            }
            SetGenerator::Complement { inner } | SetGenerator::Translate { inner, .. } => inner.validate()?,
        }
        Ok(())
    }

    /// Runs `[start_i, start_i + length_i)` with `start_i < horizon`.
    fn schedule_runs(starts: &StartRule, lengths: &LengthRule, horizon: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for i in 1u64.. {
            let start = i
                .checked_pow(starts.exponent)
                .and_then(|p| p.checked_mul(starts.scale))
                .and_then(|p| p.checked_add(starts.offset));
            match start {
                Some(s) if s < horizon => out.push((s, lengths.slope * i + lengths.intercept)),
                _ => break,
            }
        }
        out
    }

    /// Membership of a single integer.
    pub fn contains(&self, n: u64) -> bool {
        match self {
            SetGenerator::ArithmeticProgression { start, step } => n >= *start && (n - start).is_multiple_of(*step),
            SetGenerator::ThickSchedule { starts, lengths } => {
                Self::schedule_runs(starts, lengths, n + 1).iter().any(|&(s, l)| s <= n && n < s + l)
            }
            SetGenerator::Explicit { members, tail } => {
                members.contains(&n) || tail.as_ref().is_some_and(|t| t.contains(n))
            }
            SetGenerator::Union { parts } => parts.iter().any(|p| p.contains(n)),
            SetGenerator::Intersection { parts } => parts.iter().all(|p| p.contains(n)),
            SetGenerator::Complement { inner } => !inner.contains(n),
            SetGenerator::Translate { inner, by } => {
                let m = n as i64 - by;
                m >= 0 && inner.contains(m as u64)
            }
            _ => self.window(n as usize + 1).contains(n as usize),
        }
    }

    /// Exact membership on `[0, horizon)`. Panics if the generator is invalid.
    pub fn window(&self, horizon: usize) -> IntWindowSet {
        self.try_window(horizon).expect("validated set generator")
    }

    pub fn try_window(&self, horizon: usize) -> Result<IntWindowSet, FamilyError> {
        Ok(match self {
            SetGenerator::ArithmeticProgression { start, step } => {
                let mut w = IntWindowSet::empty(horizon);
                let mut n = *start;
                while (n as usize) < horizon {
                    w.insert(n as usize);
                    n += step;
                }
                w
            }
            SetGenerator::ThickSchedule { starts, lengths } => {
                let mut w = IntWindowSet::empty(horizon);
                for (s, l) in Self::schedule_runs(starts, lengths, horizon as u64) {
                    for n in s..(s + l).min(horizon as u64) {
                        w.insert(n as usize);
                    }
                }
                w
            }
            SetGenerator::FiniteSums { generators } => finite_sums(generators, horizon),
            SetGenerator::CycledSums { generators } => {
                let mut reach = vec![false; horizon];
                if horizon > 0 {
                    reach[0] = true;
                }
                for n in 1..horizon {
                    reach[n] = generators.iter().any(|&p| p as usize <= n && reach[n - p as usize]);
                }
                IntWindowSet::from_fn(horizon, |n| n > 0 && reach[n])
            }
            SetGenerator::ReturnSetRef { system, point, open_set: u }
            | SetGenerator::DynSyndetic { system, point, neighborhood: u }
            | SetGenerator::MSet { system, point, open_set: u } => systems::return_set(system, point, u, horizon)?,
            SetGenerator::ProximalRuns { system, x, y, epsilon } => {
                systems::proximal_run_set(system, x, y, epsilon, horizon)?
            }
            SetGenerator::Explicit { members, tail } => {
                let mut w = IntWindowSet::from_members(horizon, members.iter().map(|&m| m as usize));
                if let Some(t) = tail {
                    w.union_with(&t.try_window(horizon)?);
                }
                w
            }
            SetGenerator::Union { parts } => {
                let mut w = IntWindowSet::empty(horizon);
                for p in parts {
                    w.union_with(&p.try_window(horizon)?);
                }
                w
            }
            SetGenerator::Intersection { parts } => {
                let mut w = IntWindowSet::full(horizon);
                for p in parts {
                    w.intersect_with(&p.try_window(horizon)?);
                }
                w
            }
            SetGenerator::Complement { inner } => inner.try_window(horizon)?.complement(),
            SetGenerator::Translate { inner, by } => {
                if *by >= 0 {
                    let by = *by as usize;
                    let base = inner.try_window(horizon.saturating_sub(by))?;
                    IntWindowSet::from_members(horizon, base.iter().map(|n| n + by))
                } else {
                    let by = by.unsigned_abs() as usize;
                    inner.try_window(horizon + by)?.offset_window(by, horizon)
                }
            }
        })
    }
}

/// Default gap for syndeticity checks of periodic data: twice the period.
pub fn default_gap(period: u64) -> usize {
    2 * period as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(w: &IntWindowSet) -> Vec<usize> {
        w.iter().collect()
    }

    #[test]
    fn translate_progression() {
        let g = SetGenerator::translate(SetGenerator::progression(0, 3), 1);
        assert_eq!(members(&g.window(10)), vec![1, 4, 7]);
        let g = SetGenerator::translate(SetGenerator::progression(0, 3), -2);
        assert_eq!(members(&g.window(10)), vec![1, 4, 7]);
    }

    #[test]
    fn schedule_runs_are_squares() {
        let w = SetGenerator::thick_schedule().window(30);
        assert_eq!(members(&w), vec![1, 4, 5, 9, 10, 11, 16, 17, 18, 19, 25, 26, 27, 28, 29]);
    }

    #[test]
    fn sums() {
        let fs = SetGenerator::FiniteSums { generators: vec![1, 3] };
        assert_eq!(members(&fs.window(10)), vec![1, 3, 4]);
        let cs = SetGenerator::CycledSums { generators: vec![3, 5] };
        assert_eq!(members(&cs.window(12)), vec![3, 5, 6, 8, 9, 10, 11]);
    }

    #[test]
    fn combinators_are_windowwise() {
        let a = SetGenerator::progression(0, 2);
        let b = SetGenerator::thick_schedule();
        let both = SetGenerator::Intersection { parts: vec![a.clone(), b.clone()] };
        assert_eq!(both.window(200), a.window(200).intersection(&b.window(200)));
        let either = SetGenerator::Union { parts: vec![a.clone(), b.clone()] };
        assert_eq!(either.window(200), a.window(200).union(&b.window(200)));
        assert_eq!(SetGenerator::complement(a.clone()).window(50), a.window(50).complement());
    }

    #[test]
    fn pointwise_membership_matches_windows() {
        let gens = [
            SetGenerator::progression(2, 5),
            SetGenerator::thick_schedule(),
            SetGenerator::Explicit { members: [3, 7].into(), tail: Some(Box::new(SetGenerator::progression(40, 4))) },
            SetGenerator::translate(SetGenerator::thick_schedule(), -3),
            SetGenerator::CycledSums { generators: vec![4, 7] },
        ];
        for g in gens {
            let w = g.window(120);
            for n in 0..120 {
                assert_eq!(g.contains(n as u64), w.contains(n), "{g:?} at {n}");
            }
        }
    }

    #[test]
    fn validation() {
        assert!(SetGenerator::progression(0, 0).validate().is_err());
        assert!(SetGenerator::FiniteSums { generators: vec![] }.validate().is_err());
        let not_minimal = SetGenerator::DynSyndetic {
            system: System::full_shift(2),
            point: PointRef::eventually_periodic("1", "0"),
            neighborhood: OpenSetSpec::cylinder("1"),
        };
        assert!(not_minimal.validate().is_err());
        let outside = SetGenerator::DynSyndetic {
            system: System::cyclic(3),
            point: PointRef::residue(0),
            neighborhood: OpenSetSpec::residues([1]),
        };
        assert!(outside.validate().is_err());
        let ok = SetGenerator::DynSyndetic {
            system: System::cyclic(3),
            point: PointRef::residue(0),
            neighborhood: OpenSetSpec::residues([0]),
        };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn return_ref_matches_return_set() {
        let g = SetGenerator::ReturnSetRef {
            system: System::cyclic(4),
            point: PointRef::residue(1),
            open_set: OpenSetSpec::residues([0, 2]),
        };
        let direct =
            systems::return_set(&System::cyclic(4), &PointRef::residue(1), &OpenSetSpec::residues([0, 2]), 40).unwrap();
        assert_eq!(g.window(40), direct);
    }

    #[test]
    fn json_round_trip() {
        let g = SetGenerator::Intersection { parts: vec![SetGenerator::progression(0, 2), SetGenerator::thick_schedule()] };
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"variant\":\"thick-schedule\""));
        assert_eq!(serde_json::from_str::<SetGenerator>(&text).unwrap(), g);
        let bare: SetGenerator = serde_json::from_str(r#"{"variant":"thick-schedule"}"#).unwrap();
        assert_eq!(bare, SetGenerator::thick_schedule());
    }
}
