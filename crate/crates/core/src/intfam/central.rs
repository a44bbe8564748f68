//! Central sets versus thick ∩ dynamical-syndetic decompositions.

use super::{check_syndetic, check_thick, ClaimKind, Evidence, FamilyClaim, FamilyError, IntWindowSet, Outcome, Qualifier, SetGenerator, Verdict};
use crate::rational::{self, Rational};
use crate::symseq::SymbolGenerator;
use crate::systems::{self, OpenSetSpec, PointRef, System};
use serde::{Deserialize, Serialize};

/// A thick set `A` together with a dynamical-syndetic witness `(Y, y, V_y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpsDecomposition {
    pub thick: SetGenerator,
    pub system: System,
    pub point: PointRef,
    pub neighborhood: OpenSetSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralParams {
    pub horizon: usize,
    pub run_length: usize,
    #[serde(with = "rational")]
    pub epsilon: Rational,
    /// Gap bound for the minimality check; twice the period of `y` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<usize>,
}

/// `(X, x, y, U_y)` with `y` minimal and proximal to `x`, and the verdicts
/// recorded for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralWitness {
    pub system: System,
    pub x: PointRef,
    pub y: PointRef,
    pub neighborhood: OpenSetSpec,
    pub params: CentralParams,
    /// `N(x, U) = A ∩ N(y, V_y)` on the window, when built from a decomposition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub return_identity: Option<Verdict>,
    /// Thick check of `{n : d(T^n x, T^n y) < ε}` at the run length.
    pub proximality: Verdict,
    /// Syndetic returns of `y` to `U` and to shrinking balls around `y`.
    pub minimal_returns: Verdict,
}

/// Ball radii `2^0 .. 2^{-3}` probed around `y` besides `U` itself.
const PROBE_RADII: u32 = 4;

impl CentralWitness {
    pub fn new(
        system: System,
        x: PointRef,
        y: PointRef,
        neighborhood: OpenSetSpec,
        params: CentralParams,
    ) -> Result<Self, FamilyError> {
        system.validate()?;
        let h = params.horizon;
        if !systems::is_minimal_point(&system, &y) {
            return Err(FamilyError::Precondition(format!("{y} is not a minimal point by construction")));
        }
        if !systems::return_set(&system, &y, &neighborhood, 1)?.contains(0) {
            return Err(FamilyError::Precondition(format!("{neighborhood} does not contain {y}")));
        }
        let gap = match params.gap {
            Some(g) => g,
            None => systems::point_period(&system, &y)
                .map(super::default_gap)
                .ok_or_else(|| FamilyError::Precondition("y is not periodic; supply a gap bound".into()))?,
        };
        let prox = systems::proximal_run_set(&system, &x, &y, &params.epsilon, h)?;
        let proximality = check_thick(&prox, params.run_length)?;

        let mut probes = vec![neighborhood.clone()];
        probes.extend((0..PROBE_RADII).map(|j| OpenSetSpec::ball(y.clone(), rational::dyadic(j))));
        let mut longest = 0;
        let mut failure = None;
        for w in &probes {
            let v = check_syndetic(&systems::return_set(&system, &y, w, h)?, gap)?;
            match v.evidence {
                Evidence::GapBound { longest_gap } => longest = longest.max(longest_gap),
                _ => {
                    failure = Some(v);
                    break;
                }
            }
        }
        let minimal_returns = failure.unwrap_or_else(|| {
            Verdict::new(
                Outcome::Verified,
                Qualifier::OnWindow,
                FamilyClaim { kind: ClaimKind::Syndetic { gap }, horizon: h },
                Evidence::GapBound { longest_gap: longest },
            )
        });
        Ok(CentralWitness { system, x, y, neighborhood, params, return_identity: None, proximality, minimal_returns })
    }

    pub fn all_verified(&self) -> bool {
        self.return_identity.as_ref().is_none_or(Verdict::is_verified)
            && self.proximality.is_verified()
            && self.minimal_returns.is_verified()
    }

    /// The central set `N(x, U_y)`.
    pub fn central_set(&self) -> SetGenerator {
        SetGenerator::ReturnSetRef { system: self.system.clone(), point: self.x.clone(), open_set: self.neighborhood.clone() }
    }
}

struct Parts {
    system: System,
    x0: PointRef,
    y0: PointRef,
    u: OpenSetSpec,
}

/// `X = Σ₂ × Y`, `x₀ = (1_A, y)`, `y₀ = (1^∞, y)`, `U = [1] × V_y`.
fn central_parts(dec: &DpsDecomposition) -> Result<Parts, FamilyError> {
    dec.thick.validate()?;
    dec.system.validate()?;
    if !systems::is_minimal_point(&dec.system, &dec.point) {
        return Err(FamilyError::Precondition(format!(
            "{} is not a minimal point of {} by construction",
            dec.point, dec.system
        )));
    }
    let indicator = SymbolGenerator::indicator(dec.thick.clone())
        .map_err(|e| FamilyError::InvalidGenerator(e.to_string()))?;
    Ok(Parts {
        system: System::product(vec![System::full_shift(2), dec.system.clone()]),
        x0: PointRef::tuple(vec![PointRef::sequence(indicator), dec.point.clone()]),
        y0: PointRef::tuple(vec![PointRef::periodic("1"), dec.point.clone()]),
        u: OpenSetSpec::product(vec![OpenSetSpec::cylinder("1"), dec.neighborhood.clone()]),
    })
}

/// The set `N(x₀, U) = A ∩ N(y, V_y)` as a generator.
pub(crate) fn central_generator(dec: &DpsDecomposition) -> Result<SetGenerator, FamilyError> {
    let p = central_parts(dec)?;
    Ok(SetGenerator::ReturnSetRef { system: p.system, point: p.x0, open_set: p.u })
}

fn first_difference(a: &IntWindowSet, b: &IntWindowSet) -> Option<usize> {
    a.union(b).difference(&a.intersection(b)).next_member(0)
}

pub fn central_from_dps(dec: &DpsDecomposition, params: &CentralParams) -> Result<CentralWitness, FamilyError> {
    let h = params.horizon;
    let parts = central_parts(dec)?;
    let a = dec.thick.try_window(h)?;
    let thick = check_thick(&a, params.run_length)?;
    if !thick.is_verified() {
        return Err(FamilyError::Precondition(format!("A is not thick on the window: {thick}")));
    }
    let mut witness = CentralWitness::new(parts.system, parts.x0, parts.y0, parts.u, params.clone())?;
    let q = systems::return_set(&witness.system, &witness.x, &witness.neighborhood, h)?;
    let b = systems::return_set(&dec.system, &dec.point, &dec.neighborhood, h)?;
    witness.return_identity = Some(Verdict::relation("N(x0,U) = A ∩ N(y,V_y)", h, first_difference(&q, &a.intersection(&b))));
    Ok(witness)
}

/// Recovers `A = {n : d(T^n x, T^n y) < ε}` and `B = N(y, B_ε(y))`, after
/// checking `B_{2ε}(y) ⊆ U_y` and the window inclusion `A ∩ B ⊆ N(x, B_{2ε}(y))`.
pub fn dps_from_central(cw: &CentralWitness, epsilon: &Rational) -> Result<DpsDecomposition, FamilyError> {
    let h = cw.params.horizon;
    let two_eps = epsilon * Rational::from_integer(2);
    let wide = OpenSetSpec::ball(cw.y.clone(), two_eps);
    if systems::spec_subset(&cw.system, &wide, &cw.neighborhood)? != Some(true) {
        return Err(FamilyError::Precondition(format!(
            "B(y, {}) is not inside {}",
            rational::Display(&two_eps),
            cw.neighborhood
        )));
    }
    let narrow = OpenSetSpec::ball(cw.y.clone(), *epsilon);
    let thick = SetGenerator::ProximalRuns { system: cw.system.clone(), x: cw.x.clone(), y: cw.y.clone(), epsilon: *epsilon };
    let dyn_syndetic =
        SetGenerator::DynSyndetic { system: cw.system.clone(), point: cw.y.clone(), neighborhood: narrow.clone() };
    dyn_syndetic.validate()?;
    let both = thick.try_window(h)?.intersection(&dyn_syndetic.try_window(h)?);
    let target = systems::return_set(&cw.system, &cw.x, &wide, h)?;
    if let Some(n) = both.difference(&target).next_member(0) {
        return Err(FamilyError::Precondition(format!("inclusion A ∩ B ⊆ N(x, B_2ε(y)) fails at {n}")));
    }
    Ok(DpsDecomposition { thick, system: cw.system.clone(), point: cw.y.clone(), neighborhood: narrow })
}
