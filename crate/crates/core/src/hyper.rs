//! Finite subsets of a catalog system as points of the hyperspace `K(X)`.

use crate::disjoint::enumerate_dense;
use crate::intfam::{ClaimKind, Evidence, FamilyClaim, Outcome, Qualifier, Verdict};
use crate::rational::{self, Rational};
use crate::systems::{self, compile, contains, OpenSetSpec, PointRef, System, SystemError};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Symbols compared when measuring shift distances.
pub const SHIFT_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HyperError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("finite subsets must be nonempty")]
    Empty,
    #[error("sets live in different systems: {0} and {1}")]
    MismatchedSystems(String, String),
    #[error("invalid search parameter: {0}")]
    InvalidParameter(String),
}

/// A nonempty finite subset, kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSubsetPoint {
    pub system: System,
    pub points: Vec<PointRef>,
}

impl FiniteSubsetPoint {
    pub fn new(system: System, points: Vec<PointRef>) -> Result<Self, HyperError> {
        if points.is_empty() {
            return Err(HyperError::Empty);
        }
        for p in &points {
            system.check_point(p)?;
        }
        let mut points: Vec<PointRef> = points.into_iter().map(PointRef::normalized).collect();
        points.sort();
        points.dedup();
        Ok(FiniteSubsetPoint { system, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.points.iter().all(|p| other.points.binary_search(p).is_ok())
    }

    pub fn union(&self, other: &Self) -> Result<Self, HyperError> {
        same_system(self, other)?;
        FiniteSubsetPoint::new(self.system.clone(), self.points.iter().chain(&other.points).cloned().collect())
    }
}

fn same_system(a: &FiniteSubsetPoint, b: &FiniteSubsetPoint) -> Result<(), HyperError> {
    if a.system != b.system {
        return Err(HyperError::MismatchedSystems(a.system.to_string(), b.system.to_string()));
    }
    Ok(())
}

/// Hausdorff distance; `truncated` marks a nearest-point distance that fell
/// below the shift resolution and was reported as 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HausdorffDistance {
    #[serde(with = "rational")]
    pub value: Rational,
    pub truncated: bool,
}

/// `max(sup_a d(a,B), sup_b d(b,A))` under the system metric.
pub fn hausdorff_distance(a: &FiniteSubsetPoint, b: &FiniteSubsetPoint) -> Result<HausdorffDistance, HyperError> {
    same_system(a, b)?;
    let sys = &a.system;
    let mut table = Vec::with_capacity(a.len());
    for p in &a.points {
        let row = b
            .points
            .iter()
            .map(|q| systems::distance(sys, p, q, SHIFT_DEPTH))
            .collect::<Result<Vec<_>, _>>()?;
        table.push(row);
    }
    let mut value = Rational::zero();
    let mut truncated = false;
    let mut absorb = |d: &systems::Distance| {
        value = value.max(d.value);
        truncated |= d.truncated;
    };
    for row in &table {
        absorb(row.iter().min_by_key(|d| d.value).expect("nonempty"));
    }
    for j in 0..b.len() {
        absorb(table.iter().map(|row| &row[j]).min_by_key(|d| d.value).expect("nonempty"));
    }
    Ok(HausdorffDistance { value, truncated })
}

/// `T_K(A) = {Tx : x in A}`.
pub fn induced_step(a: &FiniteSubsetPoint) -> Result<FiniteSubsetPoint, HyperError> {
    let image = a.points.iter().map(|p| systems::step(&a.system, p)).collect::<Result<Vec<_>, _>>()?;
    FiniteSubsetPoint::new(a.system.clone(), image)
}

fn induced_power(a: &FiniteSubsetPoint, k: u64) -> Result<FiniteSubsetPoint, HyperError> {
    let image = a.points.iter().map(|p| systems::advance(&a.system, p, k)).collect::<Result<Vec<_>, _>>()?;
    FiniteSubsetPoint::new(a.system.clone(), image)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicSet {
    pub set: FiniteSubsetPoint,
    pub period: u32,
    /// `T_K^{period} C = C`: a periodic point of the finite hyperspace.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicSetOutcome {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<PeriodicSet>,
    pub candidates: usize,
}

/// Least `k' <= max_period` with `T^{k'}C ⊆ C`, where every point of `C` lies
/// in `U`; the iterates of `C` under `T^{k'}` then stay in `C`.
fn periodic_witness(c: &FiniteSubsetPoint, max_period: u32) -> Result<Option<PeriodicSet>, HyperError> {
    for k in 1..=max_period {
        let image = induced_power(c, k as u64)?;
        if image.is_subset(c) {
            return Ok(Some(PeriodicSet { exact: image == *c, set: c.clone(), period: k }));
        }
    }
    Ok(None)
}

fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size == 0 || size > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Searches finite sets `C ⊆ U` of at most `max_size` enumerated points, by
/// size then enumeration order, for one with `T^{k'}C ⊆ C`, `k' <= max_period`.
pub fn periodic_set_search(
    sys: &System,
    u: &OpenSetSpec,
    max_size: usize,
    max_period: u32,
    budget: usize,
) -> Result<PeriodicSetOutcome, HyperError> {
    if max_size == 0 || max_period == 0 {
        return Err(HyperError::InvalidParameter("size and period bounds must be positive".into()));
    }
    let region = compile(sys, u)?;
    let pool: Vec<PointRef> =
        enumerate_dense(sys, budget)?.into_iter().filter(|p| contains(sys, &region, p)).collect();
    let claim = FamilyClaim {
        kind: ClaimKind::WindowRelation { relation: format!("T^k C ⊆ C ⊆ {u}, |C| <= {max_size}, k <= {max_period}") },
        horizon: max_period as usize,
    };
    let mut candidates = 0;
    for size in 1..=max_size.min(pool.len()) {
        let sets = combinations(pool.len(), size)
            .into_iter()
            .map(|ix| FiniteSubsetPoint::new(sys.clone(), ix.into_iter().map(|i| pool[i].clone()).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        candidates += sets.len();
        let found = sets.par_iter().map(|c| periodic_witness(c, max_period)).collect::<Result<Vec<_>, _>>()?;
        if let Some(w) = found.into_iter().flatten().next() {
            let evidence = Evidence::Note { text: format!("period {} on {} points", w.period, w.set.len()) };
            return Ok(PeriodicSetOutcome {
                verdict: Verdict::new(Outcome::Verified, Qualifier::OnWindow, claim, evidence),
                witness: Some(w),
                candidates,
            });
        }
    }
    Ok(PeriodicSetOutcome {
        verdict: Verdict::new(
            Outcome::Refuted,
            Qualifier::AtBudget,
            claim,
            Evidence::Note { text: format!("{candidates} candidate sets from {} points of {u}", pool.len()) },
        ),
        witness: None,
        candidates,
    })
}

impl PeriodicSet {
    /// Rechecks `C ⊆ U`, `T^{k'}C ⊆ C` and that `T^{k' j}C` stays in `U`.
    pub fn reverify(&self, u: &OpenSetSpec) -> Result<bool, HyperError> {
        let sys = &self.set.system;
        let region = compile(sys, u)?;
        let mut current = self.set.clone();
        for _ in 0..=self.set.len() {
            if !current.points.iter().all(|p| contains(sys, &region, p)) {
                return Ok(false);
            }
            current = induced_power(&current, self.period as u64)?;
        }
        Ok(induced_power(&self.set, self.period as u64)?.is_subset(&self.set))
    }
}
