use super::{cylinders, enumerate_dense, sample_points, witness_search_all, DisjointError, WitnessQuery, WitnessRecord};
use crate::intfam::{ClaimKind, Evidence, FamilyClaim, Outcome, Qualifier, Verdict};
use crate::rational::lcm_u64;
use crate::symseq;
use crate::systems::{OpenSetSpec, PointRef, System};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanParams {
    pub x_system: System,
    pub y_system: System,
    /// Cylinder depth `ℓ` for the `U` grid of shift spaces.
    pub depth: usize,
    pub horizon: usize,
    /// `None` selects twice the lcm of the periods in play.
    #[serde(default)]
    pub gap: Option<usize>,
    /// Enumerated points of `X` scanned per cell.
    pub budget: usize,
    /// Points sampled from each `V`.
    pub y_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairResult {
    pub u: OpenSetSpec,
    pub v: OpenSetSpec,
    pub ys: Vec<PointRef>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<PointRef>,
    pub scanned: usize,
    pub records: Vec<WitnessRecord>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCounts {
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub params: ScanParams,
    pub gap: usize,
    pub pairs: Vec<PairResult>,
    pub counts: ScanCounts,
}

impl ScanReport {
    pub fn all_verified(&self) -> bool {
        self.counts.verified == self.counts.total
    }
}

/// Twice the lcm of the periods in play: every period up to `ℓ` for a full
/// shift (the first enumerated point of a depth-`ℓ` cylinder), the system
/// period otherwise.
pub fn default_scan_gap(x: &System, depth: usize, y: &System) -> Option<usize> {
    let xp = match x {
        System::FullShift { .. } => (1..=depth as u64).fold(1, lcm_u64),
        _ => x.system_period()?,
    };
    Some(2 * lcm_u64(xp, y.system_period()?) as usize)
}

/// Depth-`ℓ` cylinders for shift spaces (words of the language for a
/// subshift), the partition cells otherwise.
pub(crate) fn grid_cells(sys: &System, depth: usize) -> Result<Vec<OpenSetSpec>, DisjointError> {
    Ok(match sys {
        System::FullShift { alphabet_size } => cylinders(*alphabet_size as usize, depth),
        System::SubshiftClosure { generator, language_window } => {
            let prefix = generator.prefix(language_window + depth);
            let words: BTreeSet<&[u8]> = prefix.windows(depth).collect();
            words.into_iter().map(|w| OpenSetSpec::cylinder(&symseq::word_string(w))).collect()
        }
        _ => sys.partition_cells()?,
    })
}

/// Witness search for every (depth-`ℓ` cell `U`, partition cell `V`) pair,
/// with one `x` required to serve every sampled `y ∈ V`.
pub fn criterion_scan(params: &ScanParams) -> Result<ScanReport, DisjointError> {
    let x = &params.x_system;
    let y = &params.y_system;
    x.validate()?;
    y.validate()?;
    let gap = match params.gap {
        Some(g) => g,
        None => default_scan_gap(x, params.depth, y).ok_or_else(|| {
            DisjointError::Precondition(format!("no default gap for {x} against {y}; supply one"))
        })?,
    };
    let us = grid_cells(x, params.depth)?;
    let vs = grid_cells(y, params.depth)?;
    let dense = enumerate_dense(x, params.budget)?;
    let grid: Vec<(&OpenSetSpec, &OpenSetSpec)> = us.iter().flat_map(|u| vs.iter().map(move |v| (u, v))).collect();
    let pairs = grid
        .par_iter()
        .map(|&(u, v)| {
            let ys = sample_points(y, v, params.y_samples)?;
            let q = WitnessQuery {
                x_system: x.clone(),
                y_system: y.clone(),
                u: u.clone(),
                v: v.clone(),
                horizon: params.horizon,
                gap,
            };
            if ys.is_empty() {
                let claim = FamilyClaim { kind: ClaimKind::Syndetic { gap }, horizon: params.horizon };
                return Ok(PairResult {
                    u: u.clone(),
                    v: v.clone(),
                    ys,
                    verdict: Verdict::new(
                        Outcome::Inconclusive,
                        Qualifier::AtBudget,
                        claim,
                        Evidence::Note { text: format!("no sampled point in {v}") },
                    ),
                    witness: None,
                    scanned: 0,
                    records: Vec::new(),
                });
            }
            let out = witness_search_all(&q, &dense, &ys)?;
            Ok(PairResult {
                u: u.clone(),
                v: v.clone(),
                ys,
                witness: out.witness().cloned(),
                verdict: out.verdict,
                scanned: out.scanned,
                records: out.records,
            })
        })
        .collect::<Result<Vec<_>, DisjointError>>()?;
    let mut counts = ScanCounts { total: pairs.len(), ..ScanCounts::default() };
    for p in &pairs {
        match p.verdict.outcome {
            Outcome::Verified => counts.verified += 1,
            Outcome::Refuted => counts.refuted += 1,
            Outcome::Inconclusive => counts.inconclusive += 1,
        }
    }
    Ok(ScanReport { params: params.clone(), gap, pairs, counts })
}
