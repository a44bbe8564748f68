use super::{enumerate_dense, DisjointError};
use crate::intfam::{check_syndetic, ClaimKind, Evidence, FamilyClaim, IntWindowSet, Outcome, Qualifier, Verdict};
use crate::systems::{compile, contains, return_set, states, transfer_set, OpenSetSpec, PointRef, System};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Candidates examined per parallel batch of a scan.
const BATCH: usize = 32;

/// Points tried when sampling a cell of an infinite system.
const SAMPLE_POOL: usize = 4096;

/// Fixed data of a transfer-set search: `N_{T×S}((x,y), U×V)` on `[0, horizon)`
/// must have every gap shorter than `gap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessQuery {
    pub x_system: System,
    pub y_system: System,
    pub u: OpenSetSpec,
    pub v: OpenSetSpec,
    pub horizon: usize,
    pub gap: usize,
}

/// A located `x` and the transfer window it produced against one `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub x_system: System,
    pub y_system: System,
    pub x: PointRef,
    pub y: PointRef,
    pub u: OpenSetSpec,
    pub v: OpenSetSpec,
    pub horizon: usize,
    pub gap: usize,
    /// Present on freshly computed records; reports omit it.
    #[serde(skip)]
    pub window: Option<IntWindowSet>,
    pub verdict: Verdict,
}

impl WitnessRecord {
    pub fn new(q: &WitnessQuery, x: PointRef, y: PointRef) -> Result<Self, DisjointError> {
        let window = transfer_set(&q.x_system, &q.y_system, &x, &y, &q.u, &q.v, q.horizon)?;
        let verdict = check_syndetic(&window, q.gap)?;
        Ok(WitnessRecord {
            x_system: q.x_system.clone(),
            y_system: q.y_system.clone(),
            x,
            y,
            u: q.u.clone(),
            v: q.v.clone(),
            horizon: q.horizon,
            gap: q.gap,
            window: Some(window),
            verdict,
        })
    }

    pub fn transfer_window(&self) -> Result<IntWindowSet, DisjointError> {
        match &self.window {
            Some(w) => Ok(w.clone()),
            None => Ok(self.recompute()?.0),
        }
    }

    /// Transfer window and syndetic verdict computed from scratch.
    pub fn recompute(&self) -> Result<(IntWindowSet, Verdict), DisjointError> {
        let w = transfer_set(&self.x_system, &self.y_system, &self.x, &self.y, &self.u, &self.v, self.horizon)?;
        let v = check_syndetic(&w, self.gap)?;
        Ok((w, v))
    }

    pub fn reverify(&self) -> Result<bool, DisjointError> {
        let (w, v) = self.recompute()?;
        Ok(v == self.verdict && self.window.as_ref().is_none_or(|stored| *stored == w))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOutcome {
    pub verdict: Verdict,
    /// One record per `y` for the accepted `x`, or for the best rejected one.
    pub records: Vec<WitnessRecord>,
    /// Enumerated points of `U` examined.
    pub scanned: usize,
    pub budget: usize,
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&PointRef> {
        if self.verdict.is_verified() {
            self.records.first().map(|r| &r.x)
        } else {
            None
        }
    }
}

/// Up to `count` points of `cell`, in enumeration order.
pub fn sample_points(sys: &System, cell: &OpenSetSpec, count: usize) -> Result<Vec<PointRef>, DisjointError> {
    let region = compile(sys, cell)?;
    let pool = match states(sys) {
        Some(all) => all,
        None => enumerate_dense(sys, SAMPLE_POOL)?,
    };
    Ok(pool.into_iter().filter(|p| contains(sys, &region, p)).take(count).collect())
}

/// Scans `dense ∩ U` in order for an `x` whose transfer window against every
/// listed `y` is syndetic at the query gap.
pub fn witness_search_all(
    q: &WitnessQuery,
    dense: &[PointRef],
    ys: &[PointRef],
) -> Result<WitnessOutcome, DisjointError> {
    q.x_system.validate()?;
    q.y_system.validate()?;
    if !q.y_system.is_minimal_by_construction() {
        return Err(DisjointError::Precondition(format!("{} is not minimal by construction", q.y_system)));
    }
    if ys.is_empty() {
        return Err(DisjointError::Precondition("no y to test against".into()));
    }
    let h = q.horizon;
    let claim = FamilyClaim { kind: ClaimKind::Syndetic { gap: q.gap }, horizon: h };
    let y_returns = ys
        .iter()
        .map(|y| return_set(&q.y_system, y, &q.v, h))
        .collect::<Result<Vec<_>, _>>()?;
    let region = compile(&q.x_system, &q.u)?;
    for x in dense {
        q.x_system.check_point(x)?;
    }
    let in_u: Vec<&PointRef> = dense.iter().filter(|x| contains(&q.x_system, &region, x)).collect();
    if in_u.is_empty() {
        return Ok(WitnessOutcome {
            verdict: Verdict::new(
                Outcome::Inconclusive,
                Qualifier::AtBudget,
                claim,
                Evidence::Note { text: format!("no enumerated point of {} among {}", q.u, dense.len()) },
            ),
            records: Vec::new(),
            scanned: 0,
            budget: dense.len(),
        });
    }

    // (all passed, worst longest gap, index of first failing y)
    let evaluate = |x: &PointRef| -> Result<(bool, usize), DisjointError> {
        let nx = return_set(&q.x_system, x, &q.u, h)?;
        let mut worst = 0;
        let mut ok = true;
        for ny in &y_returns {
            let w = nx.intersection(ny);
            worst = worst.max(if w.is_empty() { h } else { w.longest_gap() });
            ok &= check_syndetic(&w, q.gap)?.is_verified();
        }
        Ok((ok, worst))
    };

    let mut best: Option<(usize, &PointRef)> = None;
    let mut scanned = 0;
    for chunk in in_u.chunks(BATCH) {
        let results: Vec<(bool, usize)> = chunk.par_iter().map(|x| evaluate(x)).collect::<Result<_, _>>()?;
        for (x, (ok, worst)) in chunk.iter().zip(results) {
            scanned += 1;
            if ok {
                let records = ys
                    .iter()
                    .map(|y| WitnessRecord::new(q, (*x).clone(), y.clone()))
                    .collect::<Result<Vec<_>, _>>()?;
                let longest_gap = records
                    .iter()
                    .filter_map(|r| match r.verdict.evidence {
                        Evidence::GapBound { longest_gap } => Some(longest_gap),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0);
                return Ok(WitnessOutcome {
                    verdict: Verdict::new(Outcome::Verified, Qualifier::OnWindow, claim, Evidence::GapBound { longest_gap }),
                    records,
                    scanned,
                    budget: dense.len(),
                });
            }
            if best.is_none_or(|(g, _)| worst < g) {
                best = Some((worst, x));
            }
        }
    }
    let (_, x) = best.expect("nonempty candidate list");
    let records =
        ys.iter().map(|y| WitnessRecord::new(q, x.clone(), y.clone())).collect::<Result<Vec<_>, _>>()?;
    let evidence = records
        .iter()
        .find(|r| !r.verdict.is_verified())
        .map(|r| r.verdict.evidence.clone())
        .expect("rejected candidate has a failing record");
    Ok(WitnessOutcome {
        verdict: Verdict::new(Outcome::Refuted, Qualifier::AtBudget, claim, evidence),
        records,
        scanned,
        budget: dense.len(),
    })
}

/// Single-`y` search: the first `x ∈ D ∩ U` with a syndetic transfer window.
pub fn witness_search(q: &WitnessQuery, dense: &[PointRef], y: &PointRef) -> Result<WitnessOutcome, DisjointError> {
    witness_search_all(q, dense, std::slice::from_ref(y))
}
