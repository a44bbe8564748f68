use super::{enumerate_dense, DisjointError};
use crate::intfam::{
    check_thick, dual_check, ClaimKind, CorpusMember, Evidence, FamilyClaim, Outcome, Qualifier, SetGenerator, Verdict,
};
use crate::systems::{compile, contains, return_set, OpenSetSpec, PointRef, System};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralCheck {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<PointRef>,
    pub scanned: usize,
}

fn candidates_in<'a>(sys: &System, dense: &'a [PointRef], u: &OpenSetSpec) -> Result<Vec<&'a PointRef>, DisjointError> {
    let region = compile(sys, u)?;
    for x in dense {
        sys.check_point(x)?;
    }
    Ok(dense.iter().filter(|x| contains(sys, &region, x)).collect())
}

/// One `x ∈ D ∩ U` whose return window meets `A ∩ B` for every listed thick `A`.
pub fn central_criterion_check(
    x_system: &System,
    dense: &[PointRef],
    u: &OpenSetSpec,
    b: &SetGenerator,
    thick: &[SetGenerator],
    run_length: usize,
    horizon: usize,
) -> Result<CentralCheck, DisjointError> {
    if thick.is_empty() {
        return Err(DisjointError::Precondition("empty thick list makes the claim vacuous".into()));
    }
    b.validate()?;
    let bw = b.try_window(horizon)?;
    let mut targets = Vec::with_capacity(thick.len());
    for (i, a) in thick.iter().enumerate() {
        let aw = a.try_window(horizon)?;
        let v = check_thick(&aw, run_length)?;
        if !v.is_verified() {
            return Err(DisjointError::Precondition(format!("thick set {i} fails at run length {run_length}: {v}")));
        }
        targets.push(aw.intersection(&bw));
    }
    let claim = FamilyClaim { kind: ClaimKind::Dual { family: "central".into(), corpus_size: thick.len() }, horizon };
    let in_u = candidates_in(x_system, dense, u)?;
    if in_u.is_empty() {
        return Ok(CentralCheck {
            verdict: Verdict::new(
                Outcome::Inconclusive,
                Qualifier::AtBudget,
                claim,
                Evidence::Note { text: format!("no enumerated point of {u} among {}", dense.len()) },
            ),
            witness: None,
            scanned: 0,
        });
    }
    let mut first_miss = None;
    for (scanned, x) in in_u.iter().enumerate() {
        let nx = return_set(x_system, x, u, horizon)?;
        match targets.iter().position(|t| nx.is_disjoint(t)) {
            None => {
                return Ok(CentralCheck {
                    verdict: Verdict::new(
                        Outcome::Verified,
                        Qualifier::AgainstCorpus,
                        claim,
                        Evidence::CorpusPassed { checked: thick.len(), skipped_empty: 0 },
                    ),
                    witness: Some((*x).clone()),
                    scanned: scanned + 1,
                })
            }
            Some(i) => {
                first_miss.get_or_insert(i);
            }
        }
    }
    Ok(CentralCheck {
        verdict: Verdict::new(
            Outcome::Refuted,
            Qualifier::AtBudget,
            claim,
            Evidence::CorpusMember { id: format!("thick-{}", first_miss.expect("some candidate")) },
        ),
        witness: None,
        scanned: in_u.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarKind {
    IpStar,
    CStar,
}

impl StarKind {
    pub fn family(self) -> &'static str {
        match self {
            StarKind::IpStar => "ip",
            StarKind::CStar => "central",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarCheck {
    pub kind: StarKind,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<PointRef>,
    pub corpus_size: usize,
    /// Corpus member refuting each rejected candidate, in scan order.
    pub rejected_by: Vec<String>,
}

/// Searches the listed candidates of `U` for one whose return window meets
/// every corpus member.
pub fn star_check_over(
    x_system: &System,
    candidates: &[PointRef],
    u: &OpenSetSpec,
    kind: StarKind,
    corpus: &[CorpusMember],
    horizon: usize,
) -> Result<StarCheck, DisjointError> {
    if let Some(m) = corpus.iter().find(|m| m.family != kind.family()) {
        return Err(DisjointError::Precondition(format!("corpus member {} is not of family {}", m.id, kind.family())));
    }
    let in_u = candidates_in(x_system, candidates, u)?;
    let mut rejected_by = Vec::new();
    let mut last = None;
    for x in in_u {
        let nx = return_set(x_system, x, u, horizon)?;
        let v = dual_check(&nx, corpus, kind.family())?;
        if v.is_verified() {
            return Ok(StarCheck { kind, verdict: v, witness: Some(x.clone()), corpus_size: corpus.len(), rejected_by });
        }
        if let Evidence::CorpusMember { id } = &v.evidence {
            rejected_by.push(id.clone());
        }
        last = Some(v);
    }
    let claim = FamilyClaim { kind: ClaimKind::Dual { family: kind.family().into(), corpus_size: corpus.len() }, horizon };
    let verdict = match last {
        Some(v) => Verdict::new(Outcome::Refuted, Qualifier::AtBudget, claim, v.evidence),
        None => Verdict::new(
            Outcome::Inconclusive,
            Qualifier::AtBudget,
            claim,
            Evidence::Note { text: format!("no candidate in {u}") },
        ),
    };
    Ok(StarCheck { kind, verdict, witness: None, corpus_size: corpus.len(), rejected_by })
}

/// The same search over the first `budget` enumerated points.
pub fn star_sufficient_check(
    x_system: &System,
    u: &OpenSetSpec,
    kind: StarKind,
    corpus: &[CorpusMember],
    horizon: usize,
    budget: usize,
) -> Result<StarCheck, DisjointError> {
    let dense = enumerate_dense(x_system, budget)?;
    star_check_over(x_system, &dense, u, kind, corpus, horizon)
}
