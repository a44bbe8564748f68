use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Verified,
    Refuted,
    Inconclusive,
}

/// What a verdict is relative to: the window, a search budget, or a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Qualifier {
    OnWindow,
    AtBudget,
    AgainstCorpus,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClaimKind {
    /// Every length-`gap` subinterval of the window meets the set.
    Syndetic { gap: usize },
    Thick { run: usize },
    PiecewiseSyndetic { gap: usize, run: usize },
    Ip { generators: usize, bound: u64 },
    Dual { family: String, corpus_size: usize },
    /// An exact window identity or inclusion between two computed sets.
    WindowRelation { relation: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyClaim {
    #[serde(flatten)]
    pub kind: ClaimKind,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Evidence {
    /// Longest gap seen when a gap bound holds.
    GapBound { longest_gap: usize },
    Gap { start: usize, length: usize },
    Run { start: usize, length: usize },
    LongestRun { length: usize },
    Interval { start: usize, length: usize },
    Generators { values: Vec<u64> },
    SearchExhausted { rejected_by_membership: u64, rejected_by_overflow: u64 },
    CorpusMember { id: String },
    CorpusPassed { checked: usize, skipped_empty: usize },
    Relation { holds: bool, first_mismatch: Option<usize> },
    Note { text: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub qualifier: Qualifier,
    pub claim: FamilyClaim,
    pub evidence: Evidence,
}

impl Verdict {
    pub fn new(outcome: Outcome, qualifier: Qualifier, claim: FamilyClaim, evidence: Evidence) -> Self {
        Verdict { outcome, qualifier, claim, evidence }
    }

    pub fn is_verified(&self) -> bool {
        self.outcome == Outcome::Verified
    }

    pub fn is_refuted(&self) -> bool {
        self.outcome == Outcome::Refuted
    }

    /// Verdict of an exact relation between two windows.
    pub fn relation(relation: &str, horizon: usize, first_mismatch: Option<usize>) -> Self {
        let holds = first_mismatch.is_none();
        Verdict {
            outcome: if holds { Outcome::Verified } else { Outcome::Refuted },
            qualifier: Qualifier::OnWindow,
            claim: FamilyClaim { kind: ClaimKind::WindowRelation { relation: relation.to_string() }, horizon },
            evidence: Evidence::Relation { holds, first_mismatch },
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::Verified => "Verified",
            Outcome::Refuted => "Refuted",
            Outcome::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Qualifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Qualifier::OnWindow => "on-window",
            Qualifier::AtBudget => "at-budget",
            Qualifier::AgainstCorpus => "against-corpus",
        };
        f.write_str(s)
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::GapBound { longest_gap } => write!(f, "longest gap {longest_gap}"),
            Evidence::Gap { start, length } => write!(f, "gap [{start},{})", start + length),
            Evidence::Run { start, length } => write!(f, "run [{start},{})", start + length),
            Evidence::LongestRun { length } => write!(f, "longest run {length}"),
            Evidence::Interval { start, length } => write!(f, "interval [{start},{})", start + length),
            Evidence::Generators { values } => write!(f, "generators {values:?}"),
            Evidence::SearchExhausted { rejected_by_membership, rejected_by_overflow } => write!(
                f,
                "search exhausted ({rejected_by_membership} rejected, {rejected_by_overflow} overflowed)"
            ),
            Evidence::CorpusMember { id } => write!(f, "disjoint from {id}"),
            Evidence::CorpusPassed { checked, skipped_empty } => {
                write!(f, "met {checked} corpus members ({skipped_empty} empty skipped)")
            }
            Evidence::Relation { holds: true, .. } => write!(f, "relation holds"),
            Evidence::Relation { first_mismatch, .. } => write!(f, "first mismatch at {first_mismatch:?}"),
            Evidence::Note { text } => f.write_str(text),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ({})", self.outcome, self.qualifier, self.evidence)
    }
}
