//! Report documents, their summaries, and atomic file output.

use crate::config::ExperimentConfig;
use anyhow::{Context, Result};
use dynlab_core::intfam::{ClaimKind, FamilyClaim, Outcome, Qualifier, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowOutcome {
    Verified,
    Refuted,
    Inconclusive,
    Error,
}

impl From<Outcome> for RowOutcome {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Verified => RowOutcome::Verified,
            Outcome::Refuted => RowOutcome::Refuted,
            Outcome::Inconclusive => RowOutcome::Inconclusive,
        }
    }
}

/// One CSV-summary row: a claim, a scan pair, or an inline error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRow {
    pub id: String,
    pub outcome: RowOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qualifier: Option<Qualifier>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub parameters: String,
    pub evidence: String,
}

pub fn claim_parameters(claim: &FamilyClaim) -> String {
    let kind = match &claim.kind {
        ClaimKind::Syndetic { gap } => format!("syndetic g={gap}"),
        ClaimKind::Thick { run } => format!("thick L={run}"),
        ClaimKind::PiecewiseSyndetic { gap, run } => format!("piecewise-syndetic g={gap} L={run}"),
        ClaimKind::Ip { generators, bound } => format!("ip k={generators} bound={bound}"),
        ClaimKind::Dual { family, corpus_size } => format!("{family}-dual corpus={corpus_size}"),
        ClaimKind::WindowRelation { relation } => relation.clone(),
    };
    format!("{kind} H={}", claim.horizon)
}

impl ClaimRow {
    pub fn from_verdict(id: String, v: &Verdict, witness: Option<String>) -> Self {
        ClaimRow {
            id,
            outcome: v.outcome.into(),
            qualifier: Some(v.qualifier),
            witness,
            parameters: claim_parameters(&v.claim),
            evidence: v.evidence.to_string(),
        }
    }

    pub fn error(id: String, parameters: String, message: String) -> Self {
        ClaimRow { id, outcome: RowOutcome::Error, qualifier: None, witness: None, parameters, evidence: message }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub verified: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

/// Kept apart from everything else so reruns compare equal once it is dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub kind: String,
    pub config: ExperimentConfig,
    pub counts: Counts,
    pub claims: Vec<ClaimRow>,
    pub detail: Value,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Report {
    pub fn new(config: ExperimentConfig, claims: Vec<ClaimRow>, detail: Value, timing: Timing) -> Self {
        let mut counts = Counts::default();
        for row in &claims {
            match row.outcome {
                RowOutcome::Verified => counts.verified += 1,
                RowOutcome::Refuted => counts.refuted += 1,
                RowOutcome::Inconclusive => counts.inconclusive += 1,
                RowOutcome::Error => counts.errors += 1,
            }
        }
        Report {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            kind: config.experiment.kind().into(),
            config,
            counts,
            claims,
            detail,
            timing,
        }
    }

    /// 0 all verified, 1 some refuted, 2 inconclusive without refutations,
    /// 3 when a cell failed.
    pub fn exit_code(&self) -> i32 {
        if self.counts.errors > 0 {
            3
        } else if self.counts.refuted > 0 {
            1
        } else if self.counts.inconclusive > 0 {
            2
        } else {
            0
        }
    }

    /// The report with timing zeroed, for rerun comparisons.
    pub fn without_timing(&self) -> Report {
        Report { timing: Timing { elapsed_ms: 0 }, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("not a report document")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["claim_id", "outcome", "qualifier", "witness", "parameters", "evidence"])?;
        for row in &self.claims {
            let outcome = format!("{:?}", row.outcome);
            let qualifier = row.qualifier.map(|q| q.to_string()).unwrap_or_default();
            w.write_record([
                row.id.as_str(),
                &outcome,
                &qualifier,
                row.witness.as_deref().unwrap_or(""),
                &row.parameters,
                &row.evidence,
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path.file_name().with_context(|| format!("{} is not a file path", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.with_context(|| format!("cannot write {}", path.display()))
}
