//! Experiment configuration files.

use dynlab_core::disjoint::StarKind;
use dynlab_core::intfam::{ClaimKind, CorpusMember, DpsDecomposition, SetGenerator};
use dynlab_core::rational::{self, Rational};
use dynlab_core::systems::{OpenSetSpec, PointRef, System};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

/// A gap bound given as a number or as `"auto"` (twice the lcm of the
/// periods in play). There is no fallback when the field is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GapSpec {
    Fixed(usize),
    Auto(AutoGap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutoGap {
    #[serde(rename = "auto")]
    Auto,
}

impl GapSpec {
    pub fn fixed(self) -> Option<usize> {
        match self {
            GapSpec::Fixed(g) => Some(g),
            GapSpec::Auto(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CorpusSpec {
    /// All generator pairs and triples with entries up to `max`.
    Ip { max: u64 },
    /// Central sets over one minimal system and varied thick schedules.
    Central { system: System, point: PointRef, neighborhood: OpenSetSpec, count: usize },
    Explicit { members: Vec<CorpusMember> },
}

impl CorpusSpec {
    pub fn members(&self) -> Vec<CorpusMember> {
        match self {
            CorpusSpec::Ip { max } => dynlab_core::intfam::ip_corpus(*max),
            CorpusSpec::Central { system, point, neighborhood, count } => {
                dynlab_core::intfam::central_corpus(system, point, neighborhood, *count)
            }
            CorpusSpec::Explicit { members } => members.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
#[serde(tag = "route", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TransferRoute {
    /// Search a witness for `(U, V)`, then move it to `X^n` with offsets `k_i`.
    Product {
        x_system: System,
        y_system: System,
        u: OpenSetSpec,
        v: OpenSetSpec,
        y: PointRef,
        gap: usize,
        budget: usize,
        offsets: Vec<u64>,
        targets: Vec<OpenSetSpec>,
    },
    Tower { base: System, height: u32, y: PointRef },
    Power { x_system: System, y_system: System, exponent: u32, u: OpenSetSpec, v: OpenSetSpec, gap: GapSpec, budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    FamilyCheck {
        set: SetGenerator,
        horizon: usize,
        claims: Vec<ClaimKind>,
        /// Corpus for `dual` claims; other claims ignore it.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        corpus: Option<CorpusSpec>,
    },
    CentralBridge {
        decompositions: Vec<DpsDecomposition>,
        horizon: usize,
        run_length: usize,
        #[serde(with = "rational")]
        epsilon: Rational,
        gap: GapSpec,
    },
    WitnessSearch {
        x_system: System,
        y_system: System,
        u: OpenSetSpec,
        v: OpenSetSpec,
        y: PointRef,
        horizon: usize,
        gap: usize,
        budget: usize,
    },
    CriterionScan {
        x_system: System,
        y_system: System,
        depth: usize,
        horizon: usize,
        gap: GapSpec,
        budget: usize,
        y_samples: usize,
    },
    JoiningCoverage {
        x_system: System,
        y_system: System,
        x: PointRef,
        y: PointRef,
        depth: usize,
        horizon: usize,
        /// When present the coverage is compared against this value exactly.
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
        expected: Option<Rational>,
    },
    StarCheck {
        x_system: System,
        u: OpenSetSpec,
        star: StarKind,
        corpus: CorpusSpec,
        horizon: usize,
        budget: usize,
    },
    Transfer {
        horizon: usize,
        #[serde(flatten)]
        route: TransferRoute,
    },
    Hyperspace {
        system: System,
        u: OpenSetSpec,
        max_size: usize,
        max_period: u32,
        budget: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(r) => rational::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        rational::deserialize(d).map(Some)
    }
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::FamilyCheck { .. } => "family-check",
            Experiment::CentralBridge { .. } => "central-bridge",
            Experiment::WitnessSearch { .. } => "witness-search",
            Experiment::CriterionScan { .. } => "criterion-scan",
            Experiment::JoiningCoverage { .. } => "joining-coverage",
            Experiment::StarCheck { .. } => "star-check",
            Experiment::Transfer { .. } => "transfer",
            Experiment::Hyperspace { .. } => "hyperspace",
        }
    }

    pub fn horizon(&self) -> Option<usize> {
        match self {
            Experiment::FamilyCheck { horizon, .. }
            | Experiment::CentralBridge { horizon, .. }
            | Experiment::WitnessSearch { horizon, .. }
            | Experiment::CriterionScan { horizon, .. }
            | Experiment::JoiningCoverage { horizon, .. }
            | Experiment::StarCheck { horizon, .. }
            | Experiment::Transfer { horizon, .. } => Some(*horizon),
            Experiment::Hyperspace { .. } => None,
        }
    }
}

fn positive(name: &'static str, value: usize) -> Result<(), ConfigError> {
    if value == 0 {
        return Err(field(name, "must be positive"));
    }
    Ok(())
}

fn within_horizon(name: &'static str, value: usize, horizon: usize) -> Result<(), ConfigError> {
    positive(name, value)?;
    if value > horizon {
        return Err(field(name, format!("{value} exceeds horizon {horizon}")));
    }
    Ok(())
}

fn claim_parameters(kind: &ClaimKind) -> Vec<(&'static str, usize)> {
    match kind {
        ClaimKind::Syndetic { gap } => vec![("gap", *gap)],
        ClaimKind::Thick { run } => vec![("run", *run)],
        ClaimKind::PiecewiseSyndetic { gap, run } => vec![("gap", *gap), ("run", *run)],
        ClaimKind::Ip { generators, bound } => vec![("generators", *generators), ("bound", *bound as usize)],
        ClaimKind::Dual { .. } | ClaimKind::WindowRelation { .. } => Vec::new(),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Structural checks a parse cannot express: positive sizes, window
    /// parameters bounded by the horizon, nonempty scans.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(h) = self.experiment.horizon() {
            positive("horizon", h)?;
        }
        match &self.experiment {
            Experiment::FamilyCheck { horizon, claims, corpus, .. } => {
                if claims.is_empty() {
                    return Err(field("claims", "no claims to check"));
                }
                for c in claims {
                    for (name, value) in claim_parameters(c) {
                        if name == "generators" {
                            positive("claims", value)?;
                        } else {
                            within_horizon("claims", value, *horizon).map_err(|e| match e {
                                ConfigError::Field { message, .. } => field("claims", format!("{name}: {message}")),
                                other => other,
                            })?;
                        }
                    }
                    if matches!(c, ClaimKind::Dual { .. }) && corpus.is_none() {
                        return Err(field("corpus", "dual claims need a corpus"));
                    }
                    if matches!(c, ClaimKind::WindowRelation { .. }) {
                        return Err(field("claims", "window relations are not checkable on a single set"));
                    }
                }
            }
            Experiment::CentralBridge { decompositions, horizon, run_length, epsilon, gap } => {
                if decompositions.is_empty() {
                    return Err(field("decompositions", "empty list"));
                }
                within_horizon("run_length", *run_length, *horizon)?;
                if *epsilon <= Rational::from_integer(0) {
                    return Err(field("epsilon", "must be positive"));
                }
                if let Some(g) = gap.fixed() {
                    within_horizon("gap", g, *horizon)?;
                }
            }
            Experiment::WitnessSearch { horizon, gap, budget, .. } => {
                within_horizon("gap", *gap, *horizon)?;
                positive("budget", *budget)?;
            }
            Experiment::CriterionScan { x_system, depth, horizon, gap, budget, y_samples, .. } => {
                if x_system.is_shift() && *depth == 0 {
                    return Err(field("depth", "depth 0 gives an empty scan"));
                }
                if let Some(g) = gap.fixed() {
                    within_horizon("gap", g, *horizon)?;
                }
                positive("budget", *budget)?;
                positive("y_samples", *y_samples)?;
            }
            Experiment::JoiningCoverage { depth, horizon, .. } => {
                if *depth > *horizon {
                    return Err(field("depth", format!("{depth} exceeds horizon {horizon}")));
                }
            }
            Experiment::StarCheck { budget, .. } => positive("budget", *budget)?,
            Experiment::Transfer { horizon, route } => match route {
                TransferRoute::Product { gap, budget, offsets, targets, .. } => {
                    within_horizon("gap", *gap, *horizon)?;
                    positive("budget", *budget)?;
                    if offsets.is_empty() || offsets.len() != targets.len() {
                        return Err(field("offsets", "need one target per offset"));
                    }
                }
                TransferRoute::Tower { height, .. } => positive("height", *height as usize)?,
                TransferRoute::Power { exponent, gap, budget, .. } => {
                    positive("exponent", *exponent as usize)?;
                    if let Some(g) = gap.fixed() {
                        within_horizon("gap", g, *exponent as usize * horizon)?;
                    }
                    positive("budget", *budget)?;
                }
            },
            Experiment::Hyperspace { max_size, max_period, budget, .. } => {
                positive("max_size", *max_size)?;
                positive("max_period", *max_period as usize)?;
                positive("budget", *budget)?;
            }
        }
        Ok(())
    }
}
