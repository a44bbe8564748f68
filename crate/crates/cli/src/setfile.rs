//! `check-set` input: a set file plus family flags, turned into a family-check config.

use crate::config::{CorpusSpec, Experiment, ExperimentConfig};
use anyhow::{bail, Context, Result};
use dynlab_core::intfam::{ClaimKind, IntWindowSet, SetGenerator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Syndetic,
    Thick,
    PiecewiseSyndetic,
    Ip,
    IpStar,
}

#[derive(Debug, Clone, Default)]
pub struct FamilyArgs {
    pub g: Option<usize>,
    pub l: Option<usize>,
    pub k: Option<usize>,
    pub bound: Option<u64>,
    pub corpus_max: Option<u64>,
}

/// A set file is either a JSON set generator (needs a horizon) or the window
/// text form: `H=<n>` then members or `start:length` runs.
pub fn load_set(text: &str, horizon: Option<usize>) -> Result<(SetGenerator, usize)> {
    if text.trim_start().starts_with('{') {
        let generator: SetGenerator = serde_json::from_str(text).context("not a set generator")?;
        let h = horizon.context("a generator set file needs --horizon")?;
        return Ok((generator, h));
    }
    let w = IntWindowSet::parse_text(text)?;
    let h = match horizon {
        Some(h) if h > w.horizon() => bail!("--horizon {h} exceeds the file window {}", w.horizon()),
        Some(h) => h,
        None => w.horizon(),
    };
    let members: Vec<u64> = w.iter().filter(|&n| n < h).map(|n| n as u64).collect();
    Ok((SetGenerator::explicit(members), h))
}

fn need<T>(value: Option<T>, flag: &str, family: Family) -> Result<T> {
    value.with_context(|| format!("{family:?} needs {flag}"))
}

pub fn check_set_config(set: SetGenerator, horizon: usize, family: Family, args: &FamilyArgs) -> Result<ExperimentConfig> {
    let (claim, corpus) = match family {
        Family::Syndetic => (ClaimKind::Syndetic { gap: need(args.g, "--g", family)? }, None),
        Family::Thick => (ClaimKind::Thick { run: need(args.l, "--L", family)? }, None),
        Family::PiecewiseSyndetic => (
            ClaimKind::PiecewiseSyndetic { gap: need(args.g, "--g", family)?, run: need(args.l, "--L", family)? },
            None,
        ),
        Family::Ip => {
            (ClaimKind::Ip { generators: need(args.k, "--k", family)?, bound: need(args.bound, "--bound", family)? }, None)
        }
        Family::IpStar => {
            let corpus = CorpusSpec::Ip { max: need(args.corpus_max, "--corpus-max", family)? };
            (ClaimKind::Dual { family: "ip".into(), corpus_size: corpus.members().len() }, Some(corpus))
        }
    };
    let config = ExperimentConfig {
        experiment: Experiment::FamilyCheck { set, horizon, claims: vec![claim], corpus },
        seed: 0,
        output: None,
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_window_becomes_explicit() {
        let (g, h) = load_set("H=10\n0\n3:2\n", None).unwrap();
        assert_eq!(h, 10);
        assert_eq!(g.window(10), IntWindowSet::from_members(10, [0, 3, 4]));
    }

    #[test]
    fn generator_needs_horizon() {
        let text = r#"{"variant": "arithmetic-progression", "start": 0, "step": 2}"#;
        assert!(load_set(text, None).is_err());
        assert_eq!(load_set(text, Some(50)).unwrap().1, 50);
    }

    #[test]
    fn missing_flag_reported() {
        let err = check_set_config(SetGenerator::progression(0, 2), 100, Family::Thick, &FamilyArgs::default()).unwrap_err();
        assert!(err.to_string().contains("--L"));
    }
}
