use super::central::central_generator;
use super::{DpsDecomposition, LengthRule, SetGenerator, StartRule};
use crate::systems::{OpenSetSpec, PointRef, System};
use serde::{Deserialize, Serialize};

/// A corpus entry tagged with the family it instantiates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusMember {
    pub id: String,
    pub family: String,
    pub generator: SetGenerator,
}

impl CorpusMember {
    pub fn new(id: impl Into<String>, family: &str, generator: SetGenerator) -> Self {
        CorpusMember { id: id.into(), family: family.to_string(), generator }
    }
}

/// IP sets from every generator pair and triple with entries at most `max`:
/// the finite sums of the sequence repeating each tuple forever.
pub fn ip_corpus(max: u64) -> Vec<CorpusMember> {
    let mut out = Vec::new();
    for a in 1..=max {
        for b in a..=max {
            out.push(CorpusMember::new(format!("fs-{a}-{b}"), "ip", SetGenerator::CycledSums { generators: vec![a, b] }));
        }
    }
    for a in 1..=max {
        for b in a..=max {
            for c in b..=max {
                out.push(CorpusMember::new(
                    format!("fs-{a}-{b}-{c}"),
                    "ip",
                    SetGenerator::CycledSums { generators: vec![a, b, c] },
                ));
            }
        }
    }
    out
}

/// Thick schedules with varied start and length rules.
pub fn schedule_variants() -> Vec<SetGenerator> {
    const RULES: [(u64, u32, u64, u64, u64); 10] = [
        (1, 2, 0, 1, 0),
        (1, 2, 3, 1, 2),
        (2, 2, 0, 2, 0),
        (1, 2, 7, 1, 5),
        (3, 2, 1, 3, 1),
        (4, 2, 0, 3, 0),
        (1, 2, 11, 2, 3),
        (2, 2, 3, 2, 1),
        (2, 2, 5, 2, 4),
        (1, 3, 0, 4, 0),
    ];
    RULES
        .iter()
        .map(|&(scale, exponent, offset, slope, intercept)| SetGenerator::ThickSchedule {
            starts: StartRule { scale, exponent, offset },
            lengths: LengthRule { slope, intercept },
        })
        .collect()
}

/// `count` central sets `A ∩ N(y, V)` realised as return sets of
/// `(1_A, y)` to `[1] × V`, with `A` cycling through the schedule variants.
pub fn central_corpus(system: &System, point: &PointRef, neighborhood: &OpenSetSpec, count: usize) -> Vec<CorpusMember> {
    let schedules = schedule_variants();
    (0..count)
        .map(|i| {
            let dec = DpsDecomposition {
                thick: schedules[i % schedules.len()].clone(),
                system: system.clone(),
                point: point.clone(),
                neighborhood: neighborhood.clone(),
            };
            let generator = central_generator(&dec).expect("catalog decomposition");
            CorpusMember::new(format!("central-{i}"), "central", generator)
        })
        .collect()
}

/// Progressions with step at most 12, thick schedules, the IP corpus,
/// dynamical syndetic sets of the minimal catalog, and a few central sets.
pub fn default_corpus() -> Vec<CorpusMember> {
    let mut out = Vec::new();
    for d in 1..=12u64 {
        for a in 0..d {
            out.push(CorpusMember::new(format!("ap-{a}-{d}"), "syndetic", SetGenerator::progression(a, d)));
        }
    }
    for (i, g) in schedule_variants().into_iter().enumerate() {
        out.push(CorpusMember::new(format!("thick-{i}"), "thick", g));
    }
    out.extend(ip_corpus(20));
    for m in 2..=6u64 {
        for r in 0..m {
            out.push(CorpusMember::new(
                format!("ds-c{m}-{r}"),
                "dynamical-syndetic",
                SetGenerator::DynSyndetic {
                    system: System::cyclic(m),
                    point: PointRef::residue(r),
                    neighborhood: OpenSetSpec::residues([r]),
                },
            ));
        }
    }
    let odometer = System::odometer(&[2, 2, 2]);
    for word in ["0", "1", "01", "11"] {
        let digits = word.chars().map(|c| c.to_digit(10).expect("digit")).chain(std::iter::repeat(0)).take(3).collect();
        out.push(CorpusMember::new(
            format!("ds-odometer-{word}"),
            "dynamical-syndetic",
            SetGenerator::DynSyndetic {
                system: odometer.clone(),
                point: PointRef::Digits { digits },
                neighborhood: OpenSetSpec::cylinder(word),
            },
        ));
    }
    out.extend(central_corpus(&System::cyclic(3), &PointRef::residue(0), &OpenSetSpec::residues([0]), 6));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes_and_validity() {
        assert_eq!(ip_corpus(20).len(), 210 + 1540);
        let corpus = default_corpus();
        for m in &corpus {
            m.generator.validate().unwrap_or_else(|e| panic!("{}: {e}", m.id));
        }
        let mut ids: Vec<&str> = corpus.iter().map(|m| m.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), corpus.len());
    }

    #[test]
    fn schedules_are_thick_by_a_thousand() {
        for g in schedule_variants() {
            g.validate().unwrap();
            assert!(g.window(1000).longest_run() >= 24, "{g:?}");
        }
    }
}
