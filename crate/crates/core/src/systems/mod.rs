//! The desk-scale system zoo: stepping, return-time sets `N(x,U)`, transfer
//! times, hitting sets `N(U,V)` and proximality runs.
//!
//! Metrics are fixed per variant so that every `ε`-condition is decidable from
//! finite data: shift spaces use `2^{-min{k : x_k != y_k}}`, products the
//! coordinatewise maximum, residue systems the normalized circle distance,
//! towers put distinct levels at distance 1, and ladder rungs sit at `1/j`.

mod dynamics;
mod ladder;
mod proximal;
mod region;
mod sets;

pub use dynamics::{advance, distance, is_minimal_point, point_period, states, step, trajectory, within, Distance};
pub(crate) use dynamics::jump;
pub use ladder::{make_surjective, surjectivity_check};
pub use proximal::{sample_proximal_cell, ProximalSearch};
pub use region::{image, preimage, spec_subset};
pub(crate) use region::{compile, contains, intervals_intersect, Region};
pub use sets::{
    hitting_set, proximal_run_set, return_set, return_set_naive, transfer_set,
};

use crate::rational::{self, Rational};
use crate::symseq::{self, Letter, SymbolError, SymbolGenerator};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("invalid system parameter: {0}")]
    InvalidParameter(String),
    #[error("open set {spec} is incompatible with system {system}")]
    IncompatibleOpenSet { system: String, spec: String },
    #[error("point {point} does not belong to system {system}")]
    ForeignPoint { system: String, point: String },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

fn default_language_window() -> usize {
    1024
}

/// A system from the fixed catalog.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum System {
    FullShift {
        alphabet_size: u8,
    },
    /// Orbit closure of a generator, represented by the generator and the
    /// factor language read from its first `language_window` positions.
    SubshiftClosure {
        generator: SymbolGenerator,
        #[serde(default = "default_language_window")]
        language_window: usize,
    },
    CyclicRotation {
        modulus: u64,
    },
    /// Odometer truncated at finitely many digits: a cyclic rotation of the
    /// radix product whose points are least-significant-first digit strings.
    OdometerTruncation {
        radixes: Vec<u32>,
    },
    CircleRotation {
        #[serde(with = "rational")]
        angle: Rational,
        resolution: u32,
    },
    Product {
        factors: Vec<System>,
    },
    Power {
        base: Box<System>,
        exponent: u32,
    },
    /// `(y, i) -> (y, i+1)` for `i < height`, `(y, height) -> (Sy, 1)`.
    Tower {
        base: Box<System>,
        height: u32,
    },
    /// Surjective extension `X × ({1/j} ∪ {0})`: rung `j >= 2` climbs to
    /// `j-1`, rung 1 applies the base map, rung 0 is fixed. `depth` bounds the
    /// rungs enumerated as states; the map itself is defined on every rung.
    Ladder {
        base: Box<System>,
        depth: u32,
    },
}

/// A point of a catalog system.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum PointRef {
    Sequence {
        generator: SymbolGenerator,
        #[serde(default)]
        shift: u64,
    },
    Residue {
        value: u64,
    },
    Digits {
        digits: Vec<u32>,
    },
    Circle {
        #[serde(with = "rational")]
        position: Rational,
    },
    Tuple {
        coords: Vec<PointRef>,
    },
    Level {
        base: Box<PointRef>,
        level: u32,
    },
    /// Ladder point; rung `j >= 1` sits at height `1/j`, rung 0 at the limit.
    Rung {
        base: Box<PointRef>,
        rung: u32,
    },
}

/// A basic open set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum OpenSetSpec {
    /// Sequences (or odometer digit strings) starting with `word`.
    Cylinder { word: String },
    ResidueSet { residues: BTreeSet<u64> },
    /// Half-open arc `[from, to)`, wrapping through 0 when `from > to`.
    Arc {
        #[serde(with = "rational")]
        from: Rational,
        #[serde(with = "rational")]
        to: Rational,
    },
    /// Tower level `level` over `base` (ladder rung for ladder systems).
    LevelSet { level: u32, base: Box<OpenSetSpec> },
    ProductSpec { factors: Vec<OpenSetSpec> },
    MetricBall {
        center: PointRef,
        #[serde(with = "rational")]
        radius: Rational,
    },
}

impl PointRef {
    /// Sequence point at shift 0, canonicalised.
    pub fn sequence(generator: SymbolGenerator) -> Self {
        PointRef::Sequence { generator, shift: 0 }.normalized()
    }

    pub fn periodic(word: &str) -> Self {
        Self::sequence(SymbolGenerator::periodic(word))
    }

    pub fn eventually_periodic(pre: &str, period: &str) -> Self {
        Self::sequence(SymbolGenerator::eventually_periodic(pre, period))
    }

    pub fn residue(value: u64) -> Self {
        PointRef::Residue { value }
    }

    pub fn circle(position: Rational) -> Self {
        PointRef::Circle { position }
    }

    pub fn tuple(coords: Vec<PointRef>) -> Self {
        PointRef::Tuple { coords }
    }

    pub fn level(base: PointRef, level: u32) -> Self {
        PointRef::Level { base: Box::new(base), level }
    }

    /// Folds shifts of eventually periodic generators into the generator.
    pub fn normalized(self) -> Self {
        match self {
            PointRef::Sequence { generator, shift } => match generator.shifted(shift) {
                Some(generator) => PointRef::Sequence { generator, shift: 0 },
                None => {
                    let shift = generator.period_bound().map_or(shift, |p| shift % p);
                    PointRef::Sequence { generator, shift }
                }
            },
            PointRef::Circle { position } => PointRef::Circle { position: rational::frac(&position) },
            PointRef::Tuple { coords } => {
                PointRef::Tuple { coords: coords.into_iter().map(Self::normalized).collect() }
            }
            PointRef::Level { base, level } => {
                PointRef::Level { base: Box::new(base.normalized()), level }
            }
            PointRef::Rung { base, rung } => PointRef::Rung { base: Box::new(base.normalized()), rung },
            other => other,
        }
    }

    /// Symbols `0..len` of a sequence point.
    pub fn symbols(&self, len: usize) -> Option<Vec<Letter>> {
        match self {
            PointRef::Sequence { generator, shift } => Some(generator.slice(*shift, len)),
            _ => None,
        }
    }
}

impl OpenSetSpec {
    pub fn cylinder(word: &str) -> Self {
        OpenSetSpec::Cylinder { word: word.to_string() }
    }

    pub fn residues(values: impl IntoIterator<Item = u64>) -> Self {
        OpenSetSpec::ResidueSet { residues: values.into_iter().collect() }
    }

    pub fn arc(from: Rational, to: Rational) -> Self {
        OpenSetSpec::Arc { from, to }
    }

    pub fn level(level: u32, base: OpenSetSpec) -> Self {
        OpenSetSpec::LevelSet { level, base: Box::new(base) }
    }

    pub fn product(factors: Vec<OpenSetSpec>) -> Self {
        OpenSetSpec::ProductSpec { factors }
    }

    pub fn ball(center: PointRef, radius: Rational) -> Self {
        OpenSetSpec::MetricBall { center, radius }
    }
}

fn invalid(msg: impl Into<String>) -> SystemError {
    SystemError::InvalidParameter(msg.into())
}

/// Validates a system description.
pub fn build_system(spec: System) -> Result<System, SystemError> {
    spec.validate()?;
    Ok(spec)
}

impl System {
    pub fn full_shift(k: u8) -> Self {
        System::FullShift { alphabet_size: k }
    }

    pub fn cyclic(m: u64) -> Self {
        System::CyclicRotation { modulus: m }
    }

    pub fn odometer(radixes: &[u32]) -> Self {
        System::OdometerTruncation { radixes: radixes.to_vec() }
    }

    pub fn circle(angle: Rational, resolution: u32) -> Self {
        System::CircleRotation { angle, resolution }
    }

    pub fn subshift(generator: SymbolGenerator) -> Self {
        System::SubshiftClosure { generator, language_window: default_language_window() }
    }

    pub fn product(factors: Vec<System>) -> Self {
        System::Product { factors }
    }

    pub fn power(base: System, exponent: u32) -> Self {
        System::Power { base: Box::new(base), exponent }
    }

    pub fn tower(base: System, height: u32) -> Self {
        System::Tower { base: Box::new(base), height }
    }

    pub fn validate(&self) -> Result<(), SystemError> {
        match self {
            System::FullShift { alphabet_size } => {
                if !(2..=10).contains(alphabet_size) {
                    return Err(invalid(format!("full shift needs 2 <= k <= 10, got {alphabet_size}")));
                }
            }
            System::SubshiftClosure { language_window, .. } => {
                if *language_window == 0 {
                    return Err(invalid("language window must be positive"));
                }
            }
            System::CyclicRotation { modulus } => {
                if *modulus == 0 {
                    return Err(invalid("cyclic rotation needs m >= 1"));
                }
            }
            System::OdometerTruncation { radixes } => {
                if radixes.is_empty() || radixes.iter().any(|&r| !(2..=10).contains(&r)) {
                    return Err(invalid("odometer needs radixes in 2..=10"));
                }
            }
            System::CircleRotation { angle, resolution } => {
                if *angle <= Rational::zero() || *angle >= Rational::one() {
                    return Err(invalid("circle angle must lie in (0,1)"));
                }
                if *resolution == 0 {
                    return Err(invalid("circle partition resolution must be positive"));
                }
            }
            System::Product { factors } => {
                if factors.is_empty() {
                    return Err(invalid("product of no systems"));
                }
                factors.iter().try_for_each(System::validate)?;
            }
            System::Power { base, exponent: n }
            | System::Tower { base, height: n }
            | System::Ladder { base, depth: n } => {
                if *n == 0 {
                    return Err(invalid("exponent/height/depth must be >= 1"));
                }
                base.validate()?;
            }
        }
        Ok(())
    }

    /// Symbol set of shift variants.
    pub fn alphabet(&self) -> Option<Vec<Letter>> {
        match self {
            System::FullShift { alphabet_size } => Some(symseq::standard_alphabet(*alphabet_size as usize)),
            System::SubshiftClosure { generator, .. } => Some(generator.alphabet().to_vec()),
            _ => None,
        }
    }

    pub fn is_shift(&self) -> bool {
        matches!(self, System::FullShift { .. } | System::SubshiftClosure { .. })
    }

    /// Static flag: minimal by construction of the variant.
    pub fn is_minimal_by_construction(&self) -> bool {
        match self {
            System::CyclicRotation { .. }
            | System::OdometerTruncation { .. }
            | System::CircleRotation { .. } => true,
            System::Tower { base, .. } => base.is_minimal_by_construction(),
            System::SubshiftClosure { generator, .. } => {
                generator.period_bound().is_some() || is_primitive_substitution(generator)
            }
            System::Product { factors } if factors.len() == 1 => factors[0].is_minimal_by_construction(),
            _ => false,
        }
    }

    /// Number of states of the cyclic realisation.
    pub(crate) fn residue_modulus(&self) -> Option<u64> {
        match self {
            System::CyclicRotation { modulus } => Some(*modulus),
            System::OdometerTruncation { radixes } => Some(radixes.iter().map(|&r| r as u64).product()),
            _ => None,
        }
    }

    /// A common period of every orbit, when one exists by construction.
    pub fn system_period(&self) -> Option<u64> {
        match self {
            System::CyclicRotation { .. } | System::OdometerTruncation { .. } => self.residue_modulus(),
            System::CircleRotation { angle, .. } => Some(*angle.denom() as u64),
            System::SubshiftClosure { generator, .. } => generator.period_bound(),
            System::Product { factors } => factors
                .iter()
                .try_fold(1u64, |acc, f| Some(rational::lcm_u64(acc, f.system_period()?))),
            System::Power { base, exponent } => {
                let p = base.system_period()?;
                Some(p / num_integer::gcd(p, *exponent as u64))
            }
            System::Tower { base, height } => Some(base.system_period()? * *height as u64),
            System::FullShift { .. } | System::Ladder { .. } => None,
        }
    }

    /// Default partition into basic cells (used for `V` in scans and for
    /// joining grids of non-shift systems).
    pub fn partition_cells(&self) -> Result<Vec<OpenSetSpec>, SystemError> {
        Ok(match self {
            System::CyclicRotation { .. } | System::OdometerTruncation { .. } => {
                let m = self.residue_modulus().expect("residue system");
                (0..m).map(|r| OpenSetSpec::residues([r])).collect()
            }
            System::CircleRotation { resolution, .. } => (0..*resolution)
                .map(|i| {
                    OpenSetSpec::arc(
                        Rational::new(i as i128, *resolution as i128),
                        Rational::new(i as i128 + 1, *resolution as i128),
                    )
                })
                .collect(),
            System::Tower { base, height } => {
                let cells = base.partition_cells()?;
                (1..=*height)
                    .flat_map(|l| cells.iter().map(move |c| OpenSetSpec::level(l, c.clone())))
                    .collect()
            }
            System::Product { factors } => {
                let mut out = vec![Vec::new()];
                for f in factors {
                    let cells = f.partition_cells()?;
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            cells.iter().map(move |c| {
                                let mut p = prefix.clone();
                                p.push(c.clone());
                                p
                            })
                        })
                        .collect();
                }
                out.into_iter().map(OpenSetSpec::product).collect()
            }
            System::Power { base, .. } => base.partition_cells()?,
            System::FullShift { .. } | System::SubshiftClosure { .. } => {
                return Err(SystemError::Unsupported(
                    "shift spaces are partitioned by cylinder depth, not by cells".into(),
                ))
            }
            System::Ladder { .. } => {
                return Err(SystemError::Unsupported("ladder systems have no finite partition".into()))
            }
        })
    }

    /// Short label for the metric in use.
    pub fn metric_descriptor(&self) -> String {
        match self {
            System::FullShift { .. } | System::SubshiftClosure { .. } => "shift 2^-k".into(),
            System::CyclicRotation { .. } | System::OdometerTruncation { .. } => "normalized circle on residues".into(),
            System::CircleRotation { .. } => "circle".into(),
            System::Product { .. } => "max of factors".into(),
            System::Power { base, .. } => base.metric_descriptor(),
            System::Tower { base, .. } => format!("levels at distance 1 over {}", base.metric_descriptor()),
            System::Ladder { base, .. } => format!("max({}, |1/j - 1/j'|)", base.metric_descriptor()),
        }
    }

    /// Structural membership of a point.
    pub fn contains_point(&self, p: &PointRef) -> bool {
        match (self, p) {
            (System::FullShift { alphabet_size }, PointRef::Sequence { generator, .. }) => {
                let alphabet = symseq::standard_alphabet(*alphabet_size as usize);
                generator.alphabet().iter().all(|l| alphabet.contains(l))
            }
            (System::SubshiftClosure { generator: g, .. }, PointRef::Sequence { generator, shift }) => {
                // shifts of the generator; eventually periodic points compare canonically
                generator == g
                    || g.shifted(*shift).is_some() && {
                        let (pre, per) = g.periodic_parts().expect("periodic");
                        (0..(pre.len() + per.len()) as u64)
                            .any(|s| g.shifted(s).as_ref() == Some(generator))
                    }
            }
            (System::CyclicRotation { modulus }, PointRef::Residue { value }) => value < modulus,
            (System::OdometerTruncation { radixes }, PointRef::Digits { digits }) => {
                digits.len() == radixes.len() && digits.iter().zip(radixes).all(|(d, r)| d < r)
            }
            (System::CircleRotation { .. }, PointRef::Circle { position }) => {
                *position >= Rational::zero() && *position < Rational::one()
            }
            (System::Product { factors }, PointRef::Tuple { coords }) => {
                factors.len() == coords.len() && factors.iter().zip(coords).all(|(f, c)| f.contains_point(c))
            }
            (System::Power { base, .. }, p) => base.contains_point(p),
            (System::Tower { base, height }, PointRef::Level { base: b, level }) => {
                (1..=*height).contains(level) && base.contains_point(b)
            }
            (System::Ladder { base, .. }, PointRef::Rung { base: b, .. }) => base.contains_point(b),
            _ => false,
        }
    }

    pub(crate) fn check_point(&self, p: &PointRef) -> Result<(), SystemError> {
        if self.contains_point(p) {
            Ok(())
        } else {
            Err(SystemError::ForeignPoint { system: self.to_string(), point: p.to_string() })
        }
    }
}

fn is_primitive_substitution(generator: &SymbolGenerator) -> bool {
    let symseq::GeneratorSpec::SubstitutionFixedPoint { rules, .. } = generator.spec() else {
        return false;
    };
    let letters: Vec<char> = rules.keys().copied().collect();
    let n = letters.len();
    // reachability matrix; primitive iff some power is strictly positive
    let index = |c: char| letters.iter().position(|&l| l == c).expect("rule letter");
    let mut base = vec![vec![false; n]; n];
    for (a, image) in rules {
        for c in image.chars() {
            base[index(*a)][index(c)] = true;
        }
    }
    let mut power = base.clone();
    for _ in 0..(n * n + 1) {
        if power.iter().all(|row| row.iter().all(|&b| b)) {
            return true;
        }
        let next: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| power[i][k] && base[k][j])).collect())
            .collect();
        power = next;
    }
    false
}

pub(crate) fn odometer_value(radixes: &[u32], digits: &[u32]) -> u64 {
    let mut value = 0u64;
    let mut place = 1u64;
    for (d, r) in digits.iter().zip(radixes) {
        value += *d as u64 * place;
        place *= *r as u64;
    }
    value
}

pub(crate) fn odometer_digits(radixes: &[u32], mut value: u64) -> Vec<u32> {
    radixes
        .iter()
        .map(|&r| {
            let d = (value % r as u64) as u32;
            value /= r as u64;
            d
        })
        .collect()
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::FullShift { alphabet_size } => write!(f, "FullShift({alphabet_size})"),
            System::SubshiftClosure { generator, .. } => write!(f, "Subshift({generator})"),
            System::CyclicRotation { modulus } => write!(f, "CyclicRotation({modulus})"),
            System::OdometerTruncation { radixes } => write!(f, "Odometer({radixes:?})"),
            System::CircleRotation { angle, resolution } => {
                write!(f, "CircleRotation({}, {resolution})", rational::Display(angle))
            }
            System::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|s| s.to_string()).collect();
                write!(f, "Product({})", parts.join(" x "))
            }
            System::Power { base, exponent } => write!(f, "Power({base}, {exponent})"),
            System::Tower { base, height } => write!(f, "Tower({base}, {height})"),
            System::Ladder { base, depth } => write!(f, "Ladder({base}, {depth})"),
        }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Sequence { generator, shift: 0 } => write!(f, "{generator}"),
            PointRef::Sequence { generator, shift } => write!(f, "σ^{shift}({generator})"),
            PointRef::Residue { value } => write!(f, "{value}"),
            PointRef::Digits { digits } => {
                let s: String = digits.iter().map(|d| d.to_string()).collect();
                write!(f, "{s}")
            }
            PointRef::Circle { position } => write!(f, "{}", rational::Display(position)),
            PointRef::Tuple { coords } => {
                let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            PointRef::Level { base, level } => write!(f, "({base}, {level})"),
            PointRef::Rung { base, rung: 0 } => write!(f, "({base}, 0)"),
            PointRef::Rung { base, rung } => write!(f, "({base}, 1/{rung})"),
        }
    }
}

impl fmt::Display for OpenSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenSetSpec::Cylinder { word } => write!(f, "[{word}]"),
            OpenSetSpec::ResidueSet { residues } => {
                let parts: Vec<String> = residues.iter().map(|r| r.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            OpenSetSpec::Arc { from, to } => {
                write!(f, "[{}, {})", rational::Display(from), rational::Display(to))
            }
            OpenSetSpec::LevelSet { level, base } => write!(f, "{base}x{{{level}}}"),
            OpenSetSpec::ProductSpec { factors } => {
                let parts: Vec<String> = factors.iter().map(|s| s.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
            OpenSetSpec::MetricBall { center, radius } => {
                write!(f, "B({center}, {})", rational::Display(radius))
            }
        }
    }
}
