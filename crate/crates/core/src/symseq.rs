//! Finitely described one-sided sequences over small alphabets.
//!
//! A [`SymbolGenerator`] is the raw material for points of shift systems and
//! for indicator sequences `1_A` of integer sets. Generators are immutable;
//! the substitution and transitive variants grow a shared prefix cache on
//! demand, which never changes an already-produced symbol.

use crate::intfam::SetGenerator;
use crate::rational::{self, Rational};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

pub type Letter = u8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("period word must be nonempty")]
    EmptyPeriod,
    #[error("letter {0:?} is not an ASCII alphanumeric symbol")]
    BadLetter(char),
    #[error("substitution is not prolongable: {0}")]
    NotProlongable(String),
    #[error("substitution image of {0:?} is empty")]
    EmptyImage(char),
    #[error("substitution uses letter {0:?} without a rule")]
    MissingRule(char),
    #[error("rotation angle {0} is not in (0,1)")]
    AngleOutOfRange(String),
    #[error("partition does not cover [0,1) disjointly: {0}")]
    BadPartition(String),
    #[error("indicator generator: {0}")]
    Indicator(String),
    #[error("transitive generator needs alphabet size in 2..=10 and modulus >= 1")]
    BadTransitive,
}

/// One arc `[from, to)` of a rotation-coding partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArcLetter {
    #[serde(with = "rational")]
    pub from: Rational,
    #[serde(with = "rational")]
    pub to: Rational,
    pub letter: char,
}

/// Serializable description of a generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    EventuallyPeriodic {
        #[serde(default)]
        preperiod: String,
        period: String,
    },
    SubstitutionFixedPoint {
        rules: BTreeMap<char, String>,
        seed: char,
    },
    RotationCoding {
        #[serde(with = "rational")]
        angle: Rational,
        #[serde(with = "rational", default)]
        offset: Rational,
        partition: Vec<ArcLetter>,
    },
    Indicator {
        set: Box<SetGenerator>,
    },
    /// Length-lexicographic concatenation of every word over `0..k`, each word
    /// placed once at every residue class modulo `modulus` (zero padding).
    Transitive {
        alphabet_size: u8,
        modulus: u64,
    },
}

#[derive(Debug, Default)]
struct CacheState {
    symbols: Vec<Letter>,
    /// Substitution: next index of the fixed point whose image is appended.
    /// Transitive: next word length to emit.
    cursor: usize,
}

#[derive(Debug, Clone, Default)]
struct PrefixCache(Arc<RwLock<CacheState>>);

#[derive(Debug, Clone)]
enum Compiled {
    Periodic { preperiod: Vec<Letter>, period: Vec<Letter> },
    Substitution { rules: BTreeMap<Letter, Vec<Letter>>, seed: Letter },
    Rotation { modulus: i128, step: i128, start: i128, arcs: Vec<(i128, i128, Letter)> },
    Indicator(Box<SetGenerator>),
    Transitive { k: u8, modulus: u64 },
}

/// A validated generator with deterministic `symbol_at`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GeneratorSpec", into = "GeneratorSpec")]
pub struct SymbolGenerator {
    spec: GeneratorSpec,
    alphabet: Vec<Letter>,
    compiled: Compiled,
    cache: PrefixCache,
}

fn letter(c: char) -> Result<Letter, SymbolError> {
    if c.is_ascii_alphanumeric() {
        Ok(c as u8)
    } else {
        Err(SymbolError::BadLetter(c))
    }
}

fn word(s: &str) -> Result<Vec<Letter>, SymbolError> {
    s.chars().map(letter).collect()
}

pub fn word_string(w: &[Letter]) -> String {
    w.iter().map(|&b| b as char).collect()
}

/// Smallest root `r` with `w = r^j`.
fn primitive_root(w: &[Letter]) -> &[Letter] {
    let n = w.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| w[i] == w[i - d]) {
            return &w[..d];
        }
    }
    w
}

/// Canonical eventually periodic form: primitive period, shortest preperiod.
fn canonical_periodic(pre: &[Letter], per: &[Letter]) -> (Vec<Letter>, Vec<Letter>) {
    let mut per = primitive_root(per).to_vec();
    let mut pre = pre.to_vec();
    while let (Some(&a), Some(&b)) = (pre.last(), per.last()) {
        if a != b {
            break;
        }
        pre.pop();
        per.rotate_right(1);
    }
    (pre, per)
}

/// Advances `digits` to the next word in lexicographic order; false after the last.
pub(crate) fn next_word(digits: &mut [usize], k: usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < k {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Digits `0-9` then lowercase letters: the symbol set of a `k`-letter full shift.
pub fn standard_alphabet(k: usize) -> Vec<Letter> {
    (b'0'..=b'9').chain(b'a'..=b'z').take(k).collect()
}

pub fn build_generator(spec: GeneratorSpec) -> Result<SymbolGenerator, SymbolError> {
    let (compiled, alphabet) = match &spec {
        GeneratorSpec::EventuallyPeriodic { preperiod, period } => {
            let pre = word(preperiod)?;
            let per = word(period)?;
            if per.is_empty() {
                return Err(SymbolError::EmptyPeriod);
            }
            let alphabet: BTreeSet<Letter> = pre.iter().chain(per.iter()).copied().collect();
            let (preperiod, period) = canonical_periodic(&pre, &per);
            let spec = GeneratorSpec::EventuallyPeriodic {
                preperiod: word_string(&preperiod),
                period: word_string(&period),
            };
            return Ok(SymbolGenerator {
                spec,
                alphabet: alphabet.into_iter().collect(),
                compiled: Compiled::Periodic { preperiod, period },
                cache: PrefixCache::default(),
            });
        }
        GeneratorSpec::SubstitutionFixedPoint { rules, seed } => {
            let mut compiled = BTreeMap::new();
            for (&from, image) in rules {
                if image.is_empty() {
                    return Err(SymbolError::EmptyImage(from));
                }
                compiled.insert(letter(from)?, word(image)?);
            }
            for image in rules.values() {
                for c in image.chars() {
                    if !rules.contains_key(&c) {
                        return Err(SymbolError::MissingRule(c));
                    }
                }
            }
            let seed_letter = letter(*seed)?;
            let image = compiled
                .get(&seed_letter)
                .ok_or(SymbolError::MissingRule(*seed))?;
            if image.first() != Some(&seed_letter) {
                return Err(SymbolError::NotProlongable(format!(
                    "rules({seed}) does not start with {seed}"
                )));
            }
            if image.len() < 2 {
                return Err(SymbolError::NotProlongable(format!(
                    "rules({seed}) has length < 2"
                )));
            }
            let alphabet = compiled.keys().copied().collect();
            (
                Compiled::Substitution { rules: compiled, seed: seed_letter },
                alphabet,
            )
        }
        GeneratorSpec::RotationCoding { angle, offset, partition } => {
            if *angle <= Rational::zero() || *angle >= Rational::one() {
                return Err(SymbolError::AngleOutOfRange(rational::format_rational(angle)));
            }
            if partition.is_empty() {
                return Err(SymbolError::BadPartition("no arcs".into()));
            }
            let mut arcs = partition.clone();
            arcs.sort();
            let mut cursor = Rational::zero();
            for arc in &arcs {
                if arc.from != cursor {
                    return Err(SymbolError::BadPartition(format!(
                        "expected an arc starting at {}",
                        rational::format_rational(&cursor)
                    )));
                }
                if arc.to <= arc.from {
                    return Err(SymbolError::BadPartition("degenerate arc".into()));
                }
                cursor = arc.to;
            }
            if cursor != Rational::one() {
                return Err(SymbolError::BadPartition("arcs stop before 1".into()));
            }
            let offset = rational::frac(offset);
            let mut modulus = angle.denom().lcm(offset.denom());
            for arc in &arcs {
                modulus = modulus.lcm(arc.to.denom());
            }
            let scale = |r: &Rational| r.numer() * (modulus / r.denom());
            let mut compiled_arcs = Vec::new();
            let mut alphabet = BTreeSet::new();
            for arc in &arcs {
                let l = letter(arc.letter)?;
                alphabet.insert(l);
                compiled_arcs.push((scale(&arc.from), scale(&arc.to), l));
            }
            (
                Compiled::Rotation {
                    modulus,
                    step: scale(angle),
                    start: scale(&offset),
                    arcs: compiled_arcs,
                },
                alphabet,
            )
        }
        GeneratorSpec::Indicator { set } => {
            set.validate()
                .map_err(|e| SymbolError::Indicator(e.to_string()))?;
            (
                Compiled::Indicator(set.clone()),
                b"01".iter().copied().collect(),
            )
        }
        GeneratorSpec::Transitive { alphabet_size, modulus } => {
            if !(2..=10).contains(alphabet_size) || *modulus == 0 {
                return Err(SymbolError::BadTransitive);
            }
            (
                Compiled::Transitive { k: *alphabet_size, modulus: *modulus },
                standard_alphabet(*alphabet_size as usize).into_iter().collect(),
            )
        }
    };
    Ok(SymbolGenerator {
        spec,
        alphabet: alphabet.into_iter().collect(),
        compiled,
        cache: PrefixCache::default(),
    })
}

impl TryFrom<GeneratorSpec> for SymbolGenerator {
    type Error = SymbolError;

    fn try_from(spec: GeneratorSpec) -> Result<Self, Self::Error> {
        build_generator(spec)
    }
}

impl From<SymbolGenerator> for GeneratorSpec {
    fn from(generator: SymbolGenerator) -> Self {
        generator.spec
    }
}

impl SymbolGenerator {
    pub fn periodic(period: &str) -> Self {
        Self::eventually_periodic("", period)
    }

    /// Panics on an invalid word; intended for literals.
    pub fn eventually_periodic(preperiod: &str, period: &str) -> Self {
        build_generator(GeneratorSpec::EventuallyPeriodic {
            preperiod: preperiod.to_string(),
            period: period.to_string(),
        })
        .expect("valid eventually periodic generator")
    }

    pub fn indicator(set: SetGenerator) -> Result<Self, SymbolError> {
        build_generator(GeneratorSpec::Indicator { set: Box::new(set) })
    }

    pub fn transitive(alphabet_size: u8, modulus: u64) -> Result<Self, SymbolError> {
        build_generator(GeneratorSpec::Transitive { alphabet_size, modulus })
    }

    pub fn substitution(rules: &[(char, &str)], seed: char) -> Result<Self, SymbolError> {
        build_generator(GeneratorSpec::SubstitutionFixedPoint {
            rules: rules.iter().map(|&(c, w)| (c, w.to_string())).collect(),
            seed,
        })
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    /// Canonical `(preperiod, period)` for eventually periodic generators.
    pub fn periodic_parts(&self) -> Option<(&[Letter], &[Letter])> {
        match &self.compiled {
            Compiled::Periodic { preperiod, period } => Some((preperiod, period)),
            _ => None,
        }
    }

    /// A multiple of the least period when the sequence is purely periodic.
    pub fn period_bound(&self) -> Option<u64> {
        match &self.compiled {
            Compiled::Periodic { preperiod, period } if preperiod.is_empty() => {
                Some(period.len() as u64)
            }
            Compiled::Rotation { modulus, step, .. } => {
                Some((modulus / step.gcd(modulus)) as u64)
            }
            _ => None,
        }
    }

    /// The eventually periodic generator for the `s`-fold shift, in canonical form.
    pub fn shifted(&self, s: u64) -> Option<SymbolGenerator> {
        let (pre, per) = self.periodic_parts()?;
        let (pre, per) = if (s as usize) <= pre.len() {
            (pre[s as usize..].to_vec(), per.to_vec())
        } else {
            let r = ((s - pre.len() as u64) % per.len() as u64) as usize;
            let mut per = per.to_vec();
            per.rotate_left(r);
            (Vec::new(), per)
        };
        let spec = GeneratorSpec::EventuallyPeriodic {
            preperiod: word_string(&pre),
            period: word_string(&per),
        };
        Some(build_generator(spec).expect("shift of a valid generator"))
    }

    pub fn symbol_at(&self, n: u64) -> Letter {
        match &self.compiled {
            Compiled::Periodic { preperiod, period } => {
                let p = preperiod.len() as u64;
                if n < p {
                    preperiod[n as usize]
                } else {
                    period[((n - p) % period.len() as u64) as usize]
                }
            }
            Compiled::Rotation { modulus, step, start, arcs } => {
                let n = n as i128 % modulus;
                let pos = (start + n * step).rem_euclid(*modulus);
                arcs.iter()
                    .find(|(a, b, _)| *a <= pos && pos < *b)
                    .map(|&(_, _, l)| l)
                    .expect("partition covers the circle")
            }
            Compiled::Indicator(set) => {
                if set.contains(n) {
                    b'1'
                } else {
                    b'0'
                }
            }
            Compiled::Substitution { .. } | Compiled::Transitive { .. } => {
                self.ensure_cached(n as usize + 1);
                self.cache.0.read().expect("cache lock").symbols[n as usize]
            }
        }
    }

    /// Symbols `start .. start+len`.
    pub fn slice(&self, start: u64, len: usize) -> Vec<Letter> {
        match &self.compiled {
            Compiled::Substitution { .. } | Compiled::Transitive { .. } => {
                let end = start as usize + len;
                self.ensure_cached(end);
                self.cache.0.read().expect("cache lock").symbols[start as usize..end].to_vec()
            }
            Compiled::Indicator(set) => {
                let end = start as usize + len;
                let window = set.window(end);
                (start as usize..end)
                    .map(|i| if window.contains(i) { b'1' } else { b'0' })
                    .collect()
            }
            _ => (start..start + len as u64).map(|i| self.symbol_at(i)).collect(),
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<Letter> {
        self.slice(0, n)
    }

    fn ensure_cached(&self, len: usize) {
        if self.cache.0.read().expect("cache lock").symbols.len() >= len {
            return;
        }
        let mut state = self.cache.0.write().expect("cache lock");
        match &self.compiled {
            Compiled::Substitution { rules, seed } => {
                if state.symbols.is_empty() {
                    state.symbols = rules[seed].clone();
                    state.cursor = 1;
                }
                // x = rules(x_0) rules(x_1) ...; the image of x_0..x_{c-1} is already present
                while state.symbols.len() < len {
                    let next = state.symbols[state.cursor];
                    state.symbols.extend_from_slice(&rules[&next]);
                    state.cursor += 1;
                }
            }
            Compiled::Transitive { k, modulus } => {
                let k = *k as usize;
                let alphabet = standard_alphabet(k);
                while state.symbols.len() < len {
                    state.cursor += 1;
                    let n = state.cursor;
                    let mut digits = vec![0usize; n];
                    loop {
                        for r in 0..*modulus {
                            while state.symbols.len() as u64 % modulus != r {
                                state.symbols.push(alphabet[0]);
                            }
                            state.symbols.extend(digits.iter().map(|&d| alphabet[d]));
                        }
                        if !next_word(&mut digits, k) {
                            break;
                        }
                    }
                }
            }
            _ => unreachable!("only cached variants grow"),
        }
    }
}

impl PartialEq for SymbolGenerator {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for SymbolGenerator {}

impl PartialOrd for SymbolGenerator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SymbolGenerator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.spec.cmp(&other.spec)
    }
}

impl Hash for SymbolGenerator {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.spec.hash(state);
    }
}

impl fmt::Display for SymbolGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.compiled {
            Compiled::Periodic { preperiod, period } => {
                write!(f, "{}({})^inf", word_string(preperiod), word_string(period))
            }
            _ => write!(f, "{}...", word_string(&self.prefix(12))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intfam::SetGenerator;

    fn rotation(angle: Rational, arcs: &[(Rational, Rational, char)]) -> Result<SymbolGenerator, SymbolError> {
        build_generator(GeneratorSpec::RotationCoding {
            angle,
            offset: Rational::zero(),
            partition: arcs
                .iter()
                .map(|&(from, to, letter)| ArcLetter { from, to, letter })
                .collect(),
        })
    }

    fn thirds() -> SymbolGenerator {
        rotation(
            Rational::new(1, 3),
            &[
                (Rational::zero(), Rational::new(2, 3), '0'),
                (Rational::new(2, 3), Rational::one(), '1'),
            ],
        )
        .unwrap()
    }

    #[test]
    fn periodic_pattern() {
        let g = SymbolGenerator::periodic("01");
        assert_eq!(g.alphabet(), b"01");
        assert_eq!(g.symbol_at(5), b'1');
        assert_eq!(SymbolGenerator::eventually_periodic("1", "0").prefix(4), b"1000");
        assert!(g.prefix(0).is_empty());
    }

    #[test]
    fn empty_period_rejected() {
        let err = build_generator(GeneratorSpec::EventuallyPeriodic {
            preperiod: "1".into(),
            period: String::new(),
        });
        assert_eq!(err.unwrap_err(), SymbolError::EmptyPeriod);
    }

    #[test]
    fn non_prolongable_rejected() {
        let err = SymbolGenerator::substitution(&[('0', "10"), ('1', "01")], '0');
        assert!(matches!(err, Err(SymbolError::NotProlongable(_))));
        let short = SymbolGenerator::substitution(&[('0', "0"), ('1', "01")], '0');
        assert!(matches!(short, Err(SymbolError::NotProlongable(_))));
    }

    #[test]
    fn morse_prefix_matches_three_iterations() {
        let morse = SymbolGenerator::substitution(&[('0', "01"), ('1', "10")], '0').unwrap();
        // oracle: apply the substitution three times to the seed
        let mut w = String::from("0");
        for _ in 0..3 {
            w = w.chars().map(|c| if c == '0' { "01" } else { "10" }).collect();
        }
        assert_eq!(w, "01101001");
        assert_eq!(word_string(&morse.prefix(8)), w);
    }

    #[test]
    fn rotation_by_a_third() {
        let g = thirds();
        // simulate the rotation directly
        let mut pos = Rational::zero();
        for n in 0..30u64 {
            let expect = if pos < Rational::new(2, 3) { b'0' } else { b'1' };
            assert_eq!(g.symbol_at(n), expect);
            pos = rational::frac(&(pos + Rational::new(1, 3)));
        }
        assert_eq!(g.prefix(3), b"001");
        assert_eq!(g.period_bound(), Some(3));
    }

    #[test]
    fn rotation_validation() {
        assert!(matches!(
            rotation(Rational::one(), &[(Rational::zero(), Rational::one(), '0')]),
            Err(SymbolError::AngleOutOfRange(_))
        ));
        assert!(matches!(
            rotation(Rational::new(1, 2), &[(Rational::zero(), Rational::new(1, 2), '0')]),
            Err(SymbolError::BadPartition(_))
        ));
        assert!(matches!(
            rotation(
                Rational::new(1, 2),
                &[
                    (Rational::zero(), Rational::new(2, 3), '0'),
                    (Rational::new(1, 2), Rational::one(), '1')
                ]
            ),
            Err(SymbolError::BadPartition(_))
        ));
    }

    #[test]
    fn boundary_point_takes_right_arc() {
        // offset exactly on the endpoint 1/2
        let g = build_generator(GeneratorSpec::RotationCoding {
            angle: Rational::new(1, 4),
            offset: Rational::new(1, 2),
            partition: vec![
                ArcLetter { from: Rational::zero(), to: Rational::new(1, 2), letter: 'a' },
                ArcLetter { from: Rational::new(1, 2), to: Rational::one(), letter: 'b' },
            ],
        })
        .unwrap();
        assert_eq!(g.prefix(4), b"bbaa");
    }

    #[test]
    fn indicator_of_progression() {
        let g = SymbolGenerator::indicator(SetGenerator::ArithmeticProgression { start: 0, step: 3 })
            .unwrap();
        assert_eq!(g.symbol_at(6), b'1');
        assert_eq!(g.symbol_at(7), b'0');
        assert_eq!(g.prefix(7), b"1001001");
    }

    #[test]
    fn shift_canonicalises() {
        let g = SymbolGenerator::periodic("01");
        assert_eq!(g.shifted(1).unwrap(), SymbolGenerator::periodic("10"));
        assert_eq!(g.shifted(2).unwrap(), g);
        let h = SymbolGenerator::eventually_periodic("110", "10");
        assert_eq!(h, SymbolGenerator::eventually_periodic("1", "10"));
        assert_eq!(h.shifted(3).unwrap(), SymbolGenerator::periodic("10"));
        assert_eq!(SymbolGenerator::periodic("0101"), SymbolGenerator::periodic("01"));
    }

    #[test]
    fn transitive_point_contains_every_word_at_every_residue() {
        let g = SymbolGenerator::transitive(2, 3).unwrap();
        let prefix = g.prefix(2000);
        for w in [&b"00"[..], b"01", b"10", b"11", b"101", b"0110"] {
            for r in 0..3 {
                assert!(
                    (0..prefix.len() - w.len())
                        .any(|p| p % 3 == r && &prefix[p..p + w.len()] == w),
                    "word {:?} residue {r}",
                    word_string(w)
                );
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = thirds();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"variant\":\"rotation-coding\""));
        assert!(text.contains("\"2/3\""));
        let back: SymbolGenerator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"variant":"eventually-periodic","period":""}"#;
        assert!(serde_json::from_str::<SymbolGenerator>(bad).is_err());
    }
}
