use crate::rational::Rational;
use crate::symseq::{self, next_word, Letter};
use crate::systems::{states, OpenSetSpec, PointRef, System, SystemError};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A deterministic enumeration of a countable dense set of minimal points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseEnumeration {
    pub system: System,
}

impl DenseEnumeration {
    pub fn new(system: System) -> Self {
        DenseEnumeration { system }
    }

    pub fn take(&self, count: usize) -> Result<Vec<PointRef>, SystemError> {
        enumerate_dense(&self.system, count)
    }
}

fn is_primitive(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n.is_multiple_of(*d)).all(|d| (d..n).any(|i| w[i] != w[i - d]))
}

/// Primitive words over `k` letters by length, then lexicographically.
pub fn primitive_words(k: usize) -> impl Iterator<Item = Vec<Letter>> {
    let alphabet = symseq::standard_alphabet(k);
    (1usize..).flat_map(move |len| {
        let alphabet = alphabet.clone();
        let mut digits = vec![0usize; len];
        let mut done = false;
        std::iter::from_fn(move || loop {
            if done {
                return None;
            }
            let current = digits.clone();
            done = !next_word(&mut digits, k);
            if is_primitive(&current) {
                return Some(current.iter().map(|&d| alphabet[d]).collect());
            }
        })
    })
}

/// Every cylinder of length `depth` over `k` letters, lexicographically.
pub fn cylinders(k: usize, depth: usize) -> Vec<OpenSetSpec> {
    let alphabet = symseq::standard_alphabet(k);
    let mut digits = vec![0usize; depth];
    let mut out = Vec::new();
    loop {
        let w: Vec<Letter> = digits.iter().map(|&d| alphabet[d]).collect();
        out.push(OpenSetSpec::cylinder(&symseq::word_string(&w)));
        if !next_word(&mut digits, k) {
            return out;
        }
    }
}

/// Every depth-`depth` cylinder of the `k`-letter full shift contains one of
/// the first `cylinder_index_bound(k, depth)` enumerated points: the cylinder
/// word's primitive root is listed no later than the words of length `<= depth`.
pub fn cylinder_index_bound(k: usize, depth: usize) -> usize {
    (1..=depth as u32).map(|j| k.pow(j)).sum()
}

/// Tuples of indices with sum `s`, lexicographically, each below its bound.
fn compositions(bounds: &[usize], s: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() + 1 == bounds.len() {
        if s < bounds[prefix.len()] {
            prefix.push(s);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    for i in 0..=s.min(bounds[prefix.len()].saturating_sub(1)) {
        prefix.push(i);
        compositions(bounds, s - i, prefix, out);
        prefix.pop();
    }
}

fn diagonal(lists: &[Vec<PointRef>], count: usize) -> Vec<PointRef> {
    let bounds: Vec<usize> = lists.iter().map(Vec::len).collect();
    if bounds.contains(&0) {
        return Vec::new();
    }
    let max_sum: usize = bounds.iter().map(|b| b - 1).sum();
    let mut out = Vec::new();
    for s in 0..=max_sum {
        let mut tuples = Vec::new();
        compositions(&bounds, s, &mut Vec::new(), &mut tuples);
        for t in tuples {
            out.push(PointRef::tuple(t.iter().zip(lists).map(|(&i, l)| l[i].clone()).collect()));
            if out.len() == count {
                return out;
            }
        }
    }
    out
}

/// Rationals in `[0,1)` by denominator, then numerator.
fn farey(count: usize) -> Vec<PointRef> {
    let mut out = Vec::new();
    for q in 1i128.. {
        for p in 0..q {
            if p.gcd(&q) == 1 {
                out.push(PointRef::circle(Rational::new(p, q)));
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    unreachable!()
}

/// The first `count` points of the catalog enumeration of a dense set of
/// minimal points.
pub fn enumerate_dense(sys: &System, count: usize) -> Result<Vec<PointRef>, SystemError> {
    sys.validate()?;
    if let Some(all) = states(sys) {
        return Ok(all.into_iter().take(count).collect());
    }
    Ok(match sys {
        System::FullShift { alphabet_size } => primitive_words(*alphabet_size as usize)
            .take(count)
            .map(|w| PointRef::periodic(&symseq::word_string(&w)))
            .collect(),
        System::SubshiftClosure { generator, .. } => (0..count as u64)
            .map(|shift| PointRef::Sequence { generator: generator.clone(), shift }.normalized())
            .collect(),
        System::CircleRotation { .. } => farey(count),
        System::Product { factors } => {
            let lists = factors.iter().map(|f| enumerate_dense(f, count)).collect::<Result<Vec<_>, _>>()?;
            diagonal(&lists, count)
        }
        System::Power { base, .. } => enumerate_dense(base, count)?,
        System::Tower { base, height } => enumerate_dense(base, count)?
            .into_iter()
            .flat_map(|b| (1..=*height).map(move |l| PointRef::level(b.clone(), l)))
            .take(count)
            .collect(),
        System::Ladder { .. } | System::CyclicRotation { .. } | System::OdometerTruncation { .. } => {
            return Err(SystemError::Unsupported(format!("no dense enumeration for {sys}")))
        }
    })
}
