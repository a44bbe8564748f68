use super::{compile, contains, proximal_run_set, PointRef, Region, System, SystemError};
use crate::rational::{self, Rational};
use crate::symseq::{self, word_string, SymbolGenerator};
use serde::{Deserialize, Serialize};

/// Acceptance parameters for proximal-cell sampling: a candidate `z` is kept
/// when `{n < horizon : d(T^n x, T^n z) < epsilon}` has a run of `run_length`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProximalSearch {
    #[serde(with = "rational")]
    pub epsilon: Rational,
    pub run_length: usize,
    pub horizon: usize,
    /// Number of candidates examined.
    pub budget: usize,
}

/// Searches eventually periodic points of `region` proximal to `x`.
///
/// Candidates, in order: `x` itself; on the full shift, `w · σ^{|w|} x` for
/// words `w` extending the region's word in length-lexicographic order (with
/// the tail of a non-periodic `x` copied over the search window); on
/// subshifts, shifts of the generator.
/// `None` means the budget ran out.
pub fn sample_proximal_cell(
    sys: &System,
    x: &PointRef,
    region: &super::OpenSetSpec,
    search: &ProximalSearch,
) -> Result<Option<PointRef>, SystemError> {
    sys.check_point(x)?;
    let compiled = compile(sys, region)?;
    let Region::Word(word) = &compiled else {
        return Err(SystemError::Unsupported("proximal sampling needs a shift variant".into()));
    };
    let tails: Box<dyn Iterator<Item = PointRef> + '_> = match (sys, x) {
        (System::FullShift { alphabet_size }, PointRef::Sequence { generator, shift }) => {
            let alphabet = symseq::standard_alphabet(*alphabet_size as usize);
            let keep = search.horizon + rational::agreement_depth(&search.epsilon);
            let mut digits: Option<Vec<usize>> = None;
            Box::new(std::iter::from_fn(move || {
                let d = match digits.as_mut() {
                    None => digits.insert(Vec::new()),
                    Some(d) => {
                        if !symseq::next_word(d, alphabet.len()) {
                            *d = vec![0; d.len() + 1];
                        }
                        d
                    }
                };
                let mut w = word.clone();
                w.extend(d.iter().map(|&i| alphabet[i]));
                Some(splice(&w, generator, *shift, keep))
            }))
        }
        (System::SubshiftClosure { generator, .. }, _) => Box::new(
            (1u64..).map(move |s| PointRef::Sequence { generator: generator.clone(), shift: s }.normalized()),
        ),
        _ => unreachable!("word regions come from shift variants"),
    };
    for z in std::iter::once(x.clone()).chain(tails).take(search.budget) {
        if !contains(sys, &compiled, &z) {
            continue;
        }
        let prox = proximal_run_set(sys, x, &z, &search.epsilon, search.horizon)?;
        if prox.longest_run() >= search.run_length {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// `w · σ^{|w|} x`, kept eventually periodic when `x` is.
fn splice(w: &[u8], generator: &SymbolGenerator, shift: u64, keep: usize) -> PointRef {
    match generator.shifted(shift + w.len() as u64) {
        Some(tail) => {
            let (pre, per) = tail.periodic_parts().expect("eventually periodic");
            let mut head = w.to_vec();
            head.extend_from_slice(pre);
            PointRef::eventually_periodic(&word_string(&head), &word_string(per))
        }
        None => {
            // copy the tail of x far enough to cover the search window
            let mut head = w.to_vec();
            head.extend(generator.slice(shift + w.len() as u64, keep));
            let period = word_string(&generator.slice(shift + (w.len() + keep) as u64, 1));
            PointRef::eventually_periodic(&word_string(&head), &period)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::OpenSetSpec;

    fn search() -> ProximalSearch {
        ProximalSearch { epsilon: Rational::new(1, 4), run_length: 50, horizon: 200, budget: 20 }
    }

    #[test]
    fn agreement_tail_candidate() {
        let z = sample_proximal_cell(&System::full_shift(2), &PointRef::periodic("0"), &OpenSetSpec::cylinder("1"), &search())
            .unwrap()
            .unwrap();
        assert_eq!(z, PointRef::eventually_periodic("1", "0"));
    }

    #[test]
    fn self_in_region() {
        let x = PointRef::periodic("01");
        let z = sample_proximal_cell(&System::full_shift(2), &x, &OpenSetSpec::cylinder("0"), &search()).unwrap();
        assert_eq!(z, Some(x));
    }

    #[test]
    fn two_point_subshift_misses_the_cylinder() {
        let sys = System::subshift(SymbolGenerator::periodic("01"));
        let z = sample_proximal_cell(&sys, &PointRef::periodic("01"), &OpenSetSpec::cylinder("11"), &search()).unwrap();
        assert_eq!(z, None);
    }
}
