//! Exact rationals and their `"p/q"` text form.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use std::fmt;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{0}`: expected `p/q` or an integer")]
pub struct ParseRationalError(pub String);

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| err())?;
            let q: i128 = q.trim().parse().map_err(|_| err())?;
            if q == 0 {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => text.parse::<i128>().map(Rational::from_integer).map_err(|_| err()),
    }
}

pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(value: &Rational) -> Rational {
    value - value.floor()
}

/// Circle distance `min(|a-b|, 1-|a-b|)` for points of `[0,1)`.
pub fn circle_distance(a: &Rational, b: &Rational) -> Rational {
    let d = frac(&(a - b));
    let other = Rational::one() - d;
    if d < other {
        d
    } else {
        other
    }
}

/// `2^{-k}` as an exact rational.
pub fn dyadic(k: u32) -> Rational {
    Rational::new(1, 1i128 << k)
}

/// Least `k` with `2^{-k} < eps`, i.e. the cylinder depth whose agreement
/// forces shift distance below `eps`.
pub fn agreement_depth(eps: &Rational) -> usize {
    assert!(*eps > Rational::zero(), "epsilon must be positive");
    let mut k = 0u32;
    while dyadic(k) >= *eps {
        k += 1;
        assert!(k < 120, "epsilon too small");
    }
    k as usize
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b);
    }
    a.lcm(&b)
}

/// Convergents `F_{n}/F_{n+1}` of the golden-mean conjugate with
/// denominator at most `max_den`, skipping the degenerate `1/1`.
pub fn golden_convergents(max_den: i128) -> Vec<Rational> {
    let (mut a, mut b) = (1i128, 2i128);
    let mut out = Vec::new();
    while b <= max_den {
        out.push(Rational::new(a, b));
        let next = a + b;
        a = b;
        b = next;
    }
    out
}

pub struct Display<'a>(pub &'a Rational);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(value))
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
    let text = String::deserialize(deserializer)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/6").unwrap(), Rational::new(1, 3));
        assert_eq!(parse_rational("5").unwrap(), Rational::from_integer(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&Rational::new(3, 9)), "1/3");
    }

    #[test]
    fn depth_for_epsilon() {
        assert_eq!(agreement_depth(&dyadic(3)), 4);
        assert_eq!(agreement_depth(&Rational::new(3, 16)), 3);
        assert_eq!(agreement_depth(&Rational::from_integer(2)), 0);
    }

    #[test]
    fn golden_mean_convergents() {
        let qs: Vec<i128> = golden_convergents(144).iter().map(|r| *r.denom()).collect();
        assert_eq!(qs, vec![2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
    }

    #[test]
    fn circle_distance_wraps() {
        assert_eq!(
            circle_distance(&Rational::new(1, 8), &Rational::new(7, 8)),
            Rational::new(1, 4)
        );
    }
}
