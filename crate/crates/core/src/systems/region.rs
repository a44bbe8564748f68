//! Open-set specs compiled to exact membership tests.

use super::{odometer_value, OpenSetSpec, PointRef, System, SystemError};
use crate::rational::{self, Rational};
use crate::symseq::Letter;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Region {
    Everything,
    Word(Vec<Letter>),
    /// Residues modulo the cyclic (or odometer) modulus.
    Residues(Vec<bool>),
    Interval(CircleInterval),
    Level { level: u32, base: Box<Region> },
    Rung { rung: u32, base: Box<Region> },
    Product(Vec<Region>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum CircleInterval {
    /// `[from, to)`, wrapping when `from > to`; `[0, 1)` is the whole circle.
    Arc { from: Rational, to: Rational },
    Ball { center: Rational, radius: Rational },
}

impl CircleInterval {
    pub(crate) fn contains(&self, t: &Rational) -> bool {
        match self {
            CircleInterval::Arc { from, to } => {
                if from < to {
                    from <= t && t < to
                } else {
                    t >= from || t < to
                }
            }
            CircleInterval::Ball { center, radius } => rational::circle_distance(t, center) < *radius,
        }
    }

    fn is_full(&self) -> bool {
        match self {
            CircleInterval::Arc { from, to } => to - from == Rational::one(),
            CircleInterval::Ball { radius, .. } => *radius > Rational::new(1, 2),
        }
    }

    /// Rotation by `delta`.
    pub(crate) fn rotated(&self, delta: &Rational) -> Self {
        if self.is_full() {
            return self.clone();
        }
        match self {
            CircleInterval::Arc { from, to } => CircleInterval::Arc {
                from: rational::frac(&(from + delta)),
                to: rational::frac(&(to + delta)),
            },
            CircleInterval::Ball { center, radius } => CircleInterval::Ball {
                center: rational::frac(&(center + delta)),
                radius: *radius,
            },
        }
    }

    fn breakpoints(&self) -> Vec<Rational> {
        match self {
            CircleInterval::Arc { from, to } => vec![rational::frac(from), rational::frac(to)],
            CircleInterval::Ball { center, radius } => {
                vec![rational::frac(&(center - radius)), rational::frac(&(center + radius))]
            }
        }
    }

    fn to_spec(&self) -> OpenSetSpec {
        match self {
            CircleInterval::Arc { from, to } => OpenSetSpec::Arc { from: *from, to: *to },
            CircleInterval::Ball { center, radius } => {
                OpenSetSpec::ball(PointRef::circle(*center), *radius)
            }
        }
    }
}

/// Points where membership in `a` or `b` can change, plus one point inside
/// every open arc between consecutive breakpoints.
fn probe_points(a: &CircleInterval, b: &CircleInterval) -> Vec<Rational> {
    let mut cuts: Vec<Rational> = a.breakpoints().into_iter().chain(b.breakpoints()).collect();
    cuts.sort();
    cuts.dedup();
    let mut probes = cuts.clone();
    for (i, c) in cuts.iter().enumerate() {
        let next = if i + 1 < cuts.len() { cuts[i + 1] } else { cuts[0] + Rational::one() };
        probes.push(rational::frac(&((c + next) / Rational::from_integer(2))));
    }
    probes
}

pub(crate) fn intervals_intersect(a: &CircleInterval, b: &CircleInterval) -> bool {
    probe_points(a, b).iter().any(|t| a.contains(t) && b.contains(t))
}

fn interval_subset(a: &CircleInterval, b: &CircleInterval) -> bool {
    probe_points(a, b).iter().all(|t| !a.contains(t) || b.contains(t))
}

fn residue_value(sys: &System, p: &PointRef) -> Option<u64> {
    match (sys, p) {
        (System::CyclicRotation { .. }, PointRef::Residue { value }) => Some(*value),
        (System::OdometerTruncation { radixes }, PointRef::Digits { digits }) => {
            Some(odometer_value(radixes, digits))
        }
        _ => None,
    }
}

pub(crate) fn compile(sys: &System, spec: &OpenSetSpec) -> Result<Region, SystemError> {
    let incompatible =
        || SystemError::IncompatibleOpenSet { system: sys.to_string(), spec: spec.to_string() };
    if let OpenSetSpec::MetricBall { center, radius } = spec {
        if *radius <= Rational::zero() {
            return Err(incompatible());
        }
        if !matches!(sys, System::Power { .. }) {
            sys.check_point(center)?;
        }
    }
    match (sys, spec) {
        (System::Power { base, .. }, _) => compile(base, spec),
        (System::FullShift { .. } | System::SubshiftClosure { .. }, OpenSetSpec::Cylinder { word }) => {
            let alphabet = sys.alphabet().expect("shift alphabet");
            let w: Vec<Letter> = word.bytes().collect();
            if w.iter().any(|l| !alphabet.contains(l)) {
                return Err(incompatible());
            }
            Ok(Region::Word(w))
        }
        (System::FullShift { .. } | System::SubshiftClosure { .. }, OpenSetSpec::MetricBall { center, radius }) => {
            let depth = rational::agreement_depth(radius);
            Ok(Region::Word(center.symbols(depth).expect("sequence point")))
        }
        (System::CyclicRotation { .. } | System::OdometerTruncation { .. }, OpenSetSpec::ResidueSet { residues }) => {
            let m = sys.residue_modulus().expect("residue system");
            if residues.is_empty() || residues.iter().any(|&r| r >= m) {
                return Err(incompatible());
            }
            Ok(Region::Residues((0..m).map(|r| residues.contains(&r)).collect()))
        }
        (System::OdometerTruncation { radixes }, OpenSetSpec::Cylinder { word }) => {
            if word.len() > radixes.len() {
                return Err(incompatible());
            }
            let mut digits = Vec::with_capacity(word.len());
            for (c, &r) in word.chars().zip(radixes) {
                match c.to_digit(10) {
                    Some(d) if d < r => digits.push(d),
                    _ => return Err(incompatible()),
                }
            }
            let place: u64 = radixes[..digits.len()].iter().map(|&r| r as u64).product();
            let low = odometer_value(radixes, &digits);
            let m = sys.residue_modulus().expect("residue system");
            Ok(Region::Residues((0..m).map(|v| v % place == low).collect()))
        }
        (System::CyclicRotation { .. } | System::OdometerTruncation { .. }, OpenSetSpec::MetricBall { center, radius }) => {
            let m = sys.residue_modulus().expect("residue system");
            let c = residue_value(sys, center).expect("checked point");
            let bound = radius * Rational::from_integer(m as i128);
            Ok(Region::Residues(
                (0..m)
                    .map(|v| {
                        let d = v.abs_diff(c);
                        Rational::from_integer(d.min(m - d) as i128) < bound
                    })
                    .collect(),
            ))
        }
        (System::CircleRotation { .. }, OpenSetSpec::Arc { from, to }) => {
            let zero = Rational::zero();
            let one = Rational::one();
            if *from < zero || *from >= one || *to < zero || *to > one || from == to {
                return Err(incompatible());
            }
            Ok(Region::Interval(CircleInterval::Arc { from: *from, to: *to }))
        }
        (System::CircleRotation { .. }, OpenSetSpec::MetricBall { center: PointRef::Circle { position }, radius }) => {
            Ok(Region::Interval(CircleInterval::Ball { center: *position, radius: *radius }))
        }
        (System::Tower { base, height }, OpenSetSpec::LevelSet { level, base: b }) => {
            if !(1..=*height).contains(level) {
                return Err(incompatible());
            }
            Ok(Region::Level { level: *level, base: Box::new(compile(base, b)?) })
        }
        (System::Tower { base, .. }, OpenSetSpec::MetricBall { center: PointRef::Level { base: c, level }, radius }) => {
            if *radius > Rational::one() {
                return Ok(Region::Everything);
            }
            let inner = OpenSetSpec::ball((**c).clone(), *radius);
            Ok(Region::Level { level: *level, base: Box::new(compile(base, &inner)?) })
        }
        (System::Ladder { base, .. }, OpenSetSpec::LevelSet { level, base: b }) if *level >= 1 => {
            Ok(Region::Rung { rung: *level, base: Box::new(compile(base, b)?) })
        }
        (System::Product { factors }, OpenSetSpec::ProductSpec { factors: specs }) => {
            if factors.len() != specs.len() {
                return Err(incompatible());
            }
            factors.iter().zip(specs).map(|(f, s)| compile(f, s)).collect::<Result<_, _>>().map(Region::Product)
        }
        (System::Product { factors }, OpenSetSpec::MetricBall { center: PointRef::Tuple { coords }, radius }) => factors
            .iter()
            .zip(coords)
            .map(|(f, c)| compile(f, &OpenSetSpec::ball(c.clone(), *radius)))
            .collect::<Result<_, _>>()
            .map(Region::Product),
        _ => Err(incompatible()),
    }
}

/// Exact membership of a point in a compiled region.
pub(crate) fn contains(sys: &System, region: &Region, p: &PointRef) -> bool {
    if let System::Power { base, .. } = sys {
        return contains(base, region, p);
    }
    match (region, sys, p) {
        (Region::Everything, ..) => true,
        (Region::Word(w), _, PointRef::Sequence { generator, shift }) => generator.slice(*shift, w.len()) == *w,
        (Region::Residues(members), ..) => {
            residue_value(sys, p).is_some_and(|v| members.get(v as usize).copied().unwrap_or(false))
        }
        (Region::Interval(i), _, PointRef::Circle { position }) => i.contains(position),
        (Region::Level { level, base }, System::Tower { base: b, .. }, PointRef::Level { base: q, level: l }) => {
            l == level && contains(b, base, q)
        }
        (Region::Rung { rung, base }, System::Ladder { base: b, .. }, PointRef::Rung { base: q, rung: r }) => {
            r == rung && contains(b, base, q)
        }
        (Region::Product(rs), System::Product { factors }, PointRef::Tuple { coords }) => rs
            .iter()
            .zip(factors)
            .zip(coords)
            .all(|((r, f), c)| contains(f, r, c)),
        _ => false,
    }
}

/// `Some(true)` when `a ⊆ b` is certain, `Some(false)` when refuted, `None` when undecided.
pub(crate) fn region_subset(a: &Region, b: &Region) -> Option<bool> {
    match (a, b) {
        (_, Region::Everything) => Some(true),
        (Region::Word(a), Region::Word(b)) => a.starts_with(b).then_some(true),
        (Region::Residues(a), Region::Residues(b)) if a.len() == b.len() => {
            Some(a.iter().zip(b).all(|(&x, &y)| !x || y))
        }
        (Region::Interval(a), Region::Interval(b)) => Some(interval_subset(a, b)),
        (Region::Level { level: la, base: a }, Region::Level { level: lb, base: b })
        | (Region::Rung { rung: la, base: a }, Region::Rung { rung: lb, base: b }) => {
            if la != lb {
                Some(false)
            } else {
                region_subset(a, b)
            }
        }
        (Region::Product(a), Region::Product(b)) if a.len() == b.len() => {
            let parts: Vec<Option<bool>> = a.iter().zip(b).map(|(x, y)| region_subset(x, y)).collect();
            if parts.iter().all(|p| *p == Some(true)) {
                Some(true)
            } else if parts.contains(&Some(false)) {
                Some(false)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Decides `a ⊆ b` for two open sets of `sys` when the compiled forms allow it.
pub fn spec_subset(sys: &System, a: &OpenSetSpec, b: &OpenSetSpec) -> Result<Option<bool>, SystemError> {
    Ok(region_subset(&compile(sys, a)?, &compile(sys, b)?))
}

/// `T^k U` as a basic open set, for variants where it is one.
pub fn image(sys: &System, spec: &OpenSetSpec, k: u64) -> Result<OpenSetSpec, SystemError> {
    translate(sys, spec, k as i128)
}

/// `T^{-k} V` as a basic open set, for invertible variants.
pub fn preimage(sys: &System, spec: &OpenSetSpec, k: u64) -> Result<OpenSetSpec, SystemError> {
    translate(sys, spec, -(k as i128))
}

fn translate(sys: &System, spec: &OpenSetSpec, k: i128) -> Result<OpenSetSpec, SystemError> {
    let unsupported = || SystemError::Unsupported(format!("moving {spec} by {k} steps in {sys}"));
    match sys {
        System::Power { base, exponent } => translate(base, spec, k * *exponent as i128),
        System::FullShift { .. } => {
            let Region::Word(w) = compile(sys, spec)? else { unreachable!("shift regions are words") };
            if k < 0 {
                return Err(unsupported());
            }
            let cut = (k as usize).min(w.len());
            Ok(OpenSetSpec::Cylinder { word: String::from_utf8(w[cut..].to_vec()).expect("ascii letters") })
        }
        System::CyclicRotation { .. } | System::OdometerTruncation { .. } => {
            let Region::Residues(members) = compile(sys, spec)? else { unreachable!("residue regions") };
            let m = members.len() as i128;
            Ok(OpenSetSpec::residues(
                members
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(r, _)| (r as i128 + k).rem_euclid(m) as u64),
            ))
        }
        System::CircleRotation { angle, .. } => {
            let Region::Interval(i) = compile(sys, spec)? else { unreachable!("circle regions") };
            Ok(i.rotated(&(angle * Rational::from_integer(k))).to_spec())
        }
        System::Tower { base, height } => match spec {
            OpenSetSpec::LevelSet { level, base: b } => {
                compile(sys, spec)?;
                let h = *height as i128;
                let t = *level as i128 - 1 + k;
                Ok(OpenSetSpec::level(
                    (t.rem_euclid(h) + 1) as u32,
                    translate(base, b, t.div_euclid(h))?,
                ))
            }
            _ => Err(unsupported()),
        },
        System::Product { factors } => match spec {
            OpenSetSpec::ProductSpec { factors: specs } if specs.len() == factors.len() => factors
                .iter()
                .zip(specs)
                .map(|(f, s)| translate(f, s, k))
                .collect::<Result<_, _>>()
                .map(OpenSetSpec::product),
            _ => Err(unsupported()),
        },
        System::SubshiftClosure { .. } | System::Ladder { .. } => Err(unsupported()),
    }
}
