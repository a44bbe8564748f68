use super::scan::grid_cells;
use super::DisjointError;
use crate::rational::{self, Rational};
use crate::symseq::SymbolGenerator;
use crate::systems::{compile, contains, trajectory, OpenSetSpec, PointRef, System, SystemError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// Cells of the product grid visited by a trajectory on `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoiningApprox {
    pub depth: usize,
    pub horizon: usize,
    pub x_cells: usize,
    pub y_cells: usize,
    pub visited: BTreeSet<(usize, usize)>,
    #[serde(with = "rational")]
    pub coverage: Rational,
}

/// The constructed transitive point of the `k`-letter full shift: every word
/// occurs at every residue modulo `modulus`.
pub fn transitive_point(alphabet_size: u8, modulus: u64) -> Result<PointRef, DisjointError> {
    let g = SymbolGenerator::transitive(alphabet_size, modulus).map_err(SystemError::from)?;
    Ok(PointRef::sequence(g))
}

/// Index of the grid cell holding `T^n p` for each `n < horizon`.
fn cell_sequence(sys: &System, p: &PointRef, depth: usize, horizon: usize) -> Result<(usize, Vec<usize>), DisjointError> {
    sys.check_point(p)?;
    let cells = grid_cells(sys, depth)?;
    if sys.is_shift() {
        let index: HashMap<&str, usize> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| match c {
                OpenSetSpec::Cylinder { word } => (word.as_str(), i),
                _ => unreachable!("shift grid of cylinders"),
            })
            .collect();
        let symbols = p.symbols(horizon + depth).expect("sequence point");
        let seq = (0..horizon)
            .map(|n| {
                let w = std::str::from_utf8(&symbols[n..n + depth]).expect("ascii symbols");
                index.get(w).copied().ok_or_else(|| DisjointError::Precondition(format!("word {w} outside the grid")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok((cells.len(), seq));
    }
    let regions = cells.iter().map(|c| compile(sys, c)).collect::<Result<Vec<_>, _>>()?;
    let seq = trajectory(sys, p, horizon)?
        .iter()
        .map(|q| {
            regions
                .iter()
                .position(|r| contains(sys, r, q))
                .ok_or_else(|| DisjointError::Precondition(format!("{q} lies in no grid cell")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((cells.len(), seq))
}

pub fn joining_coverage(
    x_system: &System,
    y_system: &System,
    x0: &PointRef,
    y0: &PointRef,
    depth: usize,
    horizon: usize,
) -> Result<JoiningApprox, DisjointError> {
    let (x_cells, xs) = cell_sequence(x_system, x0, depth, horizon)?;
    let (y_cells, ys) = cell_sequence(y_system, y0, depth, horizon)?;
    let visited: BTreeSet<(usize, usize)> = xs.into_iter().zip(ys).collect();
    let coverage = Rational::new(visited.len() as i128, (x_cells * y_cells) as i128);
    Ok(JoiningApprox { depth, horizon, x_cells, y_cells, visited, coverage })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn transitive_point_fills_the_grid() {
        let x0 = transitive_point(2, 3).unwrap();
        let j = joining_coverage(&System::full_shift(2), &System::cyclic(3), &x0, &PointRef::residue(0), 2, 1000).unwrap();
        assert_eq!((j.x_cells, j.y_cells), (4, 3));
        assert_eq!(j.coverage, Rational::one());
    }

    #[test]
    fn diagonal_stays_a_third() {
        for m in 2..=6u64 {
            for h in [m as usize, 10, 100] {
                let c = System::cyclic(m);
                let j = joining_coverage(&c, &c, &PointRef::residue(0), &PointRef::residue(0), 1, h).unwrap();
                assert_eq!(j.coverage, Rational::new(1, m as i128));
            }
        }
    }

    #[test]
    fn trivial_factor_measures_x_cells() {
        let j = joining_coverage(
            &System::full_shift(2),
            &System::cyclic(1),
            &PointRef::periodic("001"),
            &PointRef::residue(0),
            2,
            50,
        )
        .unwrap();
        // 001001... visits 00, 01, 10
        assert_eq!(j.coverage, Rational::new(3, 4));
    }

    #[test]
    fn coverage_monotone_in_horizon_and_depth() {
        let x0 = transitive_point(2, 4).unwrap();
        let y = System::cyclic(4);
        let mut last = Rational::from_integer(0);
        for h in [10, 50, 200, 1000, 4000] {
            let j = joining_coverage(&System::full_shift(2), &y, &x0, &PointRef::residue(1), 2, h).unwrap();
            assert!(j.coverage >= last);
            last = j.coverage;
        }
        let mut last = Rational::one();
        for depth in 1..=4 {
            let j = joining_coverage(&System::full_shift(2), &y, &x0, &PointRef::residue(1), depth, 500).unwrap();
            assert!(j.coverage <= last);
            last = j.coverage;
        }
    }
}
