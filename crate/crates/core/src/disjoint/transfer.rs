use super::{enumerate_dense, sample_points, witness_search_all, DisjointError, WitnessOutcome, WitnessQuery, WitnessRecord};
use crate::intfam::{check_syndetic, Verdict};
use crate::systems::{advance, image, spec_subset, step, transfer_set, OpenSetSpec, PointRef, System};
use serde::{Deserialize, Serialize};

/// From a verified record for `(X, Y)` builds `x' = (T^{k_1}x, ..., T^{k_n}x)`
/// and `W = W_1 × ... × W_n`, checks `T^{k_i}U ⊆ W_i`, and confirms that the
/// new transfer window contains the old one. With `n = 1` no product is formed.
pub fn product_witness_transfer(
    rec: &WitnessRecord,
    offsets: &[u64],
    targets: &[OpenSetSpec],
) -> Result<WitnessRecord, DisjointError> {
    if !rec.verdict.is_verified() {
        return Err(DisjointError::Precondition("record is not verified".into()));
    }
    if offsets.is_empty() || offsets.len() != targets.len() {
        return Err(DisjointError::Precondition(format!(
            "{} offsets for {} target sets",
            offsets.len(),
            targets.len()
        )));
    }
    let x_sys = &rec.x_system;
    for (&k, w) in offsets.iter().zip(targets) {
        let img = image(x_sys, &rec.u, k)?;
        if spec_subset(x_sys, &img, w)? != Some(true) {
            return Err(DisjointError::Transfer(format!("T^{k} {} = {img} is not inside {w}", rec.u)));
        }
    }
    let coords = offsets.iter().map(|&k| advance(x_sys, &rec.x, k)).collect::<Result<Vec<_>, _>>()?;
    let (system, x, u) = if offsets.len() == 1 {
        (x_sys.clone(), coords[0].clone(), targets[0].clone())
    } else {
        (
            System::product(vec![x_sys.clone(); offsets.len()]),
            PointRef::tuple(coords),
            OpenSetSpec::product(targets.to_vec()),
        )
    };
    let q = WitnessQuery {
        x_system: system,
        y_system: rec.y_system.clone(),
        u,
        v: rec.v.clone(),
        horizon: rec.horizon,
        gap: rec.gap,
    };
    let out = WitnessRecord::new(&q, x, rec.y.clone())?;
    let old = rec.transfer_window()?;
    let new = out.window.as_ref().expect("fresh record");
    if let Some(n) = old.difference(new).next_member(0) {
        return Err(DisjointError::Transfer(format!("transfer time {n} lost")));
    }
    Ok(out)
}

/// Checks `S̃^{nk}(y,1) = (S^k y, 1)` on `Tower(Y, n)` for every `k < horizon`.
pub fn tower_identity(base: &System, n: u32, y: &PointRef, horizon: usize) -> Result<Verdict, DisjointError> {
    let tower = System::tower(base.clone(), n);
    let mut lifted = PointRef::level(y.clone(), 1);
    let mut below = y.clone();
    let mut mismatch = None;
    for k in 0..horizon {
        if lifted != PointRef::level(below.clone(), 1) {
            mismatch = Some(k);
            break;
        }
        lifted = advance(&tower, &lifted, n as u64)?;
        below = step(base, &below)?;
    }
    Ok(Verdict::relation("S~^{nk}(y,1) = (S^k y,1)", horizon, mismatch))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerTransfer {
    pub exponent: u32,
    /// Search of `X` against `Tower(Y, n)` at the cell `V × {1}`.
    pub tower_search: WitnessOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<PointRef>,
    pub mapped_gap: usize,
    /// Per sampled `y`: syndetic check of `{k/n : k in the tower window}`.
    pub mapped: Vec<Verdict>,
    /// The mapped windows equal the directly computed `(X, T^n)` windows.
    pub direct_agrees: bool,
    pub verdict: Verdict,
}

/// Certifies the criterion for `(X, T^n)` against `(Y, S)` through the tower
/// `Tower(Y, n)`: tower transfer times `k = n k_1` map to base times `k_1`.
#[allow(clippy::too_many_arguments)]
pub fn power_witness_transfer(
    x_system: &System,
    y_system: &System,
    n: u32,
    u: &OpenSetSpec,
    v: &OpenSetSpec,
    horizon: usize,
    gap: usize,
    budget: usize,
) -> Result<PowerTransfer, DisjointError> {
    if n == 0 {
        return Err(DisjointError::Precondition("power must be positive".into()));
    }
    if !y_system.is_minimal_by_construction() {
        return Err(DisjointError::Precondition(format!("{y_system} is not minimal by construction")));
    }
    let tower = System::tower(y_system.clone(), n);
    let ys = sample_points(y_system, v, 2)?;
    if ys.is_empty() {
        return Err(DisjointError::Precondition(format!("no sampled point in {v}")));
    }
    let lifted: Vec<PointRef> = ys.iter().map(|y| PointRef::level(y.clone(), 1)).collect();
    let q = WitnessQuery {
        x_system: x_system.clone(),
        y_system: tower,
        u: u.clone(),
        v: OpenSetSpec::level(1, v.clone()),
        horizon: n as usize * horizon,
        gap,
    };
    let dense = enumerate_dense(x_system, budget)?;
    let search = witness_search_all(&q, &dense, &lifted)?;
    let mapped_gap = gap.div_ceil(n as usize) + 1;
    let Some(x) = search.witness().cloned() else {
        let verdict = search.verdict.clone();
        return Ok(PowerTransfer {
            exponent: n,
            tower_search: search,
            witness: None,
            mapped_gap,
            mapped: Vec::new(),
            direct_agrees: true,
            verdict,
        });
    };
    let power = System::power(x_system.clone(), n);
    let mut mapped = Vec::new();
    let mut direct_agrees = true;
    for (rec, y) in search.records.iter().zip(&ys) {
        let window = rec.transfer_window()?.subsample(n as usize, 0, horizon);
        let direct = transfer_set(&power, y_system, &x, y, u, v, horizon)?;
        direct_agrees &= window == direct;
        mapped.push(check_syndetic(&window, mapped_gap)?);
    }
    if !direct_agrees {
        return Err(DisjointError::Transfer("tower time mapping disagrees with the power system".into()));
    }
    let verdict = mapped.iter().find(|v| !v.is_verified()).unwrap_or(&mapped[0]).clone();
    Ok(PowerTransfer { exponent: n, tower_search: search, witness: Some(x), mapped_gap, mapped, direct_agrees, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disjoint::witness_search;
    use crate::intfam::IntWindowSet;
    use crate::systems::states;

    fn verified_record(h: usize) -> WitnessRecord {
        let q = WitnessQuery {
            x_system: System::full_shift(2),
            y_system: System::cyclic(3),
            u: OpenSetSpec::cylinder("01"),
            v: OpenSetSpec::residues([0]),
            horizon: h,
            gap: 12,
        };
        let d = enumerate_dense(&q.x_system, 10).unwrap();
        witness_search(&q, &d, &PointRef::residue(0)).unwrap().records.remove(0)
    }

    #[test]
    fn identity_transfer() {
        let rec = verified_record(1000);
        let out = product_witness_transfer(&rec, &[0], std::slice::from_ref(&rec.u)).unwrap();
        assert_eq!(out, rec);
    }

    #[test]
    fn two_offsets_keep_every_time() {
        let rec = verified_record(10_000);
        let out =
            product_witness_transfer(&rec, &[0, 1], &[OpenSetSpec::cylinder("01"), OpenSetSpec::cylinder("1")]).unwrap();
        assert_eq!(out.x, PointRef::tuple(vec![PointRef::periodic("01"), PointRef::periodic("10")]));
        let old = rec.window.unwrap();
        let new = out.window.unwrap();
        assert!(old.is_subset(&new));
        assert!(out.verdict.is_verified());
    }

    #[test]
    fn misplaced_target_rejected() {
        let rec = verified_record(100);
        let r = product_witness_transfer(&rec, &[0, 1], &[OpenSetSpec::cylinder("01"), OpenSetSpec::cylinder("0")]);
        assert!(matches!(r, Err(DisjointError::Transfer(_))));
    }

    #[test]
    fn tower_map_returns_after_six_steps() {
        let tower = System::tower(System::cyclic(3), 2);
        let start = PointRef::level(PointRef::residue(0), 1);
        // oracle: iterate the six-state map by hand
        let all = states(&tower).unwrap();
        assert_eq!(all.len(), 6);
        let mut p = start.clone();
        let mut orbit = vec![p.clone()];
        for _ in 0..6 {
            p = step(&tower, &p).unwrap();
            orbit.push(p.clone());
        }
        assert_eq!(orbit[6], start);
        assert!(orbit[1..6].iter().all(|q| *q != start));
        assert!(tower_identity(&System::cyclic(3), 2, &PointRef::residue(0), 1000).unwrap().is_verified());
    }

    #[test]
    fn tower_times_are_multiples_of_the_height() {
        let tower = System::tower(System::cyclic(5), 3);
        let y = PointRef::level(PointRef::residue(2), 1);
        let w = crate::systems::return_set(&tower, &y, &OpenSetSpec::level(1, OpenSetSpec::residues([4])), 300).unwrap();
        let base = crate::systems::return_set(&System::cyclic(5), &PointRef::residue(2), &OpenSetSpec::residues([4]), 100).unwrap();
        assert_eq!(w, IntWindowSet::from_fn(300, |k| k % 3 == 0 && base.contains(k / 3)));
    }

    #[test]
    fn square_of_the_shift_against_three_cycle() {
        let t = power_witness_transfer(
            &System::full_shift(2),
            &System::cyclic(3),
            2,
            &OpenSetSpec::cylinder("01"),
            &OpenSetSpec::residues([0]),
            10_000,
            12,
            20,
        )
        .unwrap();
        assert!(t.verdict.is_verified(), "{}", t.verdict);
        assert!(t.direct_agrees);
    }
}
