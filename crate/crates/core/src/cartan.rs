//! Points of the Cartan subalgebra of type A_{n-1} and the convex geometry
//! attached to them.
//!
//! The Weyl group is the symmetric group acting by coordinate permutation.
//! A point X is reduced to its chamber representative pi(X) (entries sorted
//! decreasing), whose repeated entries form the block structure a_1 > ... >
//! a_r with multiplicities n_i. The interlacing box E(X) is the domain of
//! the rank-reduction recursions; C(X), the convex hull of the Weyl orbit,
//! is characterized by trace equality plus majorization inequalities and
//! carries the inductive decomposition C_n(X) = union over xi in E(X) of
//! the lifted hulls C_{n-1}(xi).

use thiserror::Error;

/// Relative tolerance used to merge near-equal entries into one block.
/// Scaled by max(1, spread of X).
pub const DEFAULT_BLOCK_TOL: f64 = 1e-9;

/// Relative tolerance for hull membership tightness. Scaled by 1 + |tr X|.
pub const DEFAULT_HULL_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum CartanError {
    #[error("a Cartan point needs at least one entry")]
    Empty,
    #[error("entries must be finite")]
    NonFinite,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("not in hull")]
    NotInHull,
    #[error("witness search failed: {0}")]
    WitnessSearch(&'static str),
}

/// A point of the Cartan subalgebra: the diagonal of a real n x n diagonal
/// matrix, in any coordinate order.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanPoint {
    entries: Vec<f64>,
}

impl CartanPoint {
    pub fn new(entries: Vec<f64>) -> Result<Self, CartanError> {
        if entries.is_empty() {
            return Err(CartanError::Empty);
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(CartanError::NonFinite);
        }
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// Weyl action by gathering: result[i] = self[perm[i]].
    pub fn permuted(&self, perm: &[usize]) -> CartanPoint {
        assert_eq!(perm.len(), self.n());
        CartanPoint {
            entries: perm.iter().map(|&j| self.entries[j]).collect(),
        }
    }

    /// max entry - min entry.
    pub fn spread(&self) -> f64 {
        let max = self.entries.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.entries.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }
}

impl std::ops::Index<usize> for CartanPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

/// Projects X onto the closed positive chamber.
///
/// Returns pi(X) (entries sorted non-increasing) together with the
/// witnessing gather permutation: pi(X)[i] = X[perm[i]]. The sort is
/// stable, so equal entries keep their original relative order and the
/// permutation of an already-sorted point is the identity.
pub fn project_to_chamber(x: &CartanPoint) -> (CartanPoint, Vec<usize>) {
    let mut idx: Vec<usize> = (0..x.n()).collect();
    idx.sort_by(|&a, &b| x.entries[b].partial_cmp(&x.entries[a]).unwrap());
    let sorted = x.permuted(&idx);
    (sorted, idx)
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Distinct decreasing levels of a chamber-ordered point with their
/// multiplicities and prefix sums N_0 = 0, N_k = n_1 + ... + n_k.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockStructure {
    levels: Vec<f64>,
    mults: Vec<usize>,
    prefixes: Vec<usize>,
    tol_used: f64,
}

impl BlockStructure {
    /// Build from explicit levels and multiplicities (levels strictly
    /// decreasing, multiplicities positive).
    pub fn from_parts(levels: Vec<f64>, mults: Vec<usize>) -> Self {
        assert_eq!(levels.len(), mults.len());
        assert!(!levels.is_empty());
        assert!(levels.windows(2).all(|w| w[0] > w[1]), "levels must decrease");
        assert!(mults.iter().all(|&m| m > 0));
        let mut prefixes = Vec::with_capacity(mults.len() + 1);
        prefixes.push(0);
        for &m in &mults {
            prefixes.push(prefixes.last().unwrap() + m);
        }
        Self {
            levels,
            mults,
            prefixes,
            tol_used: 0.0,
        }
    }

    /// Number of distinct levels r.
    pub fn rank(&self) -> usize {
        self.levels.len()
    }

    pub fn n(&self) -> usize {
        *self.prefixes.last().unwrap()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    /// N_0 = 0, ..., N_r = n.
    pub fn prefixes(&self) -> &[usize] {
        &self.prefixes
    }

    pub fn tol_used(&self) -> f64 {
        self.tol_used
    }

    pub fn trace(&self) -> f64 {
        self.levels
            .iter()
            .zip(&self.mults)
            .map(|(a, &m)| a * m as f64)
            .sum()
    }

    /// The snapped chamber representative: each level repeated by its
    /// multiplicity.
    pub fn pi(&self) -> CartanPoint {
        let mut entries = Vec::with_capacity(self.n());
        for (a, &m) in self.levels.iter().zip(&self.mults) {
            entries.extend(std::iter::repeat(*a).take(m));
        }
        CartanPoint { entries }
    }

    /// Whether X is a multiple of the identity (single block).
    pub fn is_scalar(&self) -> bool {
        self.rank() == 1
    }
}

/// Groups the entries of a chamber-ordered X into blocks. Entries whose
/// consecutive gap is at most tol * max(1, spread) share a level; the level
/// value is the group mean. r = 1 exactly when X = cI within tolerance.
pub fn block_structure(x: &CartanPoint, tol: f64) -> BlockStructure {
    let e = x.entries();
    assert!(
        e.windows(2).all(|w| w[0] >= w[1]),
        "block_structure expects a chamber-ordered point"
    );
    let scale = x.spread().max(1.0);
    let merge = tol * scale;

    let mut levels = Vec::new();
    let mut mults = Vec::new();
    let mut start = 0usize;
    for i in 1..=e.len() {
        if i == e.len() || e[i - 1] - e[i] > merge {
            let group = &e[start..i];
            levels.push(group.iter().sum::<f64>() / group.len() as f64);
            mults.push(group.len());
            start = i;
        }
    }
    let mut b = BlockStructure::from_parts(levels, mults);
    b.tol_used = merge;
    b
}

/// Block detection with the default tolerance.
pub fn blocks_of(x: &CartanPoint) -> BlockStructure {
    block_structure(x, DEFAULT_BLOCK_TOL)
}

/// Where a point sits relative to the orbit hull C(X).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
    Outside,
}

/// Majorization (Rado) membership test: H lies in C(X) iff tr H = tr X and
/// every partial sum of entries of H is dominated by the corresponding
/// sorted partial sum of X. Both inputs are sorted internally; tightness is
/// judged within 1e-12 * (1 + |tr X|).
pub fn rado_membership(h: &CartanPoint, x: &CartanPoint) -> Region {
    rado_membership_tol(h, x, DEFAULT_HULL_TOL)
}

pub fn rado_membership_tol(h: &CartanPoint, x: &CartanPoint, tol: f64) -> Region {
    assert_eq!(h.n(), x.n(), "rado_membership needs equal ranks");
    let band = tol * (1.0 + x.trace().abs());
    let hs = sorted_desc(h.entries());
    let xs = sorted_desc(x.entries());
    if (h.trace() - x.trace()).abs() > band {
        return Region::Outside;
    }
    let mut tight = false;
    let mut sh = 0.0;
    let mut sx = 0.0;
    for k in 0..hs.len() - 1 {
        sh += hs[k];
        sx += xs[k];
        if sh - sx > band {
            return Region::Outside;
        }
        if (sh - sx).abs() <= band {
            tight = true;
        }
    }
    if tight {
        Region::Boundary
    } else {
        Region::Interior
    }
}

/// The interlacing box E(X): coordinate-wise bounds x_{k+1} <= xi_k <= x_k
/// for chamber-ordered X. When X is degenerate only the coordinates at the
/// block prefix positions N_1, ..., N_{r-1} are free (the eta coordinates);
/// the rest are pinned to their level value.
#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
    free: Vec<usize>,
}

impl InterlacingBox {
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Number of free coordinates, r - 1.
    pub fn effective_dim(&self) -> usize {
        self.free.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// 0-based positions of the free coordinates eta_1, ..., eta_{r-1}
    /// inside xi.
    pub fn free_positions(&self) -> &[usize] {
        &self.free
    }

    pub fn contains(&self, xi: &[f64], tol: f64) -> bool {
        xi.len() == self.dim()
            && xi
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol)
    }
}

/// Builds E(X) from the block structure of a chamber-ordered X. Rank 1
/// yields the empty (0-dimensional) box.
pub fn interlacing_box(blocks: &BlockStructure) -> InterlacingBox {
    let n = blocks.n();
    let r = blocks.rank();
    let a = blocks.levels();
    let prefixes = blocks.prefixes();
    let mut lower = Vec::with_capacity(n.saturating_sub(1));
    let mut upper = Vec::with_capacity(n.saturating_sub(1));
    let mut free = Vec::new();
    // coordinate k (1-based) is free iff k = N_i for some 1 <= i <= r-1
    let mut block = 0usize;
    for k in 1..n {
        // block index i with N_{i-1} < k <= N_i
        while k > prefixes[block + 1] {
            block += 1;
        }
        if k == prefixes[block + 1] && block + 1 < r {
            // free coordinate eta_{block+1} in [a_{i+1}, a_i]
            lower.push(a[block + 1]);
            upper.push(a[block]);
            free.push(k - 1);
        } else {
            lower.push(a[block]);
            upper.push(a[block]);
        }
    }
    InterlacingBox { lower, upper, free }
}

/// A decomposition witness: some xi in E(X) with H' in C(xi), where H' is
/// the point formed by the first n-1 coordinates of H (the last coordinate
/// is recovered as tr X - tr xi).
///
/// The initial witness maximizes every prefix sum of xi subject to the box
/// and trace constraints. When H lies in the interior of C(X) the witness
/// is then pushed strictly inside (xi in E(X) interior, H' in C(xi)
/// interior) by repeatedly shifting mass delta = half the minimal relevant
/// slack between coordinates, following the constructive interior argument.
///
/// For X = cI the hull degenerates to the single point and the witness is
/// the fully pinned xi = (c, ..., c).
pub fn decompose_check(h: &CartanPoint, x: &CartanPoint) -> Result<Vec<f64>, CartanError> {
    if h.n() != x.n() {
        return Err(CartanError::DimensionMismatch(h.n(), x.n()));
    }
    let region = rado_membership(h, x);
    if region == Region::Outside {
        return Err(CartanError::NotInHull);
    }
    let n = x.n();
    if n == 1 {
        return Ok(Vec::new());
    }
    let xs = sorted_desc(x.entries());
    let hp = &h.entries()[..n - 1];
    let t: f64 = hp.iter().sum();
    let band = DEFAULT_HULL_TOL * (1.0 + x.trace().abs());

    // per-coordinate bounds of E(X)
    let up: Vec<f64> = xs[..n - 1].to_vec();
    let lo: Vec<f64> = xs[1..].to_vec();

    // greedy: xi_k as large as the box and the remaining lower bounds allow
    let mut xi = vec![0.0; n - 1];
    let mut tail_lo: f64 = lo.iter().sum();
    let mut consumed = 0.0;
    for k in 0..n - 1 {
        tail_lo -= lo[k];
        let v = (t - consumed - tail_lo).min(up[k]).max(lo[k]);
        xi[k] = v;
        consumed += v;
    }

    // sorted prefix sums of H'
    let hs = sorted_desc(hp);
    let s: Vec<f64> = hs
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();

    if region == Region::Interior {
        refine_interior(&mut xi, &up, &lo, &s, band)?;
    }

    // verify the contract before handing the witness out
    let xi_pt = CartanPoint::new(xi.clone()).expect("witness entries are finite");
    let hp_pt = CartanPoint::new(hp.to_vec()).expect("H' entries are finite");
    let inner = rado_membership(&hp_pt, &xi_pt);
    if inner == Region::Outside {
        return Err(CartanError::WitnessSearch("H' escaped C(xi)"));
    }
    if region == Region::Interior && inner != Region::Interior {
        return Err(CartanError::WitnessSearch("interior witness not strict"));
    }
    Ok(xi)
}

/// Shift mass between coordinates of xi until all prefix-dominance
/// constraints are strict and every non-pinned coordinate sits strictly
/// inside its interval. Slacks only ever grow on the constraints already
/// fixed, so each pass advances a monotone index and the loop terminates.
fn refine_interior(
    xi: &mut [f64],
    up: &[f64],
    lo: &[f64],
    s: &[f64],
    band: f64,
) -> Result<(), CartanError> {
    let d = xi.len();
    let eps = 4.0 * band;
    let prefix_slack = |xi: &[f64], k: usize| -> f64 {
        let p: f64 = xi[..=k].iter().sum();
        p - s[k]
    };

    // phase A: make every prefix inequality strict (k = 0 .. d-2; the last
    // prefix is the trace and stays an equality)
    for _ in 0..2 * d + 2 {
        let tight = (0..d.saturating_sub(1)).find(|&k| prefix_slack(xi, k) <= eps);
        let Some(k) = tight else { break };
        let i = (0..=k).find(|&i| up[i] - xi[i] > eps);
        let j = (k + 1..d).find(|&j| xi[j] - lo[j] > eps);
        let (Some(i), Some(j)) = (i, j) else {
            return Err(CartanError::WitnessSearch("no slack to fix a tight prefix"));
        };
        let delta = 0.5 * (up[i] - xi[i]).min(xi[j] - lo[j]);
        xi[i] += delta;
        xi[j] -= delta;
    }

    let free: Vec<usize> = (0..d).filter(|&k| up[k] - lo[k] > eps).collect();

    // phase B1: free coordinates off their upper walls
    for _ in 0..free.len() + 1 {
        let Some(&k) = free.iter().find(|&&k| up[k] - xi[k] <= eps) else {
            break;
        };
        if let Some(&i) = free.iter().find(|&&i| i < k && up[i] - xi[i] > eps) {
            let delta = 0.5 * (up[i] - xi[i]).min(xi[k] - lo[k]);
            xi[i] += delta;
            xi[k] -= delta;
        } else if let Some(&j) = free.iter().find(|&&j| j > k && up[j] - xi[j] > eps) {
            // lowering xi_k lowers the prefixes in [k, j); cap delta by them
            let mut delta = (xi[k] - lo[k]).min(up[j] - xi[j]);
            for l in k..j {
                if l < d - 1 {
                    delta = delta.min(prefix_slack(xi, l));
                }
            }
            if delta <= 0.0 {
                return Err(CartanError::WitnessSearch("stuck on an upper wall"));
            }
            xi[k] -= 0.5 * delta;
            xi[j] += 0.5 * delta;
        } else {
            return Err(CartanError::WitnessSearch("every free coordinate pinned high"));
        }
    }

    // phase B2: free coordinates off their lower walls
    for _ in 0..free.len() + 1 {
        let Some(&k) = free.iter().rev().find(|&&k| xi[k] - lo[k] <= eps) else {
            break;
        };
        if let Some(&j) = free.iter().find(|&&j| j > k && xi[j] - lo[j] > eps) {
            let delta = 0.5 * (up[k] - xi[k]).min(xi[j] - lo[j]);
            xi[k] += delta;
            xi[j] -= delta;
        } else if let Some(&i) = free.iter().rev().find(|&&i| i < k && xi[i] - lo[i] > eps) {
            let mut delta = (xi[i] - lo[i]).min(up[k] - xi[k]);
            for l in i..k {
                if l < d - 1 {
                    delta = delta.min(prefix_slack(xi, l));
                }
            }
            if delta <= 0.0 {
                return Err(CartanError::WitnessSearch("stuck on a lower wall"));
            }
            xi[i] -= 0.5 * delta;
            xi[k] += 0.5 * delta;
        } else {
            return Err(CartanError::WitnessSearch("every free coordinate pinned low"));
        }
    }

    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(v: &[f64]) -> CartanPoint {
        CartanPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn projection_examples() {
        let (p, perm) = project_to_chamber(&pt(&[0.0, 2.0, 1.0]));
        assert_eq!(p.entries(), &[2.0, 1.0, 0.0]);
        assert_eq!(perm, vec![1, 2, 0]);

        let (p, perm) = project_to_chamber(&pt(&[1.0, 1.0, 1.0]));
        assert_eq!(p.entries(), &[1.0, 1.0, 1.0]);
        assert_eq!(perm, vec![0, 1, 2]);

        let (p, _) = project_to_chamber(&pt(&[-1.0, 3.0, 3.0]));
        assert_eq!(p.entries(), &[3.0, 3.0, -1.0]);
    }

    #[test]
    fn block_examples() {
        let b = block_structure(&pt(&[2.0, 1.0, 0.0]), 1e-9);
        assert_eq!(b.rank(), 3);
        assert_eq!(b.levels(), &[2.0, 1.0, 0.0]);
        assert_eq!(b.mults(), &[1, 1, 1]);

        let b = block_structure(&pt(&[2.0, 2.0, 0.0]), 1e-9);
        assert_eq!(b.rank(), 2);
        assert_eq!(b.levels(), &[2.0, 0.0]);
        assert_eq!(b.mults(), &[2, 1]);
        assert_eq!(b.prefixes(), &[0, 2, 3]);

        let b = block_structure(&pt(&[1.0 + 5e-10, 1.0, 0.0]), 1e-9);
        assert_eq!(b.rank(), 2);
        assert_eq!(b.mults(), &[2, 1]);

        let b = block_structure(&pt(&[3.0, 3.0, 3.0]), 1e-9);
        assert!(b.is_scalar());
    }

    #[test]
    fn rado_examples() {
        let x = pt(&[2.0, 1.0, 0.0]);
        assert_eq!(rado_membership(&pt(&[1.0, 1.0, 1.0]), &x), Region::Interior);
        assert_eq!(rado_membership(&pt(&[2.0, 1.0, 0.0]), &x), Region::Boundary);
        assert_eq!(rado_membership(&pt(&[2.5, 0.5, 0.0]), &x), Region::Outside);
        // trace mismatch
        assert_eq!(rado_membership(&pt(&[1.0, 1.0, 0.9]), &x), Region::Outside);
    }

    #[test]
    fn interlacing_box_examples() {
        let b = blocks_of(&pt(&[2.0, 1.0, 0.0]));
        let e = interlacing_box(&b);
        assert_eq!(e.lower(), &[1.0, 0.0]);
        assert_eq!(e.upper(), &[2.0, 1.0]);
        assert_eq!(e.free_positions(), &[0, 1]);

        let b = blocks_of(&pt(&[2.0, 2.0, 0.0]));
        let e = interlacing_box(&b);
        // xi_1 pinned at 2, eta_1 = xi_2 in [0, 2]
        assert_eq!(e.lower(), &[2.0, 0.0]);
        assert_eq!(e.upper(), &[2.0, 2.0]);
        assert_eq!(e.free_positions(), &[1]);

        let b = blocks_of(&pt(&[0.5, 0.5, 0.5]));
        let e = interlacing_box(&b);
        assert_eq!(e.effective_dim(), 0);
        assert_eq!(e.lower(), &[0.5, 0.5]);

        let b = blocks_of(&pt(&[1.0]));
        assert_eq!(interlacing_box(&b).dim(), 0);
    }

    #[test]
    fn decompose_vertex_witness() {
        // H = X: the prefix constraints pin the witness to (x_1, x_2)
        let x = pt(&[2.0, 1.0, 0.0]);
        let xi = decompose_check(&x, &x).unwrap();
        assert!((xi[0] - 2.0).abs() < 1e-12);
        assert!((xi[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decompose_interior_witness_is_strict() {
        let x = pt(&[2.0, 1.0, 0.0]);
        let h = pt(&[1.0, 1.0, 1.0]);
        let xi = decompose_check(&h, &x).unwrap();
        // xi in E(X) interior with trace 2
        assert!((xi[0] + xi[1] - 2.0).abs() < 1e-12);
        assert!(xi[0] > 1.0 && xi[0] < 2.0);
        assert!(xi[1] > 0.0 && xi[1] < 1.0);
        // H' = (1,1) strictly inside C(xi)
        assert_eq!(
            rado_membership(&pt(&[1.0, 1.0]), &pt(&xi)),
            Region::Interior
        );
    }

    #[test]
    fn decompose_outside_errors() {
        let x = pt(&[2.0, 1.0, 0.0]);
        let h = pt(&[2.5, 0.5, 0.0]);
        assert_eq!(decompose_check(&h, &x), Err(CartanError::NotInHull));
    }

    #[test]
    fn decompose_scalar_point() {
        let x = pt(&[0.5, 0.5, 0.5]);
        let xi = decompose_check(&x, &x).unwrap();
        assert_eq!(xi, vec![0.5, 0.5]);
    }

    /// Random point of C(X) as a convex combination of a few orbit vertices.
    fn random_hull_point(xs: &[f64], rng: &mut impl rand::Rng) -> Vec<f64> {
        use rand::seq::SliceRandom;
        let n = xs.len();
        let k = 3;
        let mut h = vec![0.0; n];
        let mut ws: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = ws.iter().sum();
        ws.iter_mut().for_each(|w| *w /= total);
        for w in ws {
            let mut perm = xs.to_vec();
            perm.shuffle(rng);
            for (hi, v) in h.iter_mut().zip(perm) {
                *hi += w * v;
            }
        }
        h
    }

    #[test]
    fn decompose_random_round_trip() {
        use rand::{Rng as _, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 2..=5usize {
            for case in 0..200 {
                let xs: Vec<f64> = {
                    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    v
                };
                let x = pt(&xs);
                let h = pt(&random_hull_point(&xs, &mut rng));
                let region = rado_membership(&h, &x);
                assert_ne!(region, Region::Outside, "hull point classified outside");
                let xi = decompose_check(&h, &x)
                    .unwrap_or_else(|e| panic!("n={n} case={case}: {e}"));
                let e = interlacing_box(&blocks_of(&x));
                assert!(e.contains(&xi, 1e-9), "witness escaped E(X)");
                let hp = pt(&h.entries()[..n - 1]);
                let inner = rado_membership(&hp, &pt(&xi));
                assert_ne!(inner, Region::Outside);
                if region == Region::Interior {
                    assert_eq!(inner, Region::Interior, "n={n} case={case}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn projection_idempotent(v in proptest::collection::vec(-10.0f64..10.0, 1..7)) {
            let x = pt(&v);
            let (p, _) = project_to_chamber(&x);
            let (q, perm) = project_to_chamber(&p);
            prop_assert_eq!(p.entries(), q.entries());
            prop_assert_eq!(perm, (0..v.len()).collect::<Vec<_>>());
        }

        #[test]
        fn block_mults_partition(v in proptest::collection::vec(-5.0f64..5.0, 1..8)) {
            let (p, _) = project_to_chamber(&pt(&v));
            let b = blocks_of(&p);
            prop_assert_eq!(b.mults().iter().sum::<usize>(), v.len());
            prop_assert_eq!(b.n(), v.len());
        }

        #[test]
        fn rado_permutation_invariant(
            v in proptest::collection::vec(-3.0f64..3.0, 2..6),
            seed in 0u64..1000,
        ) {
            use rand::SeedableRng;
            use rand::seq::SliceRandom;
            let x = pt(&v);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let h = random_hull_point(&v, &mut rng);
            let mut hp = h.clone();
            hp.shuffle(&mut rng);
            prop_assert_eq!(
                rado_membership(&pt(&h), &x),
                rado_membership(&pt(&hp), &x)
            );
        }
    }
}
