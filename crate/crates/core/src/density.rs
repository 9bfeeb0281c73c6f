//! The Laplace-representation kernels K_n(H, X) and their sampler.
//!
//! The kernel recursion integrates K_{n-1}(H', xi) against the recursion
//! weight over the fiber D_H(X) = { xi in E(X) : H' in C(xi) }, a convex
//! set of dimension r - 2 cut out by the box bounds and the majorization
//! constraints, all linear in the free eta coordinates once the trace
//! pins the last one. Pointwise evaluation is supported for n <= 4 (a
//! point, an interval, or a polygon fiber); larger ranks are served by
//! sampling only.
//!
//! The sampler draws H with characteristic function chi_lambda (trig) or
//! psi_lambda (rational) by running the recursion forward: Dirichlet
//! weights, weight-to-node map, recurse, append the trace remainder.
//! Every draw lands in C(X); expectations against the phi-normalization
//! carry the weight e^{-rho(H)}.

use crate::cartan::{
    blocks_of, project_to_chamber, rado_membership, BlockStructure, CartanPoint, Region,
};
use crate::eval::{rho_vector, EvalResult, Method};
use crate::kernels::{self, KernelValue};
use crate::quadrature::{self, cached_jacobi};
use crate::simplex::{self, NodeTransform};
use crate::special::ln_gamma;
use crate::Setting;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DensityError {
    #[error("multiplicity must be positive")]
    BadMultiplicity,
    #[error("H and X must have the same length")]
    DimensionMismatch,
    #[error("not in hull")]
    NotInHull,
    #[error("X = cI carries the Dirac measure at X; the kernel is not a function")]
    ScalarPoint,
    #[error("unsupported rank {0} for pointwise kernel evaluation")]
    RankUnsupported(usize),
    #[error("fiber domain is empty")]
    EmptyFiber,
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// The fiber D_H(X) parametrized by the first r - 2 free eta coordinates
/// (the trace pins the last).
#[derive(Debug, Clone, PartialEq)]
pub struct FiberDomain {
    /// sum of all eta coordinates, tr H' minus the pinned levels
    t_eta: f64,
    r: usize,
    kind: FiberKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FiberKind {
    /// r = 2: the single eta value.
    Point(Vec<f64>),
    /// r = 3: an interval in eta_1.
    Interval { lo: f64, hi: f64 },
    /// r = 4: a convex polygon in (eta_1, eta_2), counterclockwise.
    Polygon(Vec<[f64; 2]>),
}

impl FiberDomain {
    pub fn kind(&self) -> &FiberKind {
        &self.kind
    }

    pub fn free_dim(&self) -> usize {
        self.r - 2
    }

    /// Full eta vector (length r - 1) from the free coordinates.
    pub fn eta_full(&self, free: &[f64]) -> Vec<f64> {
        debug_assert_eq!(free.len(), self.r - 2);
        let mut eta = free.to_vec();
        eta.push(self.t_eta - free.iter().sum::<f64>());
        eta
    }
}

/// Linear constraint sum_k c_k eta_k >= rhs over the full eta vector.
struct EtaConstraint {
    coeffs: Vec<f64>,
    rhs: f64,
}

/// All constraints carving D_H(X) out of the eta hyperplane: box bounds
/// plus majorization of the sorted H' prefixes by the layout prefixes.
fn eta_constraints(blocks: &BlockStructure, hp_sorted: &[f64]) -> Vec<EtaConstraint> {
    let r = blocks.rank();
    let a = blocks.levels();
    let mults = blocks.mults();
    let n = blocks.n();
    let d = r - 1;
    let mut cons = Vec::new();
    // box: a_{k+1} <= eta_k <= a_k
    for k in 0..d {
        let mut up = vec![0.0; d];
        up[k] = -1.0;
        cons.push(EtaConstraint {
            coeffs: up,
            rhs: -a[k],
        });
        let mut lo = vec![0.0; d];
        lo[k] = 1.0;
        cons.push(EtaConstraint {
            coeffs: lo,
            rhs: a[k + 1],
        });
    }
    // layout of xi: pins and free coordinates in decreasing order
    enum Slot {
        Pin(f64),
        Eta(usize),
    }
    let mut layout = Vec::with_capacity(n - 1);
    for i in 0..r {
        for _ in 0..mults[i] - 1 {
            layout.push(Slot::Pin(a[i]));
        }
        if i < r - 1 {
            layout.push(Slot::Eta(i));
        }
    }
    // prefix-dominance: S_j <= P_j(xi) for j = 1..n-2 (j = n-1 is the trace)
    let mut s = 0.0;
    let mut pin_part = 0.0;
    let mut coeffs = vec![0.0; d];
    for j in 0..n.saturating_sub(2) {
        s += hp_sorted[j];
        match layout[j] {
            Slot::Pin(v) => pin_part += v,
            Slot::Eta(k) => coeffs[k] = 1.0,
        }
        cons.push(EtaConstraint {
            coeffs: coeffs.clone(),
            rhs: s - pin_part,
        });
    }
    cons
}

/// D_H(X) for H in C(X), X != cI. H is sorted internally; H' is its first
/// n - 1 coordinates. Supports r <= 4 (fiber dimension up to 2).
pub fn fiber_domain(h: &CartanPoint, x: &CartanPoint) -> Result<FiberDomain, DensityError> {
    if h.n() != x.n() {
        return Err(DensityError::DimensionMismatch);
    }
    let xs = project_to_chamber(x).0;
    let blocks = blocks_of(&xs);
    if blocks.is_scalar() {
        return Err(DensityError::ScalarPoint);
    }
    if rado_membership(h, &xs) == Region::Outside {
        return Err(DensityError::NotInHull);
    }
    let hs = sorted_desc(h.entries());
    fiber_domain_sorted(&blocks, &hs[..h.n() - 1])
}

fn fiber_domain_sorted(
    blocks: &BlockStructure,
    hp_sorted: &[f64],
) -> Result<FiberDomain, DensityError> {
    let r = blocks.rank();
    if r > 4 {
        return Err(DensityError::RankUnsupported(r));
    }
    let a = blocks.levels();
    let t_prime: f64 = hp_sorted.iter().sum();
    let pinned: f64 = a
        .iter()
        .zip(blocks.mults())
        .map(|(v, &k)| v * (k as f64 - 1.0))
        .sum();
    let t_eta = t_prime - pinned;
    let scale = 1.0 + a[0].abs().max(a[r - 1].abs());
    let tol = 1e-11 * scale;
    let cons = eta_constraints(blocks, hp_sorted);

    if r == 2 {
        let eta = vec![t_eta];
        for c in &cons {
            if c.coeffs[0] * t_eta < c.rhs - tol {
                return Err(DensityError::EmptyFiber);
            }
        }
        return Ok(FiberDomain {
            t_eta,
            r,
            kind: FiberKind::Point(eta),
        });
    }

    // substitute eta_{r-2} = t_eta - sum of free coordinates
    let d = r - 1;
    let reduced: Vec<(Vec<f64>, f64)> = cons
        .iter()
        .map(|c| {
            let last = c.coeffs[d - 1];
            let coeffs: Vec<f64> = (0..d - 1).map(|k| c.coeffs[k] - last).collect();
            (coeffs, c.rhs - last * t_eta)
        })
        .collect();

    if r == 3 {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (c, rhs) in &reduced {
            if c[0] > 0.5 {
                lo = lo.max(*rhs);
            } else if c[0] < -0.5 {
                hi = hi.min(-rhs);
            } else if *rhs > tol {
                return Err(DensityError::EmptyFiber);
            }
        }
        if lo > hi + tol {
            return Err(DensityError::EmptyFiber);
        }
        return Ok(FiberDomain {
            t_eta,
            r,
            kind: FiberKind::Interval { lo, hi: hi.max(lo) },
        });
    }

    // r = 4: clip the (eta_1, eta_2) box rectangle by the remaining
    // half-planes
    let mut poly = vec![
        [a[1], a[2]],
        [a[0], a[2]],
        [a[0], a[1]],
        [a[1], a[1]],
    ];
    for (c, rhs) in &reduced {
        if c[0].abs() < 0.5 && c[1].abs() < 0.5 {
            if *rhs > tol {
                return Err(DensityError::EmptyFiber);
            }
            continue;
        }
        poly = clip_half_plane(&poly, c[0], c[1], *rhs);
        if poly.is_empty() {
            return Err(DensityError::EmptyFiber);
        }
    }
    Ok(FiberDomain {
        t_eta,
        r,
        kind: FiberKind::Polygon(poly),
    })
}

/// Sutherland–Hodgman clip of a convex polygon by a*x + b*y >= rhs.
fn clip_half_plane(poly: &[[f64; 2]], a: f64, b: f64, rhs: f64) -> Vec<[f64; 2]> {
    let side = |p: &[f64; 2]| a * p[0] + b * p[1] - rhs;
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (sp, sq) = (side(&p), side(&q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
            let t = sp / (sp - sq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Full recursion weight log at eta: the pair prefactor, the smooth
/// factors, and the endpoint monomials (plain distances; the sinhc
/// remainders already live in the smooth part). Returns None when a
/// distance is nonpositive.
fn full_weight_log(
    blocks: &BlockStructure,
    m: f64,
    setting: Setting,
    eta: &[f64],
) -> Option<f64> {
    let a = blocks.levels();
    let mut log = kernels::pair_prefactor_log(a, blocks.mults(), m, setting)
        + kernels::integrand_smooth_log(a, blocks.mults(), m, setting, eta);
    for (k, &(alpha, beta)) in kernels::endpoint_exponents(blocks.mults(), m)
        .iter()
        .enumerate()
    {
        let up = a[k] - eta[k];
        let lo = eta[k] - a[k + 1];
        if up <= 0.0 || lo <= 0.0 {
            return None;
        }
        log += alpha * up.ln() + beta * lo.ln();
    }
    log.is_finite().then_some(log)
}

/// The xi point (length n - 1) of the layout at eta.
fn xi_point(blocks: &BlockStructure, eta: &[f64]) -> Vec<f64> {
    let r = blocks.rank();
    let mut xi = Vec::with_capacity(blocks.n() - 1);
    for i in 0..r {
        for _ in 0..blocks.mults()[i] - 1 {
            xi.push(blocks.levels()[i]);
        }
        if i < r - 1 {
            xi.push(eta[i]);
        }
    }
    xi
}

/// Total vanishing order of the fiber integrand at a fiber endpoint,
/// summed over every factor whose distance closes there: the weight
/// monomials, the eta pairs (net exponent 1), and for a rank-2 inner
/// kernel its own three factors (the pair with exponent 1 - m and the two
/// hull distances with m/2 - 1). The inner divergence is what keeps the
/// total bounded: the m = 2 tent kernel, for instance, is constant along
/// fibers through corners.
fn fiber_endpoint_exponent(
    blocks: &BlockStructure,
    m: f64,
    eta: &[f64],
    hp_sorted: &[f64],
    tol: f64,
) -> f64 {
    let a = blocks.levels();
    let r = blocks.rank();
    let mut e = 0.0;
    for (k, &(alpha, beta)) in kernels::endpoint_exponents(blocks.mults(), m)
        .iter()
        .enumerate()
    {
        if (a[k] - eta[k]).abs() <= tol {
            e += alpha;
        }
        if (eta[k] - a[k + 1]).abs() <= tol {
            e += beta;
        }
    }
    for i in 0..r - 1 {
        for j in i + 1..r - 1 {
            if (eta[i] - eta[j]).abs() <= tol {
                e += 1.0;
            }
        }
    }
    if blocks.n() == 3 {
        // inner kernel K_2(H', xi): factors (xi_1 - xi_2)^{1-m} and
        // (xi_1 - h'_max)^{m/2-1}, (h'_max - xi_2)^{m/2-1}
        let xi = xi_point(blocks, eta);
        let h1 = hp_sorted[0];
        if (xi[0] - xi[1]).abs() <= tol {
            e += 1.0 - m;
        }
        if (xi[0] - h1).abs() <= tol {
            e += 0.5 * m - 1.0;
        }
        if (h1 - xi[1]).abs() <= tol {
            e += 0.5 * m - 1.0;
        }
    }
    e
}

/// Pointwise Laplace-representation kernel K_n(H, X) (trigonometric) or
/// its rational counterpart, for n in {2, 3, 4}.
///
/// `nodes` is the quadrature order per fiber dimension. H outside C(X)
/// reports `Outside` (value 0); H on the boundary band follows the rank-2
/// policy (0 for m > 2, divergent for m < 2, a finite limit for m = 2).
pub fn kernel_k(
    h: &CartanPoint,
    x: &CartanPoint,
    m: f64,
    setting: Setting,
    nodes: usize,
) -> Result<KernelValue, DensityError> {
    if !(m > 0.0) {
        return Err(DensityError::BadMultiplicity);
    }
    if h.n() != x.n() {
        return Err(DensityError::DimensionMismatch);
    }
    let n = x.n();
    if !(2..=4).contains(&n) {
        return Err(DensityError::RankUnsupported(n));
    }
    let xs = project_to_chamber(x).0;
    let blocks = blocks_of(&xs);
    if blocks.is_scalar() {
        return Err(DensityError::ScalarPoint);
    }
    let hs = CartanPoint::new(sorted_desc(h.entries())).expect("finite entries");
    match rado_membership(&hs, &xs) {
        Region::Outside => Ok(KernelValue::Outside),
        Region::Boundary => {
            if m > 2.0 {
                Ok(KernelValue::BoundaryZero)
            } else if m < 2.0 {
                Ok(KernelValue::BoundarySingular)
            } else {
                let v = compute_kernel(&hs, &blocks, m, setting, nodes).unwrap_or(0.0);
                Ok(KernelValue::BoundaryFinite(v))
            }
        }
        Region::Interior => {
            let v = compute_kernel(&hs, &blocks, m, setting, nodes)?;
            Ok(KernelValue::Interior(v))
        }
    }
}

fn inner_kernel(
    hp: &CartanPoint,
    xi: &CartanPoint,
    m: f64,
    setting: Setting,
    nodes: usize,
) -> Result<f64, DensityError> {
    if xi.n() == 2 {
        kernels::kernel_k2(hp, xi, m, setting)
            .map(|v| v.value())
            .map_err(|_| DensityError::BadMultiplicity)
    } else {
        kernel_k(hp, xi, m, setting, nodes).map(|v| v.value())
    }
}

fn compute_kernel(
    hs: &CartanPoint,
    blocks: &BlockStructure,
    m: f64,
    setting: Setting,
    nodes: usize,
) -> Result<f64, DensityError> {
    let n = blocks.n();
    if n == 2 {
        return kernels::kernel_k2(hs, &blocks.pi(), m, setting)
            .map(|v| v.value())
            .map_err(|_| DensityError::BadMultiplicity);
    }
    let hp_sorted = &hs.entries()[..n - 1];
    let hp = CartanPoint::new(hp_sorted.to_vec()).expect("finite");
    let fiber = fiber_domain_sorted(blocks, hp_sorted)?;
    let mut log_c = ln_gamma(0.5 * m * n as f64);
    for &ni in blocks.mults() {
        log_c -= ln_gamma(0.5 * m * ni as f64);
    }
    let scale = 1.0 + blocks.levels()[0].abs().max(blocks.levels()[blocks.rank() - 1].abs());
    let tol = 1e-9 * scale;

    let point_value = |eta: &[f64]| -> Result<f64, DensityError> {
        let Some(w) = full_weight_log(blocks, m, setting, eta) else {
            return Ok(0.0);
        };
        let xi = CartanPoint::new(xi_point(blocks, eta)).expect("finite");
        let inner = inner_kernel(&hp, &xi, m, setting, nodes)?;
        Ok((log_c + w).exp() * inner)
    };

    match fiber.kind() {
        FiberKind::Point(eta) => point_value(eta),
        FiberKind::Interval { lo, hi } => {
            if hi - lo <= tol {
                return point_value(&fiber.eta_full(&[0.5 * (lo + hi)]));
            }
            let e_lo = fiber_endpoint_exponent(blocks, m, &fiber.eta_full(&[*lo]), hp_sorted, tol);
            let e_hi = fiber_endpoint_exponent(blocks, m, &fiber.eta_full(&[*hi]), hp_sorted, tol);
            let rule =
                cached_jacobi(e_hi, e_lo, nodes).map_err(|_| DensityError::BadMultiplicity)?;
            let log_scale = rule.log_interval_scale(*lo, *hi);
            let mut acc = 0.0;
            for (i, &xr) in rule.nodes().iter().enumerate() {
                let u = 0.5 * ((hi - lo) * xr + (hi + lo));
                let eta = fiber.eta_full(&[u]);
                let Some(w) = full_weight_log(blocks, m, setting, &eta) else {
                    continue;
                };
                let xi = CartanPoint::new(xi_point(blocks, &eta)).expect("finite");
                let inner = inner_kernel(&hp, &xi, m, setting, nodes)?;
                if inner <= 0.0 {
                    continue;
                }
                let lw = log_c + w + inner.ln() + rule.log_weights()[i] + log_scale
                    - e_hi * (hi - u).ln()
                    - e_lo * (u - lo).ln();
                acc += lw.exp();
            }
            Ok(acc)
        }
        FiberKind::Polygon(verts) => {
            if verts.len() < 3 {
                // degenerate: a segment or a point
                if verts.len() == 2 {
                    let mid = [0.5 * (verts[0][0] + verts[1][0]), 0.5 * (verts[0][1] + verts[1][1])];
                    return point_value(&fiber.eta_full(&mid));
                }
                if verts.len() == 1 {
                    return point_value(&fiber.eta_full(&verts[0]));
                }
                return Err(DensityError::EmptyFiber);
            }
            let gl = cached_jacobi(0.0, 0.0, nodes.clamp(4, 20))
                .map_err(|_| DensityError::BadMultiplicity)?;
            let cx = verts.iter().map(|v| v[0]).sum::<f64>() / verts.len() as f64;
            let cy = verts.iter().map(|v| v[1]).sum::<f64>() / verts.len() as f64;
            let mut acc = 0.0;
            for i in 0..verts.len() {
                let a = verts[i];
                let b = verts[(i + 1) % verts.len()];
                let (e1x, e1y) = (a[0] - cx, a[1] - cy);
                let (e2x, e2y) = (b[0] - a[0], b[1] - a[1]);
                let cross = (e1x * e2y - e1y * e2x).abs();
                if cross == 0.0 {
                    continue;
                }
                for (is, &xs_) in gl.nodes().iter().enumerate() {
                    let s = 0.5 * (xs_ + 1.0);
                    for (it, &xt) in gl.nodes().iter().enumerate() {
                        let t = 0.5 * (xt + 1.0);
                        let px = cx + s * e1x + s * t * e2x;
                        let py = cy + s * e1y + s * t * e2y;
                        let eta = fiber.eta_full(&[px, py]);
                        let Some(w) = full_weight_log(blocks, m, setting, &eta) else {
                            continue;
                        };
                        let xi =
                            CartanPoint::new(xi_point(blocks, &eta)).expect("finite");
                        let inner = inner_kernel(&hp, &xi, m, setting, nodes)?;
                        if inner <= 0.0 {
                            continue;
                        }
                        // 0.25 maps the GL weights from [-1,1]^2 to [0,1]^2
                        acc += 0.25
                            * gl.weights()[is]
                            * gl.weights()[it]
                            * s
                            * cross
                            * (log_c + w).exp()
                            * inner;
                    }
                }
            }
            Ok(acc)
        }
    }
}

/// i.i.d. draws of the representing measure of X: each H satisfies
/// E[e^{i lambda(H)}] = chi_lambda(e^X) (trigonometric) or psi_lambda(e^X)
/// (rational), and lies in C(X). Draw `i` is determined by (seed, i).
pub fn sample_measure(
    x: &CartanPoint,
    m: f64,
    setting: Setting,
    count: usize,
    seed: u64,
) -> Result<Vec<CartanPoint>, DensityError> {
    if !(m > 0.0) {
        return Err(DensityError::BadMultiplicity);
    }
    let blocks = blocks_of(&project_to_chamber(x).0);
    let levels = blocks.levels().to_vec();
    let mults = blocks.mults().to_vec();
    Ok((0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = quadrature::rng_for(seed, i);
            CartanPoint::new(draw_one(&levels, &mults, m, setting, &mut rng))
                .expect("draws are finite")
        })
        .collect())
}

/// Single draw at a given index, for streaming use.
pub fn sample_measure_at(
    x: &CartanPoint,
    m: f64,
    setting: Setting,
    seed: u64,
    index: u64,
) -> Result<CartanPoint, DensityError> {
    if !(m > 0.0) {
        return Err(DensityError::BadMultiplicity);
    }
    let blocks = blocks_of(&project_to_chamber(x).0);
    let mut rng = quadrature::rng_for(seed, index);
    Ok(
        CartanPoint::new(draw_one(blocks.levels(), blocks.mults(), m, setting, &mut rng))
            .expect("draws are finite"),
    )
}

fn draw_one(
    levels: &[f64],
    mults: &[usize],
    m: f64,
    setting: Setting,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<f64> {
    let n: usize = mults.iter().sum();
    if levels.len() == 1 {
        return vec![levels[0]; n];
    }
    let alpha: Vec<f64> = mults.iter().map(|&ni| 0.5 * m * ni as f64).collect();
    let gamma = quadrature::draw_dirichlet(&alpha, rng);
    let t = NodeTransform::from_levels(levels, setting);
    let eta = simplex::roots_from_weights(&gamma, &t).expect("weights match levels");
    let (clev, cmul) = child_blocks_merged(levels, mults, &eta);
    let trace: f64 = levels.iter().zip(mults).map(|(a, &k)| a * k as f64).sum();
    let mut h = draw_one(&clev, &cmul, m, setting, rng);
    let tail = trace - h.iter().sum::<f64>();
    h.push(tail);
    h
}

/// Child layout with boundary draws merged back into their level (a zero
/// Dirichlet weight puts eta exactly on a wall).
fn child_blocks_merged(
    levels: &[f64],
    mults: &[usize],
    eta: &[f64],
) -> (Vec<f64>, Vec<usize>) {
    let r = levels.len();
    let tol = 1e-13 * (1.0 + levels[0].abs().max(levels[r - 1].abs()));
    let mut lv: Vec<f64> = Vec::with_capacity(2 * r);
    let mut ml: Vec<usize> = Vec::with_capacity(2 * r);
    let push = |v: f64, k: usize, lv: &mut Vec<f64>, ml: &mut Vec<usize>| {
        if let (Some(last), Some(last_m)) = (lv.last().copied(), ml.last_mut()) {
            if last - v <= tol {
                *last_m += k;
                return;
            }
        }
        lv.push(v);
        ml.push(k);
    };
    for i in 0..r {
        if mults[i] > 1 {
            push(levels[i], mults[i] - 1, &mut lv, &mut ml);
        }
        if i < r - 1 {
            push(eta[i], 1, &mut lv, &mut ml);
        }
    }
    (lv, ml)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    heap_permute(&mut idx, n, &mut out);
    out
}

fn heap_permute(idx: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(idx.clone());
        return;
    }
    for i in 0..k {
        heap_permute(idx, k - 1, out);
        if k % 2 == 0 {
            idx.swap(i, k - 1);
        } else {
            idx.swap(0, k - 1);
        }
    }
}

/// Monte-Carlo estimate of the dual Abel transform of f at X:
/// int f(H) K(H, X) dH. f is symmetrized over the Weyl group internally
/// (the identity only holds for W-invariant f, and symmetrizing is
/// idempotent on those); trigonometric expectations carry the
/// e^{-rho(H)} weight of the phi-normalization. For f = e^{i lambda(.)}
/// this reproduces eval_phi / eval_psi.
pub fn dual_abel<F>(
    f: F,
    x: &CartanPoint,
    m: f64,
    setting: Setting,
    samples: usize,
    seed: u64,
) -> Result<EvalResult, DensityError>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let n = x.n();
    if n > 8 {
        return Err(DensityError::RankUnsupported(n));
    }
    let draws = sample_measure(x, m, setting, samples, seed)?;
    let perms = permutations(n);
    let rho = rho_vector(m, n);
    let terms: Vec<Complex64> = draws
        .par_iter()
        .map(|h| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut buf = vec![0.0; n];
            for p in &perms {
                for (dst, &src) in buf.iter_mut().zip(p) {
                    *dst = h[src];
                }
                acc += f(&buf);
            }
            let sym = acc / perms.len() as f64;
            match setting {
                Setting::Rational => sym,
                Setting::Trigonometric => {
                    let rp: f64 = rho.iter().zip(h.entries()).map(|(r, v)| r * v).sum();
                    sym * (-rp).exp()
                }
            }
        })
        .collect();
    let count = terms.len() as f64;
    let mean = terms.iter().sum::<Complex64>() / count;
    let var = terms.iter().map(|t| (t - mean).norm_sqr()).sum::<f64>()
        / (count * (count - 1.0).max(1.0));
    Ok(EvalResult {
        value: mean,
        error_estimate: var.sqrt(),
        method: Method::Mc,
        samples_or_nodes: samples,
        converged: true,
    })
}
