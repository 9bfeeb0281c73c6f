//! Closed-form weight functions of the rank-reduction recursions.
//!
//! The trigonometric weight S-tilde and its rational counterpart T carry
//! three kinds of factors: a level-pair prefactor depending on X alone,
//! factors bounded away from zero on the interlacing box, and endpoint
//! monomials (a_k - eta_k)^{m n_k/2 - 1} (eta_k - a_{k+1})^{m n_{k+1}/2 - 1}
//! that vanish at the box walls. The endpoint exponents are exposed
//! symbolically so the quadrature layer can absorb them into Gauss–Jacobi
//! weights; everything else is accumulated in log space and exponentiated
//! once (the exponents 1 - m (n_i + n_j)/2 reach extreme magnitudes for
//! moderate m).

use crate::cartan::{blocks_of, rado_membership, BlockStructure, CartanPoint, Region};
use crate::special::{ln_gamma, ln_sinh, ln_sinhc};
use crate::Setting;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("multiplicity must have positive real part")]
    BadMultiplicity,
    #[error("evaluation point is singular for m < 2 (boundary factor vanishes)")]
    SingularBoundary,
    #[error("nodes are not interlaced with the levels")]
    NotInterlaced,
    #[error("rank-2 kernel needs n = 2 and X not a multiple of I")]
    NotRankTwo,
}

/// Pointwise kernel evaluation with the boundary policy made explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelValue {
    /// H strictly inside C(X): positive kernel value.
    Interior(f64),
    /// H on the boundary band: 0 for m > 2, a finite value for m = 2,
    /// divergent for m < 2.
    BoundaryZero,
    BoundaryFinite(f64),
    BoundarySingular,
    /// H outside C(X): the kernel vanishes (support flag).
    Outside,
}

impl KernelValue {
    /// Collapses the policy to a number (Outside and BoundaryZero give 0,
    /// BoundarySingular gives +infinity).
    pub fn value(&self) -> f64 {
        match self {
            KernelValue::Interior(v) | KernelValue::BoundaryFinite(v) => *v,
            KernelValue::BoundaryZero | KernelValue::Outside => 0.0,
            KernelValue::BoundarySingular => f64::INFINITY,
        }
    }

    pub fn is_inside_support(&self) -> bool {
        !matches!(self, KernelValue::Outside)
    }
}

/// log sinh(d) or log d, by setting.
#[inline]
pub(crate) fn log_factor(setting: Setting, d: f64) -> f64 {
    match setting {
        Setting::Trigonometric => ln_sinh(d),
        Setting::Rational => d.ln(),
    }
}

/// Per-free-coordinate endpoint exponents (alpha_k at the upper wall a_k,
/// beta_k at the lower wall a_{k+1}): alpha_k = m n_k/2 - 1,
/// beta_k = m n_{k+1}/2 - 1.
pub fn endpoint_exponents(mults: &[usize], m: f64) -> Vec<(f64, f64)> {
    (0..mults.len().saturating_sub(1))
        .map(|k| {
            (
                0.5 * m * mults[k] as f64 - 1.0,
                0.5 * m * mults[k + 1] as f64 - 1.0,
            )
        })
        .collect()
}

/// log of the level-pair prefactor prod_{i<j} f(a_i - a_j)^{1 - m (n_i + n_j)/2}.
pub(crate) fn pair_prefactor_log(levels: &[f64], mults: &[usize], m: f64, setting: Setting) -> f64 {
    let r = levels.len();
    let mut acc = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            let e = 1.0 - 0.5 * m * (mults[i] + mults[j]) as f64;
            acc += e * log_factor(setting, levels[i] - levels[j]);
        }
    }
    acc
}

/// log of the full recursion weight W = S-tilde * prod f^m(eta_i - eta_j)
/// (resp. T * d_0(eta)^m) with the endpoint monomials divided out:
///
///   W(eta) = exp(pair_prefactor_log + integrand_smooth_log)
///            * prod_k (a_k - eta_k)^{alpha_k} (eta_k - a_{k+1})^{beta_k}
///
/// The net eta-pair exponent is (1 - m) + m = 1, so the only boundary
/// behavior left in the smooth part is the integrable corner vanishing of
/// adjacent eta's, which interior quadrature nodes never reach.
pub(crate) fn integrand_smooth_log(
    levels: &[f64],
    mults: &[usize],
    m: f64,
    setting: Setting,
    eta: &[f64],
) -> f64 {
    let r = levels.len();
    debug_assert_eq!(eta.len() + 1, r);
    let mut acc = 0.0;
    // net eta-pair factor, exponent 1
    for i in 0..r - 1 {
        for j in i + 1..r - 1 {
            acc += log_factor(setting, eta[i] - eta[j]);
        }
    }
    for (k, &e) in eta.iter().enumerate() {
        // levels strictly above the interval of eta_k
        for p in 0..k {
            acc += (0.5 * m * mults[p] as f64 - 1.0) * log_factor(setting, levels[p] - e);
        }
        // levels strictly below
        for p in k + 2..r {
            acc += (0.5 * m * mults[p] as f64 - 1.0) * log_factor(setting, e - levels[p]);
        }
        // smooth remainders of the absorbed endpoint factors
        if setting == Setting::Trigonometric {
            acc += (0.5 * m * mults[k] as f64 - 1.0) * ln_sinhc(levels[k] - e)
                + (0.5 * m * mults[k + 1] as f64 - 1.0) * ln_sinhc(e - levels[k + 1]);
        }
    }
    acc
}

/// Sum of all factor exponents of W: the epsilon-degree governing the
/// rational limit W_trig(eps eta, eps X) ~ eps^deg W_rat(eta, X).
pub(crate) fn weight_degree(mults: &[usize], m: f64) -> f64 {
    let r = mults.len();
    let n: usize = mults.iter().sum();
    let mut deg = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            deg += 1.0 - 0.5 * m * (mults[i] + mults[j]) as f64;
        }
    }
    deg += ((r - 1) * (r - 2) / 2) as f64;
    deg += (r as f64 - 1.0) * (0.5 * m * n as f64 - r as f64);
    deg
}

fn check_strict_interlacing(
    levels: &[f64],
    eta: &[f64],
) -> Result<(), KernelError> {
    let r = levels.len();
    if eta.len() + 1 != r {
        return Err(KernelError::NotInterlaced);
    }
    let tol = 1e-13 * (1.0 + levels[0].abs().max(levels[r - 1].abs()));
    for k in 0..r - 1 {
        if !(eta[k] < levels[k] + tol && eta[k] > levels[k + 1] - tol) {
            return Err(KernelError::NotInterlaced);
        }
    }
    Ok(())
}

/// Boundary distances of eta inside its box, with their exponents: the
/// absorbed monomials plus the pairwise eta factors (net exponent 1 in W,
/// 1 - m in the bare weight).
fn assemble_weight(
    levels: &[f64],
    mults: &[usize],
    m: f64,
    setting: Setting,
    eta: &[f64],
    include_measure: bool,
) -> Result<f64, KernelError> {
    if !(m > 0.0) {
        return Err(KernelError::BadMultiplicity);
    }
    check_strict_interlacing(levels, eta)?;
    let r = levels.len();
    let tol = 1e-13 * (1.0 + levels[0].abs().max(levels[r - 1].abs()));
    let mut log = pair_prefactor_log(levels, mults, m, setting);
    let mut zero = false;
    let mut push = |d: f64, e: f64, log: &mut f64| -> Result<(), KernelError> {
        if d <= tol {
            if e < 0.0 {
                return Err(KernelError::SingularBoundary);
            }
            if e > 0.0 {
                zero = true;
            }
        } else {
            *log += e * log_factor(setting, d);
        }
        Ok(())
    };
    for (k, &e) in eta.iter().enumerate() {
        for p in 0..=k.min(r - 1) {
            if p <= k {
                let expo = 0.5 * m * mults[p] as f64 - 1.0;
                push(levels[p] - e, expo, &mut log)?;
            }
        }
        for p in k + 1..r {
            let expo = 0.5 * m * mults[p] as f64 - 1.0;
            push(e - levels[p], expo, &mut log)?;
        }
    }
    let pair_expo = if include_measure { 1.0 } else { 1.0 - m };
    for i in 0..r - 1 {
        for j in i + 1..r - 1 {
            push(eta[i] - eta[j], pair_expo, &mut log)?;
        }
    }
    Ok(if zero { 0.0 } else { log.exp() })
}

/// The trigonometric weight S-tilde(eta, X) of the wall recursion. For
/// regular X this is S(xi, X). Strictly positive on strict interlacing;
/// calling it on a boundary point with m < 2 is a contract violation and
/// reports `SingularBoundary`.
pub fn weight_s_tilde(
    eta: &[f64],
    blocks: &BlockStructure,
    m: f64,
) -> Result<f64, KernelError> {
    assemble_weight(
        blocks.levels(),
        blocks.mults(),
        m,
        Setting::Trigonometric,
        eta,
        false,
    )
}

/// The rational weight T(eta, X): S-tilde with hyperbolic sines replaced by
/// plain differences.
pub fn weight_t(eta: &[f64], blocks: &BlockStructure, m: f64) -> Result<f64, KernelError> {
    assemble_weight(
        blocks.levels(),
        blocks.mults(),
        m,
        Setting::Rational,
        eta,
        false,
    )
}

/// Weight evaluation for complex multiplicity (Re m > 0). Accepted as an
/// evaluation option only: nothing is asserted about sign or positivity.
pub fn weight_complex(
    eta: &[f64],
    blocks: &BlockStructure,
    m: Complex64,
    setting: Setting,
) -> Result<Complex64, KernelError> {
    if !(m.re > 0.0) {
        return Err(KernelError::BadMultiplicity);
    }
    check_strict_interlacing(blocks.levels(), eta)?;
    let levels = blocks.levels();
    let mults = blocks.mults();
    let r = levels.len();
    let tol = 1e-13 * (1.0 + levels[0].abs().max(levels[r - 1].abs()));
    let mut log = Complex64::new(0.0, 0.0);
    for i in 0..r {
        for j in i + 1..r {
            let e = 1.0 - 0.5 * m * (mults[i] + mults[j]) as f64;
            log += e * log_factor(setting, levels[i] - levels[j]);
        }
    }
    for (k, &e) in eta.iter().enumerate() {
        for p in 0..r {
            let d = if p <= k { levels[p] - e } else { e - levels[p] };
            if d <= tol {
                return Err(KernelError::SingularBoundary);
            }
            log += (0.5 * m * mults[p] as f64 - 1.0) * log_factor(setting, d);
        }
    }
    for i in 0..r - 1 {
        for j in i + 1..r - 1 {
            log += (1.0 - m) * log_factor(setting, eta[i] - eta[j]);
        }
    }
    Ok(log.exp())
}

/// The explicit rank-2 Laplace kernel
///
///   K_2(H, X) = Gamma(m) / Gamma(m/2)^2 * f(x_1 - x_2)^{1-m}
///               * [ f(x_1 - h) f(h - x_2) ]^{m/2 - 1}
///
/// with f = sinh (trigonometric) or the identity (rational) and h the free
/// coordinate of H (the expression is invariant under h -> x_1 + x_2 - h,
/// so H may come in either order). On the boundary the kernel is 0 for
/// m > 2, finite positive for m = 2, and divergent for 0 < m < 2.
pub fn kernel_k2(
    h: &CartanPoint,
    x: &CartanPoint,
    m: f64,
    setting: Setting,
) -> Result<KernelValue, KernelError> {
    if !(m > 0.0) {
        return Err(KernelError::BadMultiplicity);
    }
    if h.n() != 2 || x.n() != 2 {
        return Err(KernelError::NotRankTwo);
    }
    let xb = blocks_of(&crate::cartan::project_to_chamber(x).0);
    if xb.is_scalar() {
        return Err(KernelError::NotRankTwo);
    }
    match rado_membership(h, x) {
        Region::Outside => return Ok(KernelValue::Outside),
        Region::Boundary => {
            if m > 2.0 {
                return Ok(KernelValue::BoundaryZero);
            }
            if m < 2.0 {
                return Ok(KernelValue::BoundarySingular);
            }
            // m = 2: the endpoint factors drop out
            let (x1, x2) = (xb.levels()[0], xb.levels()[1]);
            let v = (-log_factor(setting, x1 - x2)).exp();
            return Ok(KernelValue::BoundaryFinite(v));
        }
        Region::Interior => {}
    }
    let (x1, x2) = (xb.levels()[0], xb.levels()[1]);
    let h1 = h[0].max(h[1]);
    let log = ln_gamma(m) - 2.0 * ln_gamma(0.5 * m)
        + (1.0 - m) * log_factor(setting, x1 - x2)
        + (0.5 * m - 1.0) * (log_factor(setting, x1 - h1) + log_factor(setting, h1 - x2));
    Ok(KernelValue::Interior(log.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanPoint;

    fn pt(v: &[f64]) -> CartanPoint {
        CartanPoint::new(v.to_vec()).unwrap()
    }

    fn blocks(v: &[f64]) -> BlockStructure {
        blocks_of(&pt(v))
    }

    #[test]
    fn s_tilde_rank_two_m2_is_inverse_sinh() {
        // n = 2, m = 2: S = sinh^{-1}(x_1 - x_2), independent of eta
        let b = blocks(&[1.0, -1.0]);
        for &eta in &[-0.7, 0.0, 0.9] {
            let s = weight_s_tilde(&[eta], &b, 2.0).unwrap();
            assert!((s - 1.0 / 2f64.sinh()).abs() < 1e-15);
        }
        assert!((weight_s_tilde(&[0.0], &b, 2.0).unwrap() - 0.275_720_564_771_783_5).abs() < 1e-9);
    }

    #[test]
    fn m2_collapse_regular_case() {
        // regular X, m = 2: S-tilde * prod sinh^2(eta_i - eta_j) = d(xi)/d(X)
        let b = blocks(&[1.3, 0.2, -0.8]);
        let eta = [0.7, -0.5];
        let s = weight_s_tilde(&eta, &b, 2.0).unwrap();
        let pair = (eta[0] - eta[1]).sinh();
        let net = s * pair * pair;
        let d_xi = pair;
        let d_x: f64 = [(1.3f64 - 0.2), (1.3 + 0.8), (0.2 + 0.8)]
            .iter()
            .map(|d| d.sinh())
            .product();
        assert!((net - d_xi / d_x).abs() < 1e-14 * (d_xi / d_x));
    }

    #[test]
    fn t_rank_two_values() {
        // n = 2: T = (x_1 - x_2)^{1-m} [(x_1 - eta)(eta - x_2)]^{m/2-1}
        let b = blocks(&[1.0, -1.0]);
        let t = weight_t(&[0.0], &b, 2.0).unwrap();
        assert!((t - 0.5).abs() < 1e-15);
        let t = weight_t(&[0.3], &b, 4.0).unwrap();
        assert!((t - 0.5f64.powi(3) * (0.7 * 1.3)).abs() < 1e-14);
    }

    #[test]
    fn t_scaling_homogeneity() {
        // T(c eta, c X; m) = c^p T(eta, X; m) with p the exponent count
        let b = blocks(&[1.1, 0.3, -0.6, -1.4]);
        let m = 1.5;
        let eta = [0.8, -0.1, -1.0];
        let c = 2.5;
        let scaled_levels: Vec<f64> = b.levels().iter().map(|a| c * a).collect();
        let bc = BlockStructure::from_parts(scaled_levels, b.mults().to_vec());
        let eta_c: Vec<f64> = eta.iter().map(|e| c * e).collect();
        let t0 = weight_t(&eta, &b, m).unwrap();
        let t1 = weight_t(&eta_c, &bc, m).unwrap();
        // p for the bare weight T: all exponents except the measure pairs
        let r = b.rank() as f64;
        let n = b.n() as f64;
        let p = weight_degree(b.mults(), m) - (r - 1.0) * (r - 2.0) / 2.0 * m;
        assert!((t1 / t0 - c.powf(p)).abs() < 1e-10 * c.powf(p), "{} vs {}", t1 / t0, c.powf(p));
        let _ = n;
    }

    #[test]
    fn rational_limit_of_trig_weight() {
        // eps^{-deg} S-tilde(eps eta, eps X) prod sinh^m(eps d_eta) ->
        // T(eta, X) d_0(eta)^m
        for mults in [vec![1usize, 1, 1], vec![2, 1], vec![2, 2, 1]] {
            let r = mults.len();
            let levels: Vec<f64> = (0..r).map(|i| 1.0 - 0.9 * i as f64).collect();
            let m = 1.7;
            let eta: Vec<f64> = (0..r - 1)
                .map(|k| 0.5 * (levels[k] + levels[k + 1]) + 0.07)
                .collect();
            let rat = assemble_weight(&levels, &mults, m, Setting::Rational, &eta, true).unwrap();
            let deg = weight_degree(&mults, m);
            for eps in [1e-2, 1e-3] {
                let lev_e: Vec<f64> = levels.iter().map(|a| eps * a).collect();
                let eta_e: Vec<f64> = eta.iter().map(|e| eps * e).collect();
                let trig =
                    assemble_weight(&lev_e, &mults, m, Setting::Trigonometric, &eta_e, true)
                        .unwrap();
                let scaled = trig / eps.powf(deg);
                let rel = (scaled - rat).abs() / rat.abs();
                assert!(rel < 1e-2 * (eps / 1e-3), "mults {mults:?} eps {eps}: rel {rel}");
            }
        }
    }

    #[test]
    fn boundary_policy_of_raw_weights() {
        let b = blocks(&[1.0, -1.0]);
        // eta on the wall: singular signal for m < 2, zero for m > 2
        assert_eq!(
            weight_s_tilde(&[1.0], &b, 1.0),
            Err(KernelError::SingularBoundary)
        );
        assert_eq!(weight_s_tilde(&[1.0], &b, 4.0), Ok(0.0));
        // exponent exactly zero: factor drops out
        assert!((weight_s_tilde(&[1.0], &b, 2.0).unwrap() - 1.0 / 2f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn complex_multiplicity_evaluates() {
        let b = blocks(&[1.0, 0.0, -1.0]);
        let m = Complex64::new(1.5, 0.7);
        let v = weight_complex(&[0.5, -0.5], &b, m, Setting::Trigonometric).unwrap();
        assert!(v.norm().is_finite() && v.norm() > 0.0);
        // real m through the complex path agrees with the real path
        let vr = weight_complex(&[0.5, -0.5], &b, Complex64::new(1.5, 0.0), Setting::Trigonometric)
            .unwrap();
        let direct = weight_s_tilde(&[0.5, -0.5], &b, 1.5).unwrap();
        assert!((vr.re - direct).abs() < 1e-13 * direct);
        assert!(vr.im.abs() < 1e-13 * direct);
    }

    #[test]
    fn kernel_k2_examples() {
        // m = 2 trig: constant 1/sinh(x_1 - x_2) on the interior
        let x = pt(&[1.0, -1.0]);
        for &h in &[0.0f64, 0.4, -0.9] {
            let v = kernel_k2(&pt(&[h, -h]), &x, 2.0, Setting::Trigonometric).unwrap();
            assert!((v.value() - 1.0 / 2f64.sinh()).abs() < 1e-14);
        }
        // m = 2 rational: 1/2; integrates to 1 over [-1, 1]
        let v = kernel_k2(&pt(&[0.3, -0.3]), &x, 2.0, Setting::Rational).unwrap();
        assert!((v.value() - 0.5).abs() < 1e-15);
        // m = 4 rational at the center: Gamma(4)/Gamma(2)^2 * 2^{-3} = 0.75
        let v = kernel_k2(&pt(&[0.0, 0.0]), &x, 4.0, Setting::Rational).unwrap();
        assert!((v.value() - 0.75).abs() < 1e-14);
    }

    #[test]
    fn kernel_k2_is_weyl_invariant_in_h() {
        let x = pt(&[0.7, -1.2]);
        for m in [0.8, 2.0, 3.5] {
            for setting in [Setting::Trigonometric, Setting::Rational] {
                let a = kernel_k2(&pt(&[0.5, -1.0]), &x, m, setting).unwrap();
                let b = kernel_k2(&pt(&[-1.0, 0.5]), &x, m, setting).unwrap();
                assert!((a.value() - b.value()).abs() < 1e-14 * a.value().max(1.0));
            }
        }
    }

    #[test]
    fn kernel_k2_normalization_rational() {
        // int K2(h) dh = 1 with the endpoint exponents absorbed by Jacobi
        for m in [1.0, 2.0, 4.0, 0.5] {
            let x = pt(&[1.0, -1.0]);
            let e = 0.5 * m - 1.0;
            let (nodes, weights) = crate::quadrature::jacobi_rule(-1.0, 1.0, e, e, 24).unwrap();
            let total: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&h, &w)| {
                    let k = kernel_k2(&pt(&[h, -h]), &x, m, Setting::Rational)
                        .unwrap()
                        .value();
                    // strip the monomials the rule supplies
                    w * k / ((1.0 - h).powf(e) * (h + 1.0).powf(e))
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "m = {m}: {total}");
        }
    }

    #[test]
    fn kernel_k2_boundary_policy() {
        let x = pt(&[1.0, -1.0]);
        let vertex = pt(&[1.0, -1.0]);
        assert_eq!(
            kernel_k2(&vertex, &x, 4.0, Setting::Rational).unwrap(),
            KernelValue::BoundaryZero
        );
        assert_eq!(
            kernel_k2(&vertex, &x, 1.0, Setting::Rational).unwrap(),
            KernelValue::BoundarySingular
        );
        match kernel_k2(&vertex, &x, 2.0, Setting::Rational).unwrap() {
            KernelValue::BoundaryFinite(v) => assert!((v - 0.5).abs() < 1e-15),
            other => panic!("expected finite boundary value, got {other:?}"),
        }
        assert_eq!(
            kernel_k2(&pt(&[1.5, -1.5]), &x, 2.0, Setting::Rational).unwrap(),
            KernelValue::Outside
        );
    }

    #[test]
    fn positivity_random_strict_inputs() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let r = rng.gen_range(2..=4usize);
            let mut levels: Vec<f64> = (0..r).map(|_| rng.gen_range(-2.0..2.0)).collect();
            levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
            if levels.windows(2).any(|w| w[0] - w[1] < 0.1) {
                continue;
            }
            let mults: Vec<usize> = (0..r).map(|_| rng.gen_range(1..=2usize)).collect();
            let b = BlockStructure::from_parts(levels.clone(), mults);
            let eta: Vec<f64> = (0..r - 1)
                .map(|k| {
                    let f: f64 = rng.gen_range(0.05..0.95);
                    levels[k + 1] + f * (levels[k] - levels[k + 1])
                })
                .collect();
            let m = rng.gen_range(0.3..5.0);
            assert!(weight_s_tilde(&eta, &b, m).unwrap() > 0.0);
            assert!(weight_t(&eta, &b, m).unwrap() > 0.0);
        }
    }
}
