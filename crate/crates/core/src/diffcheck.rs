//! Finite-difference application of the invariant radial operators and the
//! eigen-residual certificates built on them.
//!
//! Two operators are applied by central differences: the Euler part
//! L_1 = sum_i d/dx_i and the second-order radial part
//!
//!   L_2 = sum_i d^2/dx_i^2 + m sum_{i<j} g(x_i - x_j) (d_i - d_j),
//!
//! with g = coth in the trigonometric setting and g(u) = 1/u in the
//! rational one. The evaluated spherical functions must be joint
//! eigenfunctions: L_1 with eigenvalue i sum lambda_k, L_2 with the value
//! produced by `eigenvalue_l2` (trigonometric phi) or -sum lambda_k^2
//! (rational psi). The residual of that relation, normalized by
//! 1 + |f(X)|, is the certificate the test suites drive.

use crate::cartan::CartanPoint;
use crate::eval::{eval_phi, eval_psi, EvalOptions, SpectralParam};
use crate::Setting;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DiffError {
    #[error("finite-difference step must be positive")]
    BadStep,
    #[error("stencil crosses wall: X must be at least 10h away from every wall")]
    StencilCrossesWall,
    #[error("evaluation failed: {0}")]
    Eval(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorTag {
    L1,
    L2,
}

/// A radial operator bound to a rank, multiplicity, setting and step.
#[derive(Debug, Clone, Copy)]
pub struct RadialOperator {
    pub n: usize,
    pub m: f64,
    pub tag: OperatorTag,
    pub setting: Setting,
    pub h: f64,
}

impl RadialOperator {
    pub fn new(n: usize, m: f64, tag: OperatorTag, setting: Setting, h: f64) -> Result<Self, DiffError> {
        if !(h > 0.0) {
            return Err(DiffError::BadStep);
        }
        Ok(Self { n, m, tag, setting, h })
    }
}

/// Central-difference application of the operator to `f` at X, O(h^2).
/// Requires X regular with every gap larger than 10h (the coth terms blow
/// up at the walls and the stencil must not straddle one).
pub fn apply_radial<F>(op: &RadialOperator, f: F, x: &CartanPoint) -> Result<Complex64, DiffError>
where
    F: Fn(&[f64]) -> Complex64,
{
    let n = x.n();
    assert_eq!(n, op.n, "operator rank mismatch");
    let h = op.h;
    let e = x.entries();
    for i in 0..n {
        for j in i + 1..n {
            if (e[i] - e[j]).abs() <= 10.0 * h {
                return Err(DiffError::StencilCrossesWall);
            }
        }
    }
    let center = f(e);
    let mut plus = vec![Complex64::default(); n];
    let mut minus = vec![Complex64::default(); n];
    let mut buf = e.to_vec();
    for i in 0..n {
        buf[i] = e[i] + h;
        plus[i] = f(&buf);
        buf[i] = e[i] - h;
        minus[i] = f(&buf);
        buf[i] = e[i];
    }
    match op.tag {
        OperatorTag::L1 => {
            let mut acc = Complex64::default();
            for i in 0..n {
                acc += (plus[i] - minus[i]) / (2.0 * h);
            }
            Ok(acc)
        }
        OperatorTag::L2 => {
            let mut acc = Complex64::default();
            for i in 0..n {
                acc += (plus[i] - 2.0 * center + minus[i]) / (h * h);
            }
            for i in 0..n {
                for j in i + 1..n {
                    let u = e[i] - e[j];
                    let g = match op.setting {
                        Setting::Trigonometric => 1.0 / u.tanh(),
                        Setting::Rational => 1.0 / u,
                    };
                    let di = (plus[i] - minus[i]) / (2.0 * h);
                    let dj = (plus[j] - minus[j]) / (2.0 * h);
                    acc += op.m * g * (di - dj);
                }
            }
            Ok(acc)
        }
    }
}

/// The L_1 eigenvalue on phi_lambda / psi_lambda: i sum lambda_k (from the
/// first-order invariant operator, which is L_1/m plus a constant).
pub fn eigenvalue_l1(lambda: &SpectralParam) -> Complex64 {
    Complex64::i() * lambda.lambda().iter().sum::<Complex64>()
}

/// The L_2^{(m)} eigenvalue on the trigonometric phi_lambda, solved out of
/// the linear relation tying the second invariant operator to L_1, L_1^2
/// and L_2: with w_k = (n-1)/2 + i lambda_k / m,
///
///   e_2(w) = -l_2/(2 m^2) + l_1^2/(2 m^2) + (n-1)^2 l_1/(2 m)
///            + n(n-1)(n-2)(3n-1)/24,
///
/// where l_1 = i sum lambda_k. Equivalently l_2 = -(sum lambda_k^2 +
/// |rho|^2); both forms are kept and cross-checked in the tests.
pub fn eigenvalue_l2(lambda: &SpectralParam, m: f64, n: usize) -> Complex64 {
    assert_eq!(lambda.n(), n);
    let nf = n as f64;
    let l1 = eigenvalue_l1(lambda);
    // e_2 of w_k = (n-1)/2 + i lambda_k / m, by direct double loop
    let w: Vec<Complex64> = lambda
        .lambda()
        .iter()
        .map(|l| Complex64::new(0.5 * (nf - 1.0), 0.0) + Complex64::i() * l / m)
        .collect();
    let mut e2 = Complex64::default();
    for i in 0..n {
        for j in i + 1..n {
            e2 += w[i] * w[j];
        }
    }
    let c = nf * (nf - 1.0) * (nf - 2.0) * (3.0 * nf - 1.0) / 24.0;
    l1 * l1 + m * (nf - 1.0) * (nf - 1.0) * l1 + 2.0 * m * m * (c - e2)
}

/// The rational L_2 eigenvalue on psi_lambda: -sum lambda_k^2.
pub fn eigenvalue_l2_rational(lambda: &SpectralParam) -> Complex64 {
    -lambda.lambda().iter().map(|l| l * l).sum::<Complex64>()
}

/// |L_2 f - eigenvalue * f| / (1 + |f|) with f the quadrature-path phi
/// (trigonometric) or psi (rational), evaluated on a fixed-node stencil so
/// the quadrature error cancels smoothly in the differences.
pub fn eigen_residual(
    lambda: &SpectralParam,
    x: &CartanPoint,
    m: f64,
    setting: Setting,
    h: f64,
    quad_tol: f64,
) -> Result<f64, DiffError> {
    let n = x.n();
    let op = RadialOperator::new(n, m, OperatorTag::L2, setting, h)?;
    // pick the node count once, from an adaptive pass at the center
    let probe = EvalOptions::quad(quad_tol);
    let nodes = match setting {
        Setting::Trigonometric => eval_phi(lambda, x, m, &probe),
        Setting::Rational => eval_psi(lambda, x, m, &probe),
    }
    .map_err(|e| DiffError::Eval(e.to_string()))?
    .samples_or_nodes;
    let opts = EvalOptions::quad(quad_tol).with_fixed_nodes(nodes);
    let f = |coords: &[f64]| -> Complex64 {
        let p = CartanPoint::new(coords.to_vec()).expect("stencil stays finite");
        let r = match setting {
            Setting::Trigonometric => eval_phi(lambda, &p, m, &opts),
            Setting::Rational => eval_psi(lambda, &p, m, &opts),
        };
        r.map(|v| v.value).unwrap_or(Complex64::new(f64::NAN, 0.0))
    };
    let lhs = apply_radial(&op, f, x)?;
    let center = f(x.entries());
    if !center.re.is_finite() {
        return Err(DiffError::Eval("stencil evaluation failed".into()));
    }
    let ev = match setting {
        Setting::Trigonometric => eigenvalue_l2(lambda, m, n),
        Setting::Rational => eigenvalue_l2_rational(lambda),
    };
    Ok((lhs - ev * center).norm() / (1.0 + center.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[f64]) -> CartanPoint {
        CartanPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn l1_on_plane_wave() {
        // L_1 e^{i lambda(X)} = i (sum lambda) e^{i lambda(X)}
        let lam = SpectralParam::from_real(&[0.8, -0.3, 0.4]);
        let x = pt(&[1.0, 0.3, -0.5]);
        let op = RadialOperator::new(3, 1.0, OperatorTag::L1, Setting::Rational, 1e-4).unwrap();
        let lam2 = lam.clone();
        let f = move |c: &[f64]| (Complex64::i() * lam2.pairing(c)).exp();
        let got = apply_radial(&op, &f, &x).unwrap();
        let expect = eigenvalue_l1(&lam) * f(x.entries());
        assert!((got - expect).norm() < 1e-7);
    }

    #[test]
    fn l2_on_constant_is_zero() {
        let op = RadialOperator::new(2, 2.0, OperatorTag::L2, Setting::Trigonometric, 1e-3)
            .unwrap();
        let got = apply_radial(&op, |_| Complex64::new(1.0, 0.0), &pt(&[0.7, -0.7])).unwrap();
        assert!(got.norm() < 1e-9);
    }

    #[test]
    fn l2_eigenvalue_closed_forms() {
        // n = 2: -(lambda_1^2 + lambda_2^2) - m^2/2
        let lam = SpectralParam::from_real(&[1.0, -1.0]);
        let ev = eigenvalue_l2(&lam, 2.0, 2);
        assert!((ev - Complex64::new(-4.0, 0.0)).norm() < 1e-13);
        let ev = eigenvalue_l2(&SpectralParam::from_real(&[0.0, 0.0]), 2.0, 2);
        assert!((ev - Complex64::new(-2.0, 0.0)).norm() < 1e-13);

        // general n: l_2 = -(sum lambda^2 + |rho|^2), cross-checked for
        // complex lambda too
        for n in 2..=5usize {
            for &m in &[0.5, 1.0, 2.0, 3.7] {
                let lam = SpectralParam::new(
                    (0..n)
                        .map(|k| Complex64::new(0.3 + 0.4 * k as f64, 0.1 - 0.2 * k as f64))
                        .collect(),
                )
                .unwrap();
                let rho = crate::eval::rho_vector(m, n);
                let rho2: f64 = rho.iter().map(|r| r * r).sum();
                let expect = -lam.lambda().iter().map(|l| l * l).sum::<Complex64>() - rho2;
                let got = eigenvalue_l2(&lam, m, n);
                assert!(
                    (got - expect).norm() < 1e-10 * expect.norm().max(1.0),
                    "n={n} m={m}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn stencil_wall_guard() {
        let op = RadialOperator::new(2, 1.0, OperatorTag::L2, Setting::Trigonometric, 1e-2)
            .unwrap();
        let r = apply_radial(&op, |_| Complex64::default(), &pt(&[0.05, 0.0]));
        assert_eq!(r.unwrap_err(), DiffError::StencilCrossesWall);
    }

    #[test]
    fn residual_rank2_m2_closed_form_order() {
        // at m = 2 the quadrature is effectively exact, so the residual
        // must shrink like h^2
        let lam = SpectralParam::from_real(&[1.0, -1.0]);
        let x = pt(&[1.0, -1.0]);
        let r1 = eigen_residual(&lam, &x, 2.0, Setting::Trigonometric, 2e-3, 1e-12).unwrap();
        let r2 = eigen_residual(&lam, &x, 2.0, Setting::Trigonometric, 1e-3, 1e-12).unwrap();
        assert!(r1 < 1e-4, "r1 = {r1}");
        let order = (r1 / r2).log2();
        assert!((order - 2.0).abs() < 0.4, "observed order {order}");
    }

    #[test]
    fn residual_rational_rank2() {
        let lam = SpectralParam::from_real(&[0.9, -0.4]);
        let x = pt(&[0.8, -0.6]);
        let r = eigen_residual(&lam, &x, 1.5, Setting::Rational, 1e-3, 1e-11).unwrap();
        assert!(r < 1e-5, "residual {r}");
    }

    #[test]
    fn residual_constant_at_rho_shift() {
        // lambda = -i rho makes phi identically 1; the residual reduces to
        // the eigenvalue times 1, which vanishes
        let m = 1.5;
        let n = 3;
        let rho = crate::eval::rho_vector(m, n);
        let lam = SpectralParam::new(rho.iter().map(|&r| Complex64::new(0.0, -r)).collect())
            .unwrap();
        let ev = eigenvalue_l2(&lam, m, n);
        assert!(ev.norm() < 1e-12, "eigenvalue at the shift: {ev}");
        let x = pt(&[0.9, 0.1, -0.8]);
        let r = eigen_residual(&lam, &x, m, Setting::Trigonometric, 1e-3, 1e-10).unwrap();
        assert!(r < 1e-6, "residual {r}");
    }
}
