//! The change of variables between simplex weights and interlacing nodes.
//!
//! For distinct levels a_1 > ... > a_r and nonnegative weights gamma on the
//! unit simplex, the nodes eta_1 > ... > eta_{r-1} are the roots of
//!
//!     q_1(x) = sum_i gamma_i prod_{j != i} (x - u_j)
//!
//! where u_j = e^{2 a_j} in the trigonometric setting and u_j = a_j in the
//! rational one. Consecutive brackets [u_{k+1}, u_k] each hold exactly one
//! root (the values of q_1 alternate in sign at the u's carrying positive
//! weight), so bisection is guaranteed; the inverse map and its Jacobian
//! have closed forms.
//!
//! All trigonometric computations recenter the levels so the largest is 0
//! before exponentiating; the shift drops out of every quantity computed
//! here.

use crate::cartan::BlockStructure;
use crate::Setting;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimplexError {
    #[error("weights must be nonnegative and sum to 1 (got sum offset {0:e})")]
    BadWeights(f64),
    #[error("nodes are not interlaced with the levels")]
    NotInterlaced,
    #[error("weight/level count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// A point of the unit simplex sigma_r: r nonnegative reals summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeight {
    w: Vec<f64>,
}

impl SimplexWeight {
    pub fn new(w: Vec<f64>) -> Result<Self, SimplexError> {
        let sum: f64 = w.iter().sum();
        if w.iter().any(|&v| !(v >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(SimplexError::BadWeights(sum - 1.0));
        }
        Ok(Self { w })
    }

    /// Builds from raw nonnegative masses, normalizing their sum to 1.
    pub fn normalized(mut w: Vec<f64>) -> Result<Self, SimplexError> {
        let sum: f64 = w.iter().sum();
        if !(sum > 0.0) || w.iter().any(|&v| !(v >= 0.0)) {
            return Err(SimplexError::BadWeights(sum - 1.0));
        }
        w.iter_mut().for_each(|v| *v /= sum);
        Ok(Self { w })
    }

    pub fn r(&self) -> usize {
        self.w.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }
}

/// Precomputed level data for the weight/node maps in one setting.
#[derive(Debug, Clone)]
pub struct NodeTransform {
    setting: Setting,
    levels: Vec<f64>,
    shift: f64,
    /// mapped levels, strictly decreasing: e^{2(a_j - shift)} or a_j
    u: Vec<f64>,
    /// prod_{j != p} (u_j - u_p)
    denoms: Vec<f64>,
}

impl NodeTransform {
    pub fn from_levels(levels: &[f64], setting: Setting) -> Self {
        assert!(
            levels.windows(2).all(|w| w[0] > w[1]),
            "levels must be strictly decreasing"
        );
        let shift = match setting {
            Setting::Trigonometric => levels.first().copied().unwrap_or(0.0),
            Setting::Rational => 0.0,
        };
        let u: Vec<f64> = levels
            .iter()
            .map(|&a| match setting {
                Setting::Trigonometric => (2.0 * (a - shift)).exp(),
                Setting::Rational => a,
            })
            .collect();
        let denoms = (0..u.len())
            .map(|p| {
                u.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != p)
                    .map(|(_, &uj)| uj - u[p])
                    .product()
            })
            .collect();
        Self {
            setting,
            levels: levels.to_vec(),
            shift,
            u,
            denoms,
        }
    }

    pub fn new(blocks: &BlockStructure, setting: Setting) -> Self {
        Self::from_levels(blocks.levels(), setting)
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn r(&self) -> usize {
        self.u.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    fn map(&self, eta: f64) -> f64 {
        match self.setting {
            Setting::Trigonometric => (2.0 * (eta - self.shift)).exp(),
            Setting::Rational => eta,
        }
    }

    fn unmap(&self, u: f64) -> f64 {
        match self.setting {
            Setting::Trigonometric => 0.5 * u.ln() + self.shift,
            Setting::Rational => u,
        }
    }
}

/// Nodes from weights: the r-1 roots of q_1, sorted decreasing, each lying
/// in its bracket [a_{k+1}, a_k]. Zero weights contribute their level as an
/// exact boundary root (the corresponding factor of q_1 is analytic, so no
/// zero-width bisection happens). r < 2 yields the empty list.
pub fn roots_from_weights(gamma: &SimplexWeight, t: &NodeTransform) -> Result<Vec<f64>, SimplexError> {
    if gamma.r() != t.r() {
        return Err(SimplexError::DimensionMismatch(gamma.r(), t.r()));
    }
    let r = t.r();
    if r < 2 {
        return Ok(Vec::new());
    }
    let w = gamma.weights();
    let support: Vec<usize> = (0..r).filter(|&p| w[p] > 0.0).collect();

    // exact roots at levels outside the support
    let mut roots: Vec<f64> = (0..r)
        .filter(|p| !support.contains(p))
        .map(|p| t.u[p])
        .collect();

    // one root of q_0 between consecutive supported levels
    let su: Vec<f64> = support.iter().map(|&p| t.u[p]).collect();
    let sw: Vec<f64> = support.iter().map(|&p| w[p]).collect();
    let q0 = |x: f64| -> f64 {
        (0..su.len())
            .map(|s| {
                sw[s]
                    * su.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != s)
                        .map(|(_, &uj)| x - uj)
                        .product::<f64>()
            })
            .sum()
    };
    let dq0 = |x: f64| -> f64 {
        (0..su.len())
            .map(|s| {
                sw[s]
                    * (0..su.len())
                        .filter(|&l| l != s)
                        .map(|l| {
                            su.iter()
                                .enumerate()
                                .filter(|&(j, _)| j != s && j != l)
                                .map(|(_, &uj)| x - uj)
                                .product::<f64>()
                        })
                        .sum::<f64>()
            })
            .sum()
    };
    for k in 0..su.len().saturating_sub(1) {
        // bracket [su[k+1], su[k]]; q0 alternates sign at supported levels
        let (mut lo, mut hi) = (su[k + 1], su[k]);
        let (flo, fhi) = (q0(lo), q0(hi));
        debug_assert!(
            flo == 0.0 || fhi == 0.0 || (flo < 0.0) != (fhi < 0.0),
            "bracket lost its sign change"
        );
        let increasing = fhi > flo;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break; // interval at floating resolution
            }
            let fm = q0(mid);
            if (fm > 0.0) == increasing {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * hi.abs().max(lo.abs()) {
                break;
            }
        }
        let mut root = 0.5 * (lo + hi);
        // one safeguarded Newton polish
        let d = dq0(root);
        if d != 0.0 {
            let step = root - q0(root) / d;
            if step > lo && step < hi {
                root = step;
            }
        }
        roots.push(root);
    }

    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let a = &t.levels;
    let eta: Vec<f64> = roots
        .into_iter()
        .enumerate()
        .map(|(k, u)| t.unmap(u).clamp(a[k + 1], a[k]))
        .collect();
    Ok(eta)
}

/// Weights from nodes: gamma_p = prod_j (u(eta_j) - u_p) / prod_{j != p}
/// (u_j - u_p). Inverse of `roots_from_weights` up to root ordering.
pub fn weights_from_nodes(eta: &[f64], t: &NodeTransform) -> Result<SimplexWeight, SimplexError> {
    let r = t.r();
    if eta.len() + 1 != r {
        return Err(SimplexError::DimensionMismatch(eta.len() + 1, r));
    }
    let a = &t.levels;
    let tol = 1e-12 * (1.0 + a[0].abs().max(a[r - 1].abs()));
    if !(0..r - 1).all(|k| eta[k] >= a[k + 1] - tol && eta[k] <= a[k] + tol) {
        return Err(SimplexError::NotInterlaced);
    }
    let ue: Vec<f64> = eta.iter().map(|&e| t.map(e)).collect();
    let w: Vec<f64> = (0..r)
        .map(|p| {
            let num: f64 = ue.iter().map(|&u| u - t.u[p]).product();
            (num / t.denoms[p]).max(0.0)
        })
        .collect();
    SimplexWeight::normalized(w)
}

/// |d(gamma_1..gamma_{r-1}) / d(eta_1..eta_{r-1})| in closed form.
///
/// Trigonometric: 2^{r-1} prod_q e^{2 eta_q} prod_{i<j<r} (e^{2 eta_i} -
/// e^{2 eta_j}) / prod_{i<j<=r} (e^{2 a_i} - e^{2 a_j}); rational: the same
/// with exponentials replaced by the variables themselves (and no factor
/// 2^{r-1} prod e^{2 eta}). Strictly positive on the open box; returns 0
/// when nodes collide on the boundary (r >= 3).
pub fn jacobian_weights_to_nodes(eta: &[f64], t: &NodeTransform) -> f64 {
    let r = t.r();
    assert_eq!(eta.len() + 1, r);
    if r < 2 {
        return 1.0;
    }
    let ue: Vec<f64> = eta.iter().map(|&e| t.map(e)).collect();
    let mut v = 1.0;
    if t.setting == Setting::Trigonometric {
        v = 2f64.powi(r as i32 - 1) * ue.iter().product::<f64>();
    }
    for i in 0..r - 1 {
        for j in i + 1..r - 1 {
            v *= ue[i] - ue[j];
        }
    }
    let mut denom = 1.0;
    for i in 0..r {
        for j in i + 1..r {
            denom *= t.u[i] - t.u[j];
        }
    }
    (v / denom).max(0.0)
}

/// eta-independent part of log[ prod_p gamma_p(eta)^{m n_p/2 - 1} *
/// |d gamma / d eta| ]: the gamma denominators and the Jacobian's level
/// factors. Together with `dirichlet_smooth_log` and the endpoint
/// monomials absorbed by the Jacobi rules this reassembles the simplex
/// (Dirichlet-weight) form of the recursion integrand on the eta box.
pub(crate) fn dirichlet_const_log(t: &NodeTransform, mults: &[usize], m: f64) -> f64 {
    let r = t.r();
    let mut acc = 0.0;
    for p in 0..r {
        let e = 0.5 * m * mults[p] as f64 - 1.0;
        acc -= e * t.denoms[p].abs().ln();
    }
    match t.setting {
        Setting::Trigonometric => {
            acc += (r as f64 - 1.0) * std::f64::consts::LN_2;
            for i in 0..r {
                for j in i + 1..r {
                    acc -= (t.u[i] - t.u[j]).ln();
                }
            }
        }
        Setting::Rational => {
            for i in 0..r {
                for j in i + 1..r {
                    acc -= (t.levels[i] - t.levels[j]).ln();
                }
            }
        }
    }
    acc
}

/// eta-dependent part of the simplex-route integrand log, with the two
/// vanishing linear factors of each coordinate divided out (they live in
/// the Gauss–Jacobi weights; the exponents match `endpoint_exponents`).
pub(crate) fn dirichlet_smooth_log(
    t: &NodeTransform,
    mults: &[usize],
    m: f64,
    eta: &[f64],
) -> f64 {
    use crate::special::{ln_diff_exp2, ln_diff_exp2_over_gap};
    let r = t.r();
    debug_assert_eq!(eta.len() + 1, r);
    let a = &t.levels;
    let c = t.shift;
    let trig = t.setting == Setting::Trigonometric;
    let mut acc = 0.0;
    for p in 0..r {
        let e = 0.5 * m * mults[p] as f64 - 1.0;
        if e == 0.0 {
            continue;
        }
        for (j, &ej) in eta.iter().enumerate() {
            // numerator factor |u(eta_j) - u_p|; vanishes when p = j (upper
            // wall of dim j) or p = j + 1 (lower wall)
            if p == j {
                if trig {
                    acc += e * ln_diff_exp2_over_gap(a[p] - c, ej - c);
                }
            } else if p == j + 1 {
                if trig {
                    acc += e * ln_diff_exp2_over_gap(ej - c, a[p] - c);
                }
            } else {
                let (hi, lo) = if ej > a[p] { (ej, a[p]) } else { (a[p], ej) };
                acc += if trig {
                    e * ln_diff_exp2(hi - c, lo - c)
                } else {
                    e * (hi - lo).ln()
                };
            }
        }
    }
    // Jacobian of the weight-to-node map
    if trig {
        for &ej in eta {
            acc += 2.0 * (ej - c);
        }
        for i in 0..r - 1 {
            for j in i + 1..r - 1 {
                acc += ln_diff_exp2(eta[i] - c, eta[j] - c);
            }
        }
    } else {
        for i in 0..r - 1 {
            for j in i + 1..r - 1 {
                acc += (eta[i] - eta[j]).ln();
            }
        }
    }
    acc
}
