//! Recursive evaluation of the generalized spherical functions.
//!
//! Three W-invariant eigenfunctions are evaluated through one rank
//! recursion: the trigonometric phi and its shift chi = phi_{lambda - i
//! rho}, and the rational psi. Each recursion step projects to the closed
//! chamber, splits off the last spectral component as a phase, and
//! integrates the next-lower-rank function over the free coordinates of
//! the interlacing box.
//!
//! Two algebraically distinct quadrature assemblies are kept side by side
//! on purpose: the spherical route integrates the closed-form weight
//! (S-tilde or T times the pair measure), while the simplex route
//! integrates the Dirichlet weight of the simplex form through the
//! weight-to-node map and its Jacobian. phi evaluated directly and phi
//! evaluated as chi at the rho-shifted parameter must agree, which pins
//! sign and shift conventions. The sign of the shift itself is fixed by
//! chi_0 = 1, i.e. phi_lambda = chi_{lambda + i rho} with rho_k =
//! (m/2)(n + 1 - 2k).
//!
//! The Monte-Carlo path estimates chi and psi as plain means of
//! e^{i lambda(H)} over draws of the representing measure, and phi as the
//! mean weighted by e^{-rho(H)}.

use crate::cartan::{blocks_of, project_to_chamber, BlockStructure, CartanPoint};
use crate::density;
use crate::kernels;
use crate::quadrature::{cached_jacobi, JacobiRule};
use crate::simplex::NodeTransform;
use crate::special::ln_gamma;
use crate::{simplex, Setting};
use arrayvec::ArrayVec;
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

/// Tensor quadrature is capped here; beyond it the cost explodes and the
/// Monte-Carlo path takes over.
pub const MAX_QUAD_RANK: usize = 6;
/// Hard cap on nodes per dimension.
pub const MAX_NODES: usize = 512;

const STACK: usize = 8;
type Levels = ArrayVec<f64, STACK>;
type Mults = ArrayVec<usize, STACK>;
type Lambda = ArrayVec<Complex64, STACK>;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("multiplicity must be positive")]
    NonPositiveMultiplicity,
    #[error("lambda and X must have the same length")]
    DimensionMismatch,
    #[error("spectral parameter entries must be finite")]
    BadLambda,
    #[error("tensor quadrature is capped at rank {MAX_QUAD_RANK}, got {0}; use the Monte-Carlo path")]
    RankUnsupported(usize),
    #[error("node budget too small (need at least 4 per dimension)")]
    BudgetTooSmall,
    #[error(transparent)]
    Sampling(#[from] crate::density::DensityError),
}

/// Spectral parameter: n complex numbers, paired positionally with the
/// coordinates of X.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParam {
    lambda: Vec<Complex64>,
}

impl SpectralParam {
    pub fn new(lambda: Vec<Complex64>) -> Result<Self, EvalError> {
        if lambda.is_empty() {
            return Err(EvalError::BadLambda);
        }
        if lambda.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) {
            return Err(EvalError::BadLambda);
        }
        Ok(Self { lambda })
    }

    pub fn from_real(re: &[f64]) -> Self {
        Self {
            lambda: re.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    /// lambda(H) = sum_k lambda_k h_k.
    pub fn pairing(&self, h: &[f64]) -> Complex64 {
        self.lambda
            .iter()
            .zip(h)
            .map(|(l, &x)| l * x)
            .sum()
    }

    /// lambda + i t rho^{(m)}.
    pub fn rho_shifted(&self, m: f64, t: f64) -> SpectralParam {
        let rho = rho_vector(m, self.n());
        SpectralParam {
            lambda: self
                .lambda
                .iter()
                .zip(&rho)
                .map(|(l, &r)| l + Complex64::new(0.0, t * r))
                .collect(),
        }
    }

    /// Componentwise scale lambda / c.
    pub fn scaled(&self, c: f64) -> SpectralParam {
        SpectralParam {
            lambda: self.lambda.iter().map(|l| l / c).collect(),
        }
    }
}

/// rho^{(m)} as a vector: rho_k = (m/2)(n + 1 - 2k), k = 1..n.
pub fn rho_vector(m: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| 0.5 * m * (n as f64 + 1.0 - 2.0 * k as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quad,
    Mc,
}

/// Which of the two quadrature assemblies to run. `Direct` is each
/// function's own recursion (spherical weights for phi and psi, Dirichlet
/// weights for chi); `Shifted` evaluates through the other function's
/// recursion via the rho-shift (for psi, through the simplex form at the
/// same parameter). Kept as a first-class option so the two routes can be
/// cross-checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRoute {
    Direct,
    Shifted,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub method: Method,
    /// Quad budget: maximum nodes per dimension (capped at 512).
    pub nodes: usize,
    /// Monte-Carlo budget: sample count.
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub route: QuadRoute,
    /// Run a single quadrature pass at exactly this node count instead of
    /// refining. No error estimate is produced (it reports 0).
    pub fixed_nodes: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            method: Method::Quad,
            nodes: MAX_NODES,
            samples: 20_000,
            tol: 1e-8,
            seed: 0,
            route: QuadRoute::Direct,
            fixed_nodes: None,
        }
    }
}

impl EvalOptions {
    pub fn quad(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn mc(samples: usize, seed: u64) -> Self {
        Self {
            method: Method::Mc,
            samples,
            seed,
            ..Self::default()
        }
    }

    pub fn with_route(mut self, route: QuadRoute) -> Self {
        self.route = route;
        self
    }

    pub fn with_fixed_nodes(mut self, nodes: usize) -> Self {
        self.fixed_nodes = Some(nodes);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Quadrature: the last refinement delta. Monte Carlo: the standard
    /// error of the mean. Fixed-node runs report 0.
    pub error_estimate: f64,
    pub method: Method,
    /// Nodes per dimension (quad) or sample count (mc).
    pub samples_or_nodes: usize,
    /// False when the node budget ran out before the tolerance was met.
    pub converged: bool,
}

fn validate(lambda: &SpectralParam, x: &CartanPoint, m: f64) -> Result<(), EvalError> {
    if !(m > 0.0) {
        return Err(EvalError::NonPositiveMultiplicity);
    }
    if lambda.n() != x.n() {
        return Err(EvalError::DimensionMismatch);
    }
    Ok(())
}

/// The trigonometric spherical function phi_lambda(e^X).
pub fn eval_phi(
    lambda: &SpectralParam,
    x: &CartanPoint,
    m: f64,
    opts: &EvalOptions,
) -> Result<EvalResult, EvalError> {
    validate(lambda, x, m)?;
    match opts.method {
        Method::Quad => {
            let blocks = blocks_of(&project_to_chamber(x).0);
            match opts.route {
                QuadRoute::Direct => quad_driver(
                    Assembly::Spherical,
                    Setting::Trigonometric,
                    lambda.lambda(),
                    &blocks,
                    m,
                    opts,
                ),
                QuadRoute::Shifted => {
                    // phi_lambda = chi_{lambda + i rho}
                    let shifted = lambda.rho_shifted(m, 1.0);
                    quad_driver(
                        Assembly::Dirichlet,
                        Setting::Trigonometric,
                        shifted.lambda(),
                        &blocks,
                        m,
                        opts,
                    )
                }
            }
        }
        Method::Mc => mc_eval(McKind::Phi, lambda, x, m, opts),
    }
}

/// The shifted function chi_lambda = phi_{lambda - i rho}, whose recursion
/// is a Dirichlet expectation.
pub fn eval_chi(
    lambda: &SpectralParam,
    x: &CartanPoint,
    m: f64,
    opts: &EvalOptions,
) -> Result<EvalResult, EvalError> {
    validate(lambda, x, m)?;
    match opts.method {
        Method::Quad => {
            let blocks = blocks_of(&project_to_chamber(x).0);
            match opts.route {
                QuadRoute::Direct => quad_driver(
                    Assembly::Dirichlet,
                    Setting::Trigonometric,
                    lambda.lambda(),
                    &blocks,
                    m,
                    opts,
                ),
                QuadRoute::Shifted => {
                    // chi_lambda = phi_{lambda - i rho}
                    let shifted = lambda.rho_shifted(m, -1.0);
                    quad_driver(
                        Assembly::Spherical,
                        Setting::Trigonometric,
                        shifted.lambda(),
                        &blocks,
                        m,
                        opts,
                    )
                }
            }
        }
        Method::Mc => mc_eval(McKind::Chi, lambda, x, m, opts),
    }
}

/// The rational (Dunkl-setting) spherical function psi_lambda(e^X). No
/// rho shift exists here; the `Shifted` route is the simplex-form
/// assembly at the same parameter.
pub fn eval_psi(
    lambda: &SpectralParam,
    x: &CartanPoint,
    m: f64,
    opts: &EvalOptions,
) -> Result<EvalResult, EvalError> {
    validate(lambda, x, m)?;
    match opts.method {
        Method::Quad => {
            let blocks = blocks_of(&project_to_chamber(x).0);
            let assembly = match opts.route {
                QuadRoute::Direct => Assembly::Spherical,
                QuadRoute::Shifted => Assembly::Dirichlet,
            };
            quad_driver(assembly, Setting::Rational, lambda.lambda(), &blocks, m, opts)
        }
        Method::Mc => mc_eval(McKind::Psi, lambda, x, m, opts),
    }
}

/// Deviations |psi_lambda(X) - phi_{lambda/eps}(e^{eps X})| along a list of
/// epsilons, computed on the quadrature path. The rational function is the
/// epsilon -> 0 limit, so the deviations should decrease toward quadrature
/// tolerance.
pub fn rational_limit_probe(
    lambda: &SpectralParam,
    x: &CartanPoint,
    m: f64,
    eps_list: &[f64],
    opts: &EvalOptions,
) -> Result<Vec<(f64, f64)>, EvalError> {
    validate(lambda, x, m)?;
    let psi = eval_psi(lambda, x, m, opts)?;
    let mut out = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let lam_eps = lambda.scaled(eps);
        let x_eps = CartanPoint::new(x.entries().iter().map(|&v| eps * v).collect())
            .expect("scaled point stays finite");
        let phi = eval_phi(&lam_eps, &x_eps, m, opts)?;
        out.push((eps, (psi.value - phi.value).norm()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Assembly {
    /// Closed-form weights (S-tilde or T) times the pair measure.
    Spherical,
    /// Dirichlet weight of the simplex form, through gamma(eta) and the
    /// map Jacobian.
    Dirichlet,
}

fn node_sequence(rank: usize, budget: usize) -> Vec<usize> {
    let (start, growth) = match rank {
        0..=3 => (48usize, 2.0f64),
        4 => (16, 1.5),
        _ => (8, 1.4),
    };
    let mut v = Vec::new();
    let mut c = start.min(budget);
    loop {
        v.push(c);
        if c >= budget {
            break;
        }
        c = ((c as f64 * growth).ceil() as usize).min(budget);
    }
    if v.len() == 1 && v[0] > 4 {
        let prev = ((v[0] as f64 / growth).floor() as usize).max(4);
        v.insert(0, prev);
    }
    v
}

fn quad_driver(
    assembly: Assembly,
    setting: Setting,
    lambda: &[Complex64],
    blocks: &BlockStructure,
    m: f64,
    opts: &EvalOptions,
) -> Result<EvalResult, EvalError> {
    let n = blocks.n();
    if n > MAX_QUAD_RANK {
        return Err(EvalError::RankUnsupported(n));
    }
    let budget = opts.nodes.min(MAX_NODES);
    if budget < 4 {
        return Err(EvalError::BudgetTooSmall);
    }
    let mut lam: Lambda = ArrayVec::new();
    lam.try_extend_from_slice(lambda).expect("rank fits the stack");
    let mut lv: Levels = ArrayVec::new();
    lv.try_extend_from_slice(blocks.levels()).unwrap();
    let mut ml: Mults = ArrayVec::new();
    ml.try_extend_from_slice(blocks.mults()).unwrap();

    if let Some(fx) = opts.fixed_nodes {
        let fx = fx.min(MAX_NODES).max(1);
        let value = quad_rec(assembly, setting, &lam, &lv, &ml, m, fx)?;
        return Ok(EvalResult {
            value,
            error_estimate: 0.0,
            method: Method::Quad,
            samples_or_nodes: fx,
            converged: true,
        });
    }

    let counts = node_sequence(n, budget);
    let mut prev = quad_rec(assembly, setting, &lam, &lv, &ml, m, counts[0])?;
    let mut value = prev;
    let mut used = counts[0];
    let mut delta = f64::INFINITY;
    let mut converged = counts.len() == 1; // exact base cases need no refinement
    for &c in &counts[1..] {
        let cur = quad_rec(assembly, setting, &lam, &lv, &ml, m, c)?;
        delta = (cur - prev).norm();
        value = cur;
        used = c;
        if delta <= opts.tol * value.norm().max(1.0) {
            converged = true;
            break;
        }
        prev = cur;
    }
    if n == 1 || blocks.rank() == 1 {
        // closed-form branches: no quadrature error at all
        delta = 0.0;
        converged = true;
    }
    Ok(EvalResult {
        value,
        error_estimate: if delta.is_finite() { delta } else { 0.0 },
        method: Method::Quad,
        samples_or_nodes: used,
        converged,
    })
}

/// One fixed-node pass of the rank recursion. Inner levels integrate
/// smaller boxes whose endpoint behavior is sharper, so they run with a
/// mildly larger node count than the level above.
fn quad_rec(
    assembly: Assembly,
    setting: Setting,
    lambda: &[Complex64],
    levels: &[f64],
    mults: &[usize],
    m: f64,
    nodes: usize,
) -> Result<Complex64, EvalError> {
    let n: usize = mults.iter().sum();
    if n == 1 {
        return Ok((Complex64::i() * lambda[0] * levels[0]).exp());
    }
    if levels.len() == 1 {
        // X = cI: phase only (sum of rho components is zero, so the same
        // formula serves phi, chi and psi)
        let lam_sum: Complex64 = lambda.iter().sum();
        return Ok((Complex64::i() * levels[0] * lam_sum).exp());
    }
    let r = levels.len();
    let dims = r - 1;
    let lam_n = lambda[n - 1];
    let trace: f64 = levels.iter().zip(mults).map(|(a, &k)| a * k as f64).sum();
    let phase = (Complex64::i() * lam_n * trace).exp();

    let mut lam0: Lambda = ArrayVec::new();
    for l in &lambda[..n - 1] {
        lam0.push(l - lam_n);
    }

    let mut log_c = ln_gamma(0.5 * m * n as f64);
    for &ni in mults {
        log_c -= ln_gamma(0.5 * m * ni as f64);
    }
    let transform = match assembly {
        Assembly::Spherical => {
            log_c += kernels::pair_prefactor_log(levels, mults, m, setting);
            None
        }
        Assembly::Dirichlet => {
            let t = NodeTransform::from_levels(levels, setting);
            log_c += simplex::dirichlet_const_log(&t, mults, m);
            Some(t)
        }
    };

    let expo = kernels::endpoint_exponents(mults, m);
    let mut rules: ArrayVec<Arc<JacobiRule>, STACK> = ArrayVec::new();
    for &(alpha, beta) in &expo {
        rules.push(cached_jacobi(alpha, beta, nodes).map_err(|_| EvalError::NonPositiveMultiplicity)?);
    }
    let mut scale_log = log_c;
    for k in 0..dims {
        scale_log += rules[k].log_interval_scale(levels[k + 1], levels[k]);
    }

    // rank 2: a single dimension whose inner factor is a plane wave
    if n == 2 {
        let rule = &rules[0];
        let (lo, hi) = (levels[1], levels[0]);
        let mu = lam0[0];
        let (alpha, beta) = expo[0];
        let trig = setting == Setting::Trigonometric;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &xref) in rule.nodes().iter().enumerate() {
            let e = 0.5 * ((hi - lo) * xref + (hi + lo));
            let mut lw = scale_log + rule.log_weights()[i];
            match assembly {
                Assembly::Spherical => {
                    if trig {
                        lw += alpha * crate::special::ln_sinhc(hi - e)
                            + beta * crate::special::ln_sinhc(e - lo);
                    }
                }
                Assembly::Dirichlet => {
                    lw += simplex::dirichlet_smooth_log(
                        transform.as_ref().unwrap(),
                        mults,
                        m,
                        std::slice::from_ref(&e),
                    );
                }
            }
            acc += (Complex64::i() * mu * e + lw).exp();
        }
        return Ok(phase * acc);
    }

    let mut idx = [0usize; STACK];
    let mut eta = [0f64; STACK];
    for k in 0..dims {
        eta[k] = rules[k].node_on(0, levels[k + 1], levels[k]);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    'outer: loop {
        let mut lw = scale_log;
        for k in 0..dims {
            lw += rules[k].log_weights()[idx[k]];
        }
        lw += match assembly {
            Assembly::Spherical => {
                kernels::integrand_smooth_log(levels, mults, m, setting, &eta[..dims])
            }
            Assembly::Dirichlet => simplex::dirichlet_smooth_log(
                transform.as_ref().unwrap(),
                mults,
                m,
                &eta[..dims],
            ),
        };
        let (clev, cmul) = child_blocks(levels, mults, &eta[..dims]);
        let inner = quad_rec(assembly, setting, &lam0, &clev, &cmul, m, inner_nodes(nodes))?;
        acc += lw.exp() * inner;
        // odometer
        let mut k = 0;
        loop {
            if k == dims {
                break 'outer;
            }
            idx[k] += 1;
            if idx[k] < nodes {
                eta[k] = rules[k].node_on(idx[k], levels[k + 1], levels[k]);
                break;
            }
            idx[k] = 0;
            eta[k] = rules[k].node_on(0, levels[k + 1], levels[k]);
            k += 1;
        }
    }
    Ok(phase * acc)
}

/// Child point of the recursion, as a block structure: each level keeps
/// multiplicity n_i - 1 and the free coordinates slot in between. Interior
/// quadrature nodes keep the sequence strictly decreasing.
fn child_blocks(levels: &[f64], mults: &[usize], eta: &[f64]) -> (Levels, Mults) {
    let r = levels.len();
    let mut lv: Levels = ArrayVec::new();
    let mut ml: Mults = ArrayVec::new();
    for i in 0..r {
        if mults[i] > 1 {
            lv.push(levels[i]);
            ml.push(mults[i] - 1);
        }
        if i < r - 1 {
            lv.push(eta[i]);
            ml.push(1);
        }
    }
    (lv, ml)
}

fn inner_nodes(nodes: usize) -> usize {
    (nodes + nodes / 2).min(MAX_NODES)
}

#[derive(Debug, Clone, Copy)]
enum McKind {
    Phi,
    Chi,
    Psi,
}

fn mc_eval(
    kind: McKind,
    lambda: &SpectralParam,
    x: &CartanPoint,
    m: f64,
    opts: &EvalOptions,
) -> Result<EvalResult, EvalError> {
    let setting = match kind {
        McKind::Phi | McKind::Chi => Setting::Trigonometric,
        McKind::Psi => Setting::Rational,
    };
    let draws = density::sample_measure(x, m, setting, opts.samples, opts.seed)?;
    let rho = rho_vector(m, x.n());
    let terms: Vec<Complex64> = draws
        .iter()
        .map(|h| {
            let mut arg = Complex64::i() * lambda.pairing(h.entries());
            if matches!(kind, McKind::Phi) {
                let rp: f64 = rho.iter().zip(h.entries()).map(|(r, v)| r * v).sum();
                arg -= rp;
            }
            arg.exp()
        })
        .collect();
    let count = terms.len() as f64;
    let mean = terms.iter().sum::<Complex64>() / count;
    let var = terms
        .iter()
        .map(|t| (t - mean).norm_sqr())
        .sum::<f64>()
        / (count * (count - 1.0).max(1.0));
    Ok(EvalResult {
        value: mean,
        error_estimate: var.sqrt(),
        method: Method::Mc,
        samples_or_nodes: opts.samples,
        converged: true,
    })
}
