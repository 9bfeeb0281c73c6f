//! Numerical integration backends: Gauss–Jacobi rules whose weight absorbs
//! the endpoint exponents of the recursion integrands, and exact seeded
//! Dirichlet sampling over the simplex.

use crate::cartan::BlockStructure;
use crate::simplex::SimplexWeight;
use crate::special::ln_gamma;
use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuadError {
    #[error("non-integrable exponent: alpha and beta must be > -1")]
    NonIntegrableExponent,
    #[error("a rule needs at least one node")]
    BadDegree,
    #[error("Dirichlet parameters must be positive")]
    BadConcentration,
}

/// A Gauss–Jacobi rule on the reference interval [-1, 1] for the weight
/// (1 - x)^alpha (1 + x)^beta: nodes strictly inside the interval, positive
/// weights summing to the weight-function mass, exact for polynomials of
/// degree <= 2 count - 1.
#[derive(Debug, Clone)]
pub struct JacobiRule {
    alpha: f64,
    beta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
}

impl JacobiRule {
    /// Golub–Welsch: nodes are the eigenvalues of the symmetric tridiagonal
    /// recurrence matrix, weights come from the first eigenvector rows.
    pub fn new(count: usize, alpha: f64, beta: f64) -> Result<Self, QuadError> {
        if count == 0 {
            return Err(QuadError::BadDegree);
        }
        if !(alpha > -1.0 && alpha.is_finite() && beta > -1.0 && beta.is_finite()) {
            return Err(QuadError::NonIntegrableExponent);
        }
        let n = count;
        let mut mat = nalgebra::DMatrix::<f64>::zeros(n, n);
        let ab = alpha + beta;
        mat[(0, 0)] = (beta - alpha) / (ab + 2.0);
        for k in 1..n {
            let kf = k as f64;
            let denom = 2.0 * kf + ab;
            mat[(k, k)] = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
            let b = if k == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                    / (denom * denom * (denom + 1.0) * (denom - 1.0))
            };
            let off = b.sqrt();
            mat[(k - 1, k)] = off;
            mat[(k, k - 1)] = off;
        }
        let eig = mat.symmetric_eigen();
        // total mass of the weight function on [-1, 1]
        let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)
            + ln_gamma(beta + 1.0)
            - ln_gamma(ab + 2.0))
        .exp();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mu0 * v * v)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        Ok(Self {
            alpha,
            beta,
            nodes: pairs.iter().map(|p| p.0).collect(),
            log_weights: weights.iter().map(|w| w.ln()).collect(),
            weights,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Reference nodes on (-1, 1), ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Reference weights (for the weight function mass on [-1, 1]).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Natural logs of the reference weights.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Node i mapped to [a, b].
    pub fn node_on(&self, i: usize, a: f64, b: f64) -> f64 {
        0.5 * ((b - a) * self.nodes[i] + (b + a))
    }

    /// log of the extra factor each weight picks up on [a, b]:
    /// ((b - a)/2)^(alpha + beta + 1).
    pub fn log_interval_scale(&self, a: f64, b: f64) -> f64 {
        (self.alpha + self.beta + 1.0) * (0.5 * (b - a)).ln()
    }

    /// Approximates the weighted integral of `f` over [a, b]:
    /// int_a^b f(t) (b - t)^alpha (t - a)^beta dt.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let scale = self.log_interval_scale(a, b).exp();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(self.node_on_ref(x, a, b)))
            .sum::<f64>()
            * scale
    }

    fn node_on_ref(&self, x: f64, a: f64, b: f64) -> f64 {
        0.5 * ((b - a) * x + (b + a))
    }
}

/// Rule construction with the interval bound in, per the module contract:
/// int_a^b f(t) (b - t)^alpha (t - a)^beta dt ~= sum_i w_i f(t_i).
pub fn jacobi_rule(
    a: f64,
    b: f64,
    alpha: f64,
    beta: f64,
    count: usize,
) -> Result<(Vec<f64>, Vec<f64>), QuadError> {
    assert!(b > a, "empty interval");
    let rule = cached_jacobi(alpha, beta, count)?;
    let scale = rule.log_interval_scale(a, b).exp();
    let nodes = (0..count).map(|i| rule.node_on(i, a, b)).collect();
    let weights = rule.weights().iter().map(|w| w * scale).collect();
    Ok((nodes, weights))
}

/// Gauss–Legendre rule on [a, b] (the alpha = beta = 0 special case).
pub fn legendre_rule(a: f64, b: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    jacobi_rule(a, b, 0.0, 0.0, count).expect("alpha = beta = 0 is always valid")
}

type RuleKey = (u64, u64, usize);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<JacobiRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<JacobiRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached reference rules: construction is an eigen decomposition, reuse is
/// a hash lookup. Rules are immutable and shared across threads.
pub fn cached_jacobi(alpha: f64, beta: f64, count: usize) -> Result<Arc<JacobiRule>, QuadError> {
    let key = (alpha.to_bits(), beta.to_bits(), count);
    if let Some(rule) = rule_cache().lock().unwrap().get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(JacobiRule::new(count, alpha, beta)?);
    rule_cache().lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

/// Seeded sampler for Dirichlet(alpha_1, ..., alpha_r) on the simplex.
///
/// Draw `index` is generated from its own counter-derived stream of a
/// ChaCha8 generator, so a (seed, index) pair determines the draw and
/// batches can be produced in parallel in any order.
#[derive(Debug, Clone)]
pub struct DirichletSampler {
    alpha: Vec<f64>,
    seed: u64,
}

impl DirichletSampler {
    pub fn new(alpha: Vec<f64>, seed: u64) -> Result<Self, QuadError> {
        if alpha.is_empty() || alpha.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(QuadError::BadConcentration);
        }
        Ok(Self { alpha, seed })
    }

    /// Concentrations m n_i / 2 from the block structure.
    pub fn for_blocks(blocks: &BlockStructure, m: f64, seed: u64) -> Result<Self, QuadError> {
        let alpha = blocks.mults().iter().map(|&ni| 0.5 * m * ni as f64).collect();
        Self::new(alpha, seed)
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The draw at a given index.
    pub fn sample_at(&self, index: u64) -> SimplexWeight {
        let mut rng = rng_for(self.seed, index);
        draw_dirichlet(&self.alpha, &mut rng)
    }

    /// `count` i.i.d. draws (indices 0..count).
    pub fn sample(&self, count: usize) -> Vec<SimplexWeight> {
        use rayon::prelude::*;
        (0..count as u64)
            .into_par_iter()
            .map(|i| self.sample_at(i))
            .collect()
    }
}

/// Stream setup for counter-based seeding: independent ChaCha streams per
/// draw index under one 64-bit seed.
pub(crate) fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One Dirichlet draw from normalized independent Gamma variates. The
/// underlying Gamma sampler covers shapes below 1 (boosted Marsaglia–Tsang),
/// which the small concentrations m n_i / 2 < 1 need.
pub(crate) fn draw_dirichlet(alpha: &[f64], rng: &mut ChaCha8Rng) -> SimplexWeight {
    if alpha.len() == 1 {
        return SimplexWeight::new(vec![1.0]).unwrap();
    }
    loop {
        let g: Vec<f64> = alpha
            .iter()
            .map(|&a| {
                rand_distr::Gamma::new(a, 1.0)
                    .expect("positive shape")
                    .sample(rng)
            })
            .collect();
        if g.iter().sum::<f64>() > 0.0 {
            return SimplexWeight::normalized(g).expect("gamma draws are nonnegative");
        }
        // total underflow (possible for very small shapes); redraw from the
        // same stream, still deterministic per (seed, index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_legendre() {
        let rule = JacobiRule::new(2, 0.0, 0.0).unwrap();
        let inv_sqrt3 = 1.0 / 3f64.sqrt();
        assert!((rule.nodes()[0] + inv_sqrt3).abs() < 1e-15);
        assert!((rule.nodes()[1] - inv_sqrt3).abs() < 1e-15);
        assert!((rule.weights()[0] - 1.0).abs() < 1e-14);
        assert!((rule.weights()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exactness_degree_five() {
        // 3 nodes integrate t^4 on [-1, 1] exactly: 2/5
        let rule = JacobiRule::new(3, 0.0, 0.0).unwrap();
        let v = rule.integrate(-1.0, 1.0, |t| t.powi(4));
        assert!((v - 0.4).abs() < 1e-15);
    }

    #[test]
    fn single_node_alpha_beta_one() {
        // weight t (1 - t) on [0, 1]: node 1/2, weight 1/6
        let (nodes, weights) = jacobi_rule(0.0, 1.0, 1.0, 1.0, 1).unwrap();
        assert!((nodes[0] - 0.5).abs() < 1e-14);
        assert!((weights[0] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn five_point_asymmetric_reference_values() {
        // frozen from an independent Golub-Welsch implementation
        let rule = JacobiRule::new(5, 1.0, 0.0).unwrap();
        let x_should = [
            -0.920_380_285_897_062_6,
            -0.603_973_164_252_783_6,
            -0.124_050_379_505_227_7,
            0.390_928_546_707_272_23,
            0.802_929_828_402_347_2,
        ];
        let w_should = [
            0.387_126_360_906_605_9,
            0.668_698_552_377_478_8,
            0.585_547_948_338_679_4,
            0.295_635_480_290_466_7,
            0.062_991_658_086_769_2,
        ];
        for i in 0..5 {
            assert!((rule.nodes()[i] - x_should[i]).abs() < 1e-13, "node {i}");
            assert!((rule.weights()[i] - w_should[i]).abs() < 1e-13, "weight {i}");
        }
    }

    #[test]
    fn chebyshev_weight_cosine() {
        // int_{-1}^{1} cos(x) / sqrt(1 - x^2) dx = pi J_0(1)
        let rule = JacobiRule::new(24, -0.5, -0.5).unwrap();
        let v = rule.integrate(-1.0, 1.0, f64::cos);
        let expected = std::f64::consts::PI * 0.765_197_686_557_966_6;
        assert!((v - expected).abs() < 1e-13);
    }

    #[test]
    fn beta_normalization_on_interval() {
        // int_0^1 t^{a-1} (1-t)^{b-1} dt = B(a, b), singular endpoints included
        for &(a, b) in &[(0.5, 0.5), (0.25, 2.0), (1.5, 0.75)] {
            let (nodes, weights) = jacobi_rule(0.0, 1.0, b - 1.0, a - 1.0, 20).unwrap();
            let quad: f64 = nodes.iter().zip(&weights).map(|(_, w)| w).sum();
            let exact = (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp();
            assert!((quad - exact).abs() < 1e-12 * exact, "a={a} b={b}");
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert_eq!(
            JacobiRule::new(4, -1.0, 0.0).unwrap_err(),
            QuadError::NonIntegrableExponent
        );
        assert_eq!(
            JacobiRule::new(4, 0.0, -1.5).unwrap_err(),
            QuadError::NonIntegrableExponent
        );
        assert_eq!(JacobiRule::new(0, 0.0, 0.0).unwrap_err(), QuadError::BadDegree);
    }

    #[test]
    fn nodes_strictly_interior_and_weights_positive() {
        for &(alpha, beta) in &[(-0.5, -0.5), (0.0, 3.0), (7.0, 0.25), (1.0, 1.0)] {
            let rule = JacobiRule::new(48, alpha, beta).unwrap();
            assert!(rule.nodes().iter().all(|&x| x > -1.0 && x < 1.0));
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            assert!(rule
                .nodes()
                .windows(2)
                .all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn dirichlet_uniform_mean() {
        // params (1, 1): gamma_1 uniform on [0, 1]
        let s = DirichletSampler::new(vec![1.0, 1.0], 42).unwrap();
        let n = 100_000;
        let draws = s.sample(n);
        let mean: f64 = draws.iter().map(|g| g.weights()[0]).sum::<f64>() / n as f64;
        // var of uniform = 1/12
        let sigma = (1.0 / 12.0 / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn dirichlet_moment_small_shapes() {
        // m = 1, n = 2: shapes (1/2, 1/2), E[gamma_1] = 1/2
        let s = DirichletSampler::new(vec![0.5, 0.5], 7).unwrap();
        let n = 100_000;
        let mean: f64 = s.sample(n).iter().map(|g| g.weights()[0]).sum::<f64>() / n as f64;
        // Beta(1/2,1/2) variance = 1/8
        let sigma = (0.125 / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma);

        // asymmetric moments: E[gamma_1] = a / (a + b)
        let s = DirichletSampler::new(vec![0.3, 1.7], 7).unwrap();
        let mean: f64 = s.sample(n).iter().map(|g| g.weights()[0]).sum::<f64>() / n as f64;
        let (a, b) = (0.3, 1.7);
        let exact = a / (a + b);
        let var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
        assert!((mean - exact).abs() < 3.0 * (var / n as f64).sqrt());
    }

    #[test]
    fn dirichlet_reproducible_and_counter_seeded() {
        let s = DirichletSampler::new(vec![0.5, 1.5, 2.0], 123).unwrap();
        let a = s.sample(50);
        let b = s.sample(50);
        assert_eq!(a, b);
        // single-draw access agrees with the batch
        assert_eq!(s.sample_at(17), a[17]);
        // different seeds decorrelate
        let s2 = DirichletSampler::new(vec![0.5, 1.5, 2.0], 124).unwrap();
        assert_ne!(s2.sample_at(17), a[17]);
    }

    #[test]
    fn dirichlet_aggregation_ks() {
        // if beta ~ Dir(m/2 * 1_n) then (beta_1 + ... + beta_k, beta_{k+1}, ...)
        // ~ Dir(mk/2, m/2, ...): two-sample KS on the first coordinate
        let m = 1.25;
        let n = 4;
        let k = 2;
        let fine = DirichletSampler::new(vec![0.5 * m; n], 5).unwrap();
        let coarse =
            DirichletSampler::new(vec![0.5 * m * k as f64, 0.5 * m, 0.5 * m], 6).unwrap();
        let draws = 20_000;
        let mut a: Vec<f64> = fine
            .sample(draws)
            .iter()
            .map(|g| g.weights()[0] + g.weights()[1])
            .collect();
        let mut b: Vec<f64> = coarse.sample(draws).iter().map(|g| g.weights()[0]).collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let d = crate::checks::ks_statistic_sorted(&a, &b);
        // c(0.001) = 1.95 for the two-sample threshold
        let thresh = 1.95 * ((a.len() + b.len()) as f64 / (a.len() * b.len()) as f64).sqrt();
        assert!(d < thresh, "KS {d} >= {thresh}");
    }
}
