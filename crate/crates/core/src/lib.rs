//! Generalized spherical functions of the type-A root systems.
//!
//! The crate evaluates the Weyl-invariant joint eigenfunctions of the
//! symmetric Dunkl / trigonometric-Dunkl operators attached to A_{n-1}
//! (multiplicity m > 0) through their rank-reduction integral recursions,
//! together with the machinery those recursions rest on:
//!
//! * [`cartan`] — points of the Cartan subalgebra, chamber projection,
//!   block structure, the interlacing box E(X) and the orbit hull C(X)
//!   with its majorization (Rado) membership test and inductive
//!   decomposition.
//! * [`simplex`] — the change of variables between simplex weights and
//!   interlacing nodes (roots of the associated polynomial) and its
//!   Jacobian, in both the trigonometric and rational settings.
//! * [`kernels`] — the closed-form weight functions of the recursions and
//!   the explicit rank-2 Laplace kernel.
//! * [`quadrature`] — Gauss–Jacobi rules with endpoint exponents taken
//!   from the weights, and seeded Dirichlet sampling over the simplex.
//! * [`eval`] — the recursive evaluators for the spherical functions
//!   (quadrature and Monte-Carlo paths) and the rational-limit bridge.
//! * [`density`] — pointwise Laplace-representation kernels K_n for
//!   n <= 4, their fiber domains, an exact recursive sampler of the
//!   representing measure, and the dual Abel transform.
//! * [`diffcheck`] — finite-difference application of the invariant
//!   radial operators and eigen-residual certificates.
//! * [`checks`] — self-contained verification suites (also exposed by the
//!   CLI) and the brute-force hull oracle they compare against.
//!
//! All evaluations are pure functions of their inputs plus, for the
//! Monte-Carlo paths, an explicit 64-bit seed; a (seed, draw-index) pair
//! determines each draw, so sampling parallelizes without changing
//! results.

pub mod cartan;
pub mod checks;
pub mod density;
pub mod diffcheck;
pub mod eval;
pub mod kernels;
pub mod quadrature;
pub mod simplex;
pub mod special;

pub use cartan::{BlockStructure, CartanPoint, InterlacingBox, Region};

pub use eval::{EvalOptions, EvalResult, Method, SpectralParam};
pub use simplex::SimplexWeight;

/// Which of the two Dunkl settings a computation runs in.
///
/// `Trigonometric` is the Heckman–Opdam / Dunkl-Cherednik setting (weights
/// built from hyperbolic sines); `Rational` is the flat Dunkl setting
/// (plain differences), reached from the trigonometric one by rational
/// limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    Trigonometric,
    Rational,
}

impl std::fmt::Display for Setting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Setting::Trigonometric => write!(f, "trig"),
            Setting::Rational => write!(f, "dunkl"),
        }
    }
}
