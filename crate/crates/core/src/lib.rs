//! Numerical q-calculus and symmetric q-orthogonal polynomials.
//!
//! The crate is organised around the symmetric second-order q-difference
//! operator
//!
//! ```text
//! A(x) D_q D_{1/q} phi(x) + B(x) D_q phi(x)
//!     + (lambda C(x) + D(x) + sigma_n E(x)) phi(x) = 0
//! ```
//!
//! whose symmetric polynomial eigenfunctions are orthogonal on a geometric
//! lattice `{±alpha q^n}` with respect to a weight solving the Pearson
//! q-difference equation `D_q(A W) = B W`.
//!
//! Modules:
//! - [`qcore`]: q-numbers, q-shifted factorials, basic hypergeometric series
//! - [`qcalculus`]: q-difference operators and Jackson q-integration
//! - [`polynomial`]: dense real polynomials with exact q-differentiation
//! - [`extended`]: double-double evaluation for cancellation-prone checks
//! - [`pearson`]: weight synthesis from the Pearson ratio recursion and the
//!   closed-form weights of the three built-in families
//! - [`sl_core`]: operator residuals, self-adjoint form, orthogonality checks
//! - [`families`]: the three concrete families (fifth/sixth-kind q-Chebyshev
//!   and generalized q-Hermite) with recurrences, norms, and classical limits

pub mod extended;
pub mod families;
pub mod pearson;
pub mod polynomial;
pub mod qcalculus;
pub mod qcore;
pub mod sl_core;

pub use families::{Family, FamilyId};
pub use polynomial::Polynomial;
pub use qcore::QContext;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("series/product did not converge within {max_terms} terms (last term {last_term:e})")]
    NonConvergent { max_terms: usize, last_term: f64 },
    #[error("q-difference operator evaluated at x = 0")]
    ZeroArgument,
    #[error("denominator Pochhammer factor vanished at term {term}")]
    VanishedDenominator { term: usize },
    #[error("argument {x} outside the support [-{alpha}, {alpha}]")]
    OutOfSupport { x: f64, alpha: f64 },
    #[error("weight lost positivity at lattice point {x} (ratio {ratio})")]
    NonPositiveWeight { x: f64, ratio: f64 },
    #[error("no lattice value stored for x = {x}")]
    MissingLatticeValue { x: f64 },
    #[error("polynomial has zero leading coefficient at degree {degree}")]
    ZeroLeadingCoefficient { degree: usize },
    #[error("degenerate proportionality fit: all samples vanish")]
    DegenerateFit,
}

pub type Result<T> = std::result::Result<T, Error>;
