//! The general symmetric q-Sturm-Liouville operator, its self-adjoint form,
//! residual evaluation for candidate eigenfunctions, and orthogonality
//! verification of symmetric eigenfunction sequences.

use crate::pearson::LatticeWeight;
use crate::polynomial::Polynomial;
use crate::qcalculus::{
    jackson_integral_symmetric, q_derivative, q_derivative_inverse_base, q_second_operator,
};
use crate::qcore::QContext;
use crate::{Error, Result};

/// Boxed evaluable real function.
pub type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Parity indicator `sigma_n = (1 - (-1)^n)/2`: 0 for even `n`, 1 for odd.
pub fn sigma(n: usize) -> f64 {
    (n % 2) as f64
}

/// The five coefficient functions of the operator
/// `A D_q D_{1/q} + B D_q + (lambda C + D + sigma_n E)`,
/// with declared parities: `A`, `C`, `D`, `E` even, `B` odd.
pub struct SlCoefficients {
    pub a: RealFn,
    pub b: RealFn,
    pub c: RealFn,
    pub d: RealFn,
    pub e: RealFn,
}

impl SlCoefficients {
    /// Sample the declared parities (and `C > 0`) on interior points of
    /// `(0, alpha)`; errors on the first violation.
    pub fn check_parity(&self, alpha: f64, ctx: &QContext) -> Result<()> {
        let tol = ctx.tol().max(1e-12);
        for k in 1..=20 {
            let x = alpha * (k as f64) / 21.0;
            for (name, f, odd) in [
                ("A", &self.a, false),
                ("B", &self.b, true),
                ("C", &self.c, false),
                ("D", &self.d, false),
                ("E", &self.e, false),
            ] {
                let lhs = f(-x);
                let rhs = if odd { -f(x) } else { f(x) };
                if (lhs - rhs).abs() > tol * f(x).abs().max(1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "coefficient {name} violates declared parity at x = {x}"
                    )));
                }
            }
            if (self.c)(x) <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "coefficient C must be positive, got {} at x = {x}",
                    (self.c)(x)
                )));
            }
        }
        Ok(())
    }
}

/// The three operator terms at one point; the residual is their sum and the
/// natural scale is the largest of the three (near roots of `phi` the
/// absolute residual alone is meaningless).
#[derive(Debug, Clone, Copy)]
pub struct OperatorTerms {
    pub second: f64,
    pub first: f64,
    pub zeroth: f64,
}

impl OperatorTerms {
    pub fn residual(&self) -> f64 {
        self.second + self.first + self.zeroth
    }

    pub fn scale(&self) -> f64 {
        self.second
            .abs()
            .max(self.first.abs())
            .max(self.zeroth.abs())
    }

    /// Residual relative to the largest term.
    pub fn relative(&self) -> f64 {
        let s = self.scale();
        if s == 0.0 {
            0.0
        } else {
            self.residual() / s
        }
    }
}

/// Operator terms for an arbitrary evaluable `phi`, via the three-point
/// stencil on `{x/q, x, qx}`.
pub fn sl_terms<F: Fn(f64) -> f64>(
    coeffs: &SlCoefficients,
    lambda: f64,
    n: usize,
    phi: F,
    x: f64,
    ctx: &QContext,
) -> Result<OperatorTerms> {
    let second = (coeffs.a)(x) * q_second_operator(&phi, x, ctx)?;
    let first = (coeffs.b)(x) * q_derivative(&phi, x, ctx)?;
    let zeroth =
        (lambda * (coeffs.c)(x) + (coeffs.d)(x) + sigma(n) * (coeffs.e)(x)) * phi(x);
    Ok(OperatorTerms {
        second,
        first,
        zeroth,
    })
}

/// Residual of the difference equation at `x`; zero (to tolerance) iff `phi`
/// is an eigenfunction at `lambda` with parity `n`.
pub fn sl_residual<F: Fn(f64) -> f64>(
    coeffs: &SlCoefficients,
    lambda: f64,
    n: usize,
    phi: F,
    x: f64,
    ctx: &QContext,
) -> Result<f64> {
    Ok(sl_terms(coeffs, lambda, n, phi, x, ctx)?.residual())
}

/// The full residual *polynomial* for polynomial data, with q-derivatives
/// taken exactly coefficientwise. This sidesteps the stencil's cancellation
/// at deep lattice points: evaluating the returned polynomial is accurate at
/// any `x`.
pub fn sl_residual_poly(
    a: &Polynomial,
    b: &Polynomial,
    c: &Polynomial,
    d: &Polynomial,
    e: &Polynomial,
    lambda: f64,
    n: usize,
    phi: &Polynomial,
    q: f64,
) -> Polynomial {
    let second = a.mul(&phi.q_derivative_inverse_base(q).q_derivative(q));
    let first = b.mul(&phi.q_derivative(q));
    let zeroth = c.scale(lambda).add(d).add(&e.scale(sigma(n))).mul(phi);
    second.add(&first).add(&zeroth)
}

/// Largest magnitude of the three operator terms of the polynomial route
/// at `x`, for scaling residuals.
pub fn sl_terms_poly_scale(
    a: &Polynomial,
    b: &Polynomial,
    c: &Polynomial,
    d: &Polynomial,
    e: &Polynomial,
    lambda: f64,
    n: usize,
    phi: &Polynomial,
    q: f64,
    x: f64,
) -> f64 {
    let second = a.mul(&phi.q_derivative_inverse_base(q).q_derivative(q)).eval(x);
    let first = b.mul(&phi.q_derivative(q)).eval(x);
    let zeroth = c.scale(lambda).add(d).add(&e.scale(sigma(n))).mul(phi).eval(x);
    second.abs().max(first.abs()).max(zeroth.abs())
}

/// Residual of the self-adjoint form
/// `D_q [A W D_{1/q} phi] + (lambda C + D + sigma_n E) W phi`
/// at a lattice point of `w`; vanishes whenever the plain residual vanishes
/// and `w` solves the Pearson equation.
pub fn self_adjoint_residual<F: Fn(f64) -> f64>(
    coeffs: &SlCoefficients,
    w: &LatticeWeight,
    lambda: f64,
    n: usize,
    phi: F,
    x: f64,
    ctx: &QContext,
) -> Result<f64> {
    let q = ctx.q();
    let flux = |y: f64| -> Result<f64> {
        Ok((coeffs.a)(y) * w.value_at(y)? * q_derivative_inverse_base(&phi, y, ctx)?)
    };
    let dq_flux = (flux(q * x)? - flux(x)?) / ((q - 1.0) * x);
    let zeroth =
        (lambda * (coeffs.c)(x) + (coeffs.d)(x) + sigma(n) * (coeffs.e)(x)) * w.value_at(x)? * phi(x);
    Ok(dq_flux + zeroth)
}

/// Gram matrix of a candidate eigenfunction sequence against a weight.
#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    pub gram: Vec<Vec<f64>>,
    /// Largest `|G[n][m]| / sqrt(G[n][n] G[m][m])` over `n != m`.
    pub max_offdiag_rel: f64,
    /// `A(alpha) W*(alpha) / C(alpha)`, the boundary term whose vanishing
    /// makes the operator self-adjoint on the lattice.
    pub boundary_value: f64,
    pub boundary_ok: bool,
    pub diagonal_positive: bool,
    pub threshold: f64,
}

impl OrthogonalityReport {
    pub fn pass(&self) -> bool {
        self.max_offdiag_rel < self.threshold && self.diagonal_positive && self.boundary_ok
    }
}

/// Compute the Gram matrix `int_{-alpha}^{alpha} W* phi_n phi_m d_q x` for
/// every pair and report the largest normalized off-diagonal entry.
///
/// The integration depth retains lattice points down to `q^n < 1e-16` so the
/// truncated tail is machine-negligible on the bounded support.
pub fn verify_orthogonality<W, F>(
    coeffs: &SlCoefficients,
    wstar: W,
    phis: &[F],
    alpha: f64,
    ctx: &QContext,
    threshold: f64,
) -> Result<OrthogonalityReport>
where
    W: Fn(f64) -> f64,
    F: Fn(f64) -> f64,
{
    let q = ctx.q();
    let depth = ((-16.0 * std::f64::consts::LN_10) / q.ln()).ceil() as usize + 1;
    let nb = phis.len();

    // boundary hypothesis A(alpha) W(alpha) = 0, with exact-zero short
    // circuit when A vanishes algebraically at the endpoint
    let a_alpha = (coeffs.a)(alpha);
    let boundary_value = if a_alpha == 0.0 {
        0.0
    } else {
        a_alpha * wstar(alpha) / (coeffs.c)(alpha)
    };
    let interior = wstar(alpha * q).abs().max(wstar(alpha * q * q).abs());
    let boundary_ok = boundary_value.abs() <= ctx.tol() * interior.max(1e-300);

    let mut gram = vec![vec![0.0f64; nb]; nb];
    for i in 0..nb {
        for j in i..nb {
            let mut sum = 0.0;
            for k in 0..depth {
                let x = alpha * q.powi(k as i32);
                let w = wstar(x);
                let pair = phis[i](x) * phis[j](x) + phis[i](-x) * phis[j](-x);
                sum += q.powi(k as i32) * w * pair;
            }
            let v = alpha * (1.0 - q) * sum;
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }

    let diagonal_positive = (0..nb).all(|i| gram[i][i] > 0.0);
    let mut max_offdiag_rel = 0.0f64;
    for i in 0..nb {
        for j in 0..nb {
            if i != j {
                let norm = (gram[i][i] * gram[j][j]).sqrt();
                if norm > 0.0 {
                    max_offdiag_rel = max_offdiag_rel.max(gram[i][j].abs() / norm);
                }
            }
        }
    }
    Ok(OrthogonalityReport {
        gram,
        max_offdiag_rel,
        boundary_value,
        boundary_ok,
        diagonal_positive,
        threshold,
    })
}

/// The mixed-parity cross term
/// `int_{-alpha}^{alpha} E W phi_odd phi_even d_q x`; its integrand is odd,
/// so the value is zero up to rounding.
pub fn parity_cross_term<E, W, F, G>(
    e: E,
    w: W,
    phi_even: F,
    phi_odd: G,
    alpha: f64,
    ctx: &QContext,
) -> Result<f64>
where
    E: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    Ok(
        jackson_integral_symmetric(|x| e(x) * w(x) * phi_even(x) * phi_odd(x), alpha, ctx)?
            .value,
    )
}
