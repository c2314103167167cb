//! q-difference operators and Jackson q-integration.
//!
//! The q-derivative is the two-point divided difference
//! `D_q f(x) = (f(qx) - f(x)) / ((q-1)x)`; the Jackson q-integral on `[0, x]`
//! is the geometric-lattice series `x(1-q) sum_n q^n f(q^n x)`. Both reduce to
//! their classical counterparts as `q -> 1`.
//!
//! All operators evaluate on nonzero lattice points only; the limit
//! definition of the q-derivative at zero is deliberately not implemented.

use crate::qcore::QContext;
use crate::{Error, Result};

/// Exact two-point difference quotient `(f(qx) - f(x)) / ((q-1)x)`.
pub fn q_derivative<F: Fn(f64) -> f64>(f: F, x: f64, ctx: &QContext) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let q = ctx.q();
    Ok((f(q * x) - f(x)) / ((q - 1.0) * x))
}

/// Difference quotient with the inverse base: `(f(x/q) - f(x)) / ((1/q - 1)x)`.
///
/// Satisfies `D_{1/q} f(qx) = D_q f(x)` through the same arithmetic path.
pub fn q_derivative_inverse_base<F: Fn(f64) -> f64>(f: F, x: f64, ctx: &QContext) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let qi = 1.0 / ctx.q();
    Ok((f(qi * x) - f(x)) / ((qi - 1.0) * x))
}

/// The composed second-order operator `D_q D_{1/q} f`, a three-point stencil
/// on `{x/q, x, qx}`.
pub fn q_second_operator<F: Fn(f64) -> f64>(f: F, x: f64, ctx: &QContext) -> Result<f64> {
    if x == 0.0 || ctx.q() * x == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let inner = |y: f64| q_derivative_inverse_base(&f, y, ctx).expect("nonzero stencil point");
    q_derivative(inner, x, ctx)
}

/// A Jackson sum value together with the number of lattice terms used.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub terms: usize,
}

// Truncation: relative tolerance with an absolute floor of tol^2, plus the
// hard cap from the context. Two consecutive sub-threshold terms are required
// so a single accidental near-zero term does not stop the sum.
fn jackson_sum<G: Fn(usize) -> f64>(term: G, ctx: &QContext) -> Result<QuadResult> {
    let floor = ctx.tol() * ctx.tol();
    let mut sum = 0.0;
    let mut last = 0.0;
    let mut small_run = 0usize;
    for n in 0..ctx.max_terms() {
        let t = term(n);
        sum += t;
        last = t;
        if t.abs() <= (ctx.tol() * sum.abs()).max(floor) {
            small_run += 1;
            if small_run >= 2 {
                return Ok(QuadResult {
                    value: sum,
                    terms: n + 1,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergent {
        max_terms: ctx.max_terms(),
        last_term: last,
    })
}

/// Jackson q-integral `int_0^x f(t) d_q t = x(1-q) sum_n q^n f(q^n x)`.
pub fn jackson_integral<F: Fn(f64) -> f64>(f: F, x: f64, ctx: &QContext) -> Result<QuadResult> {
    if x == 0.0 {
        return Ok(QuadResult { value: 0.0, terms: 0 });
    }
    let q = ctx.q();
    let scale = x * (1.0 - q);
    jackson_sum(|n| scale * q.powi(n as i32) * f(q.powi(n as i32) * x), ctx)
}

/// `int_a^b f d_q t` as the difference of two `[0, .]` integrals.
pub fn jackson_integral_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    ctx: &QContext,
) -> Result<QuadResult> {
    let upper = jackson_integral(&f, b, ctx)?;
    let lower = jackson_integral(&f, a, ctx)?;
    Ok(QuadResult {
        value: upper.value - lower.value,
        terms: upper.terms + lower.terms,
    })
}

/// Symmetric integral `int_{-b}^{b} f d_q t` as a single fused sum pairing
/// mirror points, so odd integrands cancel pointwise before accumulation.
pub fn jackson_integral_symmetric<F: Fn(f64) -> f64>(
    f: F,
    b: f64,
    ctx: &QContext,
) -> Result<QuadResult> {
    if b <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "symmetric integral requires b > 0, got {b}"
        )));
    }
    let q = ctx.q();
    let scale = b * (1.0 - q);
    jackson_sum(
        |n| {
            let x = q.powi(n as i32) * b;
            scale * q.powi(n as i32) * (f(x) + f(-x))
        },
        ctx,
    )
}

/// Bilateral integral `int_{-inf}^{inf} f d_q t`, truncated symmetrically in
/// the lattice index.
pub fn jackson_integral_bilateral<F: Fn(f64) -> f64>(f: F, ctx: &QContext) -> Result<QuadResult> {
    let q = ctx.q();
    let scale = 1.0 - q;
    // inner part: n = 0, 1, 2, ...
    let inner = jackson_sum(
        |n| {
            let x = q.powi(n as i32);
            scale * x * (f(x) + f(-x))
        },
        ctx,
    )?;
    // outer part: n = -1, -2, ...
    let outer = jackson_sum(
        |n| {
            let x = q.powi(-(n as i32) - 1);
            scale * x * (f(x) + f(-x))
        },
        ctx,
    )?;
    Ok(QuadResult {
        value: inner.value + outer.value,
        terms: inner.terms + outer.terms,
    })
}

/// The symmetric geometric lattice `{alpha q^n}` (optionally with mirror
/// points), the natural support of every weight in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricLattice {
    pub anchor: f64,
    pub base: f64,
    pub depth: usize,
    pub signed: bool,
}

impl GeometricLattice {
    pub fn new(anchor: f64, base: f64, depth: usize, signed: bool) -> Result<Self> {
        if !(anchor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lattice anchor must be positive, got {anchor}"
            )));
        }
        if !(0.0 < base && base < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "lattice base must lie in (0, 1), got {base}"
            )));
        }
        if depth == 0 {
            return Err(Error::InvalidParameter("lattice depth must be >= 1".into()));
        }
        Ok(Self {
            anchor,
            base,
            depth,
            signed,
        })
    }

    /// The point `alpha base^n`.
    pub fn point(&self, n: usize) -> f64 {
        self.anchor * self.base.powi(n as i32)
    }

    /// Positive-branch points `alpha base^n`, `n = 0 .. depth-1`, strictly
    /// decreasing in magnitude.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.depth).map(move |n| self.point(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ctx(q: f64) -> QContext {
        QContext::with_q(q).unwrap()
    }

    #[test]
    fn derivative_of_square() {
        let c = ctx(0.5);
        // D_q x^2 = (q+1) x
        assert_relative_eq!(q_derivative(|x| x * x, 1.0, &c).unwrap(), 1.5);
        assert_eq!(q_derivative(|_| 3.0, 0.7, &c).unwrap(), 0.0);
        // D_q x^3 = (q^2+q+1) x^2 at x = 2
        assert_relative_eq!(q_derivative(|x| x * x * x, 2.0, &c).unwrap(), 7.0);
    }

    #[test]
    fn derivative_rejects_zero() {
        let c = ctx(0.5);
        assert!(matches!(
            q_derivative(|x| x, 0.0, &c),
            Err(Error::ZeroArgument)
        ));
        assert!(matches!(
            q_derivative_inverse_base(|x| x, 0.0, &c),
            Err(Error::ZeroArgument)
        ));
    }

    #[test]
    fn inverse_base_derivative() {
        let c = ctx(0.5);
        assert_relative_eq!(q_derivative_inverse_base(|x| x, 0.3, &c).unwrap(), 1.0);
        // D_{1/q} x^2 = (1/q + 1) x
        assert_relative_eq!(q_derivative_inverse_base(|x| x * x, 1.0, &c).unwrap(), 3.0);
    }

    #[test]
    fn composition_identity() {
        // D_{1/q} f(qx) = D_q f(x)
        let c = ctx(0.7);
        let f = |x: f64| 1.3 * x * x * x - 0.4 * x + 2.0;
        for &x in &[0.2, 0.5, 1.0, 1.7] {
            let lhs = q_derivative_inverse_base(f, c.q() * x, &c).unwrap();
            let rhs = q_derivative(f, x, &c).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        }
    }

    #[test]
    fn second_operator() {
        let c = ctx(0.5);
        let q = c.q();
        // affine functions are annihilated
        assert_relative_eq!(
            q_second_operator(|x| 3.0 * x - 1.0, 0.8, &c).unwrap(),
            0.0,
            epsilon = 1e-14
        );
        // f = x^2: D_{1/q} x^2 = (1/q + 1) x, then D_q gives (1/q + 1)
        let got = q_second_operator(|x| x * x, 1.0, &c).unwrap();
        assert_relative_eq!(got, 1.0 / q + 1.0);
        // f = x^4 against the hand-expanded stencil at x
        let x = 0.7f64;
        let f = |t: f64| t.powi(4);
        let dinv = |t: f64| (f(t / q) - f(t)) / ((1.0 / q - 1.0) * t);
        let expect = (dinv(q * x) - dinv(x)) / ((q - 1.0) * x);
        assert_relative_eq!(q_second_operator(f, x, &c).unwrap(), expect);
    }

    #[test]
    fn jackson_basic_values() {
        let c = ctx(0.5);
        // f = 1: (1-q) sum q^n = 1
        assert_relative_eq!(
            jackson_integral(|_| 1.0, 1.0, &c).unwrap().value,
            1.0,
            max_relative = 1e-12
        );
        // f = t: (1-q) sum q^{2n} = 1/(1+q)
        assert_relative_eq!(
            jackson_integral(|t| t, 1.0, &c).unwrap().value,
            1.0 / 1.5,
            max_relative = 1e-12
        );
        assert_eq!(jackson_integral(|t| t, 0.0, &c).unwrap().value, 0.0);
    }

    #[test]
    fn jackson_interval() {
        let c = ctx(0.5);
        assert_eq!(
            jackson_integral_interval(|_| 1.0, 0.8, 0.8, &c).unwrap().value,
            0.0
        );
        assert_relative_eq!(
            jackson_integral_interval(|_| 1.0, 0.0, 1.0, &c).unwrap().value,
            1.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            jackson_integral_interval(|_| 1.0, 0.5, 1.0, &c).unwrap().value,
            0.5,
            max_relative = 1e-12
        );
    }

    #[test]
    fn jackson_symmetric() {
        let c = ctx(0.5);
        // odd integrand: exact cancellation
        assert_eq!(
            jackson_integral_symmetric(|t| t * t * t, 1.3, &c).unwrap().value,
            0.0
        );
        assert_relative_eq!(
            jackson_integral_symmetric(|_| 1.0, 1.0, &c).unwrap().value,
            2.0,
            max_relative = 1e-12
        );
        // f = t^2 on [-1, 1]: 2/(1+q+q^2) = 8/7 at q = 1/2
        assert_relative_eq!(
            jackson_integral_symmetric(|t| t * t, 1.0, &c).unwrap().value,
            8.0 / 7.0,
            max_relative = 1e-12
        );
        assert!(jackson_integral_symmetric(|_| 1.0, -1.0, &c).is_err());
    }

    #[test]
    fn bilateral_matches_scaled_symmetric() {
        let c = ctx(0.5);
        // rapidly decaying even integrand; the bilateral sum over {±q^n, n in Z}
        let f = |t: f64| (-t * t).exp() * t * t;
        let got = jackson_integral_bilateral(f, &c).unwrap().value;
        // oracle: direct two-sided accumulation
        let q = c.q();
        let mut direct = 0.0;
        for n in -60..200 {
            let x = q.powi(n);
            direct += (1.0 - q) * x * (f(x) + f(-x));
        }
        assert_relative_eq!(got, direct, max_relative = 1e-9);
    }

    #[test]
    fn fundamental_theorem_both_directions() {
        let c = ctx(0.6);
        let f = |t: f64| t * t - 0.3 * t + 1.0;
        // D_q of the integral reproduces f on lattice points
        let big_f = |x: f64| jackson_integral(f, x, &c).unwrap().value;
        for n in 0..20 {
            let x = 0.9 * c.q().powi(n);
            let d = q_derivative(big_f, x, &c).unwrap();
            assert_relative_eq!(d, f(x), max_relative = 1e-9);
        }
        // integral of D_q f telescopes to f(b) - f(a)
        let df = |x: f64| q_derivative(f, x, &c).unwrap();
        let got = jackson_integral_interval(df, 0.4, 1.1, &c).unwrap().value;
        assert_relative_eq!(got, f(1.1) - f(0.4), max_relative = 1e-10);
    }

    #[test]
    fn integration_by_parts() {
        // int_0^a g D_q f = (fg)(a) - (fg)(0) - int_0^a D_q g(x) f(qx)
        for &q in &[0.3, 0.7] {
            let c = ctx(q);
            for &a in &[0.5, 1.0] {
                let f = |t: f64| t.powi(4) - 2.0 * t * t + 0.5;
                let g = |t: f64| 0.7 * t * t * t + t;
                let df = |x: f64| q_derivative(f, x, &c).unwrap();
                let dg = |x: f64| q_derivative(g, x, &c).unwrap();
                let lhs = jackson_integral(|x| g(x) * df(x), a, &c).unwrap().value;
                let rhs = f(a) * g(a)
                    - f(0.0) * g(0.0)
                    - jackson_integral(|x| dg(x) * f(c.q() * x), a, &c).unwrap().value;
                assert!((lhs - rhs).abs() < 1e-10, "q={q} a={a}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn lattice_construction() {
        assert!(GeometricLattice::new(0.0, 0.5, 10, true).is_err());
        assert!(GeometricLattice::new(1.0, 1.5, 10, true).is_err());
        assert!(GeometricLattice::new(1.0, 0.5, 0, true).is_err());
        let l = GeometricLattice::new(2.0, 0.5, 4, false).unwrap();
        let pts: Vec<f64> = l.points().collect();
        assert_eq!(pts, vec![2.0, 1.0, 0.5, 0.25]);
    }
}
