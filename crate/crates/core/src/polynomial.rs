//! Dense real polynomials in the monomial basis.
//!
//! Besides evaluation and ring arithmetic, polynomials support *exact*
//! q-differentiation: `D_q x^k = [k] x^{k-1}` acts coefficientwise, which
//! avoids the catastrophic cancellation of the two-point stencil at deep
//! lattice points and keeps operator residuals near machine precision.

use crate::qcore::q_number_base;
use crate::{Error, Result};

/// Coefficient vector, degree-indexed (`coeffs[k]` multiplies `x^k`).
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Build from degree-indexed coefficients; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self {
            coeffs: vec![0.0, 1.0],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn leading_coefficient(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let mut v = 0.0;
        for &c in self.coeffs.iter().rev() {
            v = v * x + c;
        }
        v
    }

    /// Multiply by `x`.
    pub fn shift_up(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![0.0; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[i] += a;
        }
        for (i, &b) in other.coeffs.iter().enumerate() {
            c[i] += b;
        }
        Self::new(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Coefficientwise q-derivative: `x^k -> [k]_base x^{k-1}`.
    pub fn q_derivative(&self, base: f64) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &a)| q_number_base(k as f64, base) * a)
            .collect();
        Self::new(c)
    }

    /// Coefficientwise `D_{1/q}` derivative.
    pub fn q_derivative_inverse_base(&self, q: f64) -> Self {
        self.q_derivative(1.0 / q)
    }

    /// Divide by the leading coefficient; errors if it is zero (or the
    /// polynomial is not of the expected degree when `expect_degree` is set).
    pub fn into_monic(self, expect_degree: Option<usize>) -> Result<Self> {
        if let Some(d) = expect_degree {
            if self.degree() != d {
                return Err(Error::ZeroLeadingCoefficient { degree: d });
            }
        }
        let lead = self.leading_coefficient();
        if lead == 0.0 {
            return Err(Error::ZeroLeadingCoefficient {
                degree: self.degree(),
            });
        }
        Ok(self.scale(1.0 / lead))
    }

    /// True iff every coefficient at an index of parity opposite to `n`
    /// is exactly zero, i.e. the polynomial satisfies
    /// `p(-x) = (-1)^n p(x)` bit-identically.
    pub fn has_parity(&self, n: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, &c)| k % 2 == n % 2 || c == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_and_arith() {
        let p = Polynomial::new(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(p.degree(), 2);
        let q = Polynomial::x().mul(&p);
        assert_eq!(q.coeffs(), &[0.0, 1.0, -2.0, 3.0]);
        assert_eq!(p.sub(&p), Polynomial::zero());
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn q_derivative_matches_stencil() {
        let q = 0.6;
        let ctx = crate::QContext::with_q(q).unwrap();
        let p = Polynomial::new(vec![0.5, -1.0, 0.0, 2.0, 1.0]);
        let dp = p.q_derivative(q);
        for &x in &[0.3, 0.9, 1.4] {
            let stencil = crate::qcalculus::q_derivative(|t| p.eval(t), x, &ctx).unwrap();
            assert_relative_eq!(dp.eval(x), stencil, max_relative = 1e-12);
        }
        let dpi = p.q_derivative_inverse_base(q);
        for &x in &[0.3, 0.9] {
            let stencil =
                crate::qcalculus::q_derivative_inverse_base(|t| p.eval(t), x, &ctx).unwrap();
            assert_relative_eq!(dpi.eval(x), stencil, max_relative = 1e-12);
        }
    }

    #[test]
    fn monic_normalization() {
        let p = Polynomial::new(vec![1.0, 0.0, 4.0]);
        let m = p.clone().into_monic(Some(2)).unwrap();
        assert_eq!(m.coeffs(), &[0.25, 0.0, 1.0]);
        // already monic is unchanged
        assert_eq!(m.clone().into_monic(None).unwrap(), m);
        // scalar multiples normalize identically
        assert_eq!(p.scale(-7.0).into_monic(Some(2)).unwrap(), m);
        assert!(Polynomial::zero().into_monic(None).is_err());
        assert!(Polynomial::one().into_monic(Some(3)).is_err());
    }

    #[test]
    fn parity_detection() {
        assert!(Polynomial::new(vec![0.0, 1.0, 0.0, -2.0]).has_parity(1));
        assert!(Polynomial::new(vec![1.0, 0.0, -2.0]).has_parity(0));
        assert!(!Polynomial::new(vec![1.0, 1.0]).has_parity(0));
    }
}
