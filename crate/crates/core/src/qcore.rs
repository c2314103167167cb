//! q-arithmetic primitives: q-numbers, q-shifted factorials, and a basic
//! hypergeometric series evaluator with terminating-series detection.

use crate::{Error, Result};

/// Default relative truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default cap on series/product length.
pub const DEFAULT_MAX_TERMS: usize = 2000;

/// The base `q` together with the truncation policy, threaded through every
/// computation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QContext {
    q: f64,
    tol: f64,
    max_terms: usize,
}

impl QContext {
    /// A context with explicit tolerance and term cap. Requires `0 < q < 1`,
    /// `tol > 0` and `max_terms >= 1`.
    pub fn new(q: f64, tol: f64, max_terms: usize) -> Result<Self> {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "q must lie in (0, 1), got {q}"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be positive, got {tol}"
            )));
        }
        if max_terms == 0 {
            return Err(Error::InvalidParameter("max_terms must be >= 1".into()));
        }
        Ok(Self { q, tol, max_terms })
    }

    /// A context with the default truncation policy.
    pub fn with_q(q: f64) -> Result<Self> {
        Self::new(q, DEFAULT_TOL, DEFAULT_MAX_TERMS)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Same base, different term cap. Slowly decaying products near `q = 1`
    /// need far more factors than the default cap allows.
    pub fn with_max_terms(&self, max_terms: usize) -> Self {
        Self { max_terms, ..*self }
    }
}

/// The q-number `[z] = (q^z - 1)/(q - 1)`, continuous in `z`.
pub fn q_number(z: f64, ctx: &QContext) -> f64 {
    q_number_base(z, ctx.q())
}

/// `[z]` with an explicit base, also used for the inverse base `1/q`.
pub fn q_number_base(z: f64, base: f64) -> f64 {
    (base.powf(z) - 1.0) / (base - 1.0)
}

/// Finite q-shifted factorial `(a; base)_n = prod_{j=0}^{n-1} (1 - base^j a)`.
///
/// The empty product (`n = 0`) is 1.
pub fn q_pochhammer(a: f64, base: f64, n: u32) -> f64 {
    let mut prod = 1.0;
    let mut factor = a;
    for _ in 0..n {
        prod *= 1.0 - factor;
        factor *= base;
    }
    prod
}

/// Value of an infinite q-shifted factorial together with a truncation bound.
#[derive(Debug, Clone, Copy)]
pub struct InfiniteProduct {
    pub value: f64,
    /// Bound on the relative error of the truncation: the dropped factors
    /// `(1 - base^j a)` differ from 1 by a geometrically decaying amount.
    pub tail_bound: f64,
    pub factors: usize,
}

/// Infinite q-shifted factorial `(a; base)_∞`, truncated once the running
/// factor differs from 1 by less than `ctx.tol`.
///
/// Requires `|base| < 1`; errors if the cap is reached before the tolerance.
pub fn q_pochhammer_infinite(a: f64, base: f64, ctx: &QContext) -> Result<InfiniteProduct> {
    if base.abs() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "infinite product requires |base| < 1, got {base}"
        )));
    }
    let mut prod = 1.0;
    let mut factor = a;
    for j in 0..ctx.max_terms() {
        if factor.abs() < ctx.tol() {
            // remaining factors: prod (1 - base^k factor), geometric tail
            let tail = factor.abs() / (1.0 - base.abs());
            return Ok(InfiniteProduct {
                value: prod,
                tail_bound: tail,
                factors: j,
            });
        }
        prod *= 1.0 - factor;
        factor *= base;
    }
    Err(Error::NonConvergent {
        max_terms: ctx.max_terms(),
        last_term: factor,
    })
}

/// Parameters of a basic hypergeometric series
/// `r_phi_s(a_1..a_r; b_1..b_s; base, z)`.
///
/// The series is
///
/// ```text
/// sum_k  [(a_1;base)_k ... (a_r;base)_k] / [(base;base)_k (b_1;base)_k ... (b_s;base)_k]
///        * ((-1)^k base^{k(k-1)/2})^{1+s-r} * z^k
/// ```
///
/// Terminating iff some numerator parameter equals `base^{-m}` with `m >= 0`;
/// the sum then has exactly `m + 1` nonzero terms.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricSpec {
    pub num_params: Vec<f64>,
    pub den_params: Vec<f64>,
    pub base: f64,
}

/// Result of a hypergeometric series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    /// `None` for terminating series (the finite sum is exact); otherwise an
    /// estimate of the truncation error from the first dropped term.
    pub truncation_error: Option<f64>,
}

impl HypergeometricSpec {
    pub fn new(num_params: Vec<f64>, den_params: Vec<f64>, base: f64) -> Self {
        Self {
            num_params,
            den_params,
            base,
        }
    }

    /// Exponent `1 + s - r` of the `(-1)^k base^{binom(k,2)}` prefactor.
    pub fn prefactor_exponent(&self) -> i32 {
        1 + self.den_params.len() as i32 - self.num_params.len() as i32
    }

    /// Smallest `m` such that some numerator parameter equals `base^{-m}`
    /// within relative `tol`, if any.
    pub fn termination_index(&self, tol: f64, max_index: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &a in &self.num_params {
            if a <= 0.0 {
                continue;
            }
            // a = base^{-m}  <=>  m = -ln a / ln base
            let m = -a.ln() / self.base.ln();
            let rounded = m.round();
            if rounded >= 0.0 && rounded <= max_index as f64 {
                let target = self.base.powi(-(rounded as i32));
                if (a - target).abs() <= tol * target.abs() {
                    let m = rounded as usize;
                    best = Some(best.map_or(m, |b| b.min(m)));
                }
            }
        }
        best
    }

    /// Well-definedness: no denominator parameter may equal `base^{-k}` for
    /// any `k` reachable before the series stops.
    fn check_denominators(&self, upto: usize, tol: f64) -> Result<()> {
        for k in 0..upto {
            let pow = self.base.powi(k as i32);
            for &b in &self.den_params {
                if (1.0 - pow * b).abs() <= tol {
                    return Err(Error::VanishedDenominator { term: k });
                }
            }
        }
        Ok(())
    }

    /// Evaluate the series at argument `z` by forward accumulation of term
    /// ratios. Terminating series are summed exactly; otherwise the sum is
    /// truncated at `ctx.tol` with an error estimate.
    pub fn evaluate(&self, z: f64, ctx: &QContext) -> Result<SeriesSum> {
        let termination = self.termination_index(ctx.tol(), ctx.max_terms());
        let exponent = self.prefactor_exponent();
        let cap = termination.map_or(ctx.max_terms(), |m| m + 1);
        self.check_denominators(cap, f64::EPSILON)?;

        let mut sum = 0.0f64;
        let mut term = 1.0f64;
        let mut k = 0usize;
        loop {
            sum += term;
            k += 1;
            if let Some(m) = termination {
                if k > m {
                    return Ok(SeriesSum {
                        value: sum,
                        terms: k,
                        truncation_error: None,
                    });
                }
            }
            if k >= ctx.max_terms() {
                return Err(Error::NonConvergent {
                    max_terms: ctx.max_terms(),
                    last_term: term,
                });
            }
            // ratio term_k / term_{k-1}
            let j = (k - 1) as i32;
            let pow = self.base.powi(j);
            let mut ratio = z;
            for &a in &self.num_params {
                ratio *= 1.0 - pow * a;
            }
            for &b in &self.den_params {
                ratio /= 1.0 - pow * b;
            }
            ratio /= 1.0 - self.base.powi(k as i32);
            if exponent != 0 {
                ratio *= (-pow).powi(exponent);
            }
            term *= ratio;
            if termination.is_none() {
                let floor = ctx.tol() * ctx.tol();
                if term.abs() < (ctx.tol() * sum.abs()).max(floor) {
                    return Ok(SeriesSum {
                        value: sum,
                        terms: k,
                        truncation_error: Some(term.abs()),
                    });
                }
            }
        }
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
    fn context_invariants() {
        assert!(QContext::new(1.0, 1e-12, 100).is_err());
        assert!(QContext::new(0.0, 1e-12, 100).is_err());
        assert!(QContext::new(0.5, 0.0, 100).is_err());
        assert!(QContext::new(0.5, 1e-12, 0).is_err());
        assert!(QContext::new(0.5, 1e-12, 1).is_ok());
    }

    #[test]
    fn q_number_values() {
        let c = ctx(0.5);
        assert_eq!(q_number(0.0, &c), 0.0);
        assert_relative_eq!(q_number(2.0, &c), 1.5);
        // [-1] = (1/q - 1)/(q - 1) = -1/q
        assert_relative_eq!(q_number(-1.0, &c), -2.0);
    }

    #[test]
    fn q_number_classical_limit() {
        let c = QContext::with_q(1.0 - 1e-6).unwrap();
        for z in 1..=10 {
            assert!((q_number(z as f64, &c) - z as f64).abs() < 1e-4);
        }
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(q_pochhammer(3.7, 0.5, 0), 1.0);
        assert_eq!(q_pochhammer(1.0, 0.5, 4), 0.0);
        assert_relative_eq!(q_pochhammer(0.5, 0.5, 2), 0.375);
    }

    #[test]
    fn pochhammer_infinite() {
        let c = ctx(0.5);
        // a = 0: all factors are 1
        assert_eq!(q_pochhammer_infinite(0.0, 0.25, &c).unwrap().value, 1.0);
        // a = 1: first factor vanishes
        assert_eq!(q_pochhammer_infinite(1.0, 0.25, &c).unwrap().value, 0.0);
        // (q^2; q^2)_inf vs a long direct product
        let q2 = 0.25f64;
        let mut direct = 1.0;
        for j in 0..60 {
            direct *= 1.0 - q2.powi(j + 1);
        }
        let got = q_pochhammer_infinite(q2, q2, &c).unwrap();
        assert_relative_eq!(got.value, direct, max_relative = 1e-11);
        assert!(got.tail_bound < 1e-10);
    }

    #[test]
    fn pochhammer_infinite_non_convergent() {
        let c = QContext::new(0.5, 1e-12, 3).unwrap();
        assert!(matches!(
            q_pochhammer_infinite(0.9, 0.99, &c),
            Err(Error::NonConvergent { .. })
        ));
    }

    #[test]
    fn series_collapses_when_numerator_param_is_one() {
        let c = ctx(0.5);
        let spec = HypergeometricSpec::new(vec![1.0, 0.3], vec![0.7], 0.25);
        let s = spec.evaluate(0.4, &c).unwrap();
        assert_eq!(s.value, 1.0);
        assert!(s.truncation_error.is_none());
    }

    #[test]
    fn termination_detection() {
        let base = 0.25f64;
        let spec = HypergeometricSpec::new(vec![base.powi(-3), 0.4], vec![0.9], base);
        assert_eq!(spec.termination_index(1e-12, 100), Some(3));
        let s = spec.evaluate(0.2, &QContext::with_q(0.5).unwrap()).unwrap();
        assert_eq!(s.terms, 4);
        assert!(s.truncation_error.is_none());
    }

    #[test]
    fn terminating_sum_matches_brute_force() {
        // Example-1 family spec at n = 2 (sigma = 0), q = 0.5, x = 0.5:
        // 2phi1(q^{-2}, q(q^4-q+1); q(q^3-q+1); q^2, q^2 x^2)
        let q = 0.5f64;
        let base = q * q;
        let a1 = base.powi(-1);
        let a2 = q * (q.powi(4) - q + 1.0);
        let b = q * (q.powi(3) - q + 1.0);
        let z = q * q * 0.25;
        let spec = HypergeometricSpec::new(vec![a1, a2], vec![b], base);
        let s = spec.evaluate(z, &ctx(q)).unwrap();
        // two-term hand accumulation
        let t1 = (1.0 - a1) * (1.0 - a2) / ((1.0 - base) * (1.0 - b)) * z;
        assert_relative_eq!(s.value, 1.0 + t1, max_relative = 1e-14);
        assert_eq!(s.terms, 2);
    }

    #[test]
    fn non_terminating_truncates_with_estimate() {
        let c = ctx(0.5);
        let spec = HypergeometricSpec::new(vec![0.3], vec![0.7], 0.25);
        let s = spec.evaluate(0.5, &c).unwrap();
        assert!(s.truncation_error.is_some());
        // oracle: direct term accumulation far past the tolerance; with one
        // numerator and one denominator parameter the prefactor exponent is
        // 1, contributing (-1)^k base^{binom(k,2)} per term
        let mut sum = 0.0;
        let mut term = 1.0f64;
        for k in 0..200 {
            sum += term;
            let pow = 0.25f64.powi(k);
            term *=
                (1.0 - pow * 0.3) / (1.0 - pow * 0.7) / (1.0 - 0.25f64.powi(k + 1)) * 0.5 * (-pow);
        }
        assert_relative_eq!(s.value, sum, max_relative = 1e-10);
    }

    #[test]
    fn vanished_denominator_detected() {
        let base = 0.25f64;
        // denominator parameter hits base^{-1} at k = 1 before termination at m = 2
        let spec = HypergeometricSpec::new(vec![base.powi(-2)], vec![base.powi(-1)], base);
        assert!(matches!(
            spec.evaluate(0.1, &ctx(0.5)),
            Err(Error::VanishedDenominator { term: 1 })
        ));
    }

    #[test]
    fn prefactor_exponent_general_r_s() {
        // 1phi2 has exponent 2; check against direct summation with the
        // explicit (-1)^k base^{binom(k,2)} factor squared
        let base = 0.3f64;
        let spec = HypergeometricSpec::new(vec![0.4], vec![0.6, 0.2], base);
        assert_eq!(spec.prefactor_exponent(), 2);
        let z = 0.7;
        let s = spec.evaluate(z, &ctx(0.5)).unwrap();
        let mut sum = 0.0;
        for k in 0..80u32 {
            let num = q_pochhammer(0.4, base, k);
            let den =
                q_pochhammer(base, base, k) * q_pochhammer(0.6, base, k) * q_pochhammer(0.2, base, k);
            let pref = ((-1.0f64).powi(k as i32) * base.powi((k * (k.max(1) - 1) / 2) as i32)).powi(2);
            sum += num / den * pref * z.powi(k as i32);
        }
        assert_relative_eq!(s.value, sum, max_relative = 1e-9);
    }
}
