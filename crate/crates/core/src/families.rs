//! The three built-in symmetric families: fifth-kind and sixth-kind
//! q-Chebyshev polynomials and the generalized q-Hermite polynomials.
//!
//! Each family packages its operator coefficients, eigenvalue law, basic
//! hypergeometric representation, three-term recurrence, closed-form norm
//! ratios, and weight function. The two construction routes (recurrence and
//! terminating series) are independent, so agreement between them is a real
//! consistency check rather than a tautology.

use crate::pearson;
use crate::polynomial::Polynomial;
use crate::qcore::{q_number, q_pochhammer, QContext};
use crate::sl_core::{sigma, SlCoefficients};
use crate::{Error, Result};

/// Identifier of a built-in family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// Fifth-kind q-Chebyshev polynomials on `[-1, 1]`.
    Chebyshev5Q,
    /// Sixth-kind q-Chebyshev polynomials on `[-1, 1]`.
    Chebyshev6Q,
    /// Generalized q-Hermite polynomials on `[-alpha, alpha]`,
    /// `alpha = 1/sqrt(1-q^2)`, with a free parameter `p`.
    GenQHermite,
}

impl FamilyId {
    /// Parse the command-line spelling of a family name.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cheb5q" => Ok(FamilyId::Chebyshev5Q),
            "cheb6q" => Ok(FamilyId::Chebyshev6Q),
            "qhermite" => Ok(FamilyId::GenQHermite),
            _ => Err(Error::InvalidParameter(format!(
                "unknown family {s:?}; expected cheb5q, cheb6q or qhermite"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyId::Chebyshev5Q => "cheb5q",
            FamilyId::Chebyshev6Q => "cheb6q",
            FamilyId::GenQHermite => "qhermite",
        }
    }
}

impl std::fmt::Display for FamilyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fully instantiated family: identifier, parameters, and the five
/// operator coefficient polynomials.
#[derive(Debug, Clone)]
pub struct Family {
    id: FamilyId,
    ctx: QContext,
    p: Option<f64>,
    a: Polynomial,
    b: Polynomial,
    c: Polynomial,
    d: Polynomial,
    e: Polynomial,
}

impl Family {
    /// Instantiate a family. `p` is required for [`FamilyId::GenQHermite`]
    /// and rejected otherwise; its admissible range
    /// `-1/(1-q^2) < p < 1/(q(1+q))` keeps the weight positive and the
    /// recurrence coefficients positive.
    pub fn new(id: FamilyId, p: Option<f64>, ctx: &QContext) -> Result<Self> {
        let q = ctx.q();
        let p = match (id, p) {
            (FamilyId::GenQHermite, Some(p)) => {
                let lo = -1.0 / (1.0 - q * q);
                let hi = 1.0 / (q * (1.0 + q));
                if !(p > lo && p < hi) {
                    return Err(Error::InvalidParameter(format!(
                        "p = {p} outside the admissible range ({lo}, {hi}) at q = {q}"
                    )));
                }
                Some(p)
            }
            (FamilyId::GenQHermite, None) => {
                return Err(Error::InvalidParameter(
                    "family qhermite requires the parameter p".into(),
                ))
            }
            (_, Some(_)) => {
                return Err(Error::InvalidParameter(format!(
                    "family {id} takes no parameter p"
                )))
            }
            (_, None) => None,
        };

        let (a, b, e_const) = crate::extended::coefficient_polys(id, q, p);
        let (a, b) = (Polynomial::new(a), Polynomial::new(b));
        let c = Polynomial::new(vec![0.0, 0.0, 1.0]);
        let d = Polynomial::zero();
        let e = Polynomial::new(vec![e_const]);

        Ok(Self {
            id,
            ctx: *ctx,
            p,
            a,
            b,
            c,
            d,
            e,
        })
    }

    pub fn id(&self) -> FamilyId {
        self.id
    }

    pub fn q(&self) -> f64 {
        self.ctx.q()
    }

    pub fn p(&self) -> Option<f64> {
        self.p
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    /// Endpoint of the orthogonality interval `[-alpha, alpha]`.
    pub fn alpha(&self) -> f64 {
        pearson::support_endpoint(self.id, &self.ctx)
    }

    pub fn a_poly(&self) -> &Polynomial {
        &self.a
    }

    pub fn b_poly(&self) -> &Polynomial {
        &self.b
    }

    pub fn c_poly(&self) -> &Polynomial {
        &self.c
    }

    pub fn d_poly(&self) -> &Polynomial {
        &self.d
    }

    pub fn e_poly(&self) -> &Polynomial {
        &self.e
    }

    /// Constant value of the parity coefficient `E`.
    pub fn e_const(&self) -> f64 {
        self.e.eval(0.0)
    }

    /// The operator coefficients as evaluable closures.
    pub fn coefficients(&self) -> SlCoefficients {
        let (a, b, c, d, e) = (
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.e.clone(),
        );
        SlCoefficients {
            a: Box::new(move |x| a.eval(x)),
            b: Box::new(move |x| b.eval(x)),
            c: Box::new(move |x| c.eval(x)),
            d: Box::new(move |x| d.eval(x)),
            e: Box::new(move |x| e.eval(x)),
        }
    }

    /// Eigenvalue of the degree-`n` eigenfunction.
    pub fn lambda(&self, n: usize) -> f64 {
        crate::extended::lambda(self.id, n, self.ctx.q())
    }

    /// Recurrence coefficient `gamma_n` of
    /// `phi_{n+1} = x phi_n - gamma_n phi_{n-1}`, `n >= 1`.
    pub fn gamma(&self, n: usize) -> f64 {
        crate::extended::gamma(self.id, n, self.ctx.q(), self.p)
    }

    /// The classical limit of `gamma_n` as `q` tends to 1 from below.
    pub fn gamma_limit(&self, n: usize) -> f64 {
        assert!(n >= 1, "gamma_n is defined for n >= 1");
        let s = sigma(n);
        let nn = n as f64;
        match self.id {
            FamilyId::Chebyshev5Q => ((4.0 * nn + 2.0) * s + (nn - 1.0) * nn) / (4.0 * nn * (nn + 1.0)),
            FamilyId::Chebyshev6Q => {
                ((4.0 * nn + 6.0) * s + nn * (nn + 1.0)) / (4.0 * (nn + 1.0) * (nn + 2.0))
            }
            FamilyId::GenQHermite => {
                let p = self.p.unwrap();
                0.5 * (p * ((-1.0f64).powi(n as i32) - 1.0) + nn)
            }
        }
    }

    /// Monic eigenfunction of degree `n` built from the three-term
    /// recurrence.
    pub fn monic_from_recurrence(&self, n: usize) -> Polynomial {
        let mut prev = Polynomial::one();
        if n == 0 {
            return prev;
        }
        let mut cur = Polynomial::x();
        for k in 1..n {
            let next = cur.shift_up().sub(&prev.scale(self.gamma(k)));
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Coefficients of the terminating basic hypergeometric series: entry
    /// `k` multiplies `x^{sigma_n + 2k}`, for `k = 0..=floor(n/2)`.
    ///
    /// The series numerator parameter is an exact negative power of the
    /// base, so the term with index `floor(n/2) + 1` vanishes identically
    /// and the truncation is exact, not approximate.
    fn series_terms(&self, n: usize) -> Vec<f64> {
        let q = self.ctx.q();
        let big = q * q;
        let s = n % 2;
        let m = n / 2;
        let (a2, b1, zc) = match self.id {
            FamilyId::Chebyshev5Q => (
                q.powi((n + s) as i32 - 1) * (q.powi(4) - q + 1.0),
                q.powi(2 * s as i32 + 1) * (q.powi(3) - q + 1.0),
                big,
            ),
            FamilyId::Chebyshev6Q => (
                q.powi((n + s) as i32 - 1) * (q.powi(6) - q + 1.0),
                q.powi(2 * s as i32 + 1) * (q.powi(3) - q + 1.0),
                big,
            ),
            FamilyId::GenQHermite => {
                let p = self.p.unwrap();
                (
                    0.0,
                    q.powi(2 * s as i32 + 1) * (-p * q * q + p + 1.0),
                    big * (1.0 - big),
                )
            }
        };
        let mut terms = Vec::with_capacity(m + 1);
        let mut t = 1.0;
        terms.push(t);
        for k in 1..=m {
            // first numerator parameter is base^{-m}: form the factor from
            // the combined integer exponent so termination stays exact
            let f1 = 1.0 - big.powi(k as i32 - 1 - m as i32);
            let f2 = 1.0 - a2 * big.powi(k as i32 - 1);
            let den = (1.0 - b1 * big.powi(k as i32 - 1)) * (1.0 - big.powi(k as i32));
            t *= f1 * f2 / den * zc;
            terms.push(t);
        }
        terms
    }

    /// Degree-`n` eigenfunction in the series normalization
    /// (`x^{sigma_n}` times a terminating series in `x^2`).
    pub fn phi_series_poly(&self, n: usize) -> Polynomial {
        let s = n % 2;
        let terms = self.series_terms(n);
        let mut coeffs = vec![0.0; n + 1];
        for (k, &t) in terms.iter().enumerate() {
            coeffs[s + 2 * k] = t;
        }
        Polynomial::new(coeffs)
    }

    /// Leading coefficient of the series normalization; the monic
    /// eigenfunction is the series polynomial divided by this value.
    pub fn series_leading_coefficient(&self, n: usize) -> f64 {
        *self.series_terms(n).last().unwrap()
    }

    /// Pointwise evaluation of the series-normalized eigenfunction.
    pub fn phi_hypergeometric(&self, n: usize, x: f64) -> f64 {
        self.phi_series_poly(n).eval(x)
    }

    /// Monic eigenfunction built from the series route; agreement with
    /// [`Self::monic_from_recurrence`] is checked in tests and by the
    /// acceptance suite.
    pub fn monic_from_series(&self, n: usize) -> Result<Polynomial> {
        self.phi_series_poly(n).into_monic(Some(n))
    }

    /// Squared-norm ratio `d_n^2` of the monic eigenfunction, relative to
    /// the normalizing moment `int W* d_q x`, from the closed forms.
    pub fn norm_square(&self, n: usize) -> f64 {
        let q = self.ctx.q();
        match self.id {
            FamilyId::Chebyshev5Q => {
                let t3 = q.powi(3) - q + 1.0;
                let t4 = q.powi(4) - q + 1.0;
                let common =
                    (q - 1.0).powi(2) * (q * q + q + 1.0) * (q.powi(3) + q * q + q - 1.0);
                let m = (n / 2) as u32;
                let mi = m as i32;
                if n % 2 == 0 {
                    common * q.powi(mi * (2 * mi - 1) - 2) * t3.powi(mi + 1)
                        / q_pochhammer(q * t4, q.powi(4), m)
                        * q_pochhammer(q * q, q * q, m)
                        * q_pochhammer(q.powi(3) - 1.0 + 1.0 / q, q * q, m)
                        * q_pochhammer(q * t3, q * q, m)
                        * q_pochhammer(t4 / (q.powi(5) - q.powi(3) + q * q), q * q, m + 1)
                        / ((q.powi(4) - q * q + 1.0)
                            * q_pochhammer(q - 1.0 / (q * q) + 1.0 / q.powi(3), q.powi(4), m + 1)
                            * q_pochhammer(q.powi(3) - 1.0 + 1.0 / q, q.powi(4), m)
                            * q_pochhammer(q.powi(3) - 1.0 + 1.0 / q, q.powi(4), m + 1))
                } else {
                    common * q.powi(2 * mi * mi + mi - 2) * t3.powi(mi + 1)
                        / q_pochhammer(q * t4, q.powi(4), m + 1)
                        * q_pochhammer(q * q, q * q, m)
                        * q_pochhammer(q.powi(3) - 1.0 + 1.0 / q, q * q, m + 1)
                        * q_pochhammer(q * t3, q * q, m + 1)
                        * q_pochhammer(t4 / (q.powi(5) - q.powi(3) + q * q), q * q, m + 1)
                        / ((q.powi(4) - q * q + 1.0)
                            * q_pochhammer(q - 1.0 / (q * q) + 1.0 / q.powi(3), q.powi(4), m + 1)
                            * q_pochhammer(q.powi(3) - 1.0 + 1.0 / q, q.powi(4), m + 1).powi(2))
                }
            }
            FamilyId::Chebyshev6Q => {
                let t3 = q.powi(3) - q + 1.0;
                let t6 = q.powi(6) - q + 1.0;
                let six = q_number(6.0, &self.ctx);
                let common = (1.0 - q) * (q.powi(5) + q.powi(4) + q.powi(3) - 1.0) * (six - 2.0);
                let m = (n / 2) as u32;
                let mi = m as i32;
                if n % 2 == 0 {
                    common * q.powi(mi * (2 * mi - 1) - 2) * t3.powi(mi + 1)
                        / q_pochhammer(q * t6, q.powi(4), m)
                        * q_pochhammer(-1.0, q, m + 1)
                        * q_pochhammer(q, q, m)
                        * q_pochhammer(q * t3, q * q, m)
                        * q_pochhammer(q.powi(5) - 1.0 + 1.0 / q, q * q, m)
                        * q_pochhammer(t6 / (q.powi(5) - q.powi(3) + q * q), q * q, m + 1)
                        / (2.0
                            * (q.powi(5) + q * q - 1.0)
                            * q_pochhammer(q.powi(5) - 1.0 + 1.0 / q, q.powi(4), m)
                            * q_pochhammer(q.powi(5) - 1.0 + 1.0 / q, q.powi(4), m + 1)
                            * q_pochhammer(t6 / q.powi(3), q.powi(4), m + 1))
                } else {
                    common * q.powi(2 * mi * mi + mi - 2) * t3.powi(mi + 1)
                        * q_pochhammer(-1.0, q, m + 1)
                        * q_pochhammer(q, q, m)
                        * q_pochhammer(q * t3, q * q, m + 1)
                        * q_pochhammer(q.powi(5) - 1.0 + 1.0 / q, q * q, m + 1)
                        * q_pochhammer(t6 / (q.powi(5) - q.powi(3) + q * q), q * q, m + 1)
                        / (2.0
                            * (q.powi(5) + q * q - 1.0)
                            * q_pochhammer(q.powi(5) - 1.0 + 1.0 / q, q.powi(4), m + 1).powi(2)
                            * q_pochhammer(t6 / q.powi(3), q.powi(4), m + 1)
                            * q_pochhammer(q * t6, q.powi(4), m + 1))
                }
            }
            FamilyId::GenQHermite => {
                // the closed form for this family is already the squared-norm
                // ratio (its magnitude satisfies the product identity with
                // the recurrence coefficients, and its value at n = 0 is 1)
                let p = self.p.unwrap();
                let u = -p * q * q + p + 1.0;
                let m = (n / 2) as u32;
                let mi = m as i32;
                let base = 0.5
                    * u.powi(mi)
                    * q_pochhammer(-1.0, q, m + 1)
                    * q_pochhammer(q, q, m);
                let v = if n % 2 == 0 {
                    base * q.powi(mi * (2 * mi - 1)) / (q * q - 1.0).powi(2 * mi)
                        * q_pochhammer(q * (p * (1.0 - q * q) + 1.0), q * q, m)
                } else {
                    base * q.powi(mi * (2 * mi + 1)) / (q * q - 1.0).powi(2 * mi + 1)
                        * q_pochhammer(q * (p * (1.0 - q * q) + 1.0), q * q, m + 1)
                };
                v.abs()
            }
        }
    }

    /// `d_n^2 / d_0^2`, which Favard's theorem equates with
    /// `prod_{i=1}^{n} gamma_i`.
    pub fn norm_square_ratio(&self, n: usize) -> f64 {
        self.norm_square(n) / self.norm_square(0)
    }

    /// Closed-form weight `W(x)`; poles at `x = 0` are rejected.
    pub fn weight(&self, x: f64) -> Result<f64> {
        pearson::closed_form_weight(self.id, x, self.p, &self.ctx)
    }

    /// The pole-cancelled weight `W*(x) = x^2 W(x)` entering the
    /// orthogonality relation.
    pub fn starred_weight(&self, x: f64) -> Result<f64> {
        pearson::starred_weight(self.id, x, self.p, &self.ctx)
    }

    /// The classical (`q` to 1) limit of `W*`, against which near-1 weights
    /// are compared: `x^2/sqrt(1-x^2)`, `x^2 sqrt(1-x^2)`, and
    /// `|x|^{-2p} exp(-x^2)` respectively.
    pub fn starred_weight_limit(&self, x: f64) -> f64 {
        match self.id {
            FamilyId::Chebyshev5Q => x * x / (1.0 - x * x).sqrt(),
            FamilyId::Chebyshev6Q => x * x * (1.0 - x * x).sqrt(),
            FamilyId::GenQHermite => {
                let p = self.p.unwrap();
                (x * x).powf(-p) * (-x * x).exp()
            }
        }
    }
}

/// Comparison of the `p = 0` generalized q-Hermite family against the
/// discrete q-Hermite I polynomials `h_n`.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    /// Fitted per-degree proportionality constants `c_n` with
    /// `phi_n(x; 0; q) = c_n h_n(x sqrt(1-q^2); q)` (series normalization
    /// on the left, monic `h_n` on the right).
    pub c: Vec<f64>,
    /// Largest relative deviation of the pointwise ratio from `c_n` over
    /// the sample grid.
    pub max_fit_dev: f64,
    /// Largest relative deviation between the family recurrence
    /// coefficients at `p = 0` and the rescaled `h_n` coefficients
    /// `q^{n-1}(1-q^n)/(1-q^2)`.
    pub max_gamma_dev: f64,
}

// h_n(y; q) by the discrete q-Hermite I recurrence
// h_{n+1}(y) = y h_n(y) - q^{n-1}(1 - q^n) h_{n-1}(y), h_0 = 1, h_1 = y.
fn q_hermite_i(n: usize, y: f64, q: f64) -> f64 {
    let mut prev = 1.0f64;
    if n == 0 {
        return prev;
    }
    let mut cur = y;
    for k in 1..n {
        let g = q.powi(k as i32 - 1) * (1.0 - q.powi(k as i32));
        let next = y * cur - g * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Check the reduction of the generalized q-Hermite family at `p = 0` to
/// the discrete q-Hermite I polynomials, for degrees `0..=nmax`.
///
/// The `h_n` side is generated pointwise from its own recurrence,
/// independent of the family code path; the proportionality constant is
/// fitted over 20 interior sample points rather than asserted.
pub fn q_hermite_reduction_check(nmax: usize, ctx: &QContext) -> Result<ReductionReport> {
    let q = ctx.q();
    let fam = Family::new(FamilyId::GenQHermite, Some(0.0), ctx)?;
    let r2 = 1.0 - q * q;

    let mut max_gamma_dev = 0.0f64;
    for n in 1..=nmax.max(1) {
        let oracle = q.powi(n as i32 - 1) * (1.0 - q.powi(n as i32)) / r2;
        let dev = (fam.gamma(n) - oracle).abs() / oracle;
        max_gamma_dev = max_gamma_dev.max(dev);
    }

    let alpha = fam.alpha();
    let mut c = Vec::with_capacity(nmax + 1);
    let mut max_fit_dev = 0.0f64;
    for n in 0..=nmax {
        let phi = fam.phi_series_poly(n);
        let mut ratios = Vec::new();
        for j in 1..=20 {
            let x = alpha * (j as f64) / 21.0;
            let h = q_hermite_i(n, x * r2.sqrt(), q);
            let v = phi.eval(x);
            if h != 0.0 && v != 0.0 {
                ratios.push(v / h);
            }
        }
        if ratios.is_empty() {
            return Err(Error::DegenerateFit);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        for r in &ratios {
            max_fit_dev = max_fit_dev.max((r / mean - 1.0).abs());
        }
        c.push(mean);
    }
    Ok(ReductionReport {
        c,
        max_fit_dev,
        max_gamma_dev,
    })
}
