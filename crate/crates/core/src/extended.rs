//! Extended-precision (double-double) evaluation for the cancellation-prone
//! parts of the verification suite.
//!
//! Monic eigenpolynomials of degree 10 and more evaluated on deep lattice
//! points lose many digits to cancellation (the lattice interlaces the
//! roots), so Gram matrices and operator residuals computed in plain double
//! cannot reach the verification tolerances at small q. The family math
//! here is written once, generically over a scalar type, and instantiated
//! with either `f64` or the roughly 31-digit [`Dd`] compensated double.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::families::{Family, FamilyId};
use crate::sl_core::OrthogonalityReport;
use crate::Result;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum of two doubles giving roughly 31 significant digits.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// One Newton refinement of the double square root.
    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return Dd::from_f64(0.0);
        }
        let s0 = self.hi.sqrt();
        let s = Dd::from_f64(s0);
        let e = self - s * s;
        s + Dd::from_f64(e.to_f64() / (2.0 * s0))
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r1 = self - o * Dd::from_f64(q1);
        let q2 = r1.hi / o.hi;
        let r2 = r1 - o * Dd::from_f64(q2);
        let q3 = r2.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }
}

/// The scalar operations the family formulas need; implemented by `f64`
/// (fast path) and [`Dd`] (verification path).
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return Self::one() / self.powi(-n);
        }
        let mut result = Self::one();
        let mut base = self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        result
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

impl Scalar for Dd {
    fn from_f64(v: f64) -> Self {
        Dd::from_f64(v)
    }

    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
}

/// Support endpoint `alpha` in double-double. The outermost lattice point
/// sits essentially on an extreme root of the high-degree eigenfunctions,
/// so a one-ulp error in `alpha` already dominates the Gram off-diagonals.
pub fn support_endpoint_dd(id: FamilyId, q: Dd) -> Dd {
    match id {
        FamilyId::Chebyshev5Q | FamilyId::Chebyshev6Q => Dd::one(),
        FamilyId::GenQHermite => Dd::one() / (Dd::one() - q * q).sqrt(),
    }
}

/// Integer-argument q-bracket `(q^k - 1)/(q - 1)`.
pub fn q_integer<S: Scalar>(k: i64, q: S) -> S {
    (q.powi(k as i32) - S::one()) / (q - S::one())
}

/// Eigenvalue law of a family at degree `n`.
pub fn lambda<S: Scalar>(id: FamilyId, n: usize, q: S) -> S {
    let nn = n as i64;
    match id {
        FamilyId::Chebyshev5Q => {
            let bracket = q * (q * q + q + S::one()) - q_integer(1 - nn, q);
            q_integer(nn, q) * bracket
        }
        FamilyId::Chebyshev6Q => {
            let bracket = q * q_integer(5, q) - q_integer(1 - nn, q);
            q_integer(nn, q) * bracket
        }
        FamilyId::GenQHermite => (q + S::one()) * q * q_integer(-nn, q),
    }
}

/// Recurrence coefficient law of a family, `n >= 1`.
pub fn gamma<S: Scalar>(id: FamilyId, n: usize, q: S, p: Option<S>) -> S {
    assert!(n >= 1, "gamma_n is defined for n >= 1");
    let one = S::one();
    match id {
        FamilyId::Chebyshev5Q | FamilyId::Chebyshev6Q => {
            let t = match id {
                FamilyId::Chebyshev5Q => q.powi(4) - q + one,
                _ => q.powi(6) - q + one,
            };
            let u = q.powi(3) - q + one;
            if n % 2 == 0 {
                let m = (n / 2) as i32;
                let top = match id {
                    FamilyId::Chebyshev5Q => q.powi(2 * m) - one,
                    _ => (q.powi(m) - one) * (q.powi(m) + one),
                };
                q.powi(2 * m + 1) * top * (t * q.powi(2 * m) - u * q * q)
                    / (t * t * q.powi(8 * m) - (q * q + one) * t * q.powi(4 * m + 1) + q.powi(4))
            } else {
                let m = ((n - 1) / 2) as i32;
                q.powi(2 * m) * (u * q.powi(2 * m + 1) - one) * (t * q.powi(2 * m) - q)
                    / (t * t * q.powi(8 * m + 1) - (q * q + one) * t * q.powi(4 * m) + q)
            }
        }
        FamilyId::GenQHermite => {
            let p = p.expect("gamma for the generalized q-Hermite family needs p");
            let u = -p * q * q + p + one;
            if n % 2 == 0 {
                let m = (n / 2) as i32;
                u * q.powi(2 * m - 1) * (q.powi(2 * m) - one) / (q * q - one)
            } else {
                let m = ((n - 1) / 2) as i32;
                (u * q.powi(4 * m + 1) - q.powi(2 * m)) / (q * q - one)
            }
        }
    }
}

/// Coefficient data of the operator: `(A, B, E_const)` with `C = x^2` and
/// `D = 0` shared by all families.
pub fn coefficient_polys<S: Scalar>(id: FamilyId, q: S, p: Option<S>) -> (Vec<S>, Vec<S>, S) {
    let one = S::one();
    let zero = S::zero();
    match id {
        FamilyId::Chebyshev5Q => (
            vec![zero, zero, one, zero, -one],
            vec![
                zero,
                q * (q + one),
                zero,
                -q * (q * q + q + one),
            ],
            -q * (one + q),
        ),
        FamilyId::Chebyshev6Q => (
            vec![zero, zero, one, zero, -one],
            vec![zero, q * (q + one), zero, -q * q_integer(5, q)],
            -q * (one + q),
        ),
        FamilyId::GenQHermite => {
            let p = p.expect("coefficients for the generalized q-Hermite family need p");
            (
                vec![zero, zero, -one, zero, one - q * q],
                vec![zero, (q + one) * p, zero, q + one],
                -(one + q) * p,
            )
        }
    }
}

/// Monic eigenpolynomial coefficients by the three-term recurrence.
pub fn monic_coeffs<S: Scalar>(id: FamilyId, n: usize, q: S, p: Option<S>) -> Vec<S> {
    let mut prev = vec![S::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![S::zero(), S::one()];
    for k in 1..n {
        let g = gamma(id, k, q, p);
        let mut next = vec![S::zero(); cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] = next[i + 1] + c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] = next[i] - g * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn poly_eval<S: Scalar>(c: &[S], x: S) -> S {
    let mut v = S::zero();
    for &ck in c.iter().rev() {
        v = v * x + ck;
    }
    v
}

fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = out[i + j] + ai * bj;
        }
    }
    out
}

// coefficientwise q-derivative with bracket base `base`
fn poly_q_derivative<S: Scalar>(c: &[S], base: S) -> Vec<S> {
    if c.len() <= 1 {
        return vec![S::zero()];
    }
    (1..c.len())
        .map(|k| q_integer(k as i64, base) * c[k])
        .collect()
}

/// Largest residual of the difference equation over the lattice points
/// `alpha q^k`, `k = 1..=npoints`, relative to the largest operator-term
/// magnitude over the same points, computed in double-double.
pub fn eigen_residual_max_rel(
    id: FamilyId,
    p: Option<f64>,
    q: f64,
    nmax: usize,
    npoints: usize,
) -> f64 {
    eigen_residuals(id, p, q, nmax, npoints)
        .into_iter()
        .fold(0.0f64, f64::max)
}

/// Per-degree relative residuals of the difference equation, indexed by `n`.
pub fn eigen_residuals(
    id: FamilyId,
    p: Option<f64>,
    q: f64,
    nmax: usize,
    npoints: usize,
) -> Vec<f64> {
    let qd = Dd::from_f64(q);
    let pd = p.map(Dd::from_f64);
    let (a, b, e_const) = coefficient_polys(id, qd, pd);
    let points: Vec<Dd> = (1..=npoints as i32)
        .map(|k| support_endpoint_dd(id, qd) * qd.powi(k))
        .collect();
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let phi = monic_coeffs(id, n, qd, pd);
        let lam = lambda(id, n, qd);
        let second = poly_mul(&a, &poly_q_derivative(&poly_q_derivative(&phi, Dd::one() / qd), qd));
        let first = poly_mul(&b, &poly_q_derivative(&phi, qd));
        let sigma_e = if n % 2 == 1 { e_const } else { Dd::zero() };
        let zeroth = poly_mul(&[sigma_e, Dd::zero(), lam], &phi);
        let mut scale = 0.0f64;
        let mut res_abs = 0.0f64;
        for &x in &points {
            let s2 = poly_eval(&second, x);
            let s1 = poly_eval(&first, x);
            let s0 = poly_eval(&zeroth, x);
            scale = scale
                .max(s2.to_f64().abs())
                .max(s1.to_f64().abs())
                .max(s0.to_f64().abs());
            res_abs = res_abs.max((s2 + s1 + s0).to_f64().abs());
        }
        // every operator term vanishes identically for the constant
        // eigenfunction, so report the absolute (zero) residual there
        out.push(if scale > 0.0 { res_abs / scale } else { res_abs });
    }
    out
}

/// Orthogonality verification with eigenpolynomials built and evaluated in
/// double-double; same report and thresholds as
/// [`crate::sl_core::verify_orthogonality`], without its evaluation noise.
pub fn orthogonality_report(fam: &Family, nmax: usize, threshold: f64) -> Result<OrthogonalityReport> {
    let q = fam.q();
    let alpha = fam.alpha();
    let qd = Dd::from_f64(q);
    let pd = fam.p().map(Dd::from_f64);
    let depth = ((-16.0 * std::f64::consts::LN_10) / q.ln()).ceil() as usize + 1;
    let nb = nmax + 1;
    let phis: Vec<Vec<Dd>> = (0..=nmax)
        .map(|n| monic_coeffs(fam.id(), n, qd, pd))
        .collect();

    let a_alpha = fam.a_poly().eval(alpha);
    let boundary_value = if a_alpha == 0.0 {
        0.0
    } else {
        a_alpha * fam.starred_weight(alpha)? / (alpha * alpha)
    };
    let interior = fam
        .starred_weight(alpha * q)?
        .abs()
        .max(fam.starred_weight(alpha * q * q)?.abs());
    let boundary_ok = boundary_value.abs() <= fam.ctx().tol() * interior.max(1e-300);

    let alpha_dd = support_endpoint_dd(fam.id(), qd);
    let mut acc = vec![vec![Dd::zero(); nb]; nb];
    for k in 0..depth {
        let x = alpha_dd * qd.powi(k as i32);
        let w = fam.starred_weight(x.to_f64())?;
        let weight = Dd::from_f64(2.0 * q.powi(k as i32) * w);
        let vals: Vec<Dd> = phis.iter().map(|c| poly_eval(c, x)).collect();
        for i in 0..nb {
            for j in i..nb {
                // mirror points cancel opposite-parity products exactly
                if (i + j) % 2 == 1 {
                    continue;
                }
                acc[i][j] = acc[i][j] + weight * vals[i] * vals[j];
            }
        }
    }

    let scale = alpha * (1.0 - q);
    let mut gram = vec![vec![0.0f64; nb]; nb];
    for i in 0..nb {
        for j in i..nb {
            let v = scale * acc[i][j].to_f64();
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
