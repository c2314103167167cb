//! Weight synthesis from the Pearson q-difference equation
//! `D_q (A W) = B W`, equivalently the ratio recursion
//! `W(qx)/W(x) = ((q-1) x B(x) + A(x)) / A(qx)`,
//! together with the closed-form weights of the three built-in families for
//! cross-validation.
//!
//! Pearson solutions are unique only up to a q-periodic function, i.e. up to
//! one scalar per geometric orbit; every comparison in this module is
//! therefore scalar-invariant and per-orbit.

use crate::families::FamilyId;
use crate::qcalculus::GeometricLattice;
use crate::qcore::{q_pochhammer_infinite, QContext};
use crate::{Error, Result};

/// The Pearson ratio `W(qx)/W(x)` at a single point.
pub fn pearson_ratio<A, B>(a: A, b: B, x: f64, ctx: &QContext) -> Result<f64>
where
    A: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let q = ctx.q();
    let denom = a(q * x);
    if denom == 0.0 {
        return Err(Error::VanishedDenominator { term: 0 });
    }
    Ok(((q - 1.0) * x * b(x) + a(x)) / denom)
}

/// Weight values on the symmetric geometric lattice `{±alpha q^n}`,
/// anchored at `W(alpha q) = 1` and even by construction.
///
/// Index `k` corresponds to the point `alpha q^{k+1}`: the recursion starts
/// one step inside the support because `A` typically vanishes at the
/// endpoint `alpha` itself.
#[derive(Debug, Clone)]
pub struct LatticeWeight {
    lattice: GeometricLattice,
    values: Vec<f64>,
}

impl LatticeWeight {
    pub fn lattice(&self) -> &GeometricLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The lattice point carrying `values()[k]`.
    pub fn point(&self, k: usize) -> f64 {
        self.lattice.anchor * self.lattice.base.powi(k as i32 + 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `±alpha q^{k+1}` for the `x` matching a stored lattice point
    /// (mirror points resolve by evenness).
    pub fn value_at(&self, x: f64) -> Result<f64> {
        let ax = x.abs();
        if ax == 0.0 {
            return Err(Error::MissingLatticeValue { x });
        }
        let n = (ax / self.lattice.anchor).ln() / self.lattice.base.ln();
        let rounded = n.round();
        if (n - rounded).abs() > 1e-6 || rounded < 1.0 || rounded as usize > self.values.len() {
            return Err(Error::MissingLatticeValue { x });
        }
        Ok(self.values[rounded as usize - 1])
    }

    /// Residual of `D_q(A W) - B W` at the interior index `k`
    /// (needs the next-deeper value, so `k < len() - 1`).
    pub fn pearson_residual<A, B>(&self, a: A, b: B, k: usize, ctx: &QContext) -> Result<f64>
    where
        A: Fn(f64) -> f64,
        B: Fn(f64) -> f64,
    {
        if k + 1 >= self.values.len() {
            return Err(Error::MissingLatticeValue { x: self.point(k + 1) });
        }
        let q = ctx.q();
        let x = self.point(k);
        let aw_x = a(x) * self.values[k];
        let aw_qx = a(q * x) * self.values[k + 1];
        Ok((aw_qx - aw_x) / ((q - 1.0) * x) - b(x) * self.values[k])
    }
}

/// Synthesize the weight on `lattice` by iterating the Pearson ratio from
/// the anchored value `W(alpha q) = 1`.
///
/// Errors if the ratio loses positivity (the offending point is reported).
pub fn weight_from_ratio<A, B>(
    a: A,
    b: B,
    lattice: &GeometricLattice,
    ctx: &QContext,
) -> Result<LatticeWeight>
where
    A: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let mut values = Vec::with_capacity(lattice.depth);
    let mut w = 1.0;
    values.push(w);
    for n in 1..lattice.depth {
        let x = lattice.anchor * lattice.base.powi(n as i32);
        let ratio = pearson_ratio(&a, &b, x, ctx)?;
        if !(ratio > 0.0) {
            return Err(Error::NonPositiveWeight { x, ratio });
        }
        w *= ratio;
        values.push(w);
    }
    Ok(LatticeWeight {
        lattice: *lattice,
        values,
    })
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Assemble a lattice weight from explicit values, for corrupting tables
    /// in negative-control tests.
    pub fn with_values(lattice: GeometricLattice, values: Vec<f64>) -> LatticeWeight {
        LatticeWeight { lattice, values }
    }
}

fn require_p(family: FamilyId, p: Option<f64>) -> Result<f64> {
    match (family, p) {
        (FamilyId::GenQHermite, Some(p)) => Ok(p),
        (FamilyId::GenQHermite, None) => Err(Error::InvalidParameter(
            "generalized q-Hermite weight requires the parameter p".into(),
        )),
        (_, Some(_)) => Err(Error::InvalidParameter(format!(
            "family {family:?} takes no parameter p"
        ))),
        (_, None) => Ok(0.0),
    }
}

/// Support endpoint of a family's orthogonality interval.
pub fn support_endpoint(family: FamilyId, ctx: &QContext) -> f64 {
    match family {
        FamilyId::Chebyshev5Q | FamilyId::Chebyshev6Q => 1.0,
        FamilyId::GenQHermite => 1.0 / (1.0 - ctx.q() * ctx.q()).sqrt(),
    }
}

fn check_support(family: FamilyId, x: f64, ctx: &QContext) -> Result<f64> {
    let alpha = support_endpoint(family, ctx);
    if x.abs() > alpha * (1.0 + 1e-12) {
        return Err(Error::OutOfSupport { x, alpha });
    }
    Ok(alpha)
}

// (a; base)_inf / (b; base)_inf, accumulated factor by factor so that the
// ratio stays finite near base = 1, where each product alone underflows.
fn pochhammer_ratio_infinite(a: f64, b: f64, base: f64, ctx: &QContext) -> Result<f64> {
    let mut value = 1.0f64;
    let mut pow = 1.0f64;
    for k in 0..ctx.max_terms() {
        let num = 1.0 - a * pow;
        let den = 1.0 - b * pow;
        if den == 0.0 {
            return Err(Error::VanishedDenominator { term: k });
        }
        value *= num / den;
        if (a * pow).abs() < ctx.tol() && (b * pow).abs() < ctx.tol() {
            return Ok(value);
        }
        pow *= base;
    }
    Err(Error::NonConvergent {
        max_terms: ctx.max_terms(),
        last_term: value,
    })
}

// t^{log(x^2) / (2 log q)} = |x|^{log t / log q}, an even function of x.
fn orbit_power(t: f64, x2: f64, q: f64) -> f64 {
    (t.ln() * x2.ln() / (2.0 * q.ln())).exp()
}

/// The closed-form weight `W(x; q)` of a family (the Pearson solution with
/// the paper's canonical branch). Refuses `x = 0`, where `W` has a
/// `1/x^2` pole; see [`starred_weight`] for the pole-cancelled form.
pub fn closed_form_weight(
    family: FamilyId,
    x: f64,
    p: Option<f64>,
    ctx: &QContext,
) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::ZeroArgument);
    }
    check_support(family, x, ctx)?;
    Ok(starred_weight(family, x, p, ctx)? / (x * x))
}

/// The starred weight `W*(x; q) = C(x) W(x; q) = x^2 W(x; q)`, evaluated
/// through `x^2` so it is even bit-identically; the `x = 0` value is the
/// pole-cancelled limit.
pub fn starred_weight(family: FamilyId, x: f64, p: Option<f64>, ctx: &QContext) -> Result<f64> {
    let p = require_p(family, p)?;
    check_support(family, x, ctx)?;
    let q = ctx.q();
    let q2 = q * q;
    let x2 = x * x;
    match family {
        FamilyId::Chebyshev5Q | FamilyId::Chebyshev6Q => {
            let t = q.powi(3) - q + 1.0;
            let top = match family {
                FamilyId::Chebyshev5Q => q.powi(4) - q + 1.0,
                _ => q.powi(6) - q + 1.0,
            };
            if x2 == 0.0 {
                // |x|^{log t / log q} -> 0 since 0 < t < 1
                return Ok(0.0);
            }
            let ratio = pochhammer_ratio_infinite(q2 * x2, top / t * x2, q2, ctx)?;
            Ok(ratio * orbit_power(t, x2, q))
        }
        FamilyId::GenQHermite => {
            let t = p * (1.0 - q2) + 1.0;
            let prod = q_pochhammer_infinite(q2 * (1.0 - q2) * x2, q2, ctx)?.value;
            if x2 == 0.0 {
                // limit of |x|^{log t / log q}: 1 for p = 0, 0 for p < 0,
                // divergent for p > 0
                return Ok(match p.partial_cmp(&0.0) {
                    Some(std::cmp::Ordering::Equal) => prod,
                    Some(std::cmp::Ordering::Less) => 0.0,
                    _ => f64::INFINITY,
                });
            }
            Ok(orbit_power(t, x2, q) * prod)
        }
    }
}
