//! Python bindings for the q-calculus kernel and the symmetric
//! q-orthogonal polynomial families.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qsturm::extended::orthogonality_report;
use qsturm::families::{Family as RsFamily, FamilyId};
use qsturm::qcore::QContext;

fn err(e: qsturm::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn context(q: f64) -> PyResult<QContext> {
    QContext::with_q(q).map_err(err)
}

/// `[z] = (q^z - 1)/(q - 1)`
#[pyfunction]
fn q_number(z: f64, q: f64) -> PyResult<f64> {
    Ok(qsturm::qcore::q_number(z, &context(q)?))
}

/// `(a; base)_n`
#[pyfunction]
fn q_pochhammer(a: f64, base: f64, n: u32) -> f64 {
    qsturm::qcore::q_pochhammer(a, base, n)
}

/// `(a; base)_inf`
#[pyfunction]
fn q_pochhammer_infinite(a: f64, base: f64) -> PyResult<f64> {
    let ctx = context(base)?;
    Ok(qsturm::qcore::q_pochhammer_infinite(a, base, &ctx)
        .map_err(err)?
        .value)
}

fn callable_closure<'py>(
    f: &'py Bound<'py, PyAny>,
) -> impl Fn(f64) -> f64 + 'py {
    move |x: f64| {
        f.call1((x,))
            .and_then(|v| v.extract::<f64>())
            .unwrap_or(f64::NAN)
    }
}

/// Jackson integral of a callable over `[0, upper]`.
#[pyfunction]
fn jackson_integral(f: &Bound<'_, PyAny>, upper: f64, q: f64) -> PyResult<f64> {
    let ctx = context(q)?;
    let v = qsturm::qcalculus::jackson_integral(callable_closure(f), upper, &ctx)
        .map_err(err)?
        .value;
    if v.is_nan() {
        return Err(PyValueError::new_err(
            "integrand raised or returned a non-float",
        ));
    }
    Ok(v)
}

/// Jackson integral of a callable over `[-alpha, alpha]`.
#[pyfunction]
fn jackson_integral_symmetric(f: &Bound<'_, PyAny>, alpha: f64, q: f64) -> PyResult<f64> {
    let ctx = context(q)?;
    let v = qsturm::qcalculus::jackson_integral_symmetric(callable_closure(f), alpha, &ctx)
        .map_err(err)?
        .value;
    if v.is_nan() {
        return Err(PyValueError::new_err(
            "integrand raised or returned a non-float",
        ));
    }
    Ok(v)
}

/// `D_q f(x) = (f(qx) - f(x)) / ((q - 1) x)`
#[pyfunction]
fn q_derivative(f: &Bound<'_, PyAny>, x: f64, q: f64) -> PyResult<f64> {
    let ctx = context(q)?;
    qsturm::qcalculus::q_derivative(callable_closure(f), x, &ctx).map_err(err)
}

/// One of the three built-in symmetric families on the lattice
/// `{±alpha q^n}`: "cheb5q", "cheb6q", or "qhermite".
#[pyclass]
struct Family {
    inner: RsFamily,
}

#[pymethods]
impl Family {
    #[new]
    #[pyo3(signature = (family, q, p=None))]
    fn new(family: &str, q: f64, p: Option<f64>) -> PyResult<Self> {
        let id = FamilyId::parse(family)
            .map_err(|_| PyValueError::new_err(format!("unknown family {family:?}")))?;
        let ctx = context(q)?;
        let p = if id == FamilyId::GenQHermite {
            Some(p.unwrap_or(0.0))
        } else {
            p
        };
        Ok(Family {
            inner: RsFamily::new(id, p, &ctx).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.id().as_str()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    #[getter]
    fn p(&self) -> Option<f64> {
        self.inner.p()
    }

    /// Support endpoint of the orthogonality lattice.
    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    /// Eigenvalue of the degree-n eigenfunction.
    fn eigenvalue(&self, n: usize) -> f64 {
        self.inner.lambda(n)
    }

    /// Three-term recurrence coefficient, n >= 1.
    fn gamma(&self, n: usize) -> PyResult<f64> {
        if n == 0 {
            return Err(PyValueError::new_err("gamma is defined for n >= 1"));
        }
        Ok(self.inner.gamma(n))
    }

    /// Squared norm of the monic degree-n eigenfunction.
    fn norm_square(&self, n: usize) -> f64 {
        self.inner.norm_square(n)
    }

    /// Degree-indexed coefficients of the monic degree-n eigenfunction.
    fn coefficients(&self, n: usize) -> Vec<f64> {
        self.inner.monic_from_recurrence(n).coeffs().to_vec()
    }

    /// Evaluate the monic degree-n eigenfunction.
    fn eval(&self, n: usize, x: f64) -> f64 {
        self.inner.monic_from_recurrence(n).eval(x)
    }

    /// Orthogonality weight including the symmetrizing x^2 factor.
    fn weight(&self, x: f64) -> PyResult<f64> {
        self.inner.starred_weight(x).map_err(err)
    }

    /// Largest normalized Gram off-diagonal over degrees up to nmax, and
    /// whether the orthogonality check passes at the threshold.
    #[pyo3(signature = (nmax, threshold=1e-8))]
    fn orthogonality(&self, nmax: usize, threshold: f64) -> PyResult<(f64, bool)> {
        let rep = orthogonality_report(&self.inner, nmax, threshold).map_err(err)?;
        Ok((rep.max_offdiag_rel, rep.pass()))
    }

    fn __repr__(&self) -> String {
        match self.inner.p() {
            Some(p) => format!("Family({:?}, q={}, p={})", self.name(), self.q(), p),
            None => format!("Family({:?}, q={})", self.name(), self.q()),
        }
    }
}

#[pymodule]
fn qsturm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Family>()?;
    m.add_function(wrap_pyfunction!(q_number, m)?)?;
    m.add_function(wrap_pyfunction!(q_pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(q_pochhammer_infinite, m)?)?;
    m.add_function(wrap_pyfunction!(jackson_integral, m)?)?;
    m.add_function(wrap_pyfunction!(jackson_integral_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(q_derivative, m)?)?;
    Ok(())
}
