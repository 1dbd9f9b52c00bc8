//! Python bindings (`import resum_py`).
//!
//! Sets are passed as lists of residues, weights as lists aligned with the
//! sorted set. Hypothesis violations raise `ValueError`; an exhaustive sweep
//! over budget raises `OverflowError`.

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use resum_core as core;
use resum_core::{BoundKind, FpSet, OracleError, WeightSequence};

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn make_field(p: u64) -> PyResult<core::PrimeField> {
    core::PrimeField::new(p).map_err(value_err)
}

fn make_set(p: u64, elems: Vec<u64>) -> PyResult<FpSet> {
    FpSet::new(make_field(p)?, elems).map_err(value_err)
}

fn make_weights(p: u64, elems: Vec<u64>, weights: Vec<u64>) -> PyResult<WeightSequence> {
    let set = make_set(p, elems.clone())?;
    // weights follow the caller's element order; re-key them onto the sorted support
    if elems.len() != weights.len() {
        return Err(value_err(format!(
            "{} elements but {} weights",
            elems.len(),
            weights.len()
        )));
    }
    let mut sorted = vec![0; set.len()];
    for (x, w) in elems.iter().zip(&weights) {
        sorted[set.index_of(*x).expect("member")] = *w;
    }
    WeightSequence::from_values(set, &sorted).map_err(value_err)
}

/// Arithmetic in Z/pZ for prime p.
#[pyclass(name = "PrimeField", frozen, skip_from_py_object)]
struct PyPrimeField {
    inner: core::PrimeField,
}

#[pymethods]
impl PyPrimeField {
    #[new]
    fn new(p: u64) -> PyResult<Self> {
        Ok(Self {
            inner: make_field(p)?,
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.modulus()
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        (self.inner.element(x) + self.inner.element(y)).value()
    }

    fn sub(&self, x: u64, y: u64) -> u64 {
        (self.inner.element(x) - self.inner.element(y)).value()
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        (self.inner.element(x) * self.inner.element(y)).value()
    }

    fn pow(&self, x: u64, e: u64) -> u64 {
        self.inner.element(x).pow(e).value()
    }

    fn inverse(&self, x: u64) -> PyResult<u64> {
        self.inner
            .element(x)
            .inverse()
            .map(|v| v.value())
            .map_err(value_err)
    }

    /// C(n, k) mod p.
    fn binomial(&self, n: u64, k: u64) -> u64 {
        self.inner.binomial(n, k).value()
    }

    fn __repr__(&self) -> String {
        format!("PrimeField({})", self.inner.modulus())
    }
}

/// Outcome of checking a certificate.
#[pyclass(name = "VerificationReport", frozen, skip_from_py_object)]
struct PyReport {
    inner: core::VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// `(name, passed, detail)` for every check that ran.
    #[getter]
    fn checks(&self) -> Vec<(String, bool, String)> {
        self.inner
            .checks
            .iter()
            .map(|c| (c.name.to_string(), c.passed, c.detail.clone()))
            .collect()
    }

    #[getter]
    fn first_failure(&self) -> Option<String> {
        self.inner.first_failure().map(|c| c.name.to_string())
    }

    fn __bool__(&self) -> bool {
        self.inner.passed()
    }

    fn __repr__(&self) -> String {
        match self.inner.first_failure() {
            None => "VerificationReport(pass)".into(),
            Some(c) => format!("VerificationReport(fail: {})", c.name),
        }
    }
}

/// A lower-bound certificate for a restricted sumset.
#[pyclass(name = "Certificate", frozen, skip_from_py_object)]
struct PyCertificate {
    inner: core::Certificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::Certificate::from_json(text)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn verify(&self) -> PyReport {
        PyReport {
            inner: core::verify_certificate(&self.inner),
        }
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p
    }

    #[getter(A)]
    fn a(&self) -> Vec<u64> {
        self.inner.a.clone()
    }

    #[getter(B)]
    fn b(&self) -> Vec<u64> {
        self.inner.b.clone()
    }

    #[getter]
    fn route(&self) -> &'static str {
        self.inner.route.as_str()
    }

    #[getter]
    fn w1(&self) -> Vec<u64> {
        self.inner.w1.iter().map(|e| e.weight).collect()
    }

    #[getter]
    fn w2(&self) -> Vec<u64> {
        self.inner.w2.iter().map(|e| e.weight).collect()
    }

    #[getter]
    fn gamma(&self) -> Vec<u64> {
        self.inner.gamma.clone()
    }

    #[getter(e_C)]
    fn e_c(&self) -> Option<u64> {
        self.inner.e_c
    }

    #[getter]
    fn claimed_bound(&self) -> u64 {
        self.inner.claimed_bound
    }

    #[getter(C)]
    fn c(&self) -> Vec<u64> {
        self.inner.c.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(p={}, route={}, bound={}, |C|={})",
            self.inner.p,
            self.inner.route.as_str(),
            self.inner.claimed_bound,
            self.inner.c_size
        )
    }
}

/// Summary of a brute-force sweep.
#[pyclass(name = "SweepReport", frozen, skip_from_py_object)]
struct PySweepReport {
    inner: core::SweepReport,
}

#[pymethods]
impl PySweepReport {
    #[getter]
    fn ok(&self) -> bool {
        self.inner.ok()
    }

    #[getter]
    fn pairs_checked(&self) -> u64 {
        self.inner.pairs_checked
    }

    #[getter]
    fn violations(&self) -> Vec<(Vec<u64>, Vec<u64>, u64, u64)> {
        self.inner
            .violations
            .iter()
            .map(|v| (v.a.clone(), v.b.clone(), v.actual, v.bound))
            .collect()
    }

    #[getter]
    fn tight_count(&self) -> u64 {
        self.inner.tight_count
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "SweepReport(pairs={}, violations={}, tight={})",
            self.inner.pairs_checked,
            self.inner.violations.len(),
            self.inner.tight_count
        )
    }
}

/// Sorted `A +' B = {a + b : a != b}`.
#[pyfunction]
fn restricted_sumset(p: u64, a: Vec<u64>, b: Vec<u64>) -> PyResult<Vec<u64>> {
    let c = core::restricted_sumset(&make_set(p, a)?, &make_set(p, b)?).map_err(value_err)?;
    Ok(c.elements().to_vec())
}

/// Sorted `A + B`.
#[pyfunction]
fn sumset(p: u64, a: Vec<u64>, b: Vec<u64>) -> PyResult<Vec<u64>> {
    let c = core::sumset(&make_set(p, a)?, &make_set(p, b)?).map_err(value_err)?;
    Ok(c.elements().to_vec())
}

#[pyfunction]
fn anr_bound(p: u64, m: u64, k: u64) -> u64 {
    core::anr_bound(p, m, k)
}

#[pyfunction]
fn eh_bound(p: u64, m: u64) -> u64 {
    core::eh_bound(p, m)
}

#[pyfunction]
fn cd_bound(p: u64, m: u64, k: u64) -> u64 {
    core::cd_bound(p, m, k)
}

/// Weights on sorted `s` with vanishing moments below `|s| - 1` and terminal moment 1.
#[pyfunction]
fn extremal_weights(p: u64, s: Vec<u64>) -> PyResult<Vec<u64>> {
    let w = core::extremal_weights(&make_set(p, s)?).map_err(value_err)?;
    Ok(w.values())
}

/// `sum_x w(x) x^i`.
#[pyfunction]
fn power_sum(p: u64, s: Vec<u64>, w: Vec<u64>, i: u64) -> PyResult<u64> {
    Ok(make_weights(p, s, w)?.power_sum(i).value())
}

/// Least `n` with a nonzero n-th moment.
#[pyfunction]
fn excess_index(p: u64, s: Vec<u64>, w: Vec<u64>) -> PyResult<usize> {
    let w = make_weights(p, s, w)?;
    core::excess_index(w.support(), &w).map_err(value_err)
}

/// Induced weights on `A +' B`, as `(support, weights)`.
#[pyfunction]
fn induced_weights(
    p: u64,
    a: Vec<u64>,
    wa: Vec<u64>,
    b: Vec<u64>,
    wb: Vec<u64>,
) -> PyResult<(Vec<u64>, Vec<u64>)> {
    let w = core::induced_weights(&make_weights(p, a, wa)?, &make_weights(p, b, wb)?)
        .map_err(value_err)?;
    Ok((w.support().elements().to_vec(), w.values()))
}

/// `gamma_n` of the induced weights, via the binomial convolution of the two moment sequences.
#[pyfunction]
fn gamma_convolution(
    p: u64,
    a: Vec<u64>,
    wa: Vec<u64>,
    b: Vec<u64>,
    wb: Vec<u64>,
    n: usize,
) -> PyResult<u64> {
    let alpha = core::MomentProfile::with_prefix(make_weights(p, a, wa)?, n + 1);
    let beta = core::MomentProfile::with_prefix(make_weights(p, b, wb)?, n + 1);
    core::gamma_convolution(&alpha, &beta, n)
        .map(|v| v.value())
        .map_err(value_err)
}

#[pyfunction]
fn certify_anr(p: u64, a: Vec<u64>, b: Vec<u64>) -> PyResult<PyCertificate> {
    let inner = core::certify_anr(&make_set(p, a)?, &make_set(p, b)?).map_err(value_err)?;
    Ok(PyCertificate { inner })
}

#[pyfunction]
fn certify_eh(p: u64, a: Vec<u64>) -> PyResult<PyCertificate> {
    let inner = core::certify_eh(&make_set(p, a)?).map_err(value_err)?;
    Ok(PyCertificate { inner })
}

/// Check a certificate given as JSON text; malformed input yields a failed report.
#[pyfunction]
fn verify_json(text: &str) -> PyReport {
    PyReport {
        inner: core::verify_json(text),
    }
}

/// Brute-force a bound (`"anr"`, `"eh"` or `"cd"`) at `p`; exhaustive unless `seed` is given.
#[pyfunction]
#[pyo3(signature = (p, kind = "anr", seed = None, samples = 10_000, cap = None))]
fn sweep(
    py: Python<'_>,
    p: u64,
    kind: &str,
    seed: Option<u64>,
    samples: u64,
    cap: Option<u64>,
) -> PyResult<PySweepReport> {
    make_field(p)?;
    let kind: BoundKind = kind.parse().map_err(value_err)?;
    let mut options = core::SweepOptions {
        random: seed.map(|seed| core::RandomSampler { seed, samples }),
        ..Default::default()
    };
    if let Some(cap) = cap {
        options.cap = cap;
    }
    let result = py.detach(|| core::sweep_exhaustive(p, kind, &options));
    match result {
        Ok(inner) => Ok(PySweepReport { inner }),
        Err(e @ OracleError::BudgetExceeded { .. }) => Err(PyOverflowError::new_err(e.to_string())),
        Err(e) => Err(value_err(e)),
    }
}

#[pymodule]
pub fn resum_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPrimeField>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PySweepReport>()?;
    m.add_function(wrap_pyfunction!(restricted_sumset, m)?)?;
    m.add_function(wrap_pyfunction!(sumset, m)?)?;
    m.add_function(wrap_pyfunction!(anr_bound, m)?)?;
    m.add_function(wrap_pyfunction!(eh_bound, m)?)?;
    m.add_function(wrap_pyfunction!(cd_bound, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_weights, m)?)?;
    m.add_function(wrap_pyfunction!(power_sum, m)?)?;
    m.add_function(wrap_pyfunction!(excess_index, m)?)?;
    m.add_function(wrap_pyfunction!(induced_weights, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_convolution, m)?)?;
    m.add_function(wrap_pyfunction!(certify_anr, m)?)?;
    m.add_function(wrap_pyfunction!(certify_eh, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
