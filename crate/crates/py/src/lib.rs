//! Python bindings: thin wrappers over the exact model.  All documents cross
//! the boundary as canonical JSON strings; scalars come back both exactly
//! (JSON) and as floating-point complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use qfock::bridge::{modularity_check, theta as theta_fn, SiegelPoint};
use qfock::congruence::{
    delta_normalized_apply as dn_apply, membership, sample_generators, stabilizer_level,
    CongruenceSpec,
};
use qfock::heisenberg::{heis_act, heis_mul};
use qfock::schema::{
    heis_to_json, lattice_to_json, melem_to_json, parse_heis, parse_lattice, parse_melem,
    parse_rat, parse_sp, scalar_to_json, sp_to_json,
};
use qfock::weil::{covariance_check as cov_check, parity as parity_fn, weil_apply};
use qfock::{LatticePair, Sampler, VerifyConfig, DEFAULT_INDEX_CAP};

fn to_py(e: qfock::Error) -> PyErr {
    match e {
        qfock::Error::Usage(_) | qfock::Error::Schema { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_value(s: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(s).map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))
}

fn rat_from_str(s: &str) -> PyResult<qfock::Rat> {
    parse_rat(&serde_json::Value::String(s.to_string()), "").map_err(to_py)
}

fn rat_point(coords: Vec<String>) -> PyResult<Vec<qfock::Rat>> {
    coords.iter().map(|c| rat_from_str(c)).collect()
}

/// Full-rank lattice in rational n-space, kept in canonical form.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Lattice {
    inner: qfock::QLattice,
}

#[pymethods]
impl Lattice {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(Lattice { inner: parse_lattice(&json_value(s)?, "").map_err(to_py)? })
    }

    #[staticmethod]
    fn standard(n: usize) -> Self {
        Lattice { inner: qfock::QLattice::standard(n) }
    }

    #[staticmethod]
    fn from_rows(rows: Vec<Vec<String>>) -> PyResult<Self> {
        let rows: Vec<Vec<qfock::Rat>> = rows
            .into_iter()
            .map(|r| r.iter().map(|c| rat_from_str(c)).collect())
            .collect::<PyResult<_>>()?;
        Ok(Lattice { inner: qfock::QLattice::from_basis(rows).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        lattice_to_json(&self.inner).to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Covolume measure as an exact rational string.
    fn mu(&self) -> String {
        self.inner.mu().to_string()
    }

    fn dual(&self) -> Lattice {
        Lattice { inner: self.inner.dual() }
    }

    fn sum(&self, other: &Lattice) -> PyResult<Lattice> {
        Ok(Lattice { inner: self.inner.sum(&other.inner).map_err(to_py)? })
    }

    fn intersect(&self, other: &Lattice) -> PyResult<Lattice> {
        Ok(Lattice { inner: self.inner.intersect(&other.inner).map_err(to_py)? })
    }

    fn contains(&self, point: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.contains(&rat_point(point)?))
    }

    /// Subgroup index over a nested sublattice, as a decimal string.
    fn index_over(&self, sub: &Lattice) -> PyResult<String> {
        let pair = LatticePair::new(self.inner.clone(), sub.inner.clone()).map_err(to_py)?;
        Ok(pair.index().to_string())
    }

    fn __repr__(&self) -> String {
        format!("Lattice({})", self.to_json())
    }

    fn __eq__(&self, other: &Lattice) -> bool {
        self.inner == other.inner
    }
}

/// Invariant function: finitely many lattice cosets with cyclotomic values.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct MElement {
    inner: qfock::MElement,
}

#[pymethods]
impl MElement {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(MElement { inner: parse_melem(&json_value(s)?, "").map_err(to_py)? })
    }

    /// Indicator of a lattice shifted by a rational vector.
    #[staticmethod]
    fn indicator(lattice: &Lattice, shift: Vec<String>) -> PyResult<Self> {
        Ok(MElement { inner: qfock::MElement::indicator(&lattice.inner, &rat_point(shift)?) })
    }

    /// The vacuum: indicator of the standard integer lattice.
    #[staticmethod]
    fn vacuum(n: usize) -> Self {
        MElement { inner: qfock::MElement::standard_indicator(n) }
    }

    fn to_json(&self) -> String {
        melem_to_json(&self.inner).to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn support_size(&self) -> usize {
        self.inner.support().len()
    }

    #[pyo3(signature = (other, cap=None))]
    fn add(&self, other: &MElement, cap: Option<u64>) -> PyResult<MElement> {
        let cap = cap.unwrap_or(DEFAULT_INDEX_CAP);
        Ok(MElement { inner: self.inner.add(&other.inner, cap).map_err(to_py)? })
    }

    /// Hermitian pairing, as a floating-point complex number.
    #[pyo3(signature = (other, cap=None))]
    fn pairing(&self, other: &MElement, cap: Option<u64>) -> PyResult<Complex64> {
        let cap = cap.unwrap_or(DEFAULT_INDEX_CAP);
        Ok(self.inner.pairing(&other.inner, cap).map_err(to_py)?.to_complex())
    }

    /// Hermitian pairing as an exact scalar, in JSON.
    #[pyo3(signature = (other, cap=None))]
    fn pairing_exact(&self, other: &MElement, cap: Option<u64>) -> PyResult<String> {
        let cap = cap.unwrap_or(DEFAULT_INDEX_CAP);
        Ok(scalar_to_json(&self.inner.pairing(&other.inner, cap).map_err(to_py)?).to_string())
    }

    /// Value at a rational point, as a floating-point complex number.
    fn evaluate(&self, point: Vec<String>) -> PyResult<Complex64> {
        Ok(self.inner.evaluate(&rat_point(point)?).to_complex())
    }

    fn __repr__(&self) -> String {
        format!("MElement(dim={}, support={})", self.inner.dim(), self.inner.support().len())
    }

    fn __eq__(&self, other: &MElement) -> bool {
        self.inner.equal_fn(&other.inner)
    }
}

/// Heisenberg group element (v₊, v₋, α).
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Heis {
    inner: qfock::HeisElement,
}

#[pymethods]
impl Heis {
    #[new]
    fn new(vplus: Vec<String>, vminus: Vec<String>, alpha: &str) -> PyResult<Self> {
        Ok(Heis {
            inner: qfock::HeisElement::new(
                rat_point(vplus)?,
                rat_point(vminus)?,
                rat_from_str(alpha)?,
            ),
        })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(Heis { inner: parse_heis(&json_value(s)?, "").map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        heis_to_json(&self.inner).to_string()
    }

    fn mul(&self, other: &Heis) -> Heis {
        Heis { inner: heis_mul(&self.inner, &other.inner) }
    }

    /// Twisted translation of an invariant function.
    #[pyo3(signature = (f, cap=None))]
    fn act(&self, f: &MElement, cap: Option<u64>) -> PyResult<MElement> {
        let cap = cap.unwrap_or(DEFAULT_INDEX_CAP);
        Ok(MElement { inner: heis_act(&self.inner, &f.inner, cap).map_err(to_py)? })
    }

    fn __repr__(&self) -> String {
        format!("Heis({})", self.to_json())
    }
}

/// Rational symplectic matrix.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Sp {
    inner: qfock::SpMatrix,
}

#[pymethods]
impl Sp {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(Sp { inner: parse_sp(&json_value(s)?, "").map_err(to_py)? })
    }

    /// The Fourier generator: (x₊, x₋) ↦ (−x₋, x₊) on row vectors.
    #[staticmethod]
    fn j(n: usize) -> Self {
        Sp { inner: qfock::SpMatrix::j(n) }
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Sp { inner: qfock::SpMatrix::identity(n) }
    }

    fn to_json(&self) -> String {
        sp_to_json(&self.inner).to_string()
    }

    fn mul(&self, other: &Sp) -> Sp {
        Sp { inner: self.inner.mul(&other.inner) }
    }

    fn __repr__(&self) -> String {
        format!("Sp({})", self.to_json())
    }

    fn __eq__(&self, other: &Sp) -> bool {
        self.inner == other.inner
    }
}

/// Metaplectic operator of `g` applied to `f`.
#[pyfunction]
#[pyo3(signature = (g, f, cap=None))]
fn apply(g: &Sp, f: &MElement, cap: Option<u64>) -> PyResult<MElement> {
    let cap = cap.unwrap_or(DEFAULT_INDEX_CAP);
    Ok(MElement { inner: weil_apply(&g.inner, &f.inner, cap).map_err(to_py)? })
}

/// Operator of `g ∈ Γ₁,₂` normalized to fix the vacuum exactly.
#[pyfunction]
#[pyo3(signature = (g, f, cap=None))]
fn normalized_apply(g: &Sp, f: &MElement, cap: Option<u64>) -> PyResult<MElement> {
    let cap = cap.unwrap_or(DEFAULT_INDEX_CAP);
    Ok(MElement { inner: dn_apply(&g.inner, &f.inner, cap).map_err(to_py)? })
}

/// `f(x) ↦ f(−x)`.
#[pyfunction]
fn parity(f: &MElement) -> MElement {
    MElement { inner: parity_fn(&f.inner) }
}

/// Does `T(h)·We(g) = We(g)·T(σ(g)h)` hold on `f`?  (It must.)
#[pyfunction]
#[pyo3(signature = (g, h, f, cap=None))]
fn covariance_check(g: &Sp, h: &Heis, f: &MElement, cap: Option<u64>) -> PyResult<bool> {
    let cap = cap.unwrap_or(DEFAULT_INDEX_CAP);
    cov_check(&g.inner, &h.inner, &f.inner, cap).map_err(to_py)
}

fn spec_from(kind: &str, level: Option<u64>, n: usize) -> PyResult<CongruenceSpec> {
    match kind {
        "gamma12" => Ok(CongruenceSpec::gamma12(n)),
        "principal" => level
            .map(|l| CongruenceSpec::principal(n, l))
            .ok_or_else(|| PyValueError::new_err("principal needs a level")),
        "u" => level
            .map(|l| CongruenceSpec::u(n, l))
            .ok_or_else(|| PyValueError::new_err("u needs a level")),
        other => Err(PyValueError::new_err(format!(
            "unknown subgroup kind `{other}` (expected gamma12, principal, u)"
        ))),
    }
}

/// Membership in a congruence family: kind is `gamma12`, `principal` or `u`.
#[pyfunction]
#[pyo3(signature = (g, kind, level=None))]
fn member(g: &Sp, kind: &str, level: Option<u64>) -> PyResult<bool> {
    let spec = spec_from(kind, level, g.inner.n())?;
    membership(&g.inner, &spec).map_err(to_py)
}

/// Sampled generators of a congruence family (seeded, deterministic).
#[pyfunction]
#[pyo3(signature = (kind, n, count, seed, level=None, size=1))]
fn generators(
    kind: &str,
    n: usize,
    count: usize,
    seed: u64,
    level: Option<u64>,
    size: i64,
) -> PyResult<Vec<Sp>> {
    let spec = spec_from(kind, level, n)?;
    Ok(sample_generators(&spec, count, size, seed)
        .map_err(to_py)?
        .into_iter()
        .map(|inner| Sp { inner })
        .collect())
}

/// Theta value of `f` at `z = diag(i·t)`.
#[pyfunction]
#[pyo3(signature = (f, t, tol=1e-10))]
fn theta(f: &MElement, t: f64, tol: f64) -> PyResult<Complex64> {
    let z = SiegelPoint::diagonal(f.inner.dim(), Complex64::new(0.0, t)).map_err(to_py)?;
    theta_fn(&f.inner, &z, tol).map_err(to_py)
}

/// Weight-1/2 automorphy report for θ(f,·) under an integral symplectic g.
#[pyfunction]
#[pyo3(signature = (f, g=None, ts=vec![0.5, 1.0, 2.0], tol=1e-8))]
fn modularity(
    py: Python<'_>,
    f: &MElement,
    g: Option<&Sp>,
    ts: Vec<f64>,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let g = match g {
        Some(s) => s.inner.clone(),
        None => qfock::SpMatrix::j(f.inner.dim()),
    };
    let samples: Vec<SiegelPoint> = ts
        .iter()
        .map(|&t| SiegelPoint::diagonal(f.inner.dim(), Complex64::new(0.0, t)))
        .collect::<qfock::Result<_>>()
        .map_err(to_py)?;
    let r = modularity_check(&f.inner, &g, &samples, tol).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("raw_ratios", r.raw_ratios.clone())?;
    d.set_item("constant", r.constant)?;
    d.set_item("eighth_root", r.eighth_root)?;
    d.set_item("raw_is_one", r.raw_is_one)?;
    d.set_item("lambda", r.lambda)?;
    d.set_item("normalized_is_one", r.normalized_is_one)?;
    d.set_item("pass", r.pass && r.normalized_is_one)?;
    Ok(d.unbind())
}

/// Level of `f` and sampled evidence that its level group fixes it.
#[pyfunction]
#[pyo3(signature = (f, trials=8, size=1, seed=0, cap=None))]
fn stabilizer(
    py: Python<'_>,
    f: &MElement,
    trials: usize,
    size: i64,
    seed: u64,
    cap: Option<u64>,
) -> PyResult<Py<PyDict>> {
    let cap = cap.unwrap_or(DEFAULT_INDEX_CAP);
    let r = stabilizer_level(&f.inner, trials, size, seed, cap).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("level", r.level.to_string())?;
    d.set_item("modulus", r.modulus.to_string())?;
    d.set_item("all_fixed", r.all_fixed)?;
    d.set_item("fixed", r.trials.iter().filter(|t| t.fixed).count())?;
    d.set_item("trials", r.trials.len())?;
    Ok(d.unbind())
}

/// Run a named verification suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, n=1, trials=8, seed=0, max_den=4, index_cap=None, tol=1e-7))]
#[allow(clippy::too_many_arguments)]
fn run_suite(
    py: Python<'_>,
    suite: &str,
    n: usize,
    trials: usize,
    seed: u64,
    max_den: i64,
    index_cap: Option<u64>,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let cfg = VerifyConfig {
        suite: suite.into(),
        n,
        trials,
        seed,
        max_den,
        index_cap: index_cap.unwrap_or(DEFAULT_INDEX_CAP),
        tol,
    };
    let report = qfock::run_suite(&cfg).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("suite", report.suite.clone())?;
    d.set_item("trials", report.trials)?;
    d.set_item("passes", report.passes)?;
    let fails = PyList::empty(py);
    for f in &report.failures {
        let fd = PyDict::new(py);
        fd.set_item("trial", f.trial)?;
        fd.set_item("message", f.message.clone())?;
        fails.append(fd)?;
    }
    d.set_item("failures", fails)?;
    Ok(d.unbind())
}

/// Seeded random data: a full-rank lattice.
#[pyfunction]
#[pyo3(signature = (n, seed, max_den=4))]
fn random_lattice(n: usize, seed: u64, max_den: i64) -> Lattice {
    Lattice { inner: Sampler::new(seed).lattice(n, max_den) }
}

/// Seeded random data: a nonzero invariant function.
#[pyfunction]
#[pyo3(signature = (n, seed, max_den=2, terms=2))]
fn random_melement(n: usize, seed: u64, max_den: i64, terms: usize) -> MElement {
    MElement { inner: Sampler::new(seed).melement(n, max_den, terms) }
}

/// Seeded random data: a Heisenberg element.
#[pyfunction]
#[pyo3(signature = (n, seed, max_den=4))]
fn random_heis(n: usize, seed: u64, max_den: i64) -> Heis {
    Heis { inner: Sampler::new(seed).heis(n, 2, max_den) }
}

/// Seeded random data: a rational symplectic matrix.
#[pyfunction]
#[pyo3(signature = (n, seed, max_den=4))]
fn random_symplectic(n: usize, seed: u64, max_den: i64) -> Sp {
    Sp { inner: Sampler::new(seed).symplectic(n, max_den) }
}

#[pymodule]
fn qfock_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Lattice>()?;
    m.add_class::<MElement>()?;
    m.add_class::<Heis>()?;
    m.add_class::<Sp>()?;
    m.add_function(wrap_pyfunction!(apply, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_apply, m)?)?;
    m.add_function(wrap_pyfunction!(parity, m)?)?;
    m.add_function(wrap_pyfunction!(covariance_check, m)?)?;
    m.add_function(wrap_pyfunction!(member, m)?)?;
    m.add_function(wrap_pyfunction!(generators, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(modularity, m)?)?;
    m.add_function(wrap_pyfunction!(stabilizer, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(random_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(random_melement, m)?)?;
    m.add_function(wrap_pyfunction!(random_heis, m)?)?;
    m.add_function(wrap_pyfunction!(random_symplectic, m)?)?;
    m.add("DEFAULT_INDEX_CAP", DEFAULT_INDEX_CAP)?;
    Ok(())
}
