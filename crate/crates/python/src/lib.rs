//! Python bindings. Reports come back as plain dicts and lists.

use hgkit::arith::parse_rational;
use hgkit::covers::{self, KummerCover};
use hgkit::group::{detect_obstructions, parse_group_spec, FiniteGroup};
use hgkit::local_tame::{self, LocalExtensionSpec};
use hgkit::oracle::{kummer_local_invariants, FiniteField};
use hgkit::strata;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializable value -> Python object through `json.loads`.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A finite group from a spec string (`C6`, `SD:7,3,2`, `X:C2*C2`, ...) or JSON table.
#[pyclass(name = "Group", frozen)]
struct PyGroup {
    inner: FiniteGroup,
}

#[pymethods]
impl PyGroup {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_group_spec(spec).map_err(err)? })
    }

    /// Builds a group from a Cayley table with identity at index 0.
    #[staticmethod]
    fn from_table(rows: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(Self { inner: FiniteGroup::from_table("table", &rows).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn label(&self) -> &str {
        self.inner.label()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        self.inner.check_index(a).map_err(err)?;
        self.inner.check_index(b).map_err(err)?;
        Ok(self.inner.mul(a, b))
    }

    fn element_order(&self, g: usize) -> PyResult<u64> {
        self.inner.element_order(g).map_err(err)
    }

    fn classify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &hgkit::classify(&self.inner))
    }

    fn obstructions(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &detect_obstructions(&self.inner))
    }

    /// `(sigma, tau)` pairs generating the group with `sigma^-1 tau sigma = tau^q`.
    fn tame_pairs(&self, q: u64) -> Vec<(usize, usize)> {
        local_tame::enumerate_tame_pairs(&self.inner, q)
            .into_iter()
            .map(|p| (p.sigma, p.tau))
            .collect()
    }

    /// Local problems as `"p=..,e=..,f=..[,D=..]"` strings.
    fn grunwald(&self, py: Python<'_>, problems: Vec<String>) -> PyResult<Py<PyAny>> {
        let specs = problems
            .iter()
            .map(|s| s.parse::<LocalExtensionSpec>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        to_py(py, &local_tame::grunwald_feasible(&self.inner, &specs).map_err(err)?)
    }

    fn is_isomorphic(&self, other: &PyGroup) -> bool {
        hgkit::group::is_isomorphic(&self.inner, &other.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group('{}', order={})", self.inner.label(), self.inner.order())
    }
}

/// The Kummer cover `X^d = c t^m`.
#[pyclass(name = "KummerCover", frozen)]
struct PyKummerCover {
    inner: KummerCover,
}

#[pymethods]
impl PyKummerCover {
    #[new]
    #[pyo3(signature = (d, m = 1, c = "1"))]
    fn new(d: u64, m: u64, c: &str) -> PyResult<Self> {
        let c = parse_rational(c).map_err(err)?;
        Ok(Self { inner: KummerCover::new(d, m, c).map_err(err)? })
    }

    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: spec.parse().map_err(err)? })
    }

    fn branch_data(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.branch_data())
    }

    fn predict(&self, py: Python<'_>, t0: &str, p: u64) -> PyResult<Py<PyAny>> {
        let t0 = parse_rational(t0).map_err(err)?;
        to_py(py, &covers::predict_specialization(&self.inner, &t0, p).map_err(err)?)
    }

    fn verify(&self, py: Python<'_>, t0: &str, p: u64) -> PyResult<Py<PyAny>> {
        let t0 = parse_rational(t0).map_err(err)?;
        to_py(py, &covers::verify_beckmann(&self.inner, &t0, p).map_err(err)?)
    }

    /// Seeded sweep; returns `(reports, summary)`.
    #[pyo3(signature = (max_prime = 10_000, samples = 100, seed = 0))]
    fn sweep(&self, py: Python<'_>, max_prime: u64, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
        let cover = self.inner.clone();
        let result = py
            .detach(move || covers::sweep(&cover, max_prime, samples, seed))
            .map_err(err)?;
        to_py(py, &result)
    }

    fn __repr__(&self) -> String {
        format!("KummerCover('{}')", self.inner)
    }
}

#[pyfunction]
fn cyclic_tame_exists(q: u64, d: u64, e: u64) -> PyResult<bool> {
    local_tame::cyclic_tame_exists(q, d, e).map_err(err)
}

/// Whether the rational `a` (given as `"n"` or `"n/d"`) is a sum of two rational squares.
#[pyfunction]
fn c4_embeddable_quadratic(py: Python<'_>, a: &str) -> PyResult<Py<PyAny>> {
    let a = parse_rational(a).map_err(err)?;
    to_py(py, &local_tame::c4_embeddable_quadratic(&a).map_err(err)?)
}

/// Invariants of `X^d - p^v w` over `Q_p`.
#[pyfunction]
fn kummer_invariants(py: Python<'_>, p: u64, d: u64, v: i64, w: i64) -> PyResult<Py<PyAny>> {
    let field = FiniteField::new(p, 1).map_err(err)?;
    let w = field.from_int(w);
    to_py(py, &kummer_local_invariants(&field, d, v, &w).map_err(err)?)
}

#[pyfunction]
fn stratum_of(p: u64, d: u64) -> PyResult<u64> {
    strata::stratum_of(p, d).map_err(err)
}

#[pyfunction]
fn enumerate_stratum(py: Python<'_>, d: u64, e: u64, bound: u64) -> PyResult<Py<PyAny>> {
    to_py(py, &strata::enumerate_stratum(d, e, bound).map_err(err)?)
}

#[pyfunction]
fn lemma32_prime_set(q: u64, r: u64, bound: u64) -> PyResult<Vec<u64>> {
    strata::lemma32_prime_set(q, r, bound).map_err(err)
}

#[pyfunction]
fn biquadratic_split(a: i64, b: i64, p: u64) -> PyResult<Vec<u32>> {
    Ok(strata::biquadratic_split(a, b, p).map_err(err)?.into_iter().map(u32::from).collect())
}

#[pymodule]
#[pyo3(name = "hgkit")]
fn hgkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyKummerCover>()?;
    m.add_function(wrap_pyfunction!(cyclic_tame_exists, m)?)?;
    m.add_function(wrap_pyfunction!(c4_embeddable_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(kummer_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(stratum_of, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_stratum, m)?)?;
    m.add_function(wrap_pyfunction!(lemma32_prime_set, m)?)?;
    m.add_function(wrap_pyfunction!(biquadratic_split, m)?)?;
    Ok(())
}
