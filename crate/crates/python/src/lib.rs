//! Python bindings: finite algebras, the decision procedures, the variety
//! lattice, enumeration and the derivation checker.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use varietylab::derivations::{replay_with_library, shipped_scripts, AnyScript};
use varietylab::enumerator;
use varietylab::models::{builtin, FiniteAlgebra};
use varietylab::terms::{normalize_is, parse_word, Identity, Mode};
use varietylab::varieties::{decide as decide_identity, variety_of, VarietyId};
use varietylab::{variety_lattice, verify};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode(text: &str) -> PyResult<Mode> {
    text.parse().map_err(value_error)
}

fn variety(name: &str) -> PyResult<VarietyId> {
    name.parse().map_err(value_error)
}

/// A finite algebra given by its Cayley table.
#[pyclass(name = "Algebra", module = "varietylab_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAlgebra {
    inner: FiniteAlgebra,
}

#[pymethods]
impl PyAlgebra {
    #[new]
    #[pyo3(signature = (rows, distinguished = 0))]
    fn new(rows: Vec<Vec<usize>>, distinguished: usize) -> PyResult<Self> {
        FiniteAlgebra::new(rows, distinguished)
            .map(|inner| PyAlgebra { inner })
            .map_err(value_error)
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        builtin(name).map(|inner| PyAlgebra { inner }).map_err(value_error)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        FiniteAlgebra::from_file_format(text)
            .map(|inner| PyAlgebra { inner })
            .map_err(value_error)
    }

    fn to_text(&self) -> String {
        self.inner.to_file_format()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn distinguished(&self) -> usize {
        self.inner.distinguished()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn rows(&self) -> Vec<Vec<usize>> {
        self.inner.rows()
    }

    /// `None` if the identity holds, else a failing assignment letter -> label.
    #[pyo3(signature = (identity, mode = "IS"))]
    fn satisfies(&self, identity: &str, mode: &str) -> PyResult<Option<BTreeMap<char, String>>> {
        let id = Identity::parse(identity, self::mode(mode)?).map_err(value_error)?;
        Ok(self.inner.satisfies(&id).witness.map(|w| {
            w.into_iter()
                .map(|(x, v)| (x.as_char(), self.inner.label(v).to_string()))
                .collect()
        }))
    }

    #[pyo3(signature = (mode = "IS"))]
    fn check_axioms(&self, mode: &str) -> PyResult<bool> {
        Ok(self.inner.check_axioms(self::mode(mode)?).passed())
    }

    fn variety(&self) -> PyResult<String> {
        variety_of(&self.inner).map(|v| v.to_string()).map_err(value_error)
    }

    fn direct_product(&self, other: &PyAlgebra) -> PyAlgebra {
        PyAlgebra { inner: self.inner.direct_product(&other.inner) }
    }

    fn is_isomorphic(&self, other: &PyAlgebra) -> bool {
        self.inner.is_isomorphic(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Algebra(order={}, distinguished={})", self.inner.order(), self.inner.distinguished())
    }
}

/// Whether an IS identity holds in the named variety.
#[pyfunction]
fn decide(variety_name: &str, identity: &str) -> PyResult<bool> {
    let id = Identity::parse(identity, Mode::IS).map_err(value_error)?;
    decide_identity(variety(variety_name)?, &id).map_err(value_error)
}

#[pyfunction]
fn normalize(word: &str) -> PyResult<String> {
    parse_word(word).map(|w| normalize_is(&w).to_string()).map_err(value_error)
}

#[pyfunction]
fn varieties() -> Vec<&'static str> {
    VarietyId::ALL.iter().map(|v| v.name()).collect()
}

/// Covering pairs of the subvariety lattice as `(lower, upper)` names.
#[pyfunction]
fn lattice_covers() -> Vec<(String, String)> {
    let lat = &variety_lattice().lattice;
    lat.covers()
        .into_iter()
        .map(|(x, y)| (lat.label(x).to_string(), lat.label(y).to_string()))
        .collect()
}

#[pyfunction]
fn join(a: &str, b: &str) -> PyResult<String> {
    Ok(variety_lattice().join(variety(a)?, variety(b)?).to_string())
}

#[pyfunction]
fn meet(a: &str, b: &str) -> PyResult<String> {
    Ok(variety_lattice().meet(variety(a)?, variety(b)?).to_string())
}

#[pyfunction]
fn leq(a: &str, b: &str) -> PyResult<bool> {
    Ok(variety_lattice().leq(variety(a)?, variety(b)?))
}

/// All algebras of an order up to isomorphism.
#[pyfunction]
#[pyo3(signature = (order, mode = "IS"))]
fn enumerate(py: Python<'_>, order: usize, mode: &str) -> PyResult<Vec<PyAlgebra>> {
    let mode = self::mode(mode)?;
    let report = py
        .detach(|| enumerator::enumerate(order, mode))
        .map_err(value_error)?;
    Ok(report.algebras.into_iter().map(|inner| PyAlgebra { inner }).collect())
}

/// Replays a script; raises `ValueError` naming the first bad step.
#[pyfunction]
fn replay(script: &str) -> PyResult<()> {
    let parsed = AnyScript::parse(script).map_err(value_error)?;
    replay_with_library(&parsed).map_err(value_error)
}

#[pyfunction]
fn shipped_script_texts() -> Vec<String> {
    shipped_scripts().iter().map(|s| s.to_string()).collect()
}

/// Runs the acceptance suite; returns `(all_passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (jobs = 1))]
fn run_acceptance(py: Python<'_>, jobs: usize) -> (bool, String) {
    py.detach(|| verify::report(jobs))
}

#[pymodule]
fn varietylab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(varieties, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_covers, m)?)?;
    m.add_function(wrap_pyfunction!(join, m)?)?;
    m.add_function(wrap_pyfunction!(meet, m)?)?;
    m.add_function(wrap_pyfunction!(leq, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(shipped_script_texts, m)?)?;
    m.add_function(wrap_pyfunction!(run_acceptance, m)?)?;
    Ok(())
}
