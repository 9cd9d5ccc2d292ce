//! Python bindings for the dlvar core library.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dlvar::chardual::{AbelianStructure, DEFAULT_GROUP_BUDGET};
use dlvar::dlgroup::GroupParams;
use dlvar::witt::Backend;
use dlvar::xhvar::{XhVariety, DEFAULT_BUDGET};
use dlvar::{cli, cohom, Error};

create_exception!(dlvar_py, BudgetExceeded, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } => BudgetExceeded::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn backend(name: &str) -> PyResult<Backend> {
    match name {
        "equal" => Ok(Backend::EqualChar),
        "mixed" => Ok(Backend::PTypical),
        other => Err(PyValueError::new_err(format!("unknown backend {other:?}; expected 'equal' or 'mixed'"))),
    }
}

/// Parameters (q, n, k, h) of the group together with a ring backend.
#[pyclass(name = "Params", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyParams {
    inner: GroupParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (q, n, k, h, backend = "equal"))]
    fn new(q: u64, n: usize, k: usize, h: usize, backend: &str) -> PyResult<Self> {
        let b = self::backend(backend)?;
        Ok(PyParams { inner: GroupParams::new(q, n, k, h, b).map_err(to_py)? })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn h(&self) -> usize {
        self.inner.h
    }

    #[getter]
    fn backend(&self) -> &'static str {
        match self.inner.backend {
            Backend::EqualChar => "equal",
            _ => "mixed",
        }
    }

    /// Number of points of X_h over F_{q^{nm}}.
    #[pyo3(signature = (m = 1, budget = DEFAULT_BUDGET))]
    fn count_points(&self, py: Python<'_>, m: u32, budget: u128) -> PyResult<u64> {
        let p = self.inner;
        py.detach(|| XhVariety::new(p, m)?.count_points(budget)).map_err(to_py)
    }

    /// Predicted point count over F_{q^{nm}} from the cohomology table.
    #[pyo3(signature = (m = 1))]
    fn predict_count(&self, m: u32) -> PyResult<BigInt> {
        cohom::predict_count(self.inner, m).map_err(to_py)
    }

    /// Map from degree i to dim H_c^i(X_h).
    fn dims(&self) -> PyResult<BTreeMap<usize, BigUint>> {
        Ok(cohom::dims_table(self.inner).map_err(to_py)?.dims)
    }

    /// The zeta function of X_h over F_{q^n} in factored form.
    fn zeta(&self) -> PyResult<String> {
        Ok(cohom::zeta(self.inner).map_err(to_py)?.to_string())
    }

    /// One dict per character of U^1: exponents, level, Howe sequences and degrees.
    fn census<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let c = cohom::census(self.inner).map_err(to_py)?;
        c.rows
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("index", r.index)?;
                d.set_item("exponents", r.exponents.clone())?;
                d.set_item("level", r.level)?;
                d.set_item("m_seq", r.m_seq.clone())?;
                d.set_item("h_seq", r.h_seq.clone())?;
                d.set_item("r_chi", r.r_chi)?;
                d.set_item("d_chi", r.d_chi)?;
                Ok(d)
            })
            .collect()
    }

    /// Invariant factors of the finite abelian group U^1(F_{q^n}).
    fn group_invariants(&self) -> PyResult<Vec<u64>> {
        Ok(AbelianStructure::new(self.inner, DEFAULT_GROUP_BUDGET).map_err(to_py)?.invariants())
    }

    /// Howe sequences (m, h) of the character with the given index.
    fn howe_data(&self, index: u64) -> PyResult<(Vec<usize>, Vec<usize>)> {
        let s = AbelianStructure::new(self.inner, DEFAULT_GROUP_BUDGET).map_err(to_py)?;
        if index >= s.num_characters() {
            return Err(PyValueError::new_err(format!("character index {index} out of range")));
        }
        let hd = s.howe_data(&s.character(index));
        Ok((hd.m_seq, hd.h_seq))
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("Params(q={}, n={}, k={}, h={}, backend={:?})", p.q, p.n, p.k, p.h, self.backend())
    }
}

/// Runs a command-line invocation and returns (exit code, JSON report or None).
#[pyfunction]
fn run(py: Python<'_>, args: Vec<String>) -> PyResult<(i32, Option<String>)> {
    let mut full = vec!["dlvar".to_string()];
    full.extend(args);
    let parsed = cli::Cli::try_parse_from_args(full).map_err(|e| PyValueError::new_err(e.to_string()))?;
    match py.detach(|| cli::execute(&parsed)) {
        Ok(report) => {
            let code = if report.pass { cli::EXIT_PASS } else { cli::EXIT_CHECK_FAILED };
            let json = serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
            Ok((code, Some(json)))
        }
        Err(e) => Ok((cli::exit_code(&e), None)),
    }
}

/// Adds the bindings to a module object.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

#[pymodule]
fn dlvar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_names() {
        assert_eq!(backend("equal").unwrap(), Backend::EqualChar);
        assert_eq!(backend("mixed").unwrap(), Backend::PTypical);
        Python::initialize();
        assert!(backend("adic").is_err());
    }
}
