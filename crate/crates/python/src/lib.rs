use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use pinch_core::catalog::{load_descriptor, save_descriptor, standard_catalog, CatalogFilter, SurfaceSpec};
use pinch_core::chowlattice::SurfaceModel;
use pinch_core::harness::{run_suite, Config, Suite};
use pinch_core::projector::{exceptional_rank, jet_normalize, ram_length_with_retries, RamReport, RamStatus};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn entry(spec: &str) -> PyResult<pinch_core::catalog::CatalogEntry> {
    spec.parse::<SurfaceSpec>().and_then(|s| s.resolve()).map_err(err)
}

/// Lattice model of a surface with its embedding.
#[pyclass(name = "Surface", module = "pinch", frozen)]
pub struct PySurface {
    inner: SurfaceModel,
}

#[pymethods]
impl PySurface {
    /// Resolves a spec such as `scroll:2,3`, `veronese`, `delpezzo:7`, `ruled:1,5` or `file:<path>`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PySurface { inner: entry(spec)?.model })
    }

    #[staticmethod]
    fn from_descriptor(json: &str) -> PyResult<Self> {
        Ok(PySurface { inner: load_descriptor(json).map_err(err)? })
    }

    fn descriptor(&self) -> String {
        save_descriptor(&self.inner)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn ambient(&self) -> i64 {
        self.inner.ambient()
    }

    #[getter]
    fn degree(&self) -> i64 {
        self.inner.degree()
    }

    #[getter]
    fn genus(&self) -> Option<i64> {
        self.inner.genus()
    }

    #[getter]
    fn pinch_number(&self) -> i64 {
        self.inner.pinch_number()
    }

    #[getter]
    fn class_degree(&self) -> i64 {
        self.inner.class_degree()
    }

    #[getter]
    fn bound(&self) -> i64 {
        self.inner.bound()
    }

    #[getter]
    fn k_squared(&self) -> i64 {
        self.inner.k_squared()
    }

    #[getter]
    fn c2(&self) -> i64 {
        self.inner.c2()
    }

    /// `(branch, i)` where `pinch_number = 2N - 6 + 2i`.
    fn classify(&self) -> PyResult<(String, i64)> {
        let c = self.inner.classify().map_err(err)?;
        Ok((c.branch.to_string(), c.excess))
    }

    fn blow_up(&self, k: usize) -> PyResult<Self> {
        Ok(PySurface { inner: self.inner.blow_up(k).map_err(err)? })
    }

    fn inner_projection(&self) -> PyResult<Self> {
        Ok(PySurface { inner: self.inner.inner_projection_model().map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Surface({:?}, N={}, deg={})", self.inner.name(), self.inner.ambient(), self.inner.degree())
    }
}

/// Outcome of projecting a chart to `P^3` over a prime field.
#[pyclass(name = "RamReport", module = "pinch", frozen, get_all)]
pub struct PyRamReport {
    surface: String,
    prime: u64,
    seed: u64,
    predicted: i64,
    length: Option<usize>,
    agreement: bool,
    status: String,
    attempts: usize,
}

impl From<RamReport> for PyRamReport {
    fn from(r: RamReport) -> Self {
        let status = match r.status {
            RamStatus::Agree => "agree",
            RamStatus::Disagree => "disagree",
            RamStatus::ResourceExhausted => "resource-exhausted",
            RamStatus::Unlucky => "unlucky",
        };
        PyRamReport {
            surface: r.surface,
            prime: r.prime,
            seed: r.seed,
            predicted: r.predicted,
            length: r.length,
            agreement: r.agreement,
            status: status.to_string(),
            attempts: r.attempts.len(),
        }
    }
}

#[pymethods]
impl PyRamReport {
    fn __repr__(&self) -> String {
        format!("RamReport({:?}, length={:?}, status={:?})", self.surface, self.length, self.status)
    }
}

#[pyfunction(name = "pinch")]
fn pinch_of(spec: &str) -> PyResult<i64> {
    Ok(entry(spec)?.model.pinch_number())
}

#[pyfunction]
#[pyo3(signature = (max_n=None))]
fn catalog(max_n: Option<i64>) -> Vec<PySurface> {
    standard_catalog(&CatalogFilter { max_n, only: None })
        .into_iter()
        .map(|e| PySurface { inner: e.model })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (spec, prime=32003, seed=0, retries=8))]
fn project(py: Python<'_>, spec: &str, prime: u64, seed: u64, retries: usize) -> PyResult<PyRamReport> {
    let config = Config { prime, seed, retries, ..Config::default() };
    config.validate().map_err(err)?;
    let e = entry(spec)?;
    let chart = e.chart(seed).map_err(err)?.ok_or_else(|| err(format!("{spec} has no explicit chart")))?;
    let report = py
        .detach(|| ram_length_with_retries(&chart, prime, seed, retries, &config.budget()))
        .map_err(err)?;
    Ok(report.into())
}

/// `(ramified_along_e, h_on_e)` at the chart point `(s, t)`.
#[pyfunction]
#[pyo3(signature = (spec, s, t, omega=4))]
fn jets(spec: &str, s: i64, t: i64, omega: u32) -> PyResult<(bool, Vec<String>)> {
    let e = entry(spec)?;
    let chart = e.chart(0).map_err(err)?.ok_or_else(|| err(format!("{spec} has no explicit chart")))?;
    let x = [BigRational::from_integer(s.into()), BigRational::from_integer(t.into())];
    let j = jet_normalize(&chart, &x, omega).map_err(err)?;
    let r = exceptional_rank(&j).map_err(err)?;
    Ok((r.ramified_along_e, r.h_on_e.iter().map(|h| h.to_string()).collect()))
}

/// Runs a verification suite and returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (suite="all", seed=0))]
fn verify_json(py: Python<'_>, suite: &str, seed: u64) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(err)?;
    let config = Config { seed, ..Config::default() };
    py.detach(|| run_suite(suite, &config)).map(|r| r.to_json()).map_err(err)
}

#[pymodule]
fn pinch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySurface>()?;
    m.add_class::<PyRamReport>()?;
    m.add_function(wrap_pyfunction!(pinch_of, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(jets, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    Ok(())
}
