//! Python bindings for `frw-killing`.
//!
//! Points are passed as strings such as `"x:0.1,0.2,0,0"` or `"u:0,0,0,0"`;
//! structured results come back as dicts and nested lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use frw_killing::catalog::{self, FieldId};
use frw_killing::curvature;
use frw_killing::embedding;
use frw_killing::error::Error;
use frw_killing::geometry::{Chart, ChartPoint};
use frw_killing::killing::{self, KillingJet, Segment, DEFAULT_RANK_TOL};
use frw_killing::report::to_json_string;
use frw_killing::sampling;
use frw_killing::scale_factor::ScaleFactorProfile;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::InvalidProfile(_)
        | Error::ChartProfileMismatch(_)
        | Error::Domain { .. }
        | Error::SingularPoint
        | Error::StepTooLarge { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn point(s: &str) -> PyResult<ChartPoint> {
    s.parse().map_err(to_py_err)
}

fn field(s: &str) -> PyResult<FieldId> {
    s.parse().map_err(to_py_err)
}

/// Serializes through the report formatter and parses with Python's
/// `json`, so every serializable result maps onto plain dicts and lists.
fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = to_json_string(value).map_err(to_py_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Scale factor `R(x⁰)`.
#[pyclass(name = "Profile", module = "frw_killing_py", frozen)]
struct PyProfile {
    inner: ScaleFactorProfile,
}

#[pymethods]
impl PyProfile {
    /// Parses `secant:1`, `constant:2`, `exponential:1,1` or the
    /// `kind=... a=...` form.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyProfile {
            inner: spec.parse().map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn constant(a: f64) -> PyResult<Self> {
        Ok(PyProfile {
            inner: ScaleFactorProfile::constant(a).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn secant(a: f64) -> PyResult<Self> {
        Ok(PyProfile {
            inner: ScaleFactorProfile::secant(a).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn exponential(a: f64, k: f64) -> PyResult<Self> {
        Ok(PyProfile {
            inner: ScaleFactorProfile::exponential(a, k).map_err(to_py_err)?,
        })
    }

    /// `d^order R / dx0^order` for `order` in 0..=3.
    #[pyo3(signature = (x0, order = 0))]
    fn r(&self, x0: f64, order: usize) -> PyResult<f64> {
        self.inner.eval_r(x0, order).map_err(to_py_err)
    }

    fn domain(&self) -> (f64, f64) {
        self.inner.domain()
    }

    fn safe_interval(&self) -> (f64, f64) {
        self.inner.safe_interval()
    }

    fn __repr__(&self) -> String {
        format!("Profile('{}')", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Christoffel symbols `gamma[k][i][j]`.
#[pyfunction]
fn christoffel(profile: &PyProfile, at: &str) -> PyResult<[[[f64; 4]; 4]; 4]> {
    Ok(curvature::connection(&profile.inner, &point(at)?).map_err(to_py_err)?.gamma)
}

/// Riemann tensor, Ricci tensor and scalar curvature at a point.
#[pyfunction]
fn curvature_at<'py>(py: Python<'py>, profile: &PyProfile, at: &str) -> PyResult<Bound<'py, PyDict>> {
    let c = curvature::curvature(&profile.inner, &point(at)?).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("riemann", c.riemann)?;
    d.set_item("ricci", c.ricci)?;
    d.set_item("scalar", c.scalar)?;
    Ok(d)
}

#[pyfunction]
fn scalar_curvature(profile: &PyProfile, at: &str) -> PyResult<f64> {
    curvature::scalar_curvature(&profile.inner, &point(at)?).map_err(to_py_err)
}

/// Rank and kernel of the compatibility operator at a pole-chart point.
#[pyfunction]
#[pyo3(signature = (profile, at, tol = DEFAULT_RANK_TOL))]
fn compat_rank<'py>(py: Python<'py>, profile: &PyProfile, at: &str, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = killing::compat_rank(&profile.inner, &point(at)?, tol).map_err(to_py_err)?;
    to_python(py, &report)
}

/// Dimension bound of the isometry algebra over seeded pole-chart samples.
#[pyfunction]
#[pyo3(signature = (profile, samples = 20, seed = 42, tol = DEFAULT_RANK_TOL))]
fn algebra_dimension(profile: &PyProfile, samples: usize, seed: u64, tol: f64) -> PyResult<usize> {
    let points = sampling::sample_points(&profile.inner, Chart::NorthPole, samples, seed).map_err(to_py_err)?;
    killing::algebra_dimension(&profile.inner, &points, tol).map_err(to_py_err)
}

/// Catalog ids with descriptions and validity conditions.
#[pyfunction]
fn catalog_ids() -> Vec<(&'static str, &'static str, &'static str)> {
    FieldId::ALL.iter().map(|id| (id.name(), id.description(), id.validity())).collect()
}

#[pyfunction]
fn field_vector(id: &str, profile: &PyProfile, at: &str) -> PyResult<[f64; 4]> {
    catalog::field_vector(field(id)?, &profile.inner, &point(at)?).map_err(to_py_err)
}

#[pyfunction]
fn field_covector(id: &str, profile: &PyProfile, at: &str) -> PyResult<[f64; 4]> {
    catalog::field_covector(field(id)?, &profile.inner, &point(at)?).map_err(to_py_err)
}

/// Ten-component jet `[X0..X3, Y01, Y02, Y03, Y12, Y13, Y23]`.
#[pyfunction]
fn field_jet(id: &str, profile: &PyProfile, at: &str) -> PyResult<[f64; 10]> {
    Ok(catalog::field_jet(field(id)?, &profile.inner, &point(at)?).map_err(to_py_err)?.to_array())
}

/// Largest component of `∇_i X_j + ∇_j X_i`, computed exactly.
#[pyfunction]
fn killing_residual(id: &str, profile: &PyProfile, at: &str) -> PyResult<f64> {
    catalog::exact_killing_residual(field(id)?, &profile.inner, &point(at)?).map_err(to_py_err)
}

/// Transports a jet along the straight segment from `start` to `end`
/// (same chart) and returns the jet at `end`.
#[pyfunction]
#[pyo3(signature = (profile, jet, start, end, steps = None))]
fn transport(profile: &PyProfile, jet: [f64; 10], start: &str, end: &str, steps: Option<usize>) -> PyResult<[f64; 10]> {
    let (a, b) = (point(start)?, point(end)?);
    if a.chart != b.chart {
        return Err(PyValueError::new_err("start and end must be in the same chart"));
    }
    let path = Segment {
        from: a.coords,
        to: b.coords,
    };
    let jet0 = KillingJet::from_array(jet);
    let out = match steps {
        Some(n) => killing::transport_jet(&profile.inner, &a, &jet0, &path, n),
        None => killing::transport_jet_adaptive(&profile.inner, &a, &jet0, &path).map(|o| o.jet),
    };
    Ok(out.map_err(to_py_err)?.to_array())
}

/// Ambient coordinates `z` of a u-chart point on the hyperboloid of radius `a`.
#[pyfunction]
fn embed(at: &str, a: f64) -> PyResult<[f64; 5]> {
    Ok(embedding::embed(&point(at)?, a).map_err(to_py_err)?.z)
}

/// Seeded sample points as strings.
#[pyfunction]
#[pyo3(signature = (profile, chart = "x", count = 10, seed = 42))]
fn sample_points(profile: &PyProfile, chart: &str, count: usize, seed: u64) -> PyResult<Vec<String>> {
    let chart: Chart = chart.parse().map_err(to_py_err)?;
    let points = sampling::sample_points(&profile.inner, chart, count, seed).map_err(to_py_err)?;
    Ok(points.iter().map(|p| p.to_string()).collect())
}

/// Random combinations of the ten constant-curvature fields with a
/// non-time-like witness each.
#[pyfunction]
#[pyo3(signature = (profile, trials = 10, seed = 42))]
fn timelike_scan<'py>(py: Python<'py>, profile: &PyProfile, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let w = catalog::timelike_combination_scan(&profile.inner, trials, seed).map_err(to_py_err)?;
    to_python(py, &w)
}

/// Runs the command line; returns the exit code.
#[pyfunction]
fn run(argv: Vec<String>) -> i32 {
    frw_killing::cli::run(std::iter::once("frw-killing".to_string()).chain(argv))
}

#[pymodule]
fn frw_killing_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(christoffel, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_at, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(compat_rank, m)?)?;
    m.add_function(wrap_pyfunction!(algebra_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_ids, m)?)?;
    m.add_function(wrap_pyfunction!(field_vector, m)?)?;
    m.add_function(wrap_pyfunction!(field_covector, m)?)?;
    m.add_function(wrap_pyfunction!(field_jet, m)?)?;
    m.add_function(wrap_pyfunction!(killing_residual, m)?)?;
    m.add_function(wrap_pyfunction!(transport, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(sample_points, m)?)?;
    m.add_function(wrap_pyfunction!(timelike_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
