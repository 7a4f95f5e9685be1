//! Python bindings: `import nonlocality`.

use nonlocality_core::{self as core, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Usage(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        Error::NoConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let items = a.iter().map(|x| json_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn matrix_rows(m: &core::ComplexMatrix) -> Vec<Vec<Complex64>> {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect()
}

fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<core::ComplexMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    core::ComplexMatrix::from_entries(n, &flat).py()
}

/// Alice's `X, X′` and Bob's `Y, Y′` with the CHSH combination.
#[pyclass(name = "Scenario", frozen)]
struct PyScenario(core::BipartiteScenario);

#[pymethods]
impl PyScenario {
    /// Canonical configuration at angle `theta` (radians, `[0, π]`).
    #[new]
    fn new(theta: f64) -> PyResult<Self> {
        core::canonical_scenario(theta).py().map(Self)
    }

    #[staticmethod]
    fn from_vectors(x: [f64; 3], x_prime: [f64; 3], y: [f64; 3], y_prime: [f64; 3]) -> PyResult<Self> {
        let obs = |b| core::QubitObservable::new(b).py();
        Ok(Self(core::BipartiteScenario::new(obs(x)?, obs(x_prime)?, obs(y)?, obs(y_prime)?)))
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    fn s_operator(&self) -> Vec<Vec<Complex64>> {
        matrix_rows(&self.0.s_operator())
    }

    fn __repr__(&self) -> String {
        format!("Scenario(theta={})", self.0.theta())
    }
}

#[pyclass(name = "State", frozen)]
struct PyState(core::DensityMatrix);

#[pymethods]
impl PyState {
    #[staticmethod]
    fn singlet() -> Self {
        Self(core::singlet())
    }

    #[staticmethod]
    fn product(bloch_a: [f64; 3], bloch_b: [f64; 3]) -> PyResult<Self> {
        core::product_state(bloch_a, bloch_b).py().map(Self)
    }

    #[staticmethod]
    fn werner(visibility: f64) -> PyResult<Self> {
        core::DensityMatrix::werner(visibility).py().map(Self)
    }

    #[staticmethod]
    fn maximally_mixed() -> PyResult<Self> {
        core::DensityMatrix::maximally_mixed(4).py().map(Self)
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_rows(self.0.matrix())
    }

    fn expectation(&self, observable: Vec<Vec<Complex64>>) -> PyResult<f64> {
        self.0.expectation(&matrix_from_rows(observable)?).py()
    }
}

#[pyfunction]
fn correlator(state: &PyState, a: [f64; 3], b: [f64; 3]) -> PyResult<f64> {
    let a = core::QubitObservable::new(a).py()?;
    let b = core::QubitObservable::new(b).py()?;
    core::correlator(&state.0, &a, &b).py()
}

/// `⟨S⟩, ⟨S²⟩, …, ⟨Sⁿ⟩`.
#[pyfunction]
#[pyo3(signature = (state, scenario, n=3))]
fn moments(state: &PyState, scenario: &PyScenario, n: u32) -> PyResult<Vec<f64>> {
    core::scenario::moments(&state.0, &scenario.0.s_operator(), n).py()
}

#[pyfunction]
fn cumulants(moments: Vec<f64>) -> PyResult<Vec<f64>> {
    let seq = core::MomentSequence::new(moments).py()?;
    Ok(core::cumulants_from_moments(&seq))
}

#[pyfunction]
fn lhvt_cumulant_bounds(py: Python<'_>, n: u32) -> PyResult<Bound<'_, PyAny>> {
    to_dict(py, &core::lhvt_cumulant_bounds(n).py()?)
}

#[pyfunction]
fn chsh_witness(py: Python<'_>, mean_s: f64) -> PyResult<Bound<'_, PyAny>> {
    to_dict(py, &core::chsh_witness(mean_s).py()?)
}

#[pyfunction]
fn skewness_witness(py: Python<'_>, mean_s: f64) -> PyResult<Bound<'_, PyAny>> {
    to_dict(py, &core::skewness_witness(mean_s).py()?)
}

/// Full cumulant report as a dict.
#[pyfunction]
#[pyo3(signature = (state, scenario, max_order=3))]
fn classify<'py>(
    py: Python<'py>,
    state: &PyState,
    scenario: &PyScenario,
    max_order: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| core::classify(&state.0, &scenario.0, max_order)).py()?;
    to_dict(py, &report)
}

/// The 16 deterministic strategies as `(a_x, a_x', b_y, b_y', S)`.
#[pyfunction]
fn strategies() -> Vec<(i8, i8, i8, i8, i32)> {
    core::enumerate_strategies()
        .iter()
        .map(|s| {
            let [a, ap] = s.alice();
            let [b, bp] = s.bob();
            (a, ap, b, bp, s.s_value())
        })
        .collect()
}

#[pyfunction]
fn pr_box(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let b = core::pr_box();
    let d = PyDict::new(py);
    d.set_item("chsh", b.chsh())?;
    d.set_item("signaling", b.signaling())?;
    d.set_item("correlators", b.correlators().to_array())?;
    Ok(d.into_any())
}

#[pyfunction]
fn nonsteering_quadratic(correlators: [f64; 4]) -> PyResult<f64> {
    core::nonsteering_quadratic(&core::Correlators::from_array(correlators)).py()
}

#[pyfunction]
fn majorization_bound(theta: f64) -> PyResult<[f64; 4]> {
    core::majorization_bound(theta).py().map(|m| m.s)
}

#[pyfunction]
fn hermitian_eigenvalues(matrix: Vec<Vec<Complex64>>) -> PyResult<Vec<f64>> {
    let m = matrix_from_rows(matrix)?;
    core::hermitian_eigenvalues(&m).py().map(|s| s.eigenvalues().to_vec())
}

#[pyfunction]
#[pyo3(signature = (theta_start=0.0, theta_end=std::f64::consts::FRAC_PI_2, steps=101, state="singlet"))]
fn scan_csv(theta_start: f64, theta_end: f64, steps: usize, state: &str) -> PyResult<String> {
    let cfg = core::report::ScanConfig {
        theta_start,
        theta_end,
        steps,
        state: state.parse().py()?,
        ..Default::default()
    };
    core::report::run_scan(&cfg).py()
}

#[pymodule]
fn nonlocality(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(correlator, m)?)?;
    m.add_function(wrap_pyfunction!(moments, m)?)?;
    m.add_function(wrap_pyfunction!(cumulants, m)?)?;
    m.add_function(wrap_pyfunction!(lhvt_cumulant_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_witness, m)?)?;
    m.add_function(wrap_pyfunction!(skewness_witness, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(strategies, m)?)?;
    m.add_function(wrap_pyfunction!(pr_box, m)?)?;
    m.add_function(wrap_pyfunction!(nonsteering_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(majorization_bound, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(scan_csv, m)?)?;
    Ok(())
}
