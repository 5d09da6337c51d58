//! Python bindings: states, MUB sets, entropies, bound reports, sweeps and
//! random batches.

use std::collections::BTreeMap;

use cmub_eur::bounds::{self, compute_report};
use cmub_eur::entropy;
use cmub_eur::mub::{mubs_by_name, mubs_for_dim, verify_mub, MUB_TOL};
use cmub_eur::scenario::random_state;
use cmub_eur::selfcheck::{default_sets, run_battery};
use cmub_eur::{build_scenario, Complex64, ExampleId, Family, RandomStateSpec, StateKind};
use cmub_eur_cli::commands::{self, BoundsRequest, RandomConfig, SweepConfig, RANDOM_DIM};
use cmub_eur_cli::CliError;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn core_err(e: cmub_eur::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cli_err(e: CliError) -> PyErr {
    PyValueError::new_err(e.to_string())
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
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report_to_py<'py>(py: Python<'py>, report: &cmub_eur::BoundReport) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// A labeled multipartite density matrix.
#[pyclass(name = "QuantumState", frozen, skip_from_py_object, module = "cmub_eur")]
#[derive(Clone)]
pub struct PyQuantumState {
    inner: cmub_eur::QuantumState,
}

#[pymethods]
impl PyQuantumState {
    /// Builds a state from real and imaginary parts of its density matrix.
    #[new]
    fn new(labels: Vec<String>, dims: Vec<usize>, re: Vec<Vec<f64>>, im: Option<Vec<Vec<f64>>>) -> PyResult<Self> {
        let im = im.unwrap_or_else(|| re.iter().map(|r| vec![0.0; r.len()]).collect());
        let rho = cmub_eur::ComplexMatrix::from_parts(&re, &im).map_err(core_err)?;
        let inner = cmub_eur::QuantumState::new(labels, dims, rho).map_err(core_err)?;
        Ok(Self { inner })
    }

    /// `|ψ><ψ|` from complex amplitudes.
    #[staticmethod]
    fn pure(labels: Vec<String>, dims: Vec<usize>, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        let inner = cmub_eur::QuantumState::from_pure(labels, dims, &amplitudes).map_err(core_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn maximally_mixed(labels: Vec<String>, dims: Vec<usize>) -> PyResult<Self> {
        let inner = cmub_eur::QuantumState::maximally_mixed(labels, dims).map_err(core_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: cmub_eur::QuantumState::from_json(text).map_err(core_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Density matrix as nested lists of complex numbers.
    fn rho(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.rho();
        (0..m.rows()).map(|i| m.row(i)).collect()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }

    fn purity(&self) -> f64 {
        entropy::purity(&self.inner)
    }

    fn partial_trace(&self, keep: Vec<String>) -> PyResult<Self> {
        let keep: Vec<&str> = keep.iter().map(String::as_str).collect();
        Ok(Self {
            inner: self.inner.partial_trace(&keep).map_err(core_err)?,
        })
    }

    fn refactored(&self, labels: Vec<String>, dims: Vec<usize>) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.refactored(labels, dims).map_err(core_err)?,
        })
    }

    fn tensor(&self, other: &PyQuantumState) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.tensor(&other.inner).map_err(core_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("QuantumState(labels={:?}, dims={:?})", self.inner.labels(), self.inner.dims())
    }
}

/// A verified complete set of mutually unbiased bases.
#[pyclass(name = "MubSet", frozen, skip_from_py_object, module = "cmub_eur")]
#[derive(Clone)]
pub struct PyMubSet {
    inner: cmub_eur::MubSet,
}

#[pymethods]
impl PyMubSet {
    /// `pauli`, `qutrit`, `ququart` or `prime<d>`.
    #[staticmethod]
    fn by_name(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: mubs_by_name(name).map_err(core_err)?,
        })
    }

    #[staticmethod]
    fn for_dim(d: usize) -> PyResult<Self> {
        Ok(Self {
            inner: mubs_for_dim(d).map_err(core_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: cmub_eur::MubSet::from_json(text).map_err(core_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Basis `i` (0-based) as a list of vectors.
    fn basis(&self, i: usize) -> PyResult<Vec<Vec<Complex64>>> {
        self.inner
            .bases()
            .get(i)
            .map(|b| b.vectors().to_vec())
            .ok_or_else(|| PyValueError::new_err(format!("basis index {i} out of range")))
    }

    /// Largest deviations from orthonormality and unbiasedness.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = verify_mub(self.inner.bases(), MUB_TOL);
        let value = serde_json::to_value(r).map_err(|e| PyValueError::new_err(e.to_string()))?;
        json_to_py(py, &value)
    }

    /// `Σ_bases Σ_j p_j²` for a single-system state.
    fn collision_sum(&self, state: &PyQuantumState) -> f64 {
        self.inner.collision_sum(state.inner.rho())
    }

    fn outcome_probabilities(&self, state: &PyQuantumState, basis: usize, measured: &str) -> PyResult<Vec<f64>> {
        let b = self
            .inner
            .bases()
            .get(basis)
            .ok_or_else(|| PyValueError::new_err(format!("basis index {basis} out of range")))?;
        let p = entropy::measurement_probs(&state.inner, b, measured).map_err(core_err)?;
        Ok(p.as_slice().to_vec())
    }
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[pyfunction]
fn von_neumann_entropy(state: &PyQuantumState) -> PyResult<f64> {
    entropy::von_neumann_entropy(&state.inner).map_err(core_err)
}

#[pyfunction]
fn conditional_entropy(state: &PyQuantumState, target: Vec<String>, memory: Vec<String>) -> PyResult<f64> {
    entropy::conditional_entropy(&state.inner, &strs(&target), &strs(&memory)).map_err(core_err)
}

#[pyfunction]
fn mutual_information(state: &PyQuantumState, x: Vec<String>, y: Vec<String>) -> PyResult<f64> {
    entropy::mutual_information(&state.inner, &strs(&x), &strs(&y)).map_err(core_err)
}

/// Purity-based lower bound on the summed outcome entropies without memory.
#[pyfunction]
fn l_cmubs(d: usize, purity: f64) -> PyResult<f64> {
    bounds::l_cmubs(d, purity).map_err(core_err)
}

/// Purity-based upper bound on the summed outcome entropies without memory.
#[pyfunction]
fn u_cmubs(d: usize, purity: f64) -> PyResult<f64> {
    bounds::u_cmubs(d, purity).map_err(core_err)
}

/// Full report for a state; `check=True` raises if a bound relation fails.
#[pyfunction]
#[pyo3(signature = (state, mub=None, partition=None, measured=None, memories=None, check=true))]
fn evaluate<'py>(
    py: Python<'py>,
    state: &PyQuantumState,
    mub: Option<String>,
    partition: Option<String>,
    measured: Option<String>,
    memories: Option<Vec<String>>,
    check: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let req = BoundsRequest {
        mub,
        partition,
        measured,
        memories,
    };
    let (report, ok) = commands::bounds_report(&state.inner.to_json(), &req).map_err(cli_err)?;
    if check {
        ok.map_err(cli_err)?;
    }
    report_to_py(py, &report)
}

fn example(name: &str) -> PyResult<ExampleId> {
    name.parse().map_err(core_err)
}

fn kind(name: &str) -> PyResult<StateKind> {
    name.parse().map_err(core_err)
}

/// Report for a parametric example, e.g. `example_report("example2", phi=..., theta=...)`.
#[pyfunction]
#[pyo3(signature = (name, partition=None, **params))]
fn example_report<'py>(
    py: Python<'py>,
    name: &str,
    partition: Option<String>,
    params: Option<BTreeMap<String, f64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let id = example(name)?;
    let family = Family::from_params(id, &params.unwrap_or_default()).map_err(core_err)?;
    let n_bases = build_scenario(family.clone(), None).map_err(core_err)?.mubs.len();
    let partition = partition
        .map(|p| cmub_eur::Partition::parse(&p, n_bases))
        .transpose()
        .map_err(core_err)?;
    let report = compute_report(&build_scenario(family, partition).map_err(core_err)?).map_err(core_err)?;
    report_to_py(py, &report)
}

/// Seeded random states; item `i` depends only on `(seed, i)`.
#[pyfunction]
#[pyo3(signature = (dim, kind="mixed", seed=42, count=1))]
fn random_states(dim: usize, kind: &str, seed: u64, count: u64) -> PyResult<Vec<PyQuantumState>> {
    let spec = RandomStateSpec::new(dim, self::kind(kind)?, seed, count).map_err(core_err)?;
    (0..count)
        .map(|i| random_state(&spec, i).map(|inner| PyQuantumState { inner }).map_err(core_err))
        .collect()
}

/// CSV text of a one-parameter sweep.
#[pyfunction]
#[pyo3(signature = (example, param=None, lo=None, hi=None, steps=201, fixed=None, partition=None))]
fn sweep_csv(
    example: &str,
    param: Option<String>,
    lo: Option<f64>,
    hi: Option<f64>,
    steps: usize,
    fixed: Option<BTreeMap<String, f64>>,
    partition: Option<String>,
) -> PyResult<String> {
    let fixed = fixed.unwrap_or_default().into_iter().collect();
    let cfg = SweepConfig::new(self::example(example)?, param, lo, hi, steps, fixed, partition).map_err(cli_err)?;
    commands::sweep_csv(&cfg).map_err(cli_err)
}

/// CSV text of a random batch under example 3 or 6.
#[pyfunction]
#[pyo3(signature = (example="example3", kind="mixed", seed=42, count=1000, partition=None))]
fn random_csv(example: &str, kind: &str, seed: u64, count: u64, partition: Option<String>) -> PyResult<String> {
    let spec = RandomStateSpec::new(RANDOM_DIM, self::kind(kind)?, seed, count).map_err(core_err)?;
    let cfg = RandomConfig::new(self::example(example)?, spec, partition).map_err(cli_err)?;
    commands::random_csv(&cfg).map_err(cli_err)
}

/// Runs the self-check battery; returns `(name, passed, detail)` tuples.
#[pyfunction]
fn self_check() -> PyResult<Vec<(String, bool, String)>> {
    let results = run_battery(&default_sets()).map_err(core_err)?;
    Ok(results.into_iter().map(|r| (r.name, r.passed, r.detail)).collect())
}

#[pymodule]
#[pyo3(name = "cmub_eur")]
fn cmub_eur_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuantumState>()?;
    m.add_class::<PyMubSet>()?;
    m.add_function(wrap_pyfunction!(von_neumann_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(l_cmubs, m)?)?;
    m.add_function(wrap_pyfunction!(u_cmubs, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(example_report, m)?)?;
    m.add_function(wrap_pyfunction!(random_states, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(random_csv, m)?)?;
    m.add_function(wrap_pyfunction!(self_check, m)?)?;
    Ok(())
}
