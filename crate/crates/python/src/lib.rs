//! Python bindings. Reports come back as plain dicts with the same layout
//! as the CLI's JSON output.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use qswap::analysis::{self, Bipartition, DensityMatrix};
use qswap::cli;
use qswap::experiments::{self, Experiment, McSource};
use qswap::measurement::{self, OutcomeRecord, SpinDirection};
use qswap::protocol::{self, Mode};
use qswap::qmath::ComplexVector;
use qswap::states::{self, BellKind, Spin, StateVector};
use qswap::Label;
use serde_json::Value;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// JSON document to nested Python lists and dicts.
fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for x in items {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(fields) => {
            let dict = PyDict::new(py);
            for (k, x) in fields {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn experiment(id: u8) -> PyResult<Experiment> {
    Experiment::from_id(id).ok_or_else(|| PyValueError::new_err(format!("no experiment {id}; use 1 or 2")))
}

fn bell_kind(name: &str) -> PyResult<BellKind> {
    BellKind::ALL
        .into_iter()
        .find(|k| k.keyword() == name || k.label() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown Bell state {name:?}")))
}

fn spins(pattern: &str) -> PyResult<Vec<Spin>> {
    pattern
        .chars()
        .map(|c| match c {
            '+' => Ok(Spin::Plus),
            '-' | '−' => Ok(Spin::Minus),
            _ => Err(PyValueError::new_err(format!("spin pattern character {c:?}"))),
        })
        .collect()
}

/// `"x"`, `"y"`, `"z"` or a direction triple, normalized.
#[derive(FromPyObject)]
enum AxisArg {
    Name(String),
    Vector((f64, f64, f64)),
}

impl AxisArg {
    fn direction(&self) -> PyResult<SpinDirection> {
        match self {
            AxisArg::Name(n) => match n.as_str() {
                "x" => Ok(SpinDirection::X),
                "y" => Ok(SpinDirection::Y),
                "z" => Ok(SpinDirection::Z),
                _ => Err(PyValueError::new_err(format!("unknown axis {n:?}"))),
            },
            AxisArg::Vector((x, y, z)) => SpinDirection::normalized(*x, *y, *z).map_err(value_err),
        }
    }
}

#[pyclass(name = "StateVector", module = "pyqswap", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyStateVector {
    inner: StateVector,
}

#[pymethods]
impl PyStateVector {
    /// Labels may come in any order; amplitudes follow the given order.
    #[new]
    #[pyo3(signature = (labels, amplitudes, normalize = false))]
    fn new(labels: Vec<Label>, amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let v = ComplexVector::new(amplitudes).map_err(value_err)?;
        let inner = if normalize {
            StateVector::normalized(labels, v)
        } else {
            StateVector::new(labels, v)
        };
        inner.map(|inner| Self { inner }).map_err(value_err)
    }

    #[getter]
    fn labels(&self) -> Vec<Label> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().entries().to_vec()
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    /// Amplitude of a spin pattern such as `"+-"`, in label order.
    fn amplitude(&self, pattern: &str) -> PyResult<Complex64> {
        self.inner.amplitude(&spins(pattern)?).map_err(value_err)
    }

    fn inner(&self, other: PyRef<'_, Self>) -> PyResult<Complex64> {
        self.inner.inner(&other.inner).map_err(value_err)
    }

    fn tensor(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        self.inner.tensor(&other.inner).map(|inner| Self { inner }).map_err(value_err)
    }

    fn phase_distance(&self, other: PyRef<'_, Self>) -> PyResult<f64> {
        self.inner.phase_distance(&other.inner).map_err(value_err)
    }

    fn canonical_phase(&self) -> Self {
        Self {
            inner: self.inner.canonical_phase(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "StateVector(labels={:?}, name={:?})",
            self.inner.labels(),
            if self.inner.num_qubits() == 2 {
                experiments::heralded_name(&self.inner)
            } else {
                "other".into()
            }
        )
    }
}

#[pyclass(name = "DensityMatrix", module = "pyqswap", frozen)]
pub struct PyDensityMatrix {
    inner: DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[getter]
    fn labels(&self) -> Vec<Label> {
        self.inner.labels().to_vec()
    }

    /// Row-major nested lists of complex entries.
    #[getter]
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.matrix();
        (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)]).collect()).collect()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }

    fn entropy_bits(&self) -> f64 {
        self.inner.entropy_bits()
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(labels={:?})", self.inner.labels())
    }
}

#[pyclass(name = "Outcome", module = "pyqswap", frozen, get_all)]
pub struct PyOutcome {
    label: String,
    probability: f64,
    post_state: Option<PyStateVector>,
}

#[pymethods]
impl PyOutcome {
    fn __repr__(&self) -> String {
        format!("Outcome(label={:?}, probability={})", self.label, self.probability)
    }
}

fn outcomes(records: Vec<OutcomeRecord>) -> Vec<PyOutcome> {
    records
        .into_iter()
        .map(|r| PyOutcome {
            label: r.label,
            probability: r.probability,
            post_state: r.post_state.map(|inner| PyStateVector { inner }),
        })
        .collect()
}

#[pyfunction]
fn singlet(first: Label, second: Label) -> PyResult<PyStateVector> {
    states::singlet(first, second).map(|inner| PyStateVector { inner }).map_err(value_err)
}

/// `kind` is `"psi+"`, `"psi-"`, `"phi+"`, `"phi-"` or the Greek label.
#[pyfunction]
fn bell_state(kind: &str, first: Label, second: Label) -> PyResult<PyStateVector> {
    states::bell_state(bell_kind(kind)?, first, second)
        .map(|inner| PyStateVector { inner })
        .map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (pattern, labels = None))]
fn basis_ket(pattern: &str, labels: Option<Vec<Label>>) -> PyResult<PyStateVector> {
    let spins = spins(pattern)?;
    let labels = labels.unwrap_or_else(|| (1..=spins.len() as Label).collect());
    states::basis_ket_on(labels, &spins).map(|inner| PyStateVector { inner }).map_err(value_err)
}

/// Two singlets on particles (1,2) and (3,4).
#[pyfunction]
fn initial_state() -> PyStateVector {
    PyStateVector {
        inner: states::initial_state(),
    }
}

#[pyfunction]
fn measure_spin(state: PyRef<'_, PyStateVector>, axis: AxisArg, target: Label) -> PyResult<Vec<PyOutcome>> {
    let basis = measurement::spin_basis(axis.direction()?, target);
    measurement::measure(&state.inner, &basis).map(outcomes).map_err(value_err)
}

#[pyfunction]
fn measure_bell(state: PyRef<'_, PyStateVector>, first: Label, second: Label) -> PyResult<Vec<PyOutcome>> {
    let basis = measurement::bell_basis(first, second).map_err(value_err)?;
    measurement::measure(&state.inner, &basis).map(outcomes).map_err(value_err)
}

#[pyfunction]
fn measure_z(state: PyRef<'_, PyStateVector>, targets: Vec<Label>) -> PyResult<Vec<PyOutcome>> {
    let basis = measurement::z_product_basis(&targets).map_err(value_err)?;
    measurement::measure(&state.inner, &basis).map(outcomes).map_err(value_err)
}

#[pyfunction]
fn reduced_density(state: PyRef<'_, PyStateVector>, keep: Vec<Label>) -> PyResult<PyDensityMatrix> {
    analysis::reduced_density(&state.inner, &keep)
        .map(|inner| PyDensityMatrix { inner })
        .map_err(value_err)
}

#[pyfunction]
fn schmidt_coefficients(state: PyRef<'_, PyStateVector>, a: Vec<Label>, b: Vec<Label>) -> PyResult<Vec<f64>> {
    let bip = Bipartition::new(&a, &b).map_err(value_err)?;
    analysis::schmidt(&state.inner, &bip).map(|s| s.coefficients).map_err(value_err)
}

#[pyfunction]
fn entanglement_entropy(state: PyRef<'_, PyStateVector>, a: Vec<Label>, b: Vec<Label>) -> PyResult<f64> {
    let bip = Bipartition::new(&a, &b).map_err(value_err)?;
    analysis::schmidt(&state.inner, &bip)
        .map(|s| analysis::entanglement_entropy(&s))
        .map_err(value_err)
}

#[pyfunction]
fn pure_concurrence(state: PyRef<'_, PyStateVector>) -> PyResult<f64> {
    analysis::pure_concurrence(&state.inner).map_err(value_err)
}

#[pyfunction]
fn mixed_concurrence(rho: PyRef<'_, PyDensityMatrix>) -> PyResult<f64> {
    analysis::mixed_concurrence(&rho.inner).map_err(value_err)
}

#[pyfunction]
fn correlator(state: PyRef<'_, PyStateVector>, p: Label, a: AxisArg, q: Label, b: AxisArg) -> PyResult<f64> {
    analysis::correlator(&state.inner, (p, a.direction()?), (q, b.direction()?)).map_err(value_err)
}

#[pyfunction]
fn run_experiment(py: Python<'_>, id: u8) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &cli::report_document(&experiments::run_experiment(experiment(id)?)))
}

/// `(ok, witness)` where witness rows are `(outcome, expected, heralded, distance)`.
#[pyfunction]
fn correspondence_check(id: u8) -> PyResult<(bool, Vec<(String, String, String, f64)>)> {
    let check = experiments::correspondence_check(&experiments::run_experiment(experiment(id)?));
    let rows = check
        .witness
        .into_iter()
        .map(|w| (w.outcome, w.expected, w.heralded, w.distance))
        .collect();
    Ok((check.ok, rows))
}

/// Terms `(bell on 2,3, bell on 1,4, coefficient)` of the initial state.
#[pyfunction]
fn bell_decompose() -> Vec<(String, String, Complex64)> {
    experiments::bell_decompose_initial()
        .into_iter()
        .map(|t| (t.inner.label().to_owned(), t.remote.label().to_owned(), t.coefficient))
        .collect()
}

#[pyfunction]
#[pyo3(signature = (sweep = None, seed = experiments::DEFAULT_SEED))]
fn no_signaling_report(py: Python<'_>, sweep: Option<u64>, seed: u64) -> PyResult<Bound<'_, PyAny>> {
    let report = experiments::no_signaling_report();
    let sweep = match sweep {
        Some(n) => Some((seed, experiments::no_signaling_sweep(n, seed).map_err(value_err)?)),
        None => None,
    };
    to_py(py, &cli::no_signaling_document(&report, sweep.as_ref()))
}

#[pyfunction]
#[pyo3(signature = (id, trials, seed = experiments::DEFAULT_SEED))]
fn monte_carlo(py: Python<'_>, id: u8, trials: u64, seed: u64) -> PyResult<Bound<'_, PyAny>> {
    let report = py
        .detach(|| experiments::monte_carlo(McSource::Experiment(experiment(id)?), trials, seed).map_err(value_err))?;
    to_py(py, &cli::monte_carlo_document(Some(id), &report))
}

/// Parses, validates and runs `.qproto` source. Syntax and validation errors
/// raise `ValueError` with line and column; evaluation errors raise
/// `RuntimeError`.
#[pyfunction]
#[pyo3(signature = (source, mode = "exhaustive", seed = experiments::DEFAULT_SEED, trials = 1))]
fn run_protocol<'py>(py: Python<'py>, source: &str, mode: &str, seed: u64, trials: u64) -> PyResult<Bound<'py, PyAny>> {
    let program = protocol::compile(source).map_err(|errs| {
        PyValueError::new_err(errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))
    })?;
    let runtime = |e: protocol::RuntimeError| PyRuntimeError::new_err(e.to_string());
    let doc = match mode {
        "exhaustive" => cli::run_document(&protocol::interpret(&program, Mode::Exhaustive).map_err(runtime)?),
        "sampled" => {
            let runs = (0..trials)
                .map(|trial| {
                    let mut out = protocol::interpret(&program, Mode::Sampled { seed, trial })?;
                    Ok((trial, out.branches.pop()))
                })
                .collect::<Result<Vec<_>, protocol::RuntimeError>>()
                .map_err(runtime)?;
            cli::sampled_document(seed, &runs)
        }
        _ => return Err(PyValueError::new_err(format!("mode must be 'exhaustive' or 'sampled', got {mode:?}"))),
    };
    to_py(py, &doc)
}

#[pymodule]
fn pyqswap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_SEED", experiments::DEFAULT_SEED)?;
    m.add_class::<PyStateVector>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyOutcome>()?;
    m.add_function(wrap_pyfunction!(singlet, m)?)?;
    m.add_function(wrap_pyfunction!(bell_state, m)?)?;
    m.add_function(wrap_pyfunction!(basis_ket, m)?)?;
    m.add_function(wrap_pyfunction!(initial_state, m)?)?;
    m.add_function(wrap_pyfunction!(measure_spin, m)?)?;
    m.add_function(wrap_pyfunction!(measure_bell, m)?)?;
    m.add_function(wrap_pyfunction!(measure_z, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_density, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(pure_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(correlator, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(correspondence_check, m)?)?;
    m.add_function(wrap_pyfunction!(bell_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(no_signaling_report, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(run_protocol, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_exposes_reports_as_dicts() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "pyqswap").unwrap();
            pyqswap(&m).unwrap();
            let report = m.getattr("run_experiment").unwrap().call1((2u8,)).unwrap();
            let rows = report.get_item("rows").unwrap();
            assert_eq!(rows.len().unwrap(), 4);
            let err = m.getattr("run_protocol").unwrap().call1(("measure\n",)).unwrap_err();
            assert!(err.is_instance_of::<PyValueError>(py));
            assert!(err.to_string().contains("line 1, column 8"));
        });
    }

    #[test]
    fn json_null_and_numbers_convert() {
        Python::initialize();
        Python::attach(|py| {
            let v: Value = serde_json::json!({"a": null, "b": [1, -2, 0.5], "c": true});
            let obj = to_py(py, &v).unwrap();
            assert!(obj.get_item("a").unwrap().is_none());
            assert_eq!(obj.get_item("b").unwrap().get_item(1).unwrap().extract::<i64>().unwrap(), -2);
            assert!(obj.get_item("c").unwrap().extract::<bool>().unwrap());
        });
    }
}
