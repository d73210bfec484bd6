//! Python bindings: measurements, states, entropy functionals, bounds,
//! sweeps and property suites.
//!
//! Vectors are lists of complex numbers, matrices are row-major nested
//! lists, and bases are lists of vectors.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use unsharp::{bounds, io, povm, sweep, uncertainty, verify};
use unsharp::{ComplexMatrix, DensityMatrix, Ket, OrthonormalBasis};

create_exception!(
    pyunsharp,
    UnsharpError,
    PyValueError,
    "Invalid input or failed construction."
);

fn err(e: unsharp::Error) -> PyErr {
    UnsharpError::new_err(format!("{}: {e}", e.kind()))
}

type Matrix = Vec<Vec<Complex64>>;
type Basis = Vec<Vec<Complex64>>;

fn to_matrix(rows: Matrix) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(err)
}

fn from_matrix(m: &ComplexMatrix) -> Matrix {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn to_ket(v: Vec<Complex64>) -> Ket {
    Ket::from_vec(v)
}

fn to_basis(vectors: Vec<Vec<Complex64>>) -> PyResult<OrthonormalBasis> {
    OrthonormalBasis::new(vectors.into_iter().map(to_ket).collect()).map_err(err)
}

fn from_basis(b: &OrthonormalBasis) -> Vec<Vec<Complex64>> {
    b.vectors()
        .iter()
        .map(|v| v.iter().copied().collect())
        .collect()
}

/// A validated measurement (set of effects summing to identity).
#[pyclass(name = "Povm", module = "pyunsharp", frozen)]
struct PyPovm(unsharp::Povm);

#[pymethods]
impl PyPovm {
    #[new]
    fn new(effects: Vec<Matrix>) -> PyResult<Self> {
        let effects = effects
            .into_iter()
            .map(to_matrix)
            .collect::<PyResult<_>>()?;
        Ok(Self(povm::make_povm(effects).map_err(err)?))
    }

    /// Projective measurement onto an orthonormal basis.
    #[staticmethod]
    fn projective(basis: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(
            povm::projective_from_basis(&to_basis(basis)?).map_err(err)?,
        ))
    }

    /// `alpha |a_i><a_i| + (1 - alpha) I/d` for each basis vector.
    #[staticmethod]
    fn white_noise(basis: Vec<Vec<Complex64>>, alpha: f64) -> PyResult<Self> {
        Ok(Self(
            povm::white_noise_povm(&to_basis(basis)?, alpha).map_err(err)?,
        ))
    }

    /// Qubit measurement along the axis at angle `theta` in the x-z plane.
    #[staticmethod]
    fn qubit_axis(theta: f64, eta: f64) -> PyResult<Self> {
        Ok(Self(povm::qubit_axis_povm(theta, eta).map_err(err)?))
    }

    /// Bloch-parameterized qubit measurement `(a0 I +- a.sigma)/2`.
    #[staticmethod]
    fn qubit(a0: f64, a: [f64; 3]) -> PyResult<Self> {
        let params = unsharp::QubitPovmParams::new(a0, a).map_err(err)?;
        Ok(Self(povm::qubit_povm(params).map_err(err)?))
    }

    /// Qutrit measurement whose excited outcomes leak into the ground outcome with probability `e`.
    #[staticmethod]
    fn amplitude_damping(basis: Vec<Vec<Complex64>>, e: f64) -> PyResult<Self> {
        Ok(Self(
            povm::amplitude_damping_povm(&to_basis(basis)?, e).map_err(err)?,
        ))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = io::PovmFile::parse(text).map_err(err)?;
        Ok(Self(file.to_povm().map_err(err)?))
    }

    fn to_json(&self) -> String {
        io::PovmFile::from_povm(&self.0).to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn effects(&self) -> Vec<Matrix> {
        self.0.effects().iter().map(from_matrix).collect()
    }

    /// Eigenvalues of each effect, descending.
    fn spectra(&self) -> Vec<Vec<f64>> {
        self.0
            .spectra()
            .iter()
            .map(|s| s.eigenvalues().to_vec())
            .collect()
    }

    #[pyo3(signature = (tolerance = 1e-10))]
    fn is_projective(&self, tolerance: f64) -> bool {
        self.0.is_projective(tolerance)
    }

    /// `p A + (1 - p) B` outcome by outcome.
    fn mix(&self, other: &PyPovm, p: f64) -> PyResult<Self> {
        Ok(Self(
            povm::convex_combination(&self.0, &other.0, p).map_err(err)?,
        ))
    }

    fn __repr__(&self) -> String {
        format!("Povm(dim={}, outcomes={})", self.0.dim(), self.0.len())
    }
}

/// A density matrix.
#[pyclass(name = "State", module = "pyunsharp", frozen)]
struct PyState(DensityMatrix);

#[pymethods]
impl PyState {
    #[new]
    fn new(matrix: Matrix) -> PyResult<Self> {
        Ok(Self(
            unsharp::linalg::validate_density(to_matrix(matrix)?).map_err(err)?,
        ))
    }

    #[staticmethod]
    fn pure(vector: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self(DensityMatrix::pure(&to_ket(vector)).map_err(err)?))
    }

    #[staticmethod]
    fn maximally_mixed(dim: usize) -> Self {
        Self(DensityMatrix::maximally_mixed(dim))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = io::StateFile::parse(text).map_err(err)?;
        Ok(Self(file.to_density().map_err(err)?))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn matrix(&self) -> Matrix {
        from_matrix(self.0.matrix())
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    /// `p self + (1 - p) other`.
    fn mix(&self, other: &PyState, p: f64) -> PyResult<Self> {
        Ok(Self(self.0.mix(&other.0, p).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("State(dim={}, purity={:.6})", self.0.dim(), self.0.purity())
    }
}

#[pyfunction]
fn outcome_probs(state: &PyState, povm: &PyPovm) -> PyResult<Vec<f64>> {
    Ok(uncertainty::outcome_probs(&state.0, &povm.0)
        .map_err(err)?
        .probs()
        .to_vec())
}

#[pyfunction]
fn measurement_entropy(state: &PyState, povm: &PyPovm) -> PyResult<f64> {
    uncertainty::measurement_entropy(&state.0, &povm.0).map_err(err)
}

#[pyfunction]
fn device_uncertainty(state: &PyState, povm: &PyPovm) -> PyResult<f64> {
    uncertainty::device_uncertainty(&state.0, &povm.0).map_err(err)
}

#[pyfunction]
fn quantum_uncertainty(state: &PyState, povm: &PyPovm) -> PyResult<f64> {
    uncertainty::quantum_uncertainty(&state.0, &povm.0).map_err(err)
}

#[pyfunction]
fn binary_entropy(p: f64) -> PyResult<f64> {
    uncertainty::binary_entropy(p).map_err(err)
}

#[pyfunction]
fn f_white_noise(p: f64, alpha: f64, dim: usize) -> PyResult<f64> {
    uncertainty::f_white_noise(p, alpha, dim).map_err(err)
}

#[pyfunction]
fn krishna_bound(povm: &PyPovm) -> f64 {
    bounds::krishna_bound(&povm.0)
}

#[pyfunction]
fn min_device_uncertainty(povm: &PyPovm) -> f64 {
    bounds::min_device_uncertainty(&povm.0)
}

#[pyfunction]
fn min_pair_device_bound(a: &PyPovm, b: &PyPovm) -> PyResult<f64> {
    bounds::min_pair_device_bound(&a.0, &b.0).map_err(err)
}

#[pyfunction]
fn device_uncertainty_white_noise(alpha: f64, dim: usize) -> PyResult<f64> {
    bounds::device_uncertainty_white_noise(alpha, dim).map_err(err)
}

#[pyfunction]
fn coles_bound(a: &PyPovm, b: &PyPovm) -> PyResult<f64> {
    bounds::coles_bound(&a.0, &b.0).map_err(err)
}

#[pyfunction]
fn mu_bound(a: Vec<Vec<Complex64>>, b: Vec<Vec<Complex64>>) -> PyResult<f64> {
    bounds::mu_bound(&to_basis(a)?, &to_basis(b)?).map_err(err)
}

#[pyfunction]
fn b1_bound(
    a: Vec<Vec<Complex64>>,
    alpha: f64,
    b: Vec<Vec<Complex64>>,
    beta: f64,
) -> PyResult<f64> {
    bounds::b1_bound(&to_basis(a)?, alpha, &to_basis(b)?, beta).map_err(err)
}

/// Weights `W` of the majorization vector and `H(W)`.
#[pyfunction]
fn majorization(a: Vec<Vec<Complex64>>, b: Vec<Vec<Complex64>>) -> PyResult<(Vec<f64>, f64)> {
    let mv = bounds::majorization_vector(&to_basis(a)?, &to_basis(b)?).map_err(err)?;
    Ok((mv.weights().to_vec(), bounds::hw_bound(&mv)))
}

/// `(Q(W), B2)` for a white-noise pair.
#[pyfunction]
fn qw_b2_bound(
    a: Vec<Vec<Complex64>>,
    alpha: f64,
    b: Vec<Vec<Complex64>>,
    beta: f64,
) -> PyResult<(f64, f64)> {
    let r = bounds::qw_b2_bound(&to_basis(a)?, alpha, &to_basis(b)?, beta).map_err(err)?;
    Ok((r.qw, r.b2))
}

#[pyfunction]
fn ad_coles_closed_form(e: f64) -> PyResult<f64> {
    bounds::ad_coles_closed_form(e).map_err(err)
}

#[pyfunction]
fn ad_pair_closed_form(e: f64) -> PyResult<f64> {
    bounds::ad_pair_closed_form(e).map_err(err)
}

/// All applicable bounds for a pair, keyed by name; includes `entropy_sum` when a state is given.
#[pyfunction]
#[pyo3(signature = (a, b, state = None))]
fn bound_report(
    a: &PyPovm,
    b: &PyPovm,
    state: Option<&PyState>,
) -> PyResult<BTreeMap<String, f64>> {
    let report =
        bounds::BoundReport::for_pair(&a.0, "A", &b.0, "B", state.map(|s| (&s.0, "state")))
            .map_err(err)?;
    let mut out = report.bounds;
    if let Some(sum) = report.entropy_sum {
        out.insert("entropy_sum".to_string(), sum);
    }
    Ok(out)
}

/// Computational and Fourier bases of dimension `dim`.
#[pyfunction]
fn mub_fourier_basis(dim: usize) -> PyResult<(Basis, Basis)> {
    let (x, z) = povm::mub_fourier_basis(dim).map_err(err)?;
    Ok((from_basis(&x), from_basis(&z)))
}

#[pyfunction]
fn qubit_axis_basis(theta: f64) -> Vec<Vec<Complex64>> {
    from_basis(&povm::qubit_axis_basis(theta))
}

#[pyfunction]
fn amplitude_damping_pair(e_x: f64, e_z: f64) -> PyResult<(PyPovm, PyPovm)> {
    let (x, z) = povm::amplitude_damping_pair(e_x, e_z).map_err(err)?;
    Ok((PyPovm(x), PyPovm(z)))
}

type Crossovers = Vec<(String, f64)>;
type DampingRow = (f64, f64, f64, f64);
type ThetaRow = (f64, f64, f64, f64, f64, f64, f64);

fn crossovers(found: &[sweep::Crossover]) -> Crossovers {
    found.iter().map(|c| (c.label.clone(), c.at)).collect()
}

fn sweep_config(
    kind: sweep::SweepKind,
    start: Option<f64>,
    stop: Option<f64>,
    steps: Option<usize>,
) -> sweep::SweepConfig {
    let mut cfg = sweep::SweepConfig::default_for(kind);
    cfg.grid.start = start.unwrap_or(cfg.grid.start);
    cfg.grid.stop = stop.unwrap_or(cfg.grid.stop);
    cfg.grid.steps = steps.unwrap_or(cfg.grid.steps);
    cfg
}

/// Rows `(theta, B1, B2, logC, D_WN, HW, QW)` and crossovers `(label, theta)`.
#[pyfunction]
#[pyo3(signature = (eta, zeta, start = None, stop = None, steps = None))]
fn sweep_theta(
    eta: f64,
    zeta: f64,
    start: Option<f64>,
    stop: Option<f64>,
    steps: Option<usize>,
) -> PyResult<(Vec<ThetaRow>, Crossovers)> {
    let mut cfg = sweep_config(sweep::SweepKind::Theta, start, stop, steps);
    cfg.eta = eta;
    cfg.zeta = zeta;
    let s = sweep::sweep_theta(&cfg).map_err(err)?;
    let rows = s
        .rows
        .iter()
        .map(|r| (r.theta, r.b1, r.b2, r.log_c, r.d_wn, r.hw, r.qw))
        .collect();
    Ok((rows, crossovers(&s.crossovers)))
}

/// Rows `(e, logC_numeric, logC_closed, D_AD)` and crossovers `(label, e)`.
#[pyfunction]
#[pyo3(signature = (start = None, stop = None, steps = None))]
fn sweep_damping(
    start: Option<f64>,
    stop: Option<f64>,
    steps: Option<usize>,
) -> PyResult<(Vec<DampingRow>, Crossovers)> {
    let cfg = sweep_config(sweep::SweepKind::Damping, start, stop, steps);
    let s = sweep::sweep_damping(&cfg).map_err(err)?;
    let rows = s
        .rows
        .iter()
        .map(|r| (r.e, r.log_c_numeric, r.log_c_closed, r.d_ad))
        .collect();
    Ok((rows, crossovers(&s.crossovers)))
}

/// Runs a property suite; returns `(passed, checks, violations, worst_slack)`.
#[pyfunction]
#[pyo3(signature = (suite, trials = 100, seed = 0x5EED))]
fn run_suite(suite: &str, trials: usize, seed: u64) -> PyResult<(bool, usize, usize, f64)> {
    let suite: verify::Suite = suite.parse().map_err(err)?;
    let s = verify::run_suite(suite, trials, verify::RngSeed(seed)).map_err(err)?;
    Ok((s.passed(), s.checks, s.violations, s.worst_slack))
}

#[pymodule]
fn pyunsharp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UnsharpError", m.py().get_type::<UnsharpError>())?;
    m.add_class::<PyPovm>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(outcome_probs, m)?)?;
    m.add_function(wrap_pyfunction!(measurement_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(device_uncertainty, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_uncertainty, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(f_white_noise, m)?)?;
    m.add_function(wrap_pyfunction!(krishna_bound, m)?)?;
    m.add_function(wrap_pyfunction!(min_device_uncertainty, m)?)?;
    m.add_function(wrap_pyfunction!(min_pair_device_bound, m)?)?;
    m.add_function(wrap_pyfunction!(device_uncertainty_white_noise, m)?)?;
    m.add_function(wrap_pyfunction!(coles_bound, m)?)?;
    m.add_function(wrap_pyfunction!(mu_bound, m)?)?;
    m.add_function(wrap_pyfunction!(b1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(majorization, m)?)?;
    m.add_function(wrap_pyfunction!(qw_b2_bound, m)?)?;
    m.add_function(wrap_pyfunction!(ad_coles_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(ad_pair_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(mub_fourier_basis, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_axis_basis, m)?)?;
    m.add_function(wrap_pyfunction!(amplitude_damping_pair, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_theta, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_damping, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
