//! Outcome statistics and the entropic quantities built from them.
//!
//! All entropies are in bits. For a measurement `A` on state `rho`:
//!
//! * `H(A)` is the Shannon entropy of the outcome distribution,
//! * `D(A) = sum_i sum_k <a_i^k|rho|a_i^k> h(a_i^k)` with `h(x) = -x log2 x`
//!   over the eigenpairs of each effect, the part of `H` owed to the
//!   unsharpness of the device,
//! * `Q(A) = H(A) - D(A)`, the part owed to the state.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, DensityMatrix, Ket};
use crate::povm::{Povm, QubitPovmParams};

const NORMALIZATION_TOL: f64 = 1e-10;

/// `-x log2 x` with `0 log 0 = 0`; inputs are clamped into `[0, 1]`.
pub fn entropy_term(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 {
        0.0
    } else {
        // + 0.0 turns -0.0 (at x = 1) into 0.0
        -x * x.log2() + 0.0
    }
}

/// `x log2 y`, zero whenever `x` is zero.
fn xlog2y(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.log2()
    }
}

/// Shannon entropy of raw weights, no normalization check.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| entropy_term(p)).sum::<f64>() + 0.0
}

/// Probabilities of the outcomes of one measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    /// Clamps entries into `[0, 1]` after checking they sit within
    /// round-off of it and sum to one.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = probs
            .iter()
            .find(|&&p| !(-NORMALIZATION_TOL..=1.0 + NORMALIZATION_TOL).contains(&p))
        {
            return Err(Error::out_of_range("probability", bad, 0.0, 1.0));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::out_of_range("probability sum", total, 1.0, 1.0));
        }
        Ok(Self {
            probs: probs.into_iter().map(|p| p.clamp(0.0, 1.0)).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

fn check_dims(rho: &DensityMatrix, a: &Povm) -> Result<()> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `p_i = Tr[rho A_i]`.
pub fn outcome_probs(rho: &DensityMatrix, a: &Povm) -> Result<OutcomeDistribution> {
    check_dims(rho, a)?;
    let probs = a
        .effects()
        .iter()
        .map(|e| rho.matrix().trace_product(e).re)
        .collect();
    OutcomeDistribution::new(probs)
}

pub fn shannon_entropy(dist: &OutcomeDistribution) -> f64 {
    entropy_bits(dist.probs())
}

/// `H_rho(A)`.
pub fn measurement_entropy(rho: &DensityMatrix, a: &Povm) -> Result<f64> {
    Ok(shannon_entropy(&outcome_probs(rho, a)?))
}

/// `-p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    Error::check_range("p", p, 0.0, 1.0)?;
    Ok(entropy_term(p) + entropy_term(1.0 - p))
}

/// Device uncertainty `D_rho(A)`.
pub fn device_uncertainty(rho: &DensityMatrix, a: &Povm) -> Result<f64> {
    check_dims(rho, a)?;
    Ok(a.spectra()
        .iter()
        .flat_map(|s| s.pairs())
        .map(|(lambda, v)| rho.population(v) * entropy_term(lambda))
        .sum::<f64>()
        + 0.0)
}

/// Device uncertainty of the Bloch-parameterized qubit measurement on a
/// pure state, evaluated through the conditional probabilities
/// `p(up | +-)` rather than a diagonalization.
pub fn device_uncertainty_qubit(psi: &Ket, params: QubitPovmParams) -> Result<f64> {
    params.validate()?;
    if psi.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: psi.len(),
        });
    }
    let (up_plus, up_minus) = params.up_given();
    let basis = params.eigenbasis();
    let [plus, minus] = basis.vectors() else {
        unreachable!("qubit basis has two vectors")
    };
    let w_plus = crate::linalg::overlap(psi, plus)?;
    let w_minus = crate::linalg::overlap(psi, minus)?;
    Ok(w_plus * binary_entropy(up_plus)? + w_minus * binary_entropy(up_minus)?)
}

/// Quantum uncertainty `Q_rho(A) = H_rho(A) - D_rho(A)`.
pub fn quantum_uncertainty(rho: &DensityMatrix, a: &Povm) -> Result<f64> {
    Ok(measurement_entropy(rho, a)? - device_uncertainty(rho, a)?)
}

/// Per-outcome contribution to the quantum uncertainty of a white-noise
/// measurement with sharpness `alpha` in dimension `d`, given the
/// population `p = <a_i|rho|a_i>` of the underlying basis vector.
pub fn f_white_noise(p: f64, alpha: f64, d: usize) -> Result<f64> {
    Error::check_range("p", p, 0.0, 1.0)?;
    Error::check_range("alpha", alpha, 0.0, 1.0)?;
    if d < 2 {
        return Err(Error::out_of_range("d", d as f64, 2.0, f64::INFINITY));
    }
    let ad = (1.0 - alpha) / d as f64;
    let top = alpha + ad;
    let mixed = alpha * p + ad;
    let first = if mixed == 0.0 {
        0.0
    } else {
        xlog2y(top * p, mixed / top)
    };
    let second = if ad == 0.0 {
        0.0
    } else {
        xlog2y(ad * (1.0 - p), mixed / ad)
    };
    Ok(-first - second)
}

/// Von Neumann entropy `-Tr[rho log2 rho]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_bits(&hermitian_eigenvalues(rho.matrix())?))
}
