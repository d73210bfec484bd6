//! Generalized measurements and the noise families built on top of bases.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eig, tol, ComplexMatrix, Ket, OrthonormalBasis, SpectralDecomposition,
};

/// A positive-operator-valued measure with cached effect spectra.
///
/// Effect order is the outcome labelling. Spectra are stored with
/// eigenvalues clamped into `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    effects: Vec<ComplexMatrix>,
    spectra: Vec<SpectralDecomposition>,
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn completeness_residual(dim: usize, effects: &[ComplexMatrix]) -> f64 {
    effects
        .iter()
        .fold(ComplexMatrix::zeros(dim), |acc, e| &acc + e)
        .max_abs_diff(&ComplexMatrix::identity(dim))
}

fn check_same_dim(effects: &[ComplexMatrix]) -> Result<usize> {
    let dim = effects.first().ok_or(Error::EmptyPovm)?.dim();
    match effects.iter().find(|e| e.dim() != dim) {
        Some(e) => Err(Error::DimensionMismatch {
            expected: dim,
            found: e.dim(),
        }),
        None => Ok(dim),
    }
}

fn check_effect_spectrum(index: usize, spec: &SpectralDecomposition) -> Result<()> {
    let min = spec.min_eigenvalue();
    if min < -tol::PSD {
        return Err(Error::EffectNotPositive {
            index,
            min_eigenvalue: min,
        });
    }
    let max = spec.max_eigenvalue();
    if max > 1.0 + tol::PSD {
        return Err(Error::EigenvalueAboveOne {
            index,
            max_eigenvalue: max,
        });
    }
    Ok(())
}

impl Povm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn spectra(&self) -> &[SpectralDecomposition] {
        &self.spectra
    }

    /// Rebuilds the measurement with caller-supplied spectral decompositions.
    ///
    /// Useful when an effect is degenerate and a specific eigenbasis is
    /// wanted. Each decomposition must reconstruct its effect within
    /// [`tol::RECON`].
    pub fn with_spectra(&self, spectra: Vec<SpectralDecomposition>) -> Result<Self> {
        if spectra.len() != self.effects.len() {
            return Err(Error::DimensionMismatch {
                expected: self.effects.len(),
                found: spectra.len(),
            });
        }
        for (index, (effect, spec)) in self.effects.iter().zip(&spectra).enumerate() {
            let residual = spec.reconstruction_error(effect);
            if residual > tol::RECON {
                return Err(Error::SpectrumMismatch { index, residual });
            }
            check_effect_spectrum(index, spec)?;
        }
        Ok(Self {
            dim: self.dim,
            effects: self.effects.clone(),
            spectra: spectra
                .iter()
                .map(|s| s.map_eigenvalues(clamp_unit))
                .collect(),
        })
    }

    /// Whether every effect is a projector (all eigenvalues 0 or 1).
    pub fn is_projective(&self, tolerance: f64) -> bool {
        self.spectra
            .iter()
            .flat_map(|s| s.eigenvalues())
            .all(|&x| x < tolerance || x > 1.0 - tolerance)
    }

    /// Recognizes `A_i = alpha |a_i><a_i| + (1 - alpha) I / d` and returns the basis and `alpha`.
    ///
    /// At `alpha = 0` the basis is not determined by the effects; the
    /// eigenvectors the solver picked are returned.
    pub fn as_white_noise(&self) -> Option<(OrthonormalBasis, f64)> {
        let d = self.dim;
        if self.effects.len() != d || d < 2 {
            return None;
        }
        let top = self
            .spectra
            .iter()
            .map(|s| s.eigenvectors()[0].clone())
            .collect();
        let basis = OrthonormalBasis::new(top).ok()?;
        let s0 = &self.spectra[0];
        let alpha = s0.max_eigenvalue() - s0.min_eigenvalue();
        let rebuilt = white_noise_povm(&basis, alpha.clamp(0.0, 1.0)).ok()?;
        let ok = rebuilt
            .effects
            .iter()
            .zip(&self.effects)
            .all(|(a, b)| a.max_abs_diff(b) < tol::RECON);
        ok.then_some((basis, alpha.clamp(0.0, 1.0)))
    }
}

/// Validates a list of effects and caches their spectra.
pub fn make_povm(effects: Vec<ComplexMatrix>) -> Result<Povm> {
    let dim = check_same_dim(&effects)?;
    let mut spectra = Vec::with_capacity(effects.len());
    for (index, effect) in effects.iter().enumerate() {
        let spec = hermitian_eig(effect)?;
        check_effect_spectrum(index, &spec)?;
        spectra.push(spec.map_eigenvalues(clamp_unit));
    }
    let max_residual = completeness_residual(dim, &effects);
    if max_residual > tol::RECON {
        return Err(Error::CompletenessViolated { max_residual });
    }
    Ok(Povm {
        dim,
        effects,
        spectra,
    })
}

/// Rank-one projectors onto the basis vectors, in basis order.
pub fn projective_from_basis(basis: &OrthonormalBasis) -> Result<Povm> {
    make_povm(basis.projectors())
}

/// Bloch parameters `(a0, a)` of a two-outcome qubit measurement
/// `A_up = (a0 I + a . sigma) / 2`, `A_down = I - A_up`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPovmParams {
    pub a0: f64,
    pub a_vec: [f64; 3],
}

impl QubitPovmParams {
    pub fn new(a0: f64, a_vec: [f64; 3]) -> Result<Self> {
        let p = Self { a0, a_vec };
        p.validate()?;
        Ok(p)
    }

    pub fn bloch_norm(&self) -> f64 {
        self.a_vec.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.bloch_norm();
        let slack = 1e-12;
        if !(norm <= self.a0 + slack && self.a0 <= 2.0 - norm + slack) {
            return Err(Error::ParamsOutOfRange { a0: self.a0, norm });
        }
        Ok(())
    }

    /// `p(up | +)` and `p(up | -)`: outcome-up probabilities for the
    /// eigenstates `|a_+>`, `|a_->` of `a . sigma`.
    pub fn up_given(&self) -> (f64, f64) {
        let n = self.bloch_norm();
        (
            clamp_unit((self.a0 + n) / 2.0),
            clamp_unit((self.a0 - n) / 2.0),
        )
    }

    /// Eigenstates `(|a_+>, |a_->)` of `a . sigma`.
    pub fn eigenbasis(&self) -> OrthonormalBasis {
        OrthonormalBasis::bloch(self.a_vec)
    }
}

pub fn qubit_povm(params: QubitPovmParams) -> Result<Povm> {
    params.validate()?;
    let [sx, sy, sz] = ComplexMatrix::pauli();
    let [ax, ay, az] = params.a_vec;
    let bloch = &(&sx.scale(ax) + &sy.scale(ay)) + &sz.scale(az);
    let up = (&ComplexMatrix::identity(2).scale(params.a0) + &bloch).scale(0.5);
    let down = &ComplexMatrix::identity(2) - &up;
    make_povm(vec![up, down])
}

/// `A_i(alpha) = alpha |a_i><a_i| + (1 - alpha) I / d`.
pub fn white_noise_povm(basis: &OrthonormalBasis, alpha: f64) -> Result<Povm> {
    Error::check_range("alpha", alpha, 0.0, 1.0)?;
    let d = basis.dim();
    let noise = ComplexMatrix::identity(d).scale((1.0 - alpha) / d as f64);
    let effects = basis
        .projectors()
        .iter()
        .map(|p| &p.scale(alpha) + &noise)
        .collect();
    make_povm(effects)
}

/// Unsharp qubit observable `(I +- eta n . sigma) / 2` along the direction
/// at polar angle `theta` in the x-z plane.
pub fn qubit_axis_povm(theta: f64, eta: f64) -> Result<Povm> {
    white_noise_povm(&qubit_axis_basis(theta), eta)
}

/// Eigenbasis of `sin(theta) sigma_x + cos(theta) sigma_z`.
pub fn qubit_axis_basis(theta: f64) -> OrthonormalBasis {
    let (s, co) = (theta / 2.0).sin_cos();
    let plus = Ket::from_vec(vec![c(co, 0.0), c(s, 0.0)]);
    let minus = Ket::from_vec(vec![c(s, 0.0), c(-co, 0.0)]);
    OrthonormalBasis::new(vec![plus, minus]).expect("rotation of the standard basis")
}

/// Three-outcome qutrit measurement with population decaying from the
/// excited outcomes into outcome 0 with probability `e`:
/// `{|x0><x0| + e|x1><x1| + e|x2><x2|, (1-e)|x1><x1|, (1-e)|x2><x2|}`.
pub fn amplitude_damping_povm(basis: &OrthonormalBasis, e: f64) -> Result<Povm> {
    if basis.dim() != 3 {
        return Err(Error::WrongDimension {
            expected: 3,
            found: basis.dim(),
        });
    }
    Error::check_range("e", e, 0.0, 1.0)?;
    let p = basis.projectors();
    let ground = &(&p[0] + &p[1].scale(e)) + &p[2].scale(e);
    make_povm(vec![ground, p[1].scale(1.0 - e), p[2].scale(1.0 - e)])
}

/// The damped pair `(X_AD, Z_AD)` on the d = 3 Fourier MUB pair with
/// transition probabilities `e_x`, `e_z`.
pub fn amplitude_damping_pair(e_x: f64, e_z: f64) -> Result<(Povm, Povm)> {
    let (x, z) = mub_fourier_basis(3)?;
    Ok((
        amplitude_damping_povm(&x, e_x)?,
        amplitude_damping_povm(&z, e_z)?,
    ))
}

/// `p A_1, ..., p A_n, (1-p) B_1, ..., (1-p) B_m`.
pub fn convex_combination(a: &Povm, b: &Povm, p: f64) -> Result<Povm> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Error::check_range("p", p, 0.0, 1.0)?;
    let effects: Vec<ComplexMatrix> = a
        .effects
        .iter()
        .map(|e| e.scale(p))
        .chain(b.effects.iter().map(|e| e.scale(1.0 - p)))
        .collect();
    let spectra = a
        .spectra
        .iter()
        .map(|s| s.map_eigenvalues(|x| x * p))
        .chain(
            b.spectra
                .iter()
                .map(|s| s.map_eigenvalues(|x| x * (1.0 - p))),
        )
        .collect();
    // scaling keeps each effect's eigenbasis, so reuse it instead of re-diagonalizing
    let max_residual = completeness_residual(a.dim, &effects);
    if max_residual > tol::RECON {
        return Err(Error::CompletenessViolated { max_residual });
    }
    Ok(Povm {
        dim: a.dim,
        effects,
        spectra,
    })
}

/// Computational basis and its discrete Fourier transform
/// `|z_j> = d^{-1/2} sum_k exp(2 pi i j k / d) |k>`.
pub fn mub_fourier_basis(dim: usize) -> Result<(OrthonormalBasis, OrthonormalBasis)> {
    if dim < 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: dim,
        });
    }
    let norm = 1.0 / (dim as f64).sqrt();
    let fourier = (0..dim)
        .map(|j| {
            Ket::from_fn(dim, |k, _| {
                Complex64::from_polar(norm, 2.0 * PI * ((j * k) % dim) as f64 / dim as f64)
            })
        })
        .collect();
    Ok((
        OrthonormalBasis::computational(dim),
        OrthonormalBasis::new(fourier)?,
    ))
}
