//! Dense complex linear algebra for small Hermitian operators.
//!
//! Everything here works on `dim x dim` matrices with `dim` in the single
//! digits, so the eigensolver is a plain dense one and nothing is cached
//! beyond what [`crate::povm::Povm`] keeps.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Max entrywise `|m - m^dagger|` for a matrix to count as Hermitian.
    pub const HERMITIAN: f64 = 1e-10;
    /// Eigenvalues down to `-PSD` count as non-negative (and are clamped to 0).
    pub const PSD: f64 = 1e-10;
    /// Allowed deviation of a state's trace from one.
    pub const TRACE: f64 = 1e-10;
    /// Gram-matrix deviation allowed for orthonormal vectors.
    pub const ORTHO: f64 = 1e-8;
    /// Entrywise reconstruction / completeness residual.
    pub const RECON: f64 = 1e-8;
}

/// A state vector `|psi>`.
pub type Ket = DVector<Complex64>;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex square matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Wraps an nalgebra matrix, rejecting non-square or empty input.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::MalformedMatrix(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    /// Builds a matrix from row-major rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::MalformedMatrix("matrix has no rows".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(Error::MalformedMatrix(format!(
                "row {i} has {} entries, expected {dim}",
                r.len()
            )));
        }
        Ok(Self(DMatrix::from_fn(dim, dim, |i, j| rows[i][j])))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        Self(DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                c(diag[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        }))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Rank-one operator `|v><v|`.
    pub fn projector(v: &Ket) -> Self {
        Self(v * v.adjoint())
    }

    /// Pauli matrices `(sigma_x, sigma_y, sigma_z)`.
    pub fn pauli() -> [Self; 3] {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        [
            Self(DMatrix::from_row_slice(2, 2, &[z, one, one, z])),
            Self(DMatrix::from_row_slice(2, 2, &[z, -i, i, z])),
            Self(DMatrix::from_row_slice(2, 2, &[one, z, z, -one])),
        ]
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// `<v| m |v>`, real part only (callers pass Hermitian `m`).
    pub fn expectation(&self, v: &Ket) -> f64 {
        v.dotc(&(&self.0 * v)).re
    }

    /// `Tr[self * other]` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        let n = self.dim();
        let mut acc = c(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc
    }

    /// Largest entrywise `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()).map(|z| z * 0.5))
    }

    pub(crate) fn ensure_hermitian(&self) -> Result<()> {
        let dev = self.hermitian_deviation();
        if dev > tol::HERMITIAN || dev.is_nan() {
            Err(Error::NotHermitian { max_deviation: dev })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Ket>,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from parts, sorting by descending eigenvalue.
    ///
    /// Checks that lengths agree and the vectors are orthonormal; whether the
    /// pairs reconstruct a particular matrix is up to the caller
    /// (see [`SpectralDecomposition::reconstruction_error`]).
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Vec<Ket>) -> Result<Self> {
        if eigenvalues.len() != eigenvectors.len() {
            return Err(Error::DimensionMismatch {
                expected: eigenvalues.len(),
                found: eigenvectors.len(),
            });
        }
        let dev = gram_deviation(&eigenvectors);
        if dev > tol::ORTHO {
            return Err(Error::NotOrthonormal { max_deviation: dev });
        }
        let mut pairs: Vec<_> = eigenvalues.into_iter().zip(eigenvectors).collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Ket] {
        &self.eigenvectors
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, &Ket)> {
        self.eigenvalues
            .iter()
            .copied()
            .zip(self.eigenvectors.iter())
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// `sum_k lambda_k |v_k><v_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.eigenvectors[0].len();
        let mut acc = DMatrix::zeros(dim, dim);
        for (lambda, v) in self.pairs() {
            acc += (v * v.adjoint()).map(|z| z * lambda);
        }
        ComplexMatrix(acc)
    }

    pub fn reconstruction_error(&self, m: &ComplexMatrix) -> f64 {
        self.reconstruct().max_abs_diff(m)
    }

    /// Replaces each eigenvalue `lambda` by `f(lambda)` keeping the eigenvectors.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            eigenvalues: self.eigenvalues.iter().map(|&x| f(x)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
    }
}

/// Full eigendecomposition of a Hermitian matrix, sorted by descending eigenvalue.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    m.ensure_hermitian()?;
    // the solver only reads one triangle, so hand it the exact Hermitian part
    let eig = SymmetricEigen::new(m.hermitian_part().into_matrix());
    let mut pairs: Vec<(f64, Ket)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let v = eig.eigenvectors.column(k).into_owned();
            let n = v.norm();
            (lambda, v / c(n, 0.0))
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(m)?.eigenvalues)
}

/// Lowest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.min_eigenvalue())
}

/// Largest singular value of a Hermitian matrix, i.e. `max_k |lambda_k|`.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    let spec = hermitian_eig(m)?;
    Ok(spec.max_eigenvalue().abs().max(spec.min_eigenvalue().abs()))
}

fn check_unit(v: &Ket) -> Result<()> {
    let norm = v.norm();
    if (norm - 1.0).abs() > tol::ORTHO || norm.is_nan() {
        Err(Error::NotNormalized { norm })
    } else {
        Ok(())
    }
}

/// Transition probability `|<v|w>|^2` between two unit vectors.
pub fn overlap(v: &Ket, w: &Ket) -> Result<f64> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            found: w.len(),
        });
    }
    check_unit(v)?;
    check_unit(w)?;
    Ok(v.dotc(w).norm_sqr().clamp(0.0, 1.0))
}

/// Largest `|<v_i|v_j> - delta_ij|` over all pairs.
pub fn gram_deviation(vectors: &[Ket]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, v) in vectors.iter().enumerate() {
        for (j, w) in vectors.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v.dotc(w) - c(target, 0.0)).norm());
        }
    }
    worst
}

/// A complete orthonormal basis of `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis(Vec<Ket>);

impl OrthonormalBasis {
    pub fn new(vectors: Vec<Ket>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::MalformedMatrix("basis has no vectors".into()));
        };
        let dim = first.len();
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        if vectors.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: vectors.len(),
            });
        }
        let dev = gram_deviation(&vectors);
        if dev > tol::ORTHO || dev.is_nan() {
            return Err(Error::NotOrthonormal { max_deviation: dev });
        }
        Ok(Self(vectors))
    }

    /// The standard basis `|0>, ..., |d-1>`.
    pub fn computational(dim: usize) -> Self {
        Self(
            (0..dim)
                .map(|k| Ket::from_fn(dim, |i, _| c(if i == k { 1.0 } else { 0.0 }, 0.0)))
                .collect(),
        )
    }

    /// Eigenbasis `(|+n>, |-n>)` of `n . sigma` for a Bloch direction `n`.
    ///
    /// A zero vector yields the computational basis.
    pub fn bloch(n: [f64; 3]) -> Self {
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if len == 0.0 {
            return Self::computational(2);
        }
        let theta = (n[2] / len).clamp(-1.0, 1.0).acos();
        let phi = n[1].atan2(n[0]);
        let (s, co) = (theta / 2.0).sin_cos();
        let phase = Complex64::from_polar(1.0, phi);
        let plus = Ket::from_vec(vec![c(co, 0.0), phase * s]);
        let minus = Ket::from_vec(vec![c(s, 0.0), -phase * co]);
        Self(vec![plus, minus])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn vectors(&self) -> &[Ket] {
        &self.0
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.0.iter().map(ComplexMatrix::projector).collect()
    }

    /// Matrix of transition probabilities `|<a_i|b_j>|^2`.
    pub fn overlaps(&self, other: &OrthonormalBasis) -> Result<Vec<Vec<f64>>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .0
            .iter()
            .map(|a| other.0.iter().map(|b| a.dotc(b).norm_sqr()).collect())
            .collect())
    }
}

/// A unit-trace positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// `|psi><psi|` for a normalized ket.
    pub fn pure(psi: &Ket) -> Result<Self> {
        check_unit(psi)?;
        Ok(Self(ComplexMatrix::projector(psi)))
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// `<v| rho |v>`, clamped to `[0, 1]`.
    pub fn population(&self, v: &Ket) -> f64 {
        self.0.expectation(v).clamp(0.0, 1.0)
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).re
    }

    /// Convex mixture `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<Self> {
        Error::check_range("p", p, 0.0, 1.0)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self(&self.0.scale(p) + &other.0.scale(1.0 - p)))
    }
}

/// Checks Hermiticity, unit trace and positivity, in that order.
pub fn validate_density(m: ComplexMatrix) -> Result<DensityMatrix> {
    m.ensure_hermitian()?;
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol::TRACE || trace.is_nan() {
        return Err(Error::TraceNotOne { trace });
    }
    let min = min_eigenvalue(&m)?;
    if min < -tol::PSD {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(DensityMatrix(m.hermitian_part()))
}
