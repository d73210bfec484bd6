//! JSON file formats for measurements and states.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major:
//!
//! ```json
//! {"dim": 2, "effects": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]]}
//! {"dim": 2, "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}
//! {"dim": 2, "vector": [[1,0],[0,0]]}
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, tol, validate_density, ComplexMatrix, DensityMatrix, Ket};
use crate::povm::{make_povm, Povm};

type JsonMatrix = Vec<Vec<[f64; 2]>>;

fn to_complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

fn matrix_from_json(dim: usize, rows: &JsonMatrix, what: &str) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!("{what} is not {dim}x{dim}")));
    }
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().copied().map(to_complex).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

/// On-disk form of a measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmFile {
    pub dim: usize,
    pub effects: Vec<JsonMatrix>,
}

impl PovmFile {
    pub fn from_povm(povm: &Povm) -> Self {
        Self {
            dim: povm.dim(),
            effects: povm.effects().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Decoded effect matrices, shape-checked but not validated as a measurement.
    pub fn matrices(&self) -> Result<Vec<ComplexMatrix>> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        self.effects
            .iter()
            .enumerate()
            .map(|(i, e)| matrix_from_json(self.dim, e, &format!("effect {i}")))
            .collect()
    }

    pub fn to_povm(&self) -> Result<Povm> {
        make_povm(self.matrices()?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// On-disk form of a state: a density matrix or a pure-state vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum StateFile {
    Matrix { dim: usize, matrix: JsonMatrix },
    Vector { dim: usize, vector: Vec<[f64; 2]> },
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "expected {{\"dim\", \"matrix\"}} or {{\"dim\", \"vector\"}} state: {e}"
            ))
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        StateFile::Matrix {
            dim: rho.dim(),
            matrix: matrix_to_json(rho.matrix()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            StateFile::Matrix { dim, .. } | StateFile::Vector { dim, .. } => *dim,
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        match self {
            StateFile::Matrix { dim, matrix } => {
                validate_density(matrix_from_json(*dim, matrix, "state matrix")?)
            }
            StateFile::Vector { dim, vector } => {
                if vector.len() != *dim || *dim == 0 {
                    return Err(Error::Parse(format!(
                        "state vector has {} entries, dim is {dim}",
                        vector.len()
                    )));
                }
                let psi = Ket::from_iterator(*dim, vector.iter().copied().map(to_complex));
                DensityMatrix::pure(&psi)
            }
        }
    }

    /// Short label for reports.
    pub fn describe(&self) -> String {
        match self {
            StateFile::Matrix { dim, .. } => format!("density matrix (d = {dim})"),
            StateFile::Vector { dim, .. } => format!("pure state (d = {dim})"),
        }
    }
}

/// Per-effect spectrum and completeness residual of a measurement file,
/// produced whether or not the file describes a valid measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub outcomes: usize,
    /// Eigenvalues of each effect, descending; `None` where the effect is not Hermitian.
    pub spectra: Vec<Option<Vec<f64>>>,
    pub completeness_residual: f64,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ValidationReport {
    pub fn of(file: &PovmFile) -> Result<Self> {
        let matrices = file.matrices()?;
        let spectra = matrices
            .iter()
            .map(|m| hermitian_eig(m).ok().map(|s| s.eigenvalues().to_vec()))
            .collect();
        let sum = matrices
            .iter()
            .fold(ComplexMatrix::zeros(file.dim), |acc, m| &acc + m);
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(file.dim));
        let outcome = make_povm(matrices);
        Ok(Self {
            dim: file.dim,
            outcomes: file.effects.len(),
            spectra,
            completeness_residual: residual,
            valid: outcome.is_ok(),
            error: outcome.err().map(|e| e.to_string()),
        })
    }

    /// Whether the residual alone is within tolerance.
    pub fn complete(&self) -> bool {
        self.completeness_residual <= tol::RECON
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::OrthonormalBasis;
    use crate::povm::{mub_fourier_basis, projective_from_basis, white_noise_povm};

    const PVM: &str = r#"{"dim": 2, "effects": [
        [[[1,0],[0,0]],[[0,0],[0,0]]],
        [[[0,0],[0,0]],[[0,0],[1,0]]]
    ]}"#;

    #[test]
    fn parses_projective_file() {
        let povm = PovmFile::parse(PVM).unwrap().to_povm().unwrap();
        assert_eq!(povm.len(), 2);
        assert!(povm.is_projective(1e-12));
    }

    #[test]
    fn file_round_trip() {
        let (_, z) = mub_fourier_basis(3).unwrap();
        let povm = white_noise_povm(&z, 0.4).unwrap();
        let text = PovmFile::from_povm(&povm).to_json();
        let back = PovmFile::parse(&text).unwrap().to_povm().unwrap();
        for (a, b) in povm.effects().iter().zip(back.effects()) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }
    }

    #[test]
    fn report_flags_incomplete_effects() {
        let text = r#"{"dim": 2, "effects": [
            [[[1,0],[0,0]],[[0,0],[1,0]]],
            [[[1,0],[0,0]],[[0,0],[1,0]]]
        ]}"#;
        let report = ValidationReport::of(&PovmFile::parse(text).unwrap()).unwrap();
        assert!(!report.valid);
        assert!(!report.complete());
        assert!(report.error.unwrap().contains("sum to identity"));
        assert_eq!(report.spectra[0], Some(vec![1.0, 1.0]));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            PovmFile::parse("{\"dim\": 2"),
            Err(Error::Parse(_))
        ));
        let bad = r#"{"dim": 2, "effects": [[[[1,0]]]]}"#;
        assert!(matches!(
            PovmFile::parse(bad).unwrap().to_povm(),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            PovmFile::parse(r#"{"dim": 2, "effects": [], "extra": 1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn states() {
        let v = StateFile::parse(r#"{"dim": 2, "vector": [[0.6,0],[0,0.8]]}"#).unwrap();
        let rho = v.to_density().unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        let m =
            StateFile::parse(r#"{"dim": 2, "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#).unwrap();
        assert_eq!(m.to_density().unwrap(), DensityMatrix::maximally_mixed(2));
        let bad =
            StateFile::parse(r#"{"dim": 2, "matrix": [[[0.6,0],[0,0]],[[0,0],[0.6,0]]]}"#).unwrap();
        assert!(matches!(bad.to_density(), Err(Error::TraceNotOne { .. })));
        let unnormalized = StateFile::parse(r#"{"dim": 2, "vector": [[1,0],[1,0]]}"#).unwrap();
        assert!(matches!(
            unnormalized.to_density(),
            Err(Error::NotNormalized { .. })
        ));
        assert!(StateFile::parse(r#"{"dim": 2}"#).is_err());
        let back = StateFile::from_density(&rho).to_density().unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let pvm = projective_from_basis(&OrthonormalBasis::computational(2)).unwrap();
        assert_eq!(pvm.dim(), v.dim());
    }
}
