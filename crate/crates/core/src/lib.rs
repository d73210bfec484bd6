//! Entropic unsharpness of generalized quantum measurements.
//!
//! For a POVM `A = {A_i}` on `C^d` and a state `rho` the outcome entropy
//! `H_rho(A)` splits into a device part `D_rho(A)`, the state-weighted
//! average of `-a log2 a` over the eigenvalues `a` of the effects, and a
//! remainder `Q_rho(A) = H_rho(A) - D_rho(A)` attributed to the state.
//! `D` vanishes for every state exactly when the measurement is projective.
//!
//! On top of these the crate evaluates lower bounds on `H_rho(A) + H_rho(B)`
//! for pairs of unsharp measurements:
//!
//! | bound | function |
//! |-------|----------|
//! | `-log2 max_i ||A_i||` | [`bounds::krishna_bound`] |
//! | `min_rho D_rho(A)` | [`bounds::min_device_uncertainty`] |
//! | `-log2 C` (sandwiched effects) | [`bounds::coles_bound`] |
//! | `-log2 max |<a_i|b_j>|^2` | [`bounds::mu_bound`] |
//! | `B1`, `B2`, `Q(W)` for white noise | [`bounds::b1_bound`], [`bounds::qw_b2_bound`] |
//! | `H(W)` (majorization) | [`bounds::hw_bound`] |
//! | `min_rho [D_rho(A) + D_rho(B)]` | [`bounds::min_pair_device_bound`] |
//!
//! All entropies are in bits.
//!
//! ```
//! use unsharp::{bounds, povm, uncertainty, DensityMatrix};
//!
//! let (x, z) = povm::mub_fourier_basis(3).unwrap();
//! let xa = povm::amplitude_damping_povm(&x, 0.5).unwrap();
//! let za = povm::amplitude_damping_povm(&z, 0.5).unwrap();
//!
//! let rho = DensityMatrix::pure(&x.vectors()[0]).unwrap();
//! assert!(uncertainty::device_uncertainty(&rho, &xa).unwrap() < 1e-12);
//!
//! let floor = bounds::min_pair_device_bound(&xa, &za).unwrap();
//! assert!((floor - (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-10);
//! ```

pub mod bounds;
pub mod error;
pub mod io;
pub mod linalg;
pub mod povm;
pub mod sweep;
pub mod uncertainty;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, Ket, OrthonormalBasis, SpectralDecomposition};
pub use povm::{Povm, QubitPovmParams};
