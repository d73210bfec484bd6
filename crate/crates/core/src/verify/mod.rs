//! Seeded random generators and brute-force oracles for property checks.

mod suites;

pub use suites::{run_suite, Suite, SuiteSummary};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, ComplexMatrix, DensityMatrix, Ket, OrthonormalBasis};
use crate::povm::{make_povm, Povm};

const MAX_ATTEMPTS: usize = 100;

/// Seed of a deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent child seed for trial `index` (splitmix64 finalizer).
    pub fn derive(self, index: u64) -> RngSeed {
        let mut z = self.0 ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngSeed(z ^ (z >> 31))
    }

    pub fn sampler(self) -> Sampler {
        Sampler::new(self)
    }
}

impl Default for RngSeed {
    fn default() -> Self {
        RngSeed(0x5EED)
    }
}

/// Draws random states, bases and measurements from one seeded stream.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: RngSeed) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed.0),
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.random_range(0..upper)
    }

    fn gaussian(&mut self) -> num_complex::Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        c(re, im)
    }

    fn gaussian_matrix(&mut self, d: usize) -> DMatrix<num_complex::Complex64> {
        DMatrix::from_fn(d, d, |_, _| self.gaussian())
    }

    /// Unit vector with i.i.d. complex Gaussian components, normalized.
    pub fn ket(&mut self, d: usize) -> Ket {
        loop {
            let v = Ket::from_fn(d, |_, _| self.gaussian());
            let n = v.norm();
            if n > 1e-12 {
                return v / c(n, 0.0);
            }
        }
    }

    pub fn pure_state(&mut self, d: usize) -> DensityMatrix {
        DensityMatrix::pure(&self.ket(d)).expect("normalized draw")
    }

    /// Mixture of `d` random pure states with flat-Dirichlet weights.
    pub fn mixed_state(&mut self, d: usize) -> DensityMatrix {
        let weights: Vec<f64> = (0..d).map(|_| self.rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = weights.iter().sum();
        let mut acc = ComplexMatrix::zeros(d);
        for w in weights {
            acc = &acc + &ComplexMatrix::projector(&self.ket(d)).scale(w / total);
        }
        // trace is one up to round-off; renormalize so validation sees exactly 1
        let tr = acc.trace().re;
        crate::linalg::validate_density(acc.scale(1.0 / tr).hermitian_part())
            .expect("convex mixture of states")
    }

    /// Gram-Schmidt on the columns of a complex Gaussian matrix.
    pub fn basis(&mut self, d: usize) -> Result<OrthonormalBasis> {
        for _ in 0..MAX_ATTEMPTS {
            let g = self.gaussian_matrix(d);
            let mut vectors: Vec<Ket> = Vec::with_capacity(d);
            let mut degenerate = false;
            for k in 0..d {
                let mut v: Ket = g.column(k).into_owned();
                // two passes keep the result orthogonal to round-off
                for _ in 0..2 {
                    for u in &vectors {
                        let proj = u.dotc(&v);
                        v -= u * proj;
                    }
                }
                let n = v.norm();
                if n < 1e-8 {
                    degenerate = true;
                    break;
                }
                vectors.push(v / c(n, 0.0));
            }
            if !degenerate {
                return OrthonormalBasis::new(vectors);
            }
        }
        Err(Error::DegenerateDraw {
            attempts: MAX_ATTEMPTS,
        })
    }

    /// `n` effects `S^{-1/2} G_i S^{-1/2}` with `G_i = X_i X_i^dagger` for
    /// Gaussian `X_i` and `S = sum_i G_i`.
    ///
    /// Each `X_i` has a random number of columns, so effects of every rank
    /// from 1 to `d` occur.
    pub fn povm(&mut self, d: usize, n: usize) -> Result<Povm> {
        if n < 2 {
            return Err(Error::out_of_range(
                "outcomes",
                n as f64,
                2.0,
                f64::INFINITY,
            ));
        }
        for _ in 0..MAX_ATTEMPTS {
            let gs: Vec<ComplexMatrix> = (0..n)
                .map(|_| {
                    let rank = 1 + self.index(d);
                    let x = DMatrix::from_fn(d, rank, |_, _| self.gaussian());
                    ComplexMatrix::new(&x * x.adjoint()).expect("square")
                })
                .collect();
            let s = gs.iter().fold(ComplexMatrix::zeros(d), |acc, g| &acc + g);
            let spec = hermitian_eig(&s.hermitian_part())?;
            if spec.min_eigenvalue() < 1e-6 * spec.max_eigenvalue() {
                continue;
            }
            let inv_sqrt = spec.map_eigenvalues(|x| 1.0 / x.sqrt()).reconstruct();
            let effects = gs
                .iter()
                .map(|g| (&(&inv_sqrt * g) * &inv_sqrt).hermitian_part())
                .collect();
            return make_povm(effects);
        }
        Err(Error::DegenerateDraw {
            attempts: MAX_ATTEMPTS,
        })
    }
}

pub fn random_pure_state(d: usize, seed: RngSeed) -> DensityMatrix {
    Sampler::new(seed).pure_state(d)
}

pub fn random_mixed_state(d: usize, seed: RngSeed) -> DensityMatrix {
    Sampler::new(seed).mixed_state(d)
}

pub fn random_basis(d: usize, seed: RngSeed) -> Result<OrthonormalBasis> {
    Sampler::new(seed).basis(d)
}

pub fn random_povm(d: usize, n: usize, seed: RngSeed) -> Result<Povm> {
    Sampler::new(seed).povm(d, n)
}

/// Minimum of `objective` over `trials` random pure states.
///
/// For objectives linear in the state this is an upper estimate of the
/// true minimum, which is attained on a pure state.
pub fn sampled_min(
    objective: impl Fn(&DensityMatrix) -> f64,
    d: usize,
    trials: usize,
    seed: RngSeed,
) -> f64 {
    let mut sampler = Sampler::new(seed);
    (0..trials)
        .map(|_| objective(&sampler.pure_state(d)))
        .fold(f64::INFINITY, f64::min)
}
