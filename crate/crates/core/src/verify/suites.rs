use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{RngSeed, Sampler};
use crate::bounds::{
    b1_bound, berta_reduced_bound, coles_bound, device_uncertainty_white_noise, hw_bound,
    krishna_bound, majorization_vector, min_device_uncertainty, min_pair_device_bound,
    qw_b2_from_vector, BoundReport,
};
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, OrthonormalBasis};
use crate::povm::{convex_combination, projective_from_basis, qubit_axis_basis, white_noise_povm};
use crate::uncertainty::{
    binary_entropy, device_uncertainty, f_white_noise, measurement_entropy, outcome_probs,
    quantum_uncertainty, von_neumann_entropy,
};

/// Named property suites runnable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// `H >= D >= min D >= norm bound` for random states and measurements, d in {2, 3, 4}.
    Chain,
    /// Direct-sum majorization and `H(A) + H(B) >= H(W)` for random bases, d in {2, 3}.
    Majorization,
    /// Device-uncertainty and quantum-uncertainty identities under convex combination.
    Convex,
    /// State independence and closed form of white-noise device uncertainty.
    WhiteNoise,
    /// `H(A_alpha) + H(B_beta) >= B1, B2, -log C` for white-noise pairs.
    NoisyBounds,
    /// `-log C`, pair device bound and every report entry below the entropy sum, random measurements.
    Coles,
    /// Eigenvalue minimum of the pair device uncertainty against state sampling.
    PairMin,
    /// Dual-map identity, `S(rho_alpha) = D(A_alpha)`, the per-outcome decomposition of `Q`
    /// and the overlap-plus-entropy bound for sharp pairs.
    DualMap,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Chain,
        Suite::Majorization,
        Suite::Convex,
        Suite::WhiteNoise,
        Suite::NoisyBounds,
        Suite::Coles,
        Suite::PairMin,
        Suite::DualMap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Chain => "chain",
            Suite::Majorization => "majorization",
            Suite::Convex => "convex",
            Suite::WhiteNoise => "white-noise",
            Suite::NoisyBounds => "noisy-bounds",
            Suite::Coles => "coles",
            Suite::PairMin => "pair-min",
            Suite::DualMap => "dual-map",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Outcome of one suite run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub checks: usize,
    pub violations: usize,
    /// Smallest `lhs - rhs` over inequality checks, or `-|lhs - rhs|` over
    /// identity checks; negative beyond the check's tolerance means failure.
    pub worst_slack: f64,
    /// First few violations, for diagnosis.
    pub failures: Vec<String>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checks > 0
    }
}

const MAX_REPORTED: usize = 10;

struct Tally {
    summary: SuiteSummary,
}

impl Tally {
    fn new(suite: Suite, trials: usize, seed: RngSeed) -> Self {
        Self {
            summary: SuiteSummary {
                suite: suite.name().to_string(),
                trials,
                seed: seed.0,
                checks: 0,
                violations: 0,
                worst_slack: f64::INFINITY,
                failures: Vec::new(),
            },
        }
    }

    fn record(&mut self, slack: f64, tol: f64, what: impl FnOnce() -> String) {
        let s = &mut self.summary;
        s.checks += 1;
        s.worst_slack = s.worst_slack.min(slack);
        // NaN slack counts as a violation
        if slack.is_nan() || slack < -tol {
            s.violations += 1;
            if s.failures.len() < MAX_REPORTED {
                s.failures.push(format!("{} (slack {slack:e})", what()));
            }
        }
    }

    /// `lhs >= rhs - tol`.
    fn ge(&mut self, lhs: f64, rhs: f64, tol: f64, label: impl FnOnce() -> String) {
        self.record(lhs - rhs, tol, || format!("{}: {lhs} < {rhs}", label()));
    }

    /// `|lhs - rhs| <= tol`.
    fn eq(&mut self, lhs: f64, rhs: f64, tol: f64, label: impl FnOnce() -> String) {
        self.record(-(lhs - rhs).abs(), tol, || {
            format!("{}: {lhs} != {rhs}", label())
        });
    }

    fn finish(self) -> SuiteSummary {
        self.summary
    }
}

/// Runs `suite` with `trials` random draws (per dimension where the suite
/// sweeps dimensions). Trial `i` uses the stream `seed.derive(i)`.
pub fn run_suite(suite: Suite, trials: usize, seed: RngSeed) -> Result<SuiteSummary> {
    if trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    let mut tally = Tally::new(suite, trials, seed);
    match suite {
        Suite::Chain => chain(&mut tally, trials, seed)?,
        Suite::Majorization => majorization(&mut tally, trials, seed)?,
        Suite::Convex => convex(&mut tally, trials, seed)?,
        Suite::WhiteNoise => white_noise(&mut tally, trials, seed)?,
        Suite::NoisyBounds => noisy_bounds(&mut tally, trials, seed)?,
        Suite::Coles => coles(&mut tally, trials, seed)?,
        Suite::PairMin => pair_min(&mut tally, trials, seed)?,
        Suite::DualMap => dual_map(&mut tally, trials, seed)?,
    }
    Ok(tally.finish())
}

const SLACK: f64 = 1e-9;

fn state(s: &mut Sampler, d: usize, trial: usize) -> DensityMatrix {
    if trial.is_multiple_of(2) {
        s.pure_state(d)
    } else {
        s.mixed_state(d)
    }
}

fn chain(t: &mut Tally, trials: usize, seed: RngSeed) -> Result<()> {
    for d in 2..=4usize {
        for i in 0..trials {
            let mut s = seed.derive((d * 1_000_000 + i) as u64).sampler();
            let n = 2 + s.index(d + 1);
            let povm = s.povm(d, n)?;
            let rho = state(&mut s, d, i);
            let h = measurement_entropy(&rho, &povm)?;
            let dev = device_uncertainty(&rho, &povm)?;
            let min_d = min_device_uncertainty(&povm);
            let kb = krishna_bound(&povm);
            let label = || format!("d={d} trial={i}");
            t.ge(h, dev, SLACK, || format!("{} H >= D", label()));
            t.ge(dev, min_d, SLACK, || format!("{} D >= minD", label()));
            t.ge(min_d, kb, SLACK, || format!("{} minD >= krishna", label()));
            t.ge(kb, 0.0, SLACK, || format!("{} krishna >= 0", label()));
        }
    }
    Ok(())
}

/// Sorted-descending partial sums.
fn partial_sums(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn majorization(t: &mut Tally, trials: usize, seed: RngSeed) -> Result<()> {
    for d in 2..=3usize {
        for i in 0..trials {
            let mut s = seed.derive((d * 1_000_000 + i) as u64).sampler();
            let a = s.basis(d)?;
            let b = s.basis(d)?;
            let rho = s.pure_state(d);
            let pa = outcome_probs(&rho, &projective_from_basis(&a)?)?;
            let pb = outcome_probs(&rho, &projective_from_basis(&b)?)?;
            let mv = majorization_vector(&a, &b)?;
            let lhs: Vec<f64> = pa.probs().iter().chain(pb.probs()).copied().collect();
            let rhs = mv.majorant();
            let (ls, rs) = (partial_sums(&lhs), partial_sums(&rhs));
            for k in 0..ls.len() - 1 {
                t.ge(rs[k], ls[k], SLACK, || {
                    format!("d={d} trial={i} partial sum k={}", k + 1)
                });
            }
            t.eq(ls[ls.len() - 1], rs[rs.len() - 1], SLACK, || {
                format!("d={d} trial={i} totals")
            });
            let hsum =
                crate::uncertainty::shannon_entropy(&pa) + crate::uncertainty::shannon_entropy(&pb);
            t.ge(hsum, hw_bound(&mv), SLACK, || {
                format!("d={d} trial={i} H(A)+H(B) >= H(W)")
            });
        }
    }
    Ok(())
}

fn convex(t: &mut Tally, trials: usize, seed: RngSeed) -> Result<()> {
    for i in 0..trials {
        let mut s = seed.derive(i as u64).sampler();
        let d = 2 + s.index(3);
        let n_a = 2 + s.index(3);
        let a = s.povm(d, n_a)?;
        let n_b = 2 + s.index(3);
        let b = s.povm(d, n_b)?;
        let p = s.uniform();
        let rho = state(&mut s, d, i);
        let mix = convex_combination(&a, &b, p)?;
        let (da, db) = (device_uncertainty(&rho, &a)?, device_uncertainty(&rho, &b)?);
        let expected = p * da + (1.0 - p) * db + binary_entropy(p)?;
        t.eq(device_uncertainty(&rho, &mix)?, expected, 1e-12, || {
            format!("trial={i} D identity")
        });
        let (qa, qb) = (
            quantum_uncertainty(&rho, &a)?,
            quantum_uncertainty(&rho, &b)?,
        );
        let q_mix = quantum_uncertainty(&rho, &mix)?;
        t.eq(q_mix, p * qa + (1.0 - p) * qb, 1e-12, || {
            format!("trial={i} Q invariance")
        });
    }
    Ok(())
}

fn white_noise(t: &mut Tally, trials: usize, seed: RngSeed) -> Result<()> {
    for d in 2..=6usize {
        for step in 0..=10usize {
            let alpha = step as f64 / 10.0;
            let mut s = seed.derive((d * 100 + step) as u64).sampler();
            let povm = white_noise_povm(&s.basis(d)?, alpha)?;
            let closed = device_uncertainty_white_noise(alpha, d)?;
            t.eq(min_device_uncertainty(&povm), closed, 1e-10, || {
                format!("d={d} alpha={alpha} minD")
            });
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for i in 0..trials {
                let rho = state(&mut s, d, i);
                let dev = device_uncertainty(&rho, &povm)?;
                lo = lo.min(dev);
                hi = hi.max(dev);
                t.eq(dev, closed, 1e-10, || {
                    format!("d={d} alpha={alpha} state={i} closed form")
                });
            }
            t.eq(hi, lo, 1e-10, || {
                format!("d={d} alpha={alpha} state spread")
            });
        }
    }
    Ok(())
}

fn noisy_bounds(t: &mut Tally, trials: usize, seed: RngSeed) -> Result<()> {
    for i in 0..trials {
        let mut s = seed.derive(i as u64).sampler();
        let (ba, bb, d) = if i % 2 == 0 {
            let theta = s.uniform_in(0.0, std::f64::consts::PI);
            (
                qubit_axis_basis(theta),
                OrthonormalBasis::computational(2),
                2,
            )
        } else {
            (s.basis(3)?, s.basis(3)?, 3)
        };
        let (alpha, beta) = (s.uniform(), s.uniform());
        let a = white_noise_povm(&ba, alpha)?;
        let b = white_noise_povm(&bb, beta)?;
        let rho = s.pure_state(d);
        let hsum = measurement_entropy(&rho, &a)? + measurement_entropy(&rho, &b)?;
        let mv = majorization_vector(&ba, &bb)?;
        let qb = qw_b2_from_vector(&mv, alpha, beta)?;
        let b1 = b1_bound(&ba, alpha, &bb, beta)?;
        let cb = coles_bound(&a, &b)?;
        let label = || format!("trial={i} d={d} alpha={alpha:.4} beta={beta:.4}");
        t.ge(hsum, b1, SLACK, || format!("{} H >= B1", label()));
        t.ge(hsum, qb.b2, SLACK, || format!("{} H >= B2", label()));
        t.ge(hsum, cb, SLACK, || format!("{} H >= -log C", label()));
        t.ge(qb.b2, hw_bound(&mv), SLACK, || {
            format!("{} B2 >= H(W)", label())
        });
        let dwn =
            device_uncertainty_white_noise(alpha, d)? + device_uncertainty_white_noise(beta, d)?;
        t.ge(qb.b2, dwn, SLACK, || format!("{} B2 >= D_WN", label()));
    }
    Ok(())
}

fn coles(t: &mut Tally, trials: usize, seed: RngSeed) -> Result<()> {
    for i in 0..trials {
        let mut s = seed.derive(i as u64).sampler();
        let d = 2 + s.index(3);
        let n_a = 2 + s.index(4);
        let a = s.povm(d, n_a)?;
        let n_b = 2 + s.index(4);
        let b = s.povm(d, n_b)?;
        let rho = state(&mut s, d, i);
        let hsum = measurement_entropy(&rho, &a)? + measurement_entropy(&rho, &b)?;
        t.ge(hsum, coles_bound(&a, &b)?, SLACK, || {
            format!("trial={i} d={d} H >= -log C")
        });
        t.ge(hsum, min_pair_device_bound(&a, &b)?, SLACK, || {
            format!("trial={i} d={d} H >= min pair D")
        });
        let report = BoundReport::for_pair(&a, "A", &b, "B", Some((&rho, "rho")))?;
        let worst = report
            .bounds
            .values()
            .fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        t.ge(hsum, worst, SLACK, || {
            format!("trial={i} d={d} report bounds")
        });
    }
    Ok(())
}

fn pair_min(t: &mut Tally, trials: usize, seed: RngSeed) -> Result<()> {
    const SAMPLES: usize = 500;
    for i in 0..trials {
        let mut s = seed.derive(i as u64).sampler();
        let d = 2 + s.index(2);
        let n_a = 2 + s.index(3);
        let a = s.povm(d, n_a)?;
        let n_b = 2 + s.index(3);
        let b = s.povm(d, n_b)?;
        let floor = min_pair_device_bound(&a, &b)?;
        let sampled = super::sampled_min(
            |rho| {
                device_uncertainty(rho, &a).unwrap_or(f64::NAN)
                    + device_uncertainty(rho, &b).unwrap_or(f64::NAN)
            },
            d,
            SAMPLES,
            seed.derive(i as u64 + (1 << 40)),
        );
        t.ge(sampled, floor, SLACK, || {
            format!("trial={i} d={d} sampled >= eigen")
        });
        let single = min_device_uncertainty(&a) + min_device_uncertainty(&b);
        t.ge(floor, single, SLACK, || {
            format!("trial={i} d={d} pair >= minD_A + minD_B")
        });
    }
    Ok(())
}

fn dual_map(t: &mut Tally, trials: usize, seed: RngSeed) -> Result<()> {
    for i in 0..trials {
        let mut s = seed.derive(i as u64).sampler();
        let d = 2 + s.index(4);
        let basis = s.basis(d)?;
        let alpha = s.uniform();
        let psi = s.ket(d);
        let pure = DensityMatrix::pure(&psi)?;
        let rho_alpha = pure.mix(&DensityMatrix::maximally_mixed(d), alpha)?;
        let povm = white_noise_povm(&basis, alpha)?;
        for (k, (v, effect)) in basis.vectors().iter().zip(povm.effects()).enumerate() {
            let lhs = rho_alpha.matrix().expectation(v);
            let rhs = effect.expectation(&psi);
            t.eq(lhs, rhs, 1e-12, || {
                format!("trial={i} outcome={k} dual map")
            });
        }
        let closed = device_uncertainty_white_noise(alpha, d)?;
        t.eq(von_neumann_entropy(&rho_alpha)?, closed, 1e-10, || {
            format!("trial={i} S(rho_alpha)")
        });

        let rho = state(&mut s, d, i);
        let q = quantum_uncertainty(&rho, &povm)?;
        let via_f = basis
            .vectors()
            .iter()
            .map(|v| f_white_noise(rho.population(v), alpha, d))
            .sum::<Result<f64>>()?;
        t.eq(via_f, q, 1e-10, || format!("trial={i} sum f = Q"));

        let other = s.basis(d)?;
        let sharp_sum = measurement_entropy(&rho, &projective_from_basis(&basis)?)?
            + measurement_entropy(&rho, &projective_from_basis(&other)?)?;
        let floor = berta_reduced_bound(&basis, &other, &rho)?;
        t.ge(sharp_sum, floor, SLACK, || {
            format!("trial={i} H(A)+H(B) >= mu + S(rho)")
        });
    }
    Ok(())
}
