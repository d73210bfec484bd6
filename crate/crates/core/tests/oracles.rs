//! Independent brute-force and statistical oracles for the closed-form and
//! eigenvalue-based routines.

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use unsharp::bounds::{
    ad_pair_closed_form, coles_bound, device_uncertainty_white_noise, krishna_bound,
    majorization_vector, min_device_uncertainty, min_pair_device_bound, mu_bound,
};
use unsharp::linalg::{overlap, SpectralDecomposition};
use unsharp::povm::{
    amplitude_damping_pair, make_povm, mub_fourier_basis, projective_from_basis, qubit_povm,
    white_noise_povm,
};
use unsharp::uncertainty::{
    binary_entropy, device_uncertainty, measurement_entropy, quantum_uncertainty,
};
use unsharp::verify::{random_basis, random_povm, sampled_min, RngSeed, Sampler};
use unsharp::{ComplexMatrix, DensityMatrix, Ket, OrthonormalBasis, QubitPovmParams};

const SAMPLES: usize = 100_000;

#[test]
fn pure_state_mean_is_maximally_mixed() {
    for d in [2, 3] {
        let mut s = Sampler::new(RngSeed(101 + d as u64));
        let mut acc = ComplexMatrix::zeros(d);
        for _ in 0..SAMPLES {
            acc = &acc + s.pure_state(d).matrix();
        }
        let mean = acc.scale(1.0 / SAMPLES as f64);
        let dev = mean.max_abs_diff(&DensityMatrix::maximally_mixed(d).matrix().clone());
        assert!(dev < 0.01, "d={d}: mean state off by {dev}");
    }
}

#[test]
fn random_basis_overlap_moment() {
    for d in [2, 3, 4] {
        let mut s = Sampler::new(RngSeed(202 + d as u64));
        let fixed = OrthonormalBasis::computational(d).vectors()[0].clone();
        let mean = (0..SAMPLES)
            .map(|_| overlap(&fixed, &s.basis(d).unwrap().vectors()[0]).unwrap())
            .sum::<f64>()
            / SAMPLES as f64;
        assert_abs_diff_eq!(mean, 1.0 / d as f64, epsilon = 0.01);
    }
}

#[test]
fn sampled_min_tracks_damping_floor() {
    let e = 0.7;
    let (x, z) = amplitude_damping_pair(e, e).unwrap();
    let floor = min_pair_device_bound(&x, &z).unwrap();
    assert_abs_diff_eq!(
        floor,
        (1.0 - 1.0 / 3f64.sqrt()) * binary_entropy(e).unwrap(),
        epsilon = 1e-10
    );
    let sampled = sampled_min(
        |rho| device_uncertainty(rho, &x).unwrap() + device_uncertainty(rho, &z).unwrap(),
        3,
        SAMPLES,
        RngSeed(303),
    );
    assert!(
        sampled >= floor - 1e-12,
        "sampled {sampled} below floor {floor}"
    );
    assert!(
        sampled - floor < 0.01,
        "sampled {sampled} too far above floor {floor}"
    );
}

#[test]
fn sampled_min_gap_shrinks_with_trials() {
    let povm = random_povm(3, 3, RngSeed(404)).unwrap();
    let floor = min_device_uncertainty(&povm);
    let objective = |rho: &DensityMatrix| device_uncertainty(rho, &povm).unwrap();
    let gaps: Vec<f64> = [10, 100, 1000, 10_000]
        .iter()
        .map(|&n| sampled_min(objective, 3, n, RngSeed(405)) - floor)
        .collect();
    assert!(gaps.iter().all(|&g| g >= -1e-12));
    // same seed, longer run: the prefix is shared, so the minimum can only drop
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn sampled_min_of_white_noise_is_constant() {
    let basis = random_basis(4, RngSeed(5)).unwrap();
    let povm = white_noise_povm(&basis, 0.35).unwrap();
    let closed = device_uncertainty_white_noise(0.35, 4).unwrap();
    for trials in [1, 10, 500] {
        let m = sampled_min(
            |rho| device_uncertainty(rho, &povm).unwrap(),
            4,
            trials,
            RngSeed(6),
        );
        assert_abs_diff_eq!(m, closed, epsilon = 1e-10);
    }
}

#[test]
fn qubit_floor_matches_binary_entropies() {
    let params = QubitPovmParams::new(1.1, [0.3, -0.2, 0.5]).unwrap();
    let povm = qubit_povm(params).unwrap();
    let (p_plus, p_minus) = params.up_given();
    let expected = binary_entropy(p_plus)
        .unwrap()
        .min(binary_entropy(p_minus).unwrap());
    assert_abs_diff_eq!(min_device_uncertainty(&povm), expected, epsilon = 1e-10);
    let sampled = sampled_min(
        |rho| device_uncertainty(rho, &povm).unwrap(),
        2,
        20_000,
        RngSeed(7),
    );
    assert!(sampled >= expected - 1e-12 && sampled - expected < 1e-3);
}

/// Brute-force maximum of |<a_i|b_j>| + ... over subset pairs, checked against
/// the analytic `w_1 = 1 + max |<a_i|b_j>|`.
#[test]
fn first_majorization_norm() {
    for seed in 0..20 {
        let a = random_basis(3, RngSeed(seed)).unwrap();
        let b = random_basis(3, RngSeed(1000 + seed)).unwrap();
        let max_amp = a
            .overlaps(&b)
            .unwrap()
            .iter()
            .flatten()
            .fold(0.0f64, |m, &x| m.max(x.sqrt()));
        let mv = majorization_vector(&a, &b).unwrap();
        assert_abs_diff_eq!(mv.norms()[0], 1.0 + max_amp, epsilon = 1e-10);
        assert_abs_diff_eq!(mv.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn coles_reduces_to_mu_for_sharp_pairs() {
    for seed in 0..20 {
        let a = random_basis(3, RngSeed(seed)).unwrap();
        let b = random_basis(3, RngSeed(500 + seed)).unwrap();
        let c = coles_bound(
            &projective_from_basis(&a).unwrap(),
            &projective_from_basis(&b).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(c, mu_bound(&a, &b).unwrap(), epsilon = 1e-10);
    }
    let (x, z) = mub_fourier_basis(5).unwrap();
    assert_abs_diff_eq!(mu_bound(&x, &z).unwrap(), 5f64.log2(), epsilon = 1e-12);
}

#[test]
fn damping_floor_is_symmetric() {
    for k in 0..=50 {
        let e = k as f64 / 100.0;
        let (x, z) = amplitude_damping_pair(e, e).unwrap();
        let (x2, z2) = amplitude_damping_pair(1.0 - e, 1.0 - e).unwrap();
        let lo = min_pair_device_bound(&x, &z).unwrap();
        let hi = min_pair_device_bound(&x2, &z2).unwrap();
        assert_abs_diff_eq!(lo, hi, epsilon = 1e-12);
        assert_abs_diff_eq!(
            ad_pair_closed_form(e).unwrap(),
            ad_pair_closed_form(1.0 - e).unwrap(),
            epsilon = 1e-12
        );
    }
}

#[test]
fn scaled_identity_effects_are_pure_device_noise() {
    let weights = [0.5, 0.3, 0.2];
    let povm = make_povm(
        weights
            .iter()
            .map(|&w| ComplexMatrix::identity(3).scale(w))
            .collect(),
    )
    .unwrap();
    let mut s = Sampler::new(RngSeed(8));
    for i in 0..100 {
        let rho = if i % 2 == 0 {
            s.pure_state(3)
        } else {
            s.mixed_state(3)
        };
        let h = measurement_entropy(&rho, &povm).unwrap();
        assert_abs_diff_eq!(device_uncertainty(&rho, &povm).unwrap(), h, epsilon = 1e-12);
        assert_abs_diff_eq!(
            quantum_uncertainty(&rho, &povm).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }
}

/// Converse: anything other than scaled identities leaves room for a state
/// whose outcome entropy exceeds the device part.
#[test]
fn non_trivial_povms_have_quantum_part() {
    let mut corpus = vec![
        projective_from_basis(&OrthonormalBasis::computational(2)).unwrap(),
        white_noise_povm(&random_basis(3, RngSeed(9)).unwrap(), 0.4).unwrap(),
        amplitude_damping_pair(0.3, 0.3).unwrap().0,
        qubit_povm(QubitPovmParams::new(1.0, [0.0, 0.0, 0.6]).unwrap()).unwrap(),
    ];
    corpus.extend(
        (0..20).map(|i| random_povm(2 + i % 3, 2 + i % 4, RngSeed(900 + i as u64)).unwrap()),
    );
    for (n, povm) in corpus.iter().enumerate() {
        let d = povm.dim();
        let mut s = Sampler::new(RngSeed(50 + n as u64));
        let found = (0..2000).any(|_| {
            let rho = s.pure_state(d);
            device_uncertainty(&rho, povm).unwrap()
                < measurement_entropy(&rho, povm).unwrap() - 1e-6
        });
        assert!(found, "POVM {n} shows no quantum part");
    }
}

/// The device term must not depend on which eigenbasis is chosen inside a
/// degenerate eigenspace.
#[test]
fn degenerate_eigenspace_rotation() {
    let basis = random_basis(3, RngSeed(10)).unwrap();
    let povm = white_noise_povm(&basis, 0.45).unwrap();
    let phi: f64 = 0.7;
    let (cs, sn) = (phi.cos(), phi.sin());
    let rotated: Vec<SpectralDecomposition> = povm
        .spectra()
        .iter()
        .map(|spec| {
            let vals = spec.eigenvalues().to_vec();
            let vecs = spec.eigenvectors();
            // eigenvalues are sorted descending, the last two are degenerate
            let u: Ket = vecs[1].clone() * Complex64::new(cs, 0.0)
                + vecs[2].clone() * Complex64::new(0.0, sn);
            let v: Ket = vecs[1].clone() * Complex64::new(0.0, sn)
                + vecs[2].clone() * Complex64::new(cs, 0.0);
            SpectralDecomposition::from_parts(vals, vec![vecs[0].clone(), u, v]).unwrap()
        })
        .collect();
    let alt = povm.with_spectra(rotated).unwrap();
    let mut s = Sampler::new(RngSeed(11));
    for _ in 0..50 {
        let rho = s.mixed_state(3);
        assert_abs_diff_eq!(
            device_uncertainty(&rho, &povm).unwrap(),
            device_uncertainty(&rho, &alt).unwrap(),
            epsilon = 1e-10
        );
    }
}

#[test]
fn white_noise_floor_decreases_with_alpha() {
    for d in 2..=6 {
        let values: Vec<f64> = (0..=20)
            .map(|k| device_uncertainty_white_noise(k as f64 / 20.0, d).unwrap())
            .collect();
        assert_abs_diff_eq!(values[0], (d as f64).log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(values[20], 0.0, epsilon = 1e-12);
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn krishna_below_min_device() {
    let mut s = Sampler::new(RngSeed(12));
    for _ in 0..200 {
        let d = 2 + s.index(3);
        let n = 2 + s.index(4);
        let povm = s.povm(d, n).unwrap();
        assert!(min_device_uncertainty(&povm) >= krishna_bound(&povm) - 1e-10);
    }
}

#[test]
fn sharp_qubit_sweep_endpoints() {
    let z = OrthonormalBasis::computational(2);
    let x = OrthonormalBasis::bloch([1.0, 0.0, 0.0]);
    let pz = projective_from_basis(&z).unwrap();
    let px = projective_from_basis(&x).unwrap();
    assert_abs_diff_eq!(coles_bound(&px, &pz).unwrap(), 1.0, epsilon = 1e-12);
    let tilted = unsharp::povm::qubit_axis_povm(PI / 2.0, 1.0).unwrap();
    assert_abs_diff_eq!(coles_bound(&tilted, &pz).unwrap(), 1.0, epsilon = 1e-12);
}
