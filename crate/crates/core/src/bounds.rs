//! Lower bounds on measurement entropies.
//!
//! Single measurement: the norm bound `-log2 max_i ||A_i||` and the
//! state-minimized device uncertainty. Pairs: the sandwiched-effect bound
//! `-log2 C`, the overlap bound for two bases, the white-noise bounds `B1`
//! and `B2`, the majorization bound `H(W)` and the minimized pair device
//! uncertainty.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    min_eigenvalue, operator_norm, ComplexMatrix, DensityMatrix, OrthonormalBasis,
};
use crate::povm::Povm;
use crate::uncertainty::{
    binary_entropy, entropy_bits, entropy_term, f_white_noise, measurement_entropy,
    von_neumann_entropy,
};

/// Largest dimension accepted by the exhaustive subset search in
/// [`majorization_vector`].
pub const MAJORIZATION_MAX_DIM: usize = 8;

/// `-log2 x` for `x` in `(0, 1]`, with `-log2 1` reported as `+0.0`.
fn neg_log2(x: f64) -> f64 {
    -x.min(1.0).log2() + 0.0
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        })
    }
}

/// `-log2 max_i ||A_i||`.
pub fn krishna_bound(a: &Povm) -> f64 {
    let max_norm = a
        .spectra()
        .iter()
        .map(|s| s.max_eigenvalue())
        .fold(0.0, f64::max);
    neg_log2(max_norm)
}

/// `M_A = sum_{i,k} h(a_i^k) |a_i^k><a_i^k|`, so that `D_rho(A) = Tr[rho M_A]`.
pub fn device_operator(a: &Povm) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(a.dim());
    for (lambda, v) in a.spectra().iter().flat_map(|s| s.pairs()) {
        let w = entropy_term(lambda);
        if w != 0.0 {
            m = &m + &ComplexMatrix::projector(v).scale(w);
        }
    }
    m
}

/// `min_rho D_rho(A)`: lowest eigenvalue of [`device_operator`].
pub fn min_device_uncertainty(a: &Povm) -> f64 {
    min_eigenvalue(&device_operator(a)).expect("device operator is Hermitian by construction")
}

/// Closed-form device uncertainty of a white-noise measurement,
/// `-(alpha + alpha_d) log2(alpha + alpha_d) - (d - 1) alpha_d log2 alpha_d`
/// with `alpha_d = (1 - alpha) / d`.
pub fn device_uncertainty_white_noise(alpha: f64, d: usize) -> Result<f64> {
    Error::check_range("alpha", alpha, 0.0, 1.0)?;
    if d < 2 {
        return Err(Error::out_of_range("d", d as f64, 2.0, f64::INFINITY));
    }
    let ad = (1.0 - alpha) / d as f64;
    Ok(entropy_term(alpha + ad) + (d - 1) as f64 * entropy_term(ad))
}

/// `max_i || sum_j B_j A_i B_j ||`.
fn sandwiched_max(outer: &Povm, inner: &Povm) -> f64 {
    inner
        .effects()
        .iter()
        .map(|a| {
            let sum = outer
                .effects()
                .iter()
                .fold(ComplexMatrix::zeros(a.dim()), |acc, b| {
                    &acc + &(&(b * a) * b)
                });
            operator_norm(&sum.hermitian_part()).expect("Hermitian by construction")
        })
        .fold(0.0, f64::max)
}

/// `-log2 C` with
/// `C = min[max_i ||sum_j B_j A_i B_j||, max_j ||sum_i A_i B_j A_i||]`.
pub fn coles_bound(a: &Povm, b: &Povm) -> Result<f64> {
    same_dim(a.dim(), b.dim())?;
    let c = sandwiched_max(b, a).min(sandwiched_max(a, b));
    Ok(neg_log2(c))
}

/// Overlap bound `-log2 max_{i,j} |<a_i|b_j>|^2`.
pub fn mu_bound(a: &OrthonormalBasis, b: &OrthonormalBasis) -> Result<f64> {
    let c = a.overlaps(b)?.into_iter().flatten().fold(0.0, f64::max);
    Ok(neg_log2(c))
}

/// `B1 = -log2 c_ab + min[D(A_alpha), D(B_beta)]` for white-noise
/// measurements on bases `a` and `b`.
pub fn b1_bound(a: &OrthonormalBasis, alpha: f64, b: &OrthonormalBasis, beta: f64) -> Result<f64> {
    let mu = mu_bound(a, b)?;
    let d = a.dim();
    let da = device_uncertainty_white_noise(alpha, d)?;
    let db = device_uncertainty_white_noise(beta, d)?;
    Ok(mu + da.min(db))
}

/// Overlap bound plus the von Neumann entropy of `rho`: the single-system
/// form of the memory-assisted relation.
pub fn berta_reduced_bound(
    a: &OrthonormalBasis,
    b: &OrthonormalBasis,
    rho: &DensityMatrix,
) -> Result<f64> {
    same_dim(a.dim(), rho.dim())?;
    Ok(mu_bound(a, b)? + von_neumann_entropy(rho)?)
}

/// Subset-maximized projector norms `w_k` and the derived probability
/// vector `W = (w_1 - 1, w_2 - w_1, ..., w_d - w_{d-1}, 0, ..., 0)` of
/// length `2d - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationVector {
    w: Vec<f64>,
    weights: Vec<f64>,
}

impl MajorizationVector {
    /// Builds the vector from the norms `w_1..w_d`.
    pub fn from_norms(w: Vec<f64>) -> Result<Self> {
        let d = w.len();
        if d < 1 {
            return Err(Error::MalformedMatrix("empty majorization vector".into()));
        }
        let slack = 1e-10;
        let mut prev = 1.0;
        for &wk in &w {
            if wk < prev - slack || wk > 2.0 + slack {
                return Err(Error::out_of_range("w_k", wk, prev, 2.0));
            }
            prev = wk;
        }
        if (w[d - 1] - 2.0).abs() > slack {
            return Err(Error::out_of_range("w_d", w[d - 1], 2.0, 2.0));
        }
        let mut weights = Vec::with_capacity(2 * d - 1);
        let mut prev = 1.0;
        for &wk in &w {
            weights.push((wk - prev).max(0.0));
            prev = wk;
        }
        weights.resize(2 * d - 1, 0.0);
        Ok(Self { w, weights })
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// `w_1..w_d`.
    pub fn norms(&self) -> &[f64] {
        &self.w
    }

    /// `W`, length `2d - 1`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `{1} (+) W`, the majorizing vector for `p^A (+) p^B`.
    pub fn majorant(&self) -> Vec<f64> {
        std::iter::once(1.0)
            .chain(self.weights.iter().copied())
            .collect()
    }
}

fn subsets_by_size(d: usize) -> Vec<Vec<u32>> {
    let mut by_size = vec![Vec::new(); d + 1];
    for mask in 0..(1u32 << d) {
        by_size[mask.count_ones() as usize].push(mask);
    }
    by_size
}

fn masked_sum(projectors: &[ComplexMatrix], mask: u32, acc: &mut ComplexMatrix) {
    for (i, p) in projectors.iter().enumerate() {
        if mask & (1 << i) != 0 {
            *acc = &*acc + p;
        }
    }
}

/// `w_k = max over index sets R, S with |R| + |S| = k + 1 of
/// ||sum_{i in R} |a_i><a_i| + sum_{j in S} |b_j><b_j|||`, by exhaustive
/// enumeration of all subset pairs.
pub fn majorization_vector(
    a: &OrthonormalBasis,
    b: &OrthonormalBasis,
) -> Result<MajorizationVector> {
    same_dim(a.dim(), b.dim())?;
    let d = a.dim();
    if d > MAJORIZATION_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: d,
            max: MAJORIZATION_MAX_DIM,
        });
    }
    let pa = a.projectors();
    let pb = b.projectors();
    let subsets = subsets_by_size(d);
    let mut w = Vec::with_capacity(d);
    for k in 1..=d {
        let total = k + 1;
        let mut best = 0.0_f64;
        for size_r in total.saturating_sub(d)..=total.min(d) {
            let size_s = total - size_r;
            for &r in &subsets[size_r] {
                let mut base = ComplexMatrix::zeros(d);
                masked_sum(&pa, r, &mut base);
                for &s in &subsets[size_s] {
                    let mut m = base.clone();
                    masked_sum(&pb, s, &mut m);
                    best = best.max(operator_norm(&m)?);
                }
            }
        }
        w.push(best);
    }
    // the norms are nondecreasing in k and w_d = 2; pin round-off so the
    // weights come out non-negative and sum to one
    for k in 1..d {
        if w[k] < w[k - 1] {
            w[k] = w[k - 1];
        }
    }
    w[d - 1] = 2.0;
    MajorizationVector::from_norms(w)
}

/// Majorization bound `H(W)`.
pub fn hw_bound(mv: &MajorizationVector) -> f64 {
    entropy_bits(mv.weights())
}

/// `Q(W) = sum_i f(W_i, min(alpha, beta))` (with `W` zero-padded to `2d`)
/// and `B2 = Q(W) + D(A_alpha) + D(B_beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QwB2 {
    pub qw: f64,
    pub b2: f64,
}

pub fn qw_b2_bound(
    a: &OrthonormalBasis,
    alpha: f64,
    b: &OrthonormalBasis,
    beta: f64,
) -> Result<QwB2> {
    let mv = majorization_vector(a, b)?;
    qw_b2_from_vector(&mv, alpha, beta)
}

/// As [`qw_b2_bound`] for an already computed majorization vector.
pub fn qw_b2_from_vector(mv: &MajorizationVector, alpha: f64, beta: f64) -> Result<QwB2> {
    let d = mv.dim().max(2);
    let sharp = alpha.min(beta);
    // the padding entry is zero and f(0, .) = 0
    let qw = mv
        .weights()
        .iter()
        .map(|&wi| f_white_noise(wi.clamp(0.0, 1.0), sharp, d))
        .sum::<Result<f64>>()?
        + 0.0; // an all-zero sum is -0.0
    let b2 =
        qw + device_uncertainty_white_noise(alpha, d)? + device_uncertainty_white_noise(beta, d)?;
    Ok(QwB2 { qw, b2 })
}

/// `min_rho [D_rho(A) + D_rho(B)]`: lowest eigenvalue of `M_A + M_B`.
pub fn min_pair_device_bound(a: &Povm, b: &Povm) -> Result<f64> {
    same_dim(a.dim(), b.dim())?;
    min_eigenvalue(&(&device_operator(a) + &device_operator(b)))
}

/// Closed form of `-log2 C` for the damped d = 3 Fourier pair with
/// equal transition probability `e`.
pub fn ad_coles_closed_form(e: f64) -> Result<f64> {
    Error::check_range("e", e, 0.0, 1.0)?;
    let root = (3.0 * (4.0 + 4.0 * e + 3.0 * e * e)).sqrt();
    let inner = (2.0 + 2.0 * e - e * e + 3.0 * e.powi(3) + (1.0 - e) * e * root) / 6.0;
    Ok(neg_log2(inner))
}

/// Closed form `(1 - 1/sqrt 3) H_bin(e)` of the minimized pair device
/// uncertainty for the damped d = 3 Fourier pair.
pub fn ad_pair_closed_form(e: f64) -> Result<f64> {
    Ok((1.0 - 1.0 / 3f64.sqrt()) * binary_entropy(e)?)
}

/// Bound values for one scenario, keyed by identifier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub dim: usize,
    pub povm_a: String,
    pub povm_b: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    pub bounds: BTreeMap<String, f64>,
    /// `H_rho(A) + H_rho(B)` when a state was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_sum: Option<f64>,
    pub notes: Vec<String>,
}

/// Note attached whenever B1 is reported.
pub const B1_SIGN_NOTE: &str =
    "B1 uses c_ab = max |<a_i|b_j>|^2 and B1 = -log2 c_ab + min[D(A), D(B)] (with +log c_ab the bound would be non-positive)";

impl BoundReport {
    /// Computes every bound applicable to the pair. The white-noise bounds
    /// (mu, B1, HW, QW, B2, D_WN) are included only when both measurements
    /// are recognized as white-noise measurements on orthonormal bases.
    pub fn for_pair(
        a: &Povm,
        a_label: &str,
        b: &Povm,
        b_label: &str,
        state: Option<(&DensityMatrix, &str)>,
    ) -> Result<Self> {
        same_dim(a.dim(), b.dim())?;
        let mut bounds = BTreeMap::new();
        bounds.insert("krishna_A".to_string(), krishna_bound(a));
        bounds.insert("krishna_B".to_string(), krishna_bound(b));
        bounds.insert("minD_A".to_string(), min_device_uncertainty(a));
        bounds.insert("minD_B".to_string(), min_device_uncertainty(b));
        bounds.insert("minD_pair".to_string(), min_pair_device_bound(a, b)?);
        bounds.insert("coles_C".to_string(), coles_bound(a, b)?);
        let mut notes = Vec::new();
        if let (Some((ba, alpha)), Some((bb, beta))) = (a.as_white_noise(), b.as_white_noise()) {
            let d = a.dim();
            bounds.insert("mu".to_string(), mu_bound(&ba, &bb)?);
            bounds.insert("B1".to_string(), b1_bound(&ba, alpha, &bb, beta)?);
            if d <= MAJORIZATION_MAX_DIM {
                let mv = majorization_vector(&ba, &bb)?;
                let qb = qw_b2_from_vector(&mv, alpha, beta)?;
                bounds.insert("HW".to_string(), hw_bound(&mv));
                bounds.insert("QW".to_string(), qb.qw);
                bounds.insert("B2".to_string(), qb.b2);
            }
            bounds.insert(
                "D_WN".to_string(),
                device_uncertainty_white_noise(alpha, d)?
                    + device_uncertainty_white_noise(beta, d)?,
            );
            notes.push(format!(
                "white-noise measurements detected: alpha = {alpha:.12}, beta = {beta:.12}"
            ));
            notes.push(B1_SIGN_NOTE.to_string());
        }
        let (state_label, entropy_sum) = match state {
            Some((rho, label)) => {
                same_dim(a.dim(), rho.dim())?;
                let sum = measurement_entropy(rho, a)? + measurement_entropy(rho, b)?;
                (Some(label.to_string()), Some(sum))
            }
            None => (None, None),
        };
        Ok(Self {
            dim: a.dim(),
            povm_a: a_label.to_string(),
            povm_b: b_label.to_string(),
            state: state_label,
            bounds,
            entropy_sum,
            notes,
        })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.bounds.get(key).copied()
    }

    /// Bounds exceeding the entropy sum by more than `slack`.
    ///
    /// The single-measurement entries (`krishna_*`, `minD_A`, `minD_B`)
    /// bound one entropy each and are trivially below the sum.
    pub fn violations(&self, slack: f64) -> Vec<(String, f64)> {
        let Some(sum) = self.entropy_sum else {
            return Vec::new();
        };
        self.bounds
            .iter()
            .filter(|(_, &v)| v > sum + slack)
            .map(|(k, &v)| (k.clone(), v))
            .collect()
    }
}
