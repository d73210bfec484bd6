//! Parameter sweeps over the qubit angle and the qutrit damping strength.
//!
//! Grid points are independent and evaluated in parallel; rows come back in
//! grid order, so output does not depend on the thread count.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    ad_coles_closed_form, b1_bound, coles_bound, device_uncertainty_white_noise, hw_bound,
    majorization_vector, min_pair_device_bound, qw_b2_from_vector,
};
use crate::error::{Error, Result};
use crate::linalg::OrthonormalBasis;
use crate::povm::{amplitude_damping_pair, qubit_axis_basis, white_noise_povm};
use crate::verify::RngSeed;

/// Parameter tolerance of crossover refinement.
pub const CROSSOVER_TOL: f64 = 1e-4;

/// Differences smaller than this are treated as ties, not sign changes.
const TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Theta,
    Damping,
}

/// Evenly spaced grid `start, ..., stop` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub grid: Grid,
    /// Sharpness of the tilted qubit measurement (theta sweep only).
    pub eta: f64,
    /// Sharpness of the z measurement (theta sweep only).
    pub zeta: f64,
    pub seed: RngSeed,
}

impl SweepConfig {
    /// Defaults: 181 points on `[0, pi]` for the angle, 101 on `[0, 1]` for damping.
    pub fn default_for(kind: SweepKind) -> Self {
        let grid = match kind {
            SweepKind::Theta => Grid {
                start: 0.0,
                stop: PI,
                steps: 181,
            },
            SweepKind::Damping => Grid {
                start: 0.0,
                stop: 1.0,
                steps: 101,
            },
        };
        Self {
            kind,
            grid,
            eta: 1.0,
            zeta: 1.0,
            seed: RngSeed::default(),
        }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            SweepKind::Theta => 2,
            SweepKind::Damping => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.steps < 2 {
            return Err(Error::Config(format!(
                "steps must be at least 2, got {}",
                g.steps
            )));
        }
        let (lo, hi) = match self.kind {
            SweepKind::Theta => (0.0, PI),
            SweepKind::Damping => (0.0, 1.0),
        };
        let inside = |x: f64| x >= lo - 1e-12 && x <= hi + 1e-12;
        if !(inside(g.start) && inside(g.stop) && g.start < g.stop) {
            return Err(Error::Config(format!(
                "grid [{}, {}] must be increasing and within [{lo}, {hi}]",
                g.start, g.stop
            )));
        }
        if self.kind == SweepKind::Theta {
            for (name, v) in [("eta", self.eta), ("zeta", self.zeta)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Config(format!("{name} = {v} is outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    /// `key = value` lines describing the effective configuration.
    pub fn describe(&self) -> Vec<String> {
        let mut lines = vec![
            format!(
                "kind = {}",
                match self.kind {
                    SweepKind::Theta => "theta",
                    SweepKind::Damping => "damping",
                }
            ),
            format!("start = {}", self.grid.start),
            format!("stop = {}", self.grid.stop),
            format!("steps = {}", self.grid.steps),
        ];
        if self.kind == SweepKind::Theta {
            lines.push(format!("eta = {}", self.eta));
            lines.push(format!("zeta = {}", self.zeta));
        }
        lines.push(format!("dim = {}", self.dim()));
        lines.push(format!("seed = {}", self.seed.0));
        lines
    }
}

/// A sign change of `upper - lower` between adjacent grid points, refined by bisection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossover {
    /// `"upper>lower"`: the named quantity that is larger just past the crossing.
    pub label: String,
    pub at: f64,
}

/// Bisection on the sign of `f` over `[lo, hi]`, where `f(lo)` and `f(hi)` differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `diff` along `xs`, ignoring near-ties, each refined by bisection of `f`.
fn crossovers(
    xs: &[f64],
    diff: &[f64],
    f: impl Fn(f64) -> f64,
    upper: &str,
    lower: &str,
) -> Vec<Crossover> {
    let signed: Vec<(f64, f64)> = xs
        .iter()
        .zip(diff)
        .filter(|(_, d)| d.abs() > TIE)
        .map(|(&x, &d)| (x, d))
        .collect();
    signed
        .windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| {
            let label = if w[1].1 > 0.0 {
                format!("{upper}>{lower}")
            } else {
                format!("{lower}>{upper}")
            };
            Crossover {
                label,
                at: bisect(&f, w[0].0, w[1].0, CROSSOVER_TOL),
            }
        })
        .collect()
}

/// Bounds for the pair `X_eta` (axis at angle `theta` in the x-z plane) and `Z_zeta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaRow {
    pub theta: f64,
    #[serde(rename = "B1")]
    pub b1: f64,
    #[serde(rename = "B2")]
    pub b2: f64,
    #[serde(rename = "logC")]
    pub log_c: f64,
    #[serde(rename = "D_WN")]
    pub d_wn: f64,
    #[serde(rename = "HW")]
    pub hw: f64,
    #[serde(rename = "QW")]
    pub qw: f64,
}

pub fn theta_point(theta: f64, eta: f64, zeta: f64) -> Result<ThetaRow> {
    let xb = qubit_axis_basis(theta);
    let zb = OrthonormalBasis::computational(2);
    let x = white_noise_povm(&xb, eta)?;
    let z = white_noise_povm(&zb, zeta)?;
    let mv = majorization_vector(&xb, &zb)?;
    let qb = qw_b2_from_vector(&mv, eta, zeta)?;
    Ok(ThetaRow {
        theta,
        b1: b1_bound(&xb, eta, &zb, zeta)?,
        b2: qb.b2,
        log_c: coles_bound(&x, &z)?,
        d_wn: device_uncertainty_white_noise(eta, 2)? + device_uncertainty_white_noise(zeta, 2)?,
        hw: hw_bound(&mv),
        qw: qb.qw,
    })
}

/// Bounds for the damped qutrit pair at transition probability `e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampingRow {
    pub e: f64,
    #[serde(rename = "logC_numeric")]
    pub log_c_numeric: f64,
    #[serde(rename = "logC_closed")]
    pub log_c_closed: f64,
    #[serde(rename = "D_AD")]
    pub d_ad: f64,
}

pub fn damping_point(e: f64) -> Result<DampingRow> {
    let (x, z) = amplitude_damping_pair(e, e)?;
    Ok(DampingRow {
        e,
        log_c_numeric: coles_bound(&x, &z)?,
        log_c_closed: ad_coles_closed_form(e)?,
        d_ad: min_pair_device_bound(&x, &z)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep<R> {
    pub config: SweepConfig,
    pub rows: Vec<R>,
    pub crossovers: Vec<Crossover>,
}

pub type ThetaSweep = Sweep<ThetaRow>;
pub type DampingSweep = Sweep<DampingRow>;

fn eval_grid<R: Send>(grid: &Grid, f: impl Fn(f64) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    grid.points().into_par_iter().map(f).collect()
}

fn point_or_nan<R>(r: Result<R>, pick: impl Fn(&R) -> f64) -> f64 {
    r.map(|row| pick(&row)).unwrap_or(f64::NAN)
}

pub fn sweep_theta(config: &SweepConfig) -> Result<ThetaSweep> {
    config.validate()?;
    if config.kind != SweepKind::Theta {
        return Err(Error::Config("expected a theta sweep configuration".into()));
    }
    let (eta, zeta) = (config.eta, config.zeta);
    let rows = eval_grid(&config.grid, |t| theta_point(t, eta, zeta))?;
    let xs: Vec<f64> = rows.iter().map(|r| r.theta).collect();
    type Pick = fn(&ThetaRow) -> f64;
    let pairs: [(&str, Pick, &str, Pick); 4] = [
        ("B2", |r| r.b2, "B1", |r| r.b1),
        ("D_WN", |r| r.d_wn, "logC", |r| r.log_c),
        ("D_WN", |r| r.d_wn, "B1", |r| r.b1),
        ("B2", |r| r.b2, "D_WN", |r| r.d_wn),
    ];
    let mut found = Vec::new();
    for (upper, pu, lower, pl) in pairs {
        let diff: Vec<f64> = rows.iter().map(|r| pu(r) - pl(r)).collect();
        let f = |t: f64| point_or_nan(theta_point(t, eta, zeta), |r| pu(r) - pl(r));
        found.extend(crossovers(&xs, &diff, f, upper, lower));
    }
    Ok(Sweep {
        config: config.clone(),
        rows,
        crossovers: found,
    })
}

pub fn sweep_damping(config: &SweepConfig) -> Result<DampingSweep> {
    config.validate()?;
    if config.kind != SweepKind::Damping {
        return Err(Error::Config(
            "expected a damping sweep configuration".into(),
        ));
    }
    let rows = eval_grid(&config.grid, damping_point)?;
    let xs: Vec<f64> = rows.iter().map(|r| r.e).collect();
    let diff: Vec<f64> = rows.iter().map(|r| r.d_ad - r.log_c_numeric).collect();
    let f = |e: f64| point_or_nan(damping_point(e), |r| r.d_ad - r.log_c_numeric);
    let found = crossovers(&xs, &diff, f, "D_AD", "logC");
    Ok(Sweep {
        config: config.clone(),
        rows,
        crossovers: found,
    })
}

/// Smallest margin `D_WN - (-log2 C)` over an angle grid for one noise pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseDominance {
    pub eta: f64,
    pub zeta: f64,
    pub worst_margin: f64,
    /// Angle attaining the worst margin.
    pub worst_theta: f64,
}

impl NoiseDominance {
    /// Whether the noise floor exceeds the Coles bound at every grid angle.
    pub fn everywhere(&self) -> bool {
        self.worst_margin > 0.0
    }
}

pub fn noise_dominance(eta: f64, zeta: f64, grid: &Grid) -> Result<NoiseDominance> {
    let z = white_noise_povm(&OrthonormalBasis::computational(2), zeta)?;
    let d_wn = device_uncertainty_white_noise(eta, 2)? + device_uncertainty_white_noise(zeta, 2)?;
    let margins = eval_grid(grid, |t| {
        let x = white_noise_povm(&qubit_axis_basis(t), eta)?;
        Ok((t, d_wn - coles_bound(&x, &z)?))
    })?;
    let (worst_theta, worst_margin) = margins.into_iter().fold(
        (f64::NAN, f64::INFINITY),
        |acc, x| if x.1 < acc.1 { x } else { acc },
    );
    Ok(NoiseDominance {
        eta,
        zeta,
        worst_margin,
        worst_theta,
    })
}

/// [`noise_dominance`] for every pair `(eta, zeta)` drawn from `levels`.
pub fn scan_noise_dominance(levels: &[f64], grid: &Grid) -> Result<Vec<NoiseDominance>> {
    let pairs: Vec<(f64, f64)> = levels
        .iter()
        .flat_map(|&eta| levels.iter().map(move |&zeta| (eta, zeta)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(eta, zeta)| noise_dominance(eta, zeta, grid))
        .collect()
}

impl<R: Serialize> Sweep<R> {
    /// CSV with `#`-prefixed header lines holding the configuration and crossovers.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for line in self.config.describe() {
            writeln!(out, "# {line}")?;
        }
        for c in &self.crossovers {
            if self.config.kind == SweepKind::Theta {
                writeln!(
                    out,
                    "# crossover {} at theta = {:.4} (|pi/2 - theta| = {:.4})",
                    c.label,
                    c.at,
                    (PI / 2.0 - c.at).abs()
                )?;
            } else {
                writeln!(out, "# crossover {} at e = {:.4}", c.label, c.at)?;
            }
        }
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_endpoints_exact() {
        let g = Grid {
            start: 0.0,
            stop: PI,
            steps: 181,
        };
        let pts = g.points();
        assert_eq!(pts.len(), 181);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[180], PI);
        assert_abs_diff_eq!(pts[90], PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn bisect_finds_root() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-10);
        assert_abs_diff_eq!(r, 2f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn config_validation() {
        let mut c = SweepConfig::default_for(SweepKind::Theta);
        assert!(c.validate().is_ok());
        c.grid.steps = 1;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = SweepConfig::default_for(SweepKind::Damping);
        c.grid.stop = 1.5;
        assert!(c.validate().is_err());
        let mut c = SweepConfig::default_for(SweepKind::Theta);
        c.eta = 1.2;
        assert!(c.validate().is_err());
        assert!(sweep_damping(&SweepConfig::default_for(SweepKind::Theta)).is_err());
    }

    #[test]
    fn sharp_theta_endpoints() {
        let zero = theta_point(0.0, 1.0, 1.0).unwrap();
        for v in [zero.b1, zero.b2, zero.log_c, zero.d_wn] {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-9);
        }
        let mub = theta_point(PI / 2.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(mub.b1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mub.b2, 0.872_429_339_856_468, epsilon = 1e-9);
    }

    #[test]
    fn damping_rows() {
        let r = damping_point(0.0).unwrap();
        assert_abs_diff_eq!(r.log_c_numeric, 3f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.d_ad, 0.0, epsilon = 1e-12);
        let a = damping_point(0.3).unwrap();
        let b = damping_point(0.7).unwrap();
        assert_abs_diff_eq!(a.d_ad, b.d_ad, epsilon = 1e-12);
    }

    #[test]
    fn sharp_pair_is_never_dominated() {
        let grid = SweepConfig::default_for(SweepKind::Theta).grid;
        let sharp = noise_dominance(1.0, 1.0, &grid).unwrap();
        assert!(!sharp.everywhere());
        assert!(noise_dominance(0.5, 0.5, &grid).unwrap().everywhere());
    }

    #[test]
    fn csv_has_header_comments() {
        let mut c = SweepConfig::default_for(SweepKind::Damping);
        c.grid.steps = 11;
        let s = sweep_damping(&c).unwrap();
        let text = s.to_csv_string().unwrap();
        let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
        assert_eq!(lines.next(), Some("e,logC_numeric,logC_closed,D_AD"));
        assert_eq!(lines.count(), 11);
        assert!(text.contains("# crossover D_AD>logC at e = 0.56"));
    }
}
