//! End-to-end runs of the `unsharp` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const PVM: &str = r#"{"dim": 2, "effects": [
    [[[1,0],[0,0]],[[0,0],[0,0]]],
    [[[0,0],[0,0]],[[0,0],[1,0]]]
]}"#;

const WHITE_NOISE: &str = r#"{"dim": 2, "effects": [
    [[[0.75,0],[0,0]],[[0,0],[0.25,0]]],
    [[[0.25,0],[0,0]],[[0,0],[0.75,0]]]
]}"#;

const PLUS_MINUS: &str = r#"{"dim": 2, "effects": [
    [[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]],
    [[[0.5,0],[-0.5,0]],[[-0.5,0],[0.5,0]]]
]}"#;

const DOUBLED: &str = r#"{"dim": 2, "effects": [
    [[[1,0],[0,0]],[[0,0],[1,0]]],
    [[[1,0],[0,0]],[[0,0],[1,0]]]
]}"#;

const SCALED_IDENTITY: &str = r#"{"dim": 2, "effects": [
    [[[0.3,0],[0,0]],[[0,0],[0.3,0]]],
    [[[0.7,0],[0,0]],[[0,0],[0.7,0]]]
]}"#;

const MIXED: &str = r#"{"dim": 2, "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#;
const TILTED: &str = r#"{"dim": 2, "vector": [[0.6,0],[0,0.8]]}"#;
const QUTRIT: &str = r#"{"dim": 3, "vector": [[1,0],[0,0],[0,0]]}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, contents).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn unsharp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unsharp"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn close(v: &Value, expected: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - expected).abs() <= tol
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn validate_accepts_projective_file() {
    let ws = Workspace::new();
    let out = unsharp(&["validate", s(&ws.file("pvm.json", PVM))]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("valid measurement"));
    assert!(text.contains("completeness residual"));
}

#[test]
fn validate_rejects_incomplete_effects() {
    let ws = Workspace::new();
    let out = unsharp(&["--json", "validate", s(&ws.file("bad.json", DOUBLED))]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    // the report comes first, then the machine-readable error
    let err_start = text.rfind("{\n  \"error\"").unwrap();
    let err: Value = serde_json::from_str(&text[err_start..]).unwrap();
    assert_eq!(err["error"]["kind"], "CompletenessViolated");
    assert_eq!(err["error"]["exit_code"], 1);
}

#[test]
fn malformed_json_is_a_parse_error() {
    let ws = Workspace::new();
    let out = unsharp(&["--json", "validate", s(&ws.file("mal.json", "{\"dim\": 2"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "ParseError");
    let missing = unsharp(&["validate", s(&ws.path("missing.json"))]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn analyze_white_noise_on_maximally_mixed_state() {
    let ws = Workspace::new();
    let out = unsharp(&[
        "analyze",
        s(&ws.file("wn.json", WHITE_NOISE)),
        "--state",
        s(&ws.file("mix.json", MIXED)),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert!(close(&r["H"], 1.0, 1e-12));
    assert!(close(&r["D"], 0.811_278_124_459_132_8, 1e-9));
    assert!(close(&r["Q"], 0.188_721_875_540_867_2, 1e-9));
    assert!(close(&r["minD"], 0.811_278_124_459_132_8, 1e-9));
}

#[test]
fn analyze_projective_and_scaled_identity() {
    let ws = Workspace::new();
    let state = ws.file("psi.json", TILTED);
    let r = stdout_json(&unsharp(&[
        "analyze",
        s(&ws.file("pvm.json", PVM)),
        "--state",
        s(&state),
    ]));
    assert!(close(&r["D"], 0.0, 1e-12));
    assert!(close(&r["Q"], r["H"].as_f64().unwrap(), 1e-12));
    let r = stdout_json(&unsharp(&[
        "analyze",
        s(&ws.file("id.json", SCALED_IDENTITY)),
        "--state",
        s(&state),
    ]));
    assert!(close(&r["Q"], 0.0, 1e-12));

    let csv = unsharp(&[
        "analyze",
        s(&ws.path("pvm.json")),
        "--state",
        s(&state),
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("H,D,Q,krishna,minD"));
}

#[test]
fn analyze_dimension_mismatch() {
    let ws = Workspace::new();
    let out = unsharp(&[
        "--json",
        "analyze",
        s(&ws.file("pvm.json", PVM)),
        "--state",
        s(&ws.file("q.json", QUTRIT)),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["kind"], "DimensionMismatch");
}

#[test]
fn bounds_report_for_unbiased_pair() {
    let ws = Workspace::new();
    let out = unsharp(&[
        "bounds",
        s(&ws.file("z.json", PVM)),
        s(&ws.file("x.json", PLUS_MINUS)),
        "--state",
        s(&ws.file("psi.json", TILTED)),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    let b = &r["bounds"];
    assert!(close(&b["coles_C"], 1.0, 1e-12));
    assert!(close(&b["mu"], 1.0, 1e-12));
    assert!(close(&b["B1"], 1.0, 1e-12));
    assert!(close(&b["HW"], 0.872_429_339_856_468, 1e-9));
    let sum = r["entropy_sum"].as_f64().unwrap();
    for (k, v) in b.as_object().unwrap() {
        let v = v.as_f64().unwrap();
        assert!(v.is_finite() && v <= sum + 1e-9, "{k} = {v} exceeds {sum}");
    }
}

#[test]
fn sweep_theta_sharp_crossover() {
    let ws = Workspace::new();
    let out_path = ws.path("theta.csv");
    let out = unsharp(&[
        "sweep-theta",
        "--eta",
        "1",
        "--zeta",
        "1",
        "--out",
        s(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&out_path).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "theta,B1,B2,logC,D_WN,HW,QW");
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 181);
    assert!(rows.iter().flatten().all(|v| v.is_finite()));
    assert!(rows[0][1..5].iter().all(|v| v.abs() < 1e-9));
    assert!((rows[90][1] - 1.0).abs() < 1e-12);
    assert!((rows[90][2] - 0.872_43).abs() < 1e-4);
    assert!(csv.contains("# eta = 1"));
    assert!(csv.contains("|pi/2 - theta| = 0.151"));
}

#[test]
fn sweep_damping_to_stdout() {
    let out = unsharp(&["sweep-damping"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("# crossover D_AD>logC at e = 0.564"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 101);
    assert!((rows[0][1] - 3f64.log2()).abs() < 1e-10);
    assert!(rows[0][3].abs() < 1e-12);
    for (lo, hi) in rows.iter().zip(rows.iter().rev()) {
        assert!((lo[3] - hi[3]).abs() < 1e-12);
    }
}

#[test]
fn sweeps_are_deterministic() {
    let a = unsharp(&[
        "sweep-theta",
        "--eta",
        "0.8",
        "--zeta",
        "0.6",
        "--steps",
        "37",
    ]);
    let b = unsharp(&[
        "sweep-theta",
        "--eta",
        "0.8",
        "--zeta",
        "0.6",
        "--steps",
        "37",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let ws = Workspace::new();
    let cfg = ws.file(
        "run.toml",
        "[sweep-theta]\neta = 0.7\nzeta = 0.9\nsteps = 21\n\n[verify]\nsuite = \"convex\"\ntrials = 5\n",
    );
    let out = unsharp(&["--config", s(&cfg), "sweep-theta", "--zeta", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("# eta = 0.7"));
    assert!(csv.contains("# zeta = 0.5"));
    assert!(csv.contains("# steps = 21"));
    assert_eq!(data_rows(&csv).len(), 21);

    let v = unsharp(&["--json", "--config", s(&cfg), "verify"]);
    assert_eq!(v.status.code(), Some(0));
    let summary = stdout_json(&v);
    assert_eq!(summary[0]["suite"], "convex");
    assert_eq!(summary[0]["trials"], 5);

    let bad = ws.file("bad.toml", "[sweep-theta]\netta = 1\n");
    assert_eq!(
        unsharp(&["--config", s(&bad), "sweep-damping"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_suites() {
    let out = unsharp(&[
        "verify", "--suite", "chain", "--trials", "20", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("chain         PASS"));
    assert_eq!(
        unsharp(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        unsharp(&["verify", "--suite", "chain", "--trials", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        unsharp(&["sweep-theta", "--steps", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        unsharp(&["sweep-theta", "--eta", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        unsharp(&["sweep-damping", "--stop", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(unsharp(&["no-such-command"]).status.code(), Some(2));
}
