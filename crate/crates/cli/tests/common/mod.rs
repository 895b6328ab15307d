//! Shared helpers for the binary-level tests.
//!
//! Set `GAUSSFID_BLESS=1` to rewrite the golden files after an intended change.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const TOLERANCE_VARS: [&str; 5] = [
    "GAUSSFID_TOLERANCE_SYMP",
    "GAUSSFID_TOLERANCE_RECON",
    "GAUSSFID_TOLERANCE_HEIS",
    "GAUSSFID_TOLERANCE_PURE",
    "GAUSSFID_TOLERANCE_SYMMETRY",
];

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn gaussfid(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gaussfid"));
    cmd.current_dir(tests_dir().join("fixtures")).args(args);
    for var in TOLERANCE_VARS {
        cmd.env_remove(var);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Every subcommand on the vacuum, thermal and coherent fixtures.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("validate_vacuum", &["validate", "vacuum.state"]),
    ("williamson_thermal1", &["williamson", "thermal1.state"]),
    ("purity_thermal1", &["purity", "thermal1.state"]),
    ("overlap_thermal1_vacuum", &["overlap", "thermal1.state", "vacuum.state", "--s", "0.25"]),
    ("bhattacharyya_thermal1_coherent", &["bhattacharyya", "thermal1.state", "coherent.state"]),
    ("chernoff_thermal1_vacuum", &["chernoff", "thermal1.state", "vacuum.state"]),
    ("chernoff_vacuum_thermal1", &["chernoff", "vacuum.state", "thermal1.state"]),
    ("fidelity_thermal1_vacuum", &["fidelity", "thermal1.state", "vacuum.state"]),
    ("fidelity_coherent_vacuum", &["fidelity", "coherent.state", "vacuum.state"]),
    ("limit_sweep_thermal1_vacuum", &["limit-sweep", "thermal1.state", "vacuum.state", "--ks", "1..6"]),
    ("bounds_thermal1_vacuum", &["bounds", "thermal1.state", "vacuum.state"]),
    ("bounds_coherent_vacuum", &["bounds", "coherent.state", "vacuum.state"]),
];

/// `--verify` runs, kept out of the golden files because the oracle's last
/// digits depend on the SIMD kernels available at run time.
pub const VERIFY: &[&[&str]] = &[
    &["purity", "thermal1.state"],
    &["overlap", "thermal1.state", "vacuum.state", "--s", "0.25"],
    &["bhattacharyya", "thermal1.state", "coherent.state"],
    &["chernoff", "thermal1.state", "vacuum.state"],
    &["fidelity", "coherent.state", "vacuum.state"],
    &["limit-sweep", "thermal1.state", "vacuum.state", "--ks", "1..6"],
    &["bounds", "thermal1.state", "coherent.state"],
    &["fidelity", "product2.json", "vacuum2.state"],
];

/// Every comparison row in a json report's verify section agrees.
pub fn verify_agrees(json: &[u8]) -> Result<(), String> {
    let report: serde_json::Value = serde_json::from_slice(json).map_err(|e| e.to_string())?;
    let rows = report["verify"]["comparisons"]
        .as_array()
        .ok_or("report has no verify comparisons")?;
    match rows.iter().find(|r| r["agrees"] != true) {
        Some(row) => Err(format!("oracle disagrees: {row}")),
        None => Ok(()),
    }
}

/// Compare against `tests/golden/<name>`, or rewrite it in bless mode.
pub fn golden_matches(name: &str, actual: &str) -> Result<(), String> {
    let path = tests_dir().join("golden").join(name);
    if std::env::var_os("GAUSSFID_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    match std::fs::read_to_string(&path) {
        Ok(expected) if expected == actual => Ok(()),
        Ok(_) => Err(format!("output differs from {}", path.display())),
        Err(e) => Err(format!("missing golden file {}: {e}", path.display())),
    }
}

pub fn check_golden(name: &str, actual: &str) {
    if let Err(e) = golden_matches(name, actual) {
        panic!("{e}");
    }
}

pub const EXIT_CASES: &[(&[&str], i32)] = &[
    (&["validate", "vacuum.state"], 0),
    (&["validate", "asymmetric.state"], 0),
    (&["fidelity", "product2.json", "vacuum2.state", "--verify"], 0),
    (&["validate", "unphysical.state"], 1),
    (&["purity", "unphysical.state"], 1),
    (&["purity", "malformed.state"], 1),
    (&["fidelity", "thermal1.state", "thermal1.state"], 1),
    (&["limit-sweep", "vacuum.state", "thermal1.state"], 1),
    (&["fidelity", "vacuum.state", "vacuum2.state"], 1),
    (&[], 2),
    (&["frobnicate"], 2),
    (&["overlap", "thermal1.state", "vacuum.state"], 2),
    (&["overlap", "thermal1.state", "vacuum.state", "--s", "1.5"], 2),
    (&["limit-sweep", "thermal1.state", "vacuum.state", "--ks", "6..1"], 2),
    (&["fidelity", "missing.state", "vacuum.state"], 2),
    (&["validate", "vacuum.state", "--verify"], 2),
    (&["purity", "tmsv.state", "--verify"], 2),
    (&["purity", "vacuum3.state", "--verify"], 2),
    (&["purity", "vacuum.state", "--tol-pure=-1"], 2),
    (&["fidelity", "squeezed7.state", "squeezed7.state"], 3),
    (&["purity", "hot.state", "--verify", "--max-cutoff", "16"], 3),
];
