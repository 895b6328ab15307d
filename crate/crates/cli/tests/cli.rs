//! Golden-file, determinism and exit-code tests for the `gaussfid` binary.

mod common;

use gaussfid::sampling::{random_state, rng};
use gaussfid::Tolerances;
use gaussfid_cli::{parse_state, read_state_file, StateFile};
use proptest::prelude::*;

use common::{check_golden, gaussfid, stdout, tests_dir, verify_agrees, EXIT_CASES, GOLDEN, VERIFY};

#[test]
fn golden_outputs() {
    for (name, args) in GOLDEN {
        for (format, ext) in [("human", "txt"), ("json", "json")] {
            let out = gaussfid(&[*args, &["--format", format]].concat(), &[]);
            assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
            check_golden(&format!("{name}.{ext}"), &stdout(&out));
        }
    }
}

#[test]
fn json_is_byte_identical_across_runs() {
    for (name, args) in GOLDEN {
        let args = [*args, &["--format", "json"]].concat();
        let first = gaussfid(&args, &[]);
        let second = gaussfid(&args, &[]);
        assert_eq!(first.stdout, second.stdout, "{name}");
        let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(parsed["schema"], "gaussfid-report/1");
    }
}

#[test]
fn verify_sections_agree_and_repeat() {
    for args in VERIFY {
        let args = [*args, &["--verify", "--format", "json"]].concat();
        let first = gaussfid(&args, &[]);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        verify_agrees(&first.stdout).unwrap();
        assert_eq!(first.stdout, gaussfid(&args, &[]).stdout, "{args:?}");
    }
}

#[test]
fn documented_values() {
    let json = |args: &[&str]| -> serde_json::Value {
        serde_json::from_slice(&gaussfid(&[args, &["--format", "json"]].concat(), &[]).stdout).unwrap()
    };
    let f = json(&["fidelity", "thermal1.state", "vacuum.state"]);
    assert!((f["result"]["fidelity"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    let f = json(&["fidelity", "coherent.state", "vacuum.state"]);
    assert!((f["result"]["fidelity"].as_f64().unwrap() - (-1.0f64).exp()).abs() <= 1e-12);
    let sweep = json(&["limit-sweep", "thermal1.state", "vacuum.state", "--ks", "1..6"]);
    let points = sweep["result"]["points"].as_array().unwrap();
    for p in points {
        let s = p["s"].as_f64().unwrap();
        assert!((p["overlap"].as_f64().unwrap() - 2f64.powf(-s)).abs() <= 1e-12);
    }
    assert_eq!(sweep["result"]["deviations_decreasing"], true);
    let bounds = json(&["bounds", "thermal1.state", "vacuum.state", "--verify"]);
    assert_eq!(bounds["result"]["chain_holds"], true);
    assert_eq!(bounds["result"]["fuchs_van_de_graaf"]["holds"], true);
}

#[test]
fn exit_code_matrix() {
    for (args, code) in EXIT_CASES {
        let out = gaussfid(args, &[]);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        if *code != 0 {
            assert!(!out.stderr.is_empty(), "{args:?} printed no diagnostic");
        }
    }
}

#[test]
fn diagnostics_name_the_failure() {
    let err = |args: &[&str]| String::from_utf8(gaussfid(args, &[]).stderr).unwrap();
    assert!(err(&["purity", "unphysical.state"]).contains("symplectic eigenvalue 0.5"));
    assert!(err(&["purity", "malformed.state"]).contains("malformed.state:2"));
    assert!(err(&["fidelity", "thermal1.state", "thermal1.state"]).contains("pure state"));

    let out = gaussfid(&["fidelity", "thermal1.state", "thermal1.state", "--format", "json"], &[]);
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["error"]["code"], 1);
    assert_eq!(parsed["error"]["kind"], "validation");
}

#[test]
fn tolerance_precedence_is_flag_then_env_then_default() {
    let pure = |args: &[&str], env: &[(&str, &str)]| -> bool {
        let out = gaussfid(&[&["purity", "near_pure.state", "--format", "json"], args].concat(), env);
        let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        parsed["result"]["pure"].as_bool().unwrap()
    };
    let loose = [("GAUSSFID_TOLERANCE_PURE", "1e-6")];
    assert!(!pure(&[], &[]));
    assert!(pure(&[], &loose));
    assert!(!pure(&["--tol-pure", "1e-9"], &loose));
    assert!(pure(&["--tol-pure", "1e-6"], &[]));
}

#[test]
fn asymmetry_below_the_repair_threshold_is_symmetrized() {
    let state = parse_state(&tests_dir().join("fixtures/asymmetric.state"), Tolerances::default()).unwrap();
    let v = state.cov().matrix();
    assert_eq!(v[(0, 1)], v[(1, 0)]);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn state_files_round_trip_exactly(seed in any::<u64>(), n in 1usize..=3, pure in any::<bool>(), json in any::<bool>()) {
        let state = random_state(&mut rng(seed), n, pure).unwrap();
        let file = StateFile::from_state(&state, Some("sample"));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(if json { "s.json" } else { "s.state" });
        std::fs::write(&path, if json { file.to_json() } else { file.to_text() }).unwrap();
        let back = read_state_file(&path).unwrap();
        prop_assert_eq!(&back, &file);
        let reparsed = parse_state(&path, Tolerances::default()).unwrap();
        prop_assert_eq!(reparsed.mean(), state.mean());
        prop_assert_eq!(reparsed.cov().matrix(), state.cov().matrix());
    }
}
