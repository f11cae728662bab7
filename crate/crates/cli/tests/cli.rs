use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lyshift"))
}

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `(n, k, seminorm, rest...)` rows of an orbit CSV.
fn csv_rows(bytes: &[u8]) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(bytes);
    r.records().map(|rec| rec.unwrap().iter().map(str::to_owned).collect()).collect()
}

#[test]
fn analyze_exit_codes_of_bundled_specs() {
    let expected = [
        ("rapidly_decreasing_sz.json", 0),
        ("tent_lpnu.json", 0),
        ("doubling_l2.json", 0),
        ("composition_c0.json", 0),
        ("zero_weight_caseI.json", 0),
        ("unweighted_kn.json", 0),
        ("unweighted_c0.json", 2),
        ("unweighted_l2.json", 2),
        ("zero_weight_refuted.json", 2),
        ("caps_truncated.json", 3),
    ];
    for (name, want) in expected {
        let out = run(&["analyze", path_str(&spec(name))]);
        assert_eq!(code(&out), want, "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["schema_version"], 1);
        assert_eq!(report["command"], "analyze");
        if want == 0 && report.get("verdict").is_some() {
            assert_eq!(report["replay"], "passed", "{name}");
        }
    }
}

#[test]
fn rapidly_decreasing_report_has_obstruction_and_echoes_spec() {
    let out = run(&["analyze", path_str(&spec("rapidly_decreasing_sz.json"))]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(spec("rapidly_decreasing_sz.json")).unwrap()).unwrap();
    assert_eq!(report["spec"], raw);
    assert_eq!(report["verdict"]["status"], "chaotic_certified");
    assert_eq!(report["hypercyclicity"]["verdict"], "obstructed");
}

#[test]
fn horizon_override_truncates_the_search() {
    let out = run(&["analyze", path_str(&spec("rapidly_decreasing_sz.json")), "--horizon", "32"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn unweighted_witness_is_exhausted() {
    let out = run(&["witness", path_str(&spec("unweighted_l2.json"))]);
    assert_eq!(code(&out), 3);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["kind"], "exhausted");
}

#[test]
fn malformed_specs_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad_version = dir.path().join("v2.json");
    let text = std::fs::read_to_string(spec("unweighted_c0.json")).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 2");
    std::fs::write(&bad_version, text).unwrap();
    let mismatch = dir.path().join("mismatch.json");
    let text = std::fs::read_to_string(spec("unweighted_c0.json")).unwrap().replacen("\"unilateral\"", "\"bilateral\"", 1);
    std::fs::write(&mismatch, text).unwrap();
    for p in [bad_version, mismatch, dir.path().join("missing.json")] {
        let out = run(&["analyze", path_str(&p)]);
        assert_eq!(code(&out), 1, "{}", p.display());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn doubling_orbit_of_e3() {
    // B e_3 = 2 e_2, B^2 e_3 = 4 e_1, then the vector leaves the index set
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("e3.json");
    std::fs::write(&v, r#"{"domain": "unilateral", "entries": {"3": "1"}}"#).unwrap();
    let csv_path = dir.path().join("orbit.csv");
    let out = run(&["orbit", path_str(&spec("doubling_l2.json")), path_str(&v), "--steps", "5", "--out", path_str(&csv_path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(&csv_path).unwrap();
    assert!(bytes.starts_with(b"n,k,seminorm,boundary_flag\n"));
    let values: Vec<f64> = csv_rows(&bytes).iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(values, [2.0, 4.0, 0.0, 0.0, 0.0]);
}

#[test]
fn tent_witness_orbit_stays_above_one() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("witness.json");
    let out = run(&["witness", path_str(&spec("tent_lpnu.json")), "--out", path_str(&w)]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&std::fs::read(&w).unwrap()).unwrap();
    assert_eq!(report["evidence"]["bounded_below_by_one"], true);
    let out = run(&["orbit", path_str(&spec("tent_lpnu.json")), path_str(&w), "--steps", "12"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 12);
    for r in rows {
        let v: f64 = r[2].parse().unwrap();
        assert!(v >= 1.0 - 1e-12, "step {}: {v}", r[0]);
    }
}

#[test]
fn pair_distance_matches_orbit() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("witness.json");
    let out = run(&["witness", path_str(&spec("rapidly_decreasing_sz.json")), "--out", path_str(&w)]);
    assert_eq!(code(&out), 0);
    let sz = spec("rapidly_decreasing_sz.json");
    for extra in [&[][..], &["--float"][..]] {
        let mut args = vec!["orbit", path_str(&sz), path_str(&w), "--steps", "40", "--k", "1,2"];
        args.extend_from_slice(extra);
        let plain = run(&args);
        args.extend_from_slice(&["--pair", "2,1"]);
        let paired = run(&args);
        assert_eq!(code(&paired), 0, "{}", String::from_utf8_lossy(&paired.stderr));
        let a = csv_rows(&plain.stdout);
        let b = csv_rows(&paired.stdout);
        assert_eq!(a.len(), 80);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x[..], y[..4]);
            assert_eq!(y[4], y[2], "distance of (2x, x) is the orbit norm of x");
        }
        args.pop();
        args.push("3,1");
        let tripled = csv_rows(&run(&args).stdout);
        for (x, y) in a.iter().zip(&tripled) {
            let (v, d): (f64, f64) = (x[2].parse().unwrap(), y[4].parse().unwrap());
            assert!((d - 2.0 * v).abs() <= 1e-12 * v.abs(), "{d} vs 2 * {v}");
        }
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["rapidly_decreasing_sz.json", "zero_weight_caseI.json", "composition_c0.json", "unweighted_kn.json"] {
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        let cmds: &[(&str, &str)] = if name == "unweighted_kn.json" { &[("analyze", "1")] } else { &[("analyze", "1"), ("witness", "2")] };
        for &(cmd, threads) in cmds {
            for (p, t) in [(&a, threads), (&b, "3")] {
                let out = bin().env("LYSHIFT_THREADS", t).args([cmd, path_str(&spec(name)), "--out", path_str(p)]).output().unwrap();
                assert_ne!(code(&out), 1, "{cmd} {name}: {}", String::from_utf8_lossy(&out.stderr));
            }
            assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{cmd} {name}");
        }
    }
}
