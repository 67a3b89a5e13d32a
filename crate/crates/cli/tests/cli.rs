use std::process::{Command, Output};

use mixed3::verifier::RunOutput;
use serde_json::Value;

fn mixed3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixed3")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn examples_list_json_sorted() {
    let o = mixed3(&["examples", "list", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let flat = v.as_array().unwrap().iter().find(|e| e["id"] == "flat-torus-n2").unwrap();
    assert_eq!(flat["expected"]["minimal"], true);
    assert_eq!(flat["expected"]["flat"], true);
}

#[test]
fn examples_list_text_has_anchor() {
    let text = stdout(&mixed3(&["examples", "list"]));
    assert!(text.contains("clifford-torus"));
    assert!(text.contains("Clifford torus"));
}

#[test]
fn verify_json_round_trips_and_matches_text() {
    let o = mixed3(&["verify", "--check", "C05", "C01", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let raw = stdout(&o);
    let run: RunOutput = serde_json::from_str(&raw).unwrap();
    assert_eq!(run.reports.iter().map(|r| r.check_id.as_str()).collect::<Vec<_>>(), ["C01", "C05"]);
    let again = serde_json::to_string_pretty(&run).unwrap();
    assert_eq!(again.trim_end(), raw.trim_end());

    let text = stdout(&mixed3(&["verify", "--check", "C05", "C01"]));
    for r in &run.reports {
        assert!(text.contains(&format!("{:.5e}", r.max_residual)), "{text}");
    }
}

#[test]
fn verify_n2_reports_lambda_10() {
    let o = mixed3(&["verify", "--check", "C05", "--n", "2", "--format", "json"]);
    let run: RunOutput = serde_json::from_str(&stdout(&o)).unwrap();
    let lambda = run.reports[0].metrics.iter().find(|m| m.name == "lambda").unwrap().value;
    assert!((lambda.abs() - 10.0).abs() < 5e-4);
}

#[test]
fn strict_c03_still_passes() {
    let o = mixed3(&["verify", "--check", "C03", "--strict", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let run: RunOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(run.config.strict);
    assert_eq!(run.reports[0].tolerance, 5e-7);
}

#[test]
fn failing_check_exits_1() {
    // a tolerance far below the finite-difference error must fail C03
    let o = mixed3(&["verify", "--check", "C03", "--tol-alg", "1e-20", "--tol-d1", "1e-20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mixed3(&["verify"]).status.code(), Some(2));
    assert_eq!(mixed3(&["verify", "--check", "C99"]).status.code(), Some(2));
    assert_eq!(mixed3(&["dump", "no-such-thing"]).status.code(), Some(2));
    assert_eq!(mixed3(&["verify", "--all", "--fd-step1", "0"]).status.code(), Some(2));
}

#[test]
fn dump_off_manifold_exits_2() {
    let o = mixed3(&["dump", "s7-pos", "--point", "1,1,0,0,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("off the manifold"));
}

#[test]
fn dump_s7_lists_xi_and_eps() {
    let o = mixed3(&["dump", "s7-pos", "--point", "e5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["eps"], serde_json::json!([-1.0, -1.0, 1.0]));
    // ξ1 = e3, ξ2 = −e4, ξ3 = −e6
    let xi = |a: usize, k: usize| v["xi"][a]["xi"][k].as_f64().unwrap();
    assert_eq!((xi(0, 2), xi(1, 3), xi(2, 5)), (1.0, -1.0, -1.0));
}

#[test]
fn dump_clifford_xi3_decomposition() {
    let o = mixed3(&["dump", "clifford-torus", "--point", "0,0", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c = &v["xi_decomposition"][2]["tangential_coeffs"];
    assert!((c[0].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert!((c[1].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert_eq!(v["classification"]["kind"], "AntiInvariant");
    let text = stdout(&mixed3(&["dump", "clifford-torus", "--point", "0,0"]));
    assert!(text.contains("induced_metric:"));
}

#[test]
fn config_file_precedence() {
    let path = std::env::temp_dir().join(format!("mixed3-cli-{}.cfg", std::process::id()));
    std::fs::write(&path, "seed = 5\npoints = 2\nformat = json\n").unwrap();
    let p = path.to_str().unwrap();
    let o = mixed3(&["verify", "--check", "C01", "--config", p, "--seed", "11"]);
    let run: RunOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(run.config.seed, 11);
    assert_eq!(run.config.points, 2);
    std::fs::remove_file(path).ok();
}

#[test]
fn sequential_flag_matches_parallel() {
    let par: RunOutput = serde_json::from_str(&stdout(&mixed3(&["verify", "--all", "--format", "json"]))).unwrap();
    let seq: RunOutput =
        serde_json::from_str(&stdout(&mixed3(&["verify", "--all", "--format", "json", "--sequential"]))).unwrap();
    assert!(!seq.config.parallel);
    for (a, b) in par.reports.iter().zip(&seq.reports) {
        assert_eq!(a.metrics, b.metrics, "{}", a.check_id);
    }
}
