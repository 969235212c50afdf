use std::collections::HashSet;
use std::io::Write as _;

use serde_json::Value;
use w3_cli::{run, REGISTRY};

fn w3(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("w3").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn registry_has_one_check_per_criterion() {
    let criteria: Vec<u8> = REGISTRY.iter().map(|d| d.criterion).collect();
    assert_eq!(criteria, (1..=11).collect::<Vec<u8>>());
    let names: HashSet<&str> = REGISTRY.iter().map(|d| d.name).collect();
    assert_eq!(names.len(), 11);
    // name order is criterion order, so the sorted report reads 1..11
    assert!(REGISTRY.windows(2).all(|w| w[0].name < w[1].name));
}

#[test]
fn verify_singular_level_two() {
    let (code, out, _) = w3(&["verify-singular", "--level", "2", "--chi", "gamma"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["residual_zero"], true);
    assert_eq!(v["residual"], "0");
    assert_eq!(v["checks"][0]["status"], "pass");
    assert!(!v["coefficients"].as_array().unwrap().is_empty());
    let (code, out, _) = w3(&[
        "verify-singular",
        "--level",
        "3",
        "--chi",
        "2/gamma",
        "--format",
        "text",
    ]);
    assert_eq!(code, 0);
    assert!(
        out.starts_with("PASS null_form_level_3: residual 0"),
        "{out}"
    );
}

#[test]
fn verify_singular_level_one() {
    let (code, out, _) = w3(&["verify-singular", "--level", "1", "--index", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["residual"], "0");
    let (code, _, _) = w3(&["verify-singular", "--level", "1", "--kappa", "1/3"]);
    assert_eq!(code, 0);
    let (code, _, err) = w3(&["verify-singular", "--level", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("--chi"), "{err}");
}

#[test]
fn gamma_integrals_three_pass_lines() {
    let (code, out, _) = w3(&["gamma-integrals", "--gamma", "0.5", "--format", "text"]);
    assert_eq!(code, 0);
    let pass_lines = out
        .lines()
        .filter(|l| l.starts_with("PASS") && l.contains("@gamma=0.5"))
        .count();
    assert_eq!(pass_lines, 3, "{out}");
    let (code, _, _) = w3(&["gamma-integrals", "--gamma", "1.5"]);
    assert_eq!(code, 2);
}

#[test]
fn suite_skip_marks_checks_skipped() {
    let (code, out, _) = w3(&[
        "suite",
        "--skip",
        "gmc",
        "--skip",
        "ward,singular,freefield,hyp",
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    assert!(checks.iter().all(|c| c["status"] == "skipped"));
    let (code, out, _) = w3(&["suite", "--skip", "gmc", "--format", "text"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("SKIP c10_gmc"));
    assert_eq!(
        out.lines().filter(|l| l.starts_with("PASS c")).count(),
        10,
        "{out}"
    );
    let (code, _, err) = w3(&["suite", "--skip", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown --skip"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = w3(&["suite", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    assert_eq!(w3(&["frobnicate"]).0, 2);
    assert_eq!(w3(&["ward"]).0, 2);
    assert_eq!(w3(&["hyp", "--spec", "/nonexistent/spec.json"]).0, 2);
}

#[test]
fn malformed_config_reports_pointer() {
    let f = temp_json(r#"{"gamma": 0.5, "bulk": [{"z": [0, "x"], "alpha": [1, 0]}]}"#);
    let (code, _, err) = w3(&["ward", "--config", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("/bulk/0/z"), "{err}");
    let f = temp_json(r#"{"gamma": 0.5, "boundary": [{"s": 0, "beta": [1, 0]}], "extra": 1}"#);
    let (code, _, err) = w3(&["gmc", "--config", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("schema error"), "{err}");
}

const NEUTRAL: &str = r#"{"gamma":"3/5","bulk":[{"z":["0","1/2"],"alpha":["59/30","59/30"]}],
 "boundary":[{"s":"-1/2","beta":["59/30","59/30"]},{"s":"1/2","beta":["59/30","59/30"]}]}"#;

fn strip_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_s");
    v
}

#[test]
fn reports_are_deterministic() {
    let f = temp_json(NEUTRAL);
    let p = f.path().to_str().unwrap();
    let args = [
        "gmc",
        "--config",
        p,
        "--replicas",
        "200",
        "--seed",
        "7",
        "--rho",
        "0.05",
    ];
    let (c1, a, _) = w3(&args);
    let (c2, b, _) = w3(&args);
    assert_eq!((c1, c2), (0, 0));
    let (a, b) = (json(&a), json(&b));
    assert_eq!(
        serde_json::to_string(&strip_time(a.clone())).unwrap(),
        serde_json::to_string(&strip_time(b)).unwrap()
    );
    assert!(a["estimate"].as_f64().unwrap() > 0.0);
    assert!(a["stderr"].is_number());
    assert!(a["diagnostics"]["closed_form"].is_number());
    let (_, c, _) = w3(&[
        "gmc",
        "--config",
        p,
        "--replicas",
        "200",
        "--seed",
        "8",
        "--rho",
        "0.05",
    ]);
    let c = json(&c);
    assert_ne!(a["estimate"], c["estimate"]);
    assert_ne!(a["config_hash"], c["config_hash"]);
}

#[test]
fn ward_emits_matrix_and_checks_free_field_rows() {
    let f = temp_json(NEUTRAL);
    let (code, out, _) = w3(&["ward", "--config", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["system"]["rows"].as_array().unwrap().len(), 8);
    assert_eq!(v["checks"][0]["name"], "free_field_rows");
    assert_eq!(v["checks"][0]["status"], "pass");
}

#[test]
fn bpz_then_hyp_csv() {
    let w = temp_json(
        r#"{"alpha": ["1/2", {"num": [0, 1], "den": [1]}], "beta_star": ["1/3", "2/3"]}"#,
    );
    let (code, out, _) = w3(&[
        "bpz",
        "--family",
        "bulk_boundary",
        "--weights",
        w.path().to_str().unwrap(),
        "--chi",
        "gamma",
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["checks"][0]["status"], "pass");
    let spec = temp_json(&out);
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("f.csv");
    let (code, _, err) = w3(&[
        "hyp",
        "--spec",
        spec.path().to_str().unwrap(),
        "--gamma",
        "0.5",
        "--grid",
        "0.05:0.5:0.05",
        "--out",
        csv_path.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "u,f_0,f_1mB1,f_1mB2,residual");
    assert_eq!(lines.len(), 11);
    assert!(err.contains("PASS operator_residual"), "{err}");
    let (code, _, _) = w3(&["hyp", "--spec", spec.path().to_str().unwrap()]);
    assert_eq!(code, 2, "symbolic spec without --gamma");
}

#[test]
fn numeric_hyp_spec_to_stdout() {
    let spec = temp_json(r#"{"a": [-1.0, 0.4, 1.7], "b": [0.5, 1.3]}"#);
    let (code, out, _) = w3(&[
        "hyp",
        "--spec",
        spec.path().to_str().unwrap(),
        "--grid",
        "0.1:0.3:0.1",
    ]);
    assert_eq!(code, 0);
    let row: Vec<f64> = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    let c1 = -0.4 * 1.7 / (0.5 * 1.3);
    assert!((row[1] - (1.0 + 0.1 * c1)).abs() < 1e-14);
}

#[test]
fn forms_and_eom() {
    let (code, out, _) = w3(&["forms", "--lambda", "1,2", "--alpha", "[\"1/2\", 1]"]);
    assert_eq!(code, 0);
    assert!(!json(&out)["form"].as_array().unwrap().is_empty());
    let (code, _, _) = w3(&["forms", "--w", "3", "--alpha", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(w3(&["forms", "--lambda", "7,7,7", "--alpha", "1,2"]).0, 2);
    let cfg = temp_json(
        r#"{"gamma": 0.5, "boundary": [{"s": 0, "beta": [{"num":["-2/3"],"den":["1"]}, {"num":["-1/3"],"den":["1"]}],
        "tag": {"kind": "semi_degenerate", "index": 1, "kappa": "-1"}}, {"s": 1, "beta": [1, 1]}],
        "mu_boundary": [[1, 2], [1, 1]]}"#,
    );
    let (code, out, err) = w3(&[
        "eom",
        "--level",
        "1",
        "--config",
        cfg.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    assert_eq!(v["insertion"], 0);
    assert_eq!(v["rhs"]["null"], false);
    assert_eq!(
        w3(&[
            "eom",
            "--level",
            "2",
            "--config",
            cfg.path().to_str().unwrap()
        ])
        .0,
        2
    );
}

#[test]
fn fusion_ladder_csv() {
    let cfg = temp_json(
        r#"{"gamma":0.6,"bulk":[{"z":[0,1],"alpha":[1.17,1.17]},{"z":[0.3,1],"alpha":[1.17,1.17]}],
          "boundary":[{"s":-1.5,"beta":[1.96,1.96]},{"s":1.5,"beta":[1.96,1.96]}], "mu_bulk":[1,1]}"#,
    );
    let (code, out, err) = w3(&[
        "gmc",
        "--config",
        cfg.path().to_str().unwrap(),
        "--ladder",
        "0.1,0.2,0.4",
        "--pair",
        "bulk:1:0",
        "--rho",
        "0.01",
        "--replicas",
        "50",
        "--spacing",
        "0.2",
    ]);
    assert!(code == 0 || code == 1, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "distance,estimate,stderr,log_distance,log_estimate"
    );
    assert_eq!(lines.len(), 4);
    assert!(err.contains("fusion_bound"), "{err}");
}

#[test]
fn thread_cap_from_environment() {
    let bin = env!("CARGO_BIN_EXE_w3");
    let f = temp_json(NEUTRAL);
    let args = [
        "gmc",
        "--config",
        f.path().to_str().unwrap(),
        "--replicas",
        "100",
        "--rho",
        "0.05",
    ];
    let run = |threads: &str| {
        let o = std::process::Command::new(bin)
            .args(args)
            .env("W3_THREADS", threads)
            .output()
            .unwrap();
        (
            o.status.code().unwrap(),
            String::from_utf8(o.stdout).unwrap(),
        )
    };
    let (c1, one) = run("1");
    let (c4, four) = run("4");
    assert_eq!((c1, c4), (0, 0));
    assert_eq!(strip_time(json(&one)), strip_time(json(&four)));
    assert_eq!(run("zero").0, 2);
}
