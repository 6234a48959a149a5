use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn padicq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padicq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn profile(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("profile.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn exact_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let prof = profile(&dir, r#"{"p": 2, "M_log": "1/8", "ells": ["0", "1/8"]}"#);
    let cert = dir.path().join("cert.json");
    let o = padicq(&[
        "verify", "main-inequality", "--mode", "exact", "-p", "2", "-N", "6", "--vh", "1/16",
        "--Mlog", "1/8", "--profile", &prof, "-o", cert.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let c: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["schema"], "padicq.certificate/1");
    assert_eq!(c["growth"], "1/16");
    assert_eq!(c["records"][2]["valuation"], "3/32");
    assert_eq!(c["records"][3]["bound"], "0");
    let o = padicq(&["verify-certificate", cert.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json_out(&o)["valid"], true);

    // a doctored bound is caught
    let text = fs::read_to_string(&cert).unwrap().replacen("\"1/32\"", "\"1/4\"", 1);
    fs::write(&cert, text).unwrap();
    let o = padicq(&["verify-certificate", cert.to_str().unwrap()]);
    assert!(!o.status.success());
    assert_eq!(json_out(&o)["valid"], false);
}

#[test]
fn failing_certificate_exits_nonzero() {
    let o = padicq(&[
        "verify", "main-inequality", "--mode", "exact", "-p", "2", "-N", "6", "--vh", "1/64",
        "--Mlog", "1/8",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zeta"));
}

#[test]
fn beta_formula_report() {
    let o = padicq(&["verify", "beta-formula", "-p", "3", "-N", "3"]);
    assert!(o.status.success());
    let r = json_out(&o);
    assert_eq!(r["schema"], "padicq.report/1");
    assert_eq!(r["total"], 26);
    assert_eq!(r["cases"].as_array().unwrap().len(), 26);
    assert_eq!(r["all_pass"], true);
}

#[test]
fn norms_commands() {
    let dir = tempfile::tempdir().unwrap();
    let prof = profile(&dir, r#"{"p": 2, "M_log": "1/8", "ells": ["0", "1/8"]}"#);
    let o = padicq(&["norms", "growth", "--profile", &prof, "--log-r", "-1/16"]);
    assert!(o.status.success());
    let g = json_out(&o);
    assert_eq!(g["growth"], "1/16");
    assert_eq!(g["classification"]["verdict"], "regular");
    assert_eq!(g["classification"]["n"], 1);
    let o = padicq(&["norms", "critical", "--profile", &prof]);
    assert_eq!(json_out(&o)["critical_log_r"], serde_json::json!(["-1/8"]));
}

#[test]
fn qexpand_of_zeta_power() {
    let o = padicq(&[
        "mahler", "qexpand", "--p", "2", "--N", "3", "--q", "zeta+pi^2", "--f", "zeta^x", "-K",
        "100", "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json_out(&o);
    let coeffs = s["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 101);
    // ⟨ζ,q⟩_1 = ζ - 1
    assert_eq!(coeffs[1]["valuation"], "1/4");
    assert_eq!(coeffs[2]["valuation"], "3/4");
}

#[test]
fn fourier_and_heisenberg() {
    let o = padicq(&["fourier", "--p", "2", "--demo", "phi-n", "--n-max", "6"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("n = 6: |F(phi_n)|_sup = 2^-6"));
    let o = padicq(&[
        "heisenberg", "check-intertwine", "--g", "0,1;-1,0", "--trials", "50", "--seed", "7",
    ]);
    assert!(o.status.success());
    assert_eq!(json_out(&o)["all_pass"], true);
    let o = padicq(&["heisenberg", "check-intertwine", "--g", "1,1;1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn qcalc_tables() {
    let o = padicq(&["qcalc", "beta", "-p", "2", "-n", "8", "--check-bound"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n\tbeta\tbound\tslack\tverdict");
    // β_2(8) = 4 + 2·2 + 4·1 + 8·1
    assert!(lines[8].starts_with("8\t20\t"));
    assert!(lines[1..].iter().all(|l| l.ends_with("pass")));
    let o = padicq(&["qcalc", "poch-val", "-p", "3", "-N", "3", "--verify-exact"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().filter(|l| l.ends_with("\tpass")).count(), 26);
}

#[test]
fn element_eval() {
    let o = padicq(&["element", "eval", "-p", "3", "-N", "1", "-P", "8", "1 - zeta", "--resultant"]);
    assert!(o.status.success());
    let e = json_out(&o);
    assert_eq!(e["valuation"], "1/2");
    assert_eq!(e["valuation_by_resultant"], "1/2");
    assert_eq!(e["P"], 8);
}

#[test]
fn campaigns_from_cli() {
    let o = padicq(&["campaign", "list"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("qmahler-closed-form"));
    let o = padicq(&["campaign", "norm-growth"]);
    assert!(o.status.success());
    let r = json_out(&o);
    assert_eq!(r["total"], 7);
    assert_eq!(r["cases"][3]["values"]["value_at_zero"], "2^-3");
    let o = padicq(&["campaign", "fourier-suite", "--trials", "10", "--seed", "7"]);
    let again = padicq(&["campaign", "fourier-suite", "--trials", "10", "--seed", "7"]);
    assert!(o.status.success());
    assert_eq!(o.stdout, again.stdout);
    let o = padicq(&["campaign", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}
