use ila::cli::{run, Outcome};
use serde_json::Value;

fn netlist(name: &str) -> String {
    format!("{}/../../netlists/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ila(args: &[&str]) -> Outcome {
    run(std::iter::once("ila").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = ila(&full);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", out.stdout))
}

#[test]
fn emulate_reports_the_rc_matrices() {
    let rc = netlist("rc.net");
    let v = json(&["emulate", &rc]);
    assert_eq!(v["schema"], "ila-report/1");
    assert_eq!(v["status"], "ok");
    let r = &v["result"];
    assert_eq!(r["a"], serde_json::json!([["-2/3"]]));
    assert_eq!(r["b"], serde_json::json!([["2/3", "2/3"]]));
    assert_eq!(r["c"], serde_json::json!([["1"], ["-1"]]));
    assert_eq!(r["d"], serde_json::json!([["0", "-1"], ["0", "0"]]));
    assert!(r["dotcross"].as_array().unwrap().iter().all(|c| c["holds"] == true));
}

#[test]
fn annpoly_on_both_spaces() {
    let rc = netlist("rc.net");
    let v = json(&["annpoly", "--space", "emulator", &rc]);
    assert_eq!(v["result"]["poly"]["text"], "s + 2/3");
    let v = json(&["annpoly", &rc]);
    assert_eq!(v["result"]["poly"]["text"], "s^2 + 2/3 s");
    let text = ila(&["annpoly", "--space", "emulator", &rc]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.contains("s + 2/3"));
}

#[test]
fn finite_fields_are_selectable() {
    let rc = netlist("rc.net");
    let v = json(&["--field", "gf5", "annpoly", &rc]);
    assert_eq!(v["field"], "GF(5)");
    assert_eq!(v["result"]["poly"]["text"], "s^2 + 4 s");
    let out = ila(&["verify-idt", "--random", "100", "--field", "gf5"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("100/100"));
    assert_eq!(ila(&["--field", "gf4", "selftest"]).code, 2);
}

#[test]
fn binary_reads_the_field_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_ila");
    let rlc = netlist("rlc.net");
    let out = std::process::Command::new(bin).args(["--json", "annpoly", &rlc]).env("ILA_FIELD", "gf7").output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["field"], "GF(7)");
    assert_eq!(v["result"]["poly"]["text"], "s^2 + 2 s + 1");
    // The flag wins over the environment.
    let out = std::process::Command::new(bin).args(["--field", "q", "--json", "annpoly", &rlc]).env("ILA_FIELD", "gf7").output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["field"], "Q");
    let bad = std::process::Command::new(bin).arg("annpoly").arg("/no/such.net").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn feedback_and_injection_place_the_target() {
    let rlc = netlist("rlc.net");
    for cmd in ["feedback", "injection"] {
        let v = json(&[cmd, "--target-poly", "2,3,1", &rlc]);
        assert_eq!(v["status"], "ok", "{v}");
        assert_eq!(v["result"]["achieved"]["text"], "s^2 + 3 s + 2");
    }
    assert_eq!(ila(&["feedback", "--target-poly", "2,3,0", &rlc]).code, 2);
    assert_eq!(ila(&["feedback", "--target-poly", "x", &rlc]).code, 2);
}

#[test]
fn decompose_reports_ports() {
    let v = json(&["decompose", &netlist("rlc.net")]);
    let r = &v["result"];
    assert_eq!(r["port_count"], r["rank_formula"]);
    assert_eq!(r["ports_free"], true);
    assert_eq!(r["recomposes"], true);
}

#[test]
fn invariants_and_adjoint() {
    let rc = netlist("rc.net");
    for kind in ["conditioned", "controlled"] {
        let v = json(&["invariant", "--kind", kind, &rc]);
        assert_eq!(v["status"], "ok", "{v}");
    }
    assert_eq!(json(&["adjoint", &rc])["status"], "ok");
}

#[test]
fn selftest_passes() {
    let out = ila(&["selftest"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let v = json(&["selftest"]);
    assert!(v["result"]["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn errors_and_exit_codes() {
    let missing = ila(&["annpoly", "/no/such/file.net"]);
    assert_eq!(missing.code, 1);
    let v = json(&["annpoly", "/no/such/file.net"]);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "Io");
    assert_eq!(ila(&["frobnicate"]).code, 2);
    assert_eq!(ila(&[]).code, 2);
    assert_eq!(ila(&["--help"]).code, 0);
}

#[test]
fn output_is_deterministic() {
    let a = ila(&["--seed", "9", "verify-idt", "--random", "20"]);
    let b = ila(&["--seed", "9", "verify-idt", "--random", "20"]);
    assert_eq!(a.stdout, b.stdout);
    let rc = netlist("rc.net");
    assert_eq!(ila(&["--json", "emulate", &rc]).stdout, ila(&["--json", "emulate", &rc]).stdout);
}
