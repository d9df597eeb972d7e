use std::path::PathBuf;
use std::process::{Command, Output};

fn model(rel: &str) -> String {
    format!("{}/models/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn avmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avmc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_bundled() {
    let o = avmc(&["--quiet", "validate", &model("antivirus.avm")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "mapping: pass, approaches: pass, synchronization: pass\n");
    let o = avmc(&["--quiet", "validate", "--no-sync", &model("antivirus.avm")]);
    assert!(stdout(&o).ends_with("synchronization: skipped\n"));
}

#[test]
fn structured_output_is_json_lines() {
    let o = avmc(&["--format", "structured", "validate", &model("antivirus.avm")]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let last = lines.last().unwrap();
    assert_eq!(last["kind"], "checks");
    assert_eq!(last["synchronization"], "pass");
    assert!(lines.iter().any(|v| v["code"] == "mapped" && v["line"].is_u64()));
}

#[test]
fn check_bundled_both_engines() {
    let o = avmc(&["check", &model("antivirus.avm")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("reach_done [control]: holds (as expected)"));
    assert!(out.contains("always_done [control]: fails (as expected)"));
    assert!(out.contains("witness: NotActivated -activate-> Activated -start-> Process -found-> Recognition -remove-> Done"));
    assert!(out.contains("7 checked (explicit+symbolic), 6 hold, 1 fail, 0 unexpected"));
    for engine in ["explicit", "symbolic"] {
        let o = avmc(&["check", "--engine", engine, &model("antivirus.avm")]);
        assert_eq!(o.status.code(), Some(0), "{engine}");
    }
}

#[test]
fn paths_command() {
    let o = avmc(&["paths", &model("antivirus.avm"), "--behavior", "control", "--from", "NotActivated", "--to", "Done"]);
    assert_eq!(
        stdout(&o),
        "paths: 1 simple path(s) from NotActivated to Done in control\n  \
         NotActivated -activate-> Activated -start-> Process -found-> Recognition -remove-> Done\n"
    );
    let o = avmc(&["paths", &model("antivirus.avm"), "--behavior", "control", "--from", "NotActivated", "--to", "End"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = avmc(&["paths", &model("antivirus.avm"), "--behavior", "control", "--from", "Nope", "--to", "End"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn info_command() {
    let o = avmc(&["info", &model("antivirus.avm")]);
    assert!(stdout(&o).lines().any(|l| l == "preventive: 11 states / 12 transitions; control: 7 states / 8 transitions"));
}

#[test]
fn export_to_stdout_and_file() {
    let o = avmc(&["export", &model("antivirus.avm"), "--format", "smv", "--target", "control"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("-- control behavior of model antivirus\nMODULE main\n"));
    let out: PathBuf = std::env::temp_dir().join(format!("avmc-cli-{}.dot", std::process::id()));
    let o = avmc(&["export", &model("antivirus.avm"), "--format", "dot", "--target", "preventive", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&out).unwrap();
    std::fs::remove_file(&out).unwrap();
    assert!(dot.starts_with("digraph \"antivirus_preventive\""));
    assert_eq!(dot.matches(" -> ").count(), 12);
}

#[test]
fn exit_codes() {
    assert_eq!(avmc(&["validate", "/definitely/not/here.avm"]).status.code(), Some(2));
    assert_eq!(avmc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(avmc(&["--help"]).status.code(), Some(0));
    assert_eq!(avmc(&["validate", &model("mutants/deleted_transition.avm")]).status.code(), Some(1));
    let o = avmc(&["check", &model("mutants/unreachable_done.avm")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("81:1: error[expectation-mismatch] spec reach_done:"));
}
