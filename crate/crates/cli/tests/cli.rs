use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn msa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msa")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn scratch(name: &str) -> String {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name).to_string_lossy().into_owned()
}

#[test]
fn unknown_model_is_an_error() {
    let out = msa(&["info", "no-such-model"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("heck-carbon"), "{}", stderr(&out));
}

#[test]
fn decided_verdicts_exit_zero() {
    assert_eq!(code(&msa(&["analyze", "anderies"])), 0);
    assert_eq!(code(&msa(&["info", "ermog-yeast"])), 0);
}

#[test]
fn exhausted_budget_exits_two() {
    let out = msa(&["analyze", "heck-carbon", "--max-branches", "1", "--json"]);
    assert_eq!(code(&out), 2);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "inconclusive");
    assert_eq!(doc["reason"], "budget");
}

#[test]
fn bad_arguments_exit_one() {
    for args in [
        &["analyze", "anderies", "--sigma", "1,2"][..],
        &["analyze", "anderies", "--kappa", "1,1,0,1"],
        &["analyze", "anderies", "--mu-hint", "1,x,2"],
        &["analyze", "anderies", "--p=-1"],
        &["analyze", "anderies", "--p", "0"],
    ] {
        let out = msa(args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(stderr(&out).starts_with("error:"), "{args:?}");
    }
}

#[test]
fn verify_round_trip_and_tampering() {
    let report = scratch("cut-pair-report.json");
    let out = msa(&["analyze", "defone-cutpair", "--json"]);
    assert_eq!(code(&out), 0);
    std::fs::write(&report, &out.stdout).unwrap();
    let verified = msa(&["verify", "defone-cutpair", "--witness", &report, "--json"]);
    assert_eq!(code(&verified), 0, "{}", stderr(&verified));
    let v: Value = serde_json::from_slice(&verified.stdout).unwrap();
    assert_eq!(v["pass"], true);

    let mut doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let k = doc["witness"]["k"]["R2"].as_f64().unwrap();
    doc["witness"]["k"]["R2"] = Value::from(k * 1.5);
    let tampered = scratch("cut-pair-tampered.json");
    std::fs::write(&tampered, doc.to_string()).unwrap();
    let failed = msa(&["verify", "defone-cutpair", "--witness", &tampered]);
    assert_eq!(code(&failed), 2);

    let missing = msa(&["verify", "defone-cutpair", "--witness", &scratch("absent.json")]);
    assert_eq!(code(&missing), 1);
}

#[test]
fn transform_output_is_reactant_determined() {
    let path = scratch("ndk-cli.json");
    let out = msa(&["transform", "ndk-defone", "-o", &path]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("R3"));
    let info = msa(&["info", &path, "--json"]);
    let doc: Value = serde_json::from_slice(&info.stdout).unwrap();
    assert_eq!(doc["kinetics"], "PL-RDK");
    assert_eq!(doc["model"], "ndk-defone-cfrm");
}

#[test]
fn analyze_transforms_non_reactant_determined_input() {
    let out = msa(&["analyze", "ndk-defone", "--json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["kinetics"], "PL-NDK");
    assert_eq!(doc["cf_rm"]["changes"][0]["reaction"], "R3");
    assert_eq!(doc["cf_rm"]["network"]["deficiency"], 2);
    assert_eq!(doc["verdict"], "multistationary");
}
