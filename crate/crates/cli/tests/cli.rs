use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_depthtower"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> (Output, Value) {
    let out = bin().args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, v)
}

fn tower_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn s4_a4_v4_is_depth_three_on_both_sides() {
    let (out, v) = run(&["depth", data("s4_a4_v4.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["verdicts"]["rd3"], true);
    assert_eq!(v["verdicts"]["ld3"], true);
    assert!(v["certificates"]["rd3"]["sha256"].is_string());
}

#[test]
fn b_equal_c_equal_a_gives_all_verdicts() {
    let f =
        tower_file("field = \"Q\"\n[groups]\nG = [\"(1 2 3)\", \"(1 2)\"]\nH = [\"(1 2 3)\", \"(1 2)\"]\nK = [\"(1 2 3)\", \"(1 2)\"]\n");
    let (out, v) = run(&["depth", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for k in ["rd3", "ld3", "rd2", "ld2"] {
        assert_eq!(v["verdicts"][k], true, "{k}");
    }
}

#[test]
fn false_verdicts_name_the_failing_check() {
    let (out, v) = run(&["depth", data("s3_c2.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(v["verdicts"]["rd3"], false);
    assert!(v["certificates"]["rd3"]["failing_check"].as_str().unwrap().contains("A-C"));
}

#[test]
fn malformed_cycle_is_a_parse_error() {
    let (out, _) = run(&["depth", data("bad_cycle.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5") && err.contains("'x'"), "{err}");
}

#[test]
fn dimension_cap_is_enforced() {
    let out = bin().env("DEPTHTOWER_MAX_DIM", "10").args(["depth", data("s4_a4_v4.toml").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn groups_criterion() {
    let (out, v) = run(&["groups", "--g", "(1 2 3)", "--g", "(1 2)", "--h", "(1 2 3)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["verdicts"]["criterion"], true);
    let (out, v) = run(&["groups", "--g", "(1 2 3)", "--g", "(1 2)", "--h", "(1 2)", "--k", "(1 2)"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(v["normal_closure"].as_array().unwrap().len(), 6);
    let (out, v) = run(&[
        "groups",
        "--g",
        "(1 2 3 4)",
        "--g",
        "(1 2)",
        "--h",
        "(1 2 3)",
        "--h",
        "(2 3 4)",
        "--k",
        "(1 2)(3 4)",
        "--k",
        "(1 3)(2 4)",
        "--quasibases",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["double_cosets"]["count"], 2);
    assert!(v["certificates"]["rd3"]["maps"].is_array());
}

#[test]
fn chain_violation_exits_with_input_error() {
    let (out, _) = run(&["groups", "--g", "(1 2 3)", "--g", "(1 2)", "--h", "(1 2 3)", "--k", "(1 2)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structures_checks() {
    let (out, v) = run(&["structures", data("s3_a3_trivial.toml").to_str().unwrap(), "--checks", "coring"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["checks"]["coring"]["passed"], true);
    let (out, v) = run(&["structures", data("s3_c2.toml").to_str().unwrap(), "--checks", "smash"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(v["checks"]["smash"]["error"].as_str().unwrap().contains("left depth three"));
    let (out, v) = run(&["structures", data("groupoid_pair.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let pi_l = &v["checks"]["weakhopf"]["detail"]["pi_l"];
    assert!(pi_l.as_array().unwrap().iter().any(|p| p[0] == "e12" && p[1] == "e11"));
}

#[test]
fn census_small_cases() {
    let (out, _) = run(&["census", "--max-order", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    let out = bin().args(["census", "--max-order", "6", "--field", "F7"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let records: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(records[..records.len() - 1].iter().all(|r| r["modular"] == false));
    let (out, _) = run(&["census", "--max-order", "25"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn census_is_reproducible() {
    let a = bin().args(["census", "--max-order", "8"]).output().unwrap();
    let b = bin().args(["census", "--max-order", "8", "--jobs", "3"]).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn jb_instances() {
    let (out, v) = run(&["jb", "--p", "2", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["subfields"].as_array().unwrap().len(), 3);
    let (out, v) = run(&["jb", "--p", "3", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["subfields"].as_array().unwrap().len(), 1);
    let (out, _) = run(&["jb", "--p", "4", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn certificates_round_trip() {
    let file = data("quaternions.toml");
    let out = bin().args(["quasibases", file.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let mut cert = tempfile::NamedTempFile::new().unwrap();
    cert.write_all(&out.stdout).unwrap();
    let (out, v) = run(&["quasibases", file.to_str().unwrap(), "--verify", cert.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(v["verified"]["rd3"]["status"], "verified");
    // The same certificate does not verify against a different tower.
    let (out, _) = run(&["quasibases", data("s3_a3_trivial.toml").to_str().unwrap(), "--verify", cert.path().to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn text_format_is_aligned() {
    let (out, _) = run(&["--format", "text", "jb", "--p", "2", "--n", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let cols: Vec<usize> = text.lines().map(|l| l.find("  ").unwrap()).collect();
    assert!(text.lines().all(|l| l.len() > cols[0]));
    assert!(text.contains("verdicts.round_trips"));
}

#[test]
fn shipped_data_files_load() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let (cmd, want) = match name.as_str() {
            "bad_cycle.toml" => ("depth", 2),
            "groupoid_pair.toml" => ("structures", 0),
            "s3_c2.toml" => ("depth", 1),
            "m2_f2.toml" => ("jb", 0),
            _ => ("depth", 0),
        };
        let out = if cmd == "jb" {
            bin().args(["jb", "--file", path.to_str().unwrap()]).output().unwrap()
        } else {
            bin().args([cmd, path.to_str().unwrap()]).output().unwrap()
        };
        assert_eq!(out.status.code(), Some(want), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
