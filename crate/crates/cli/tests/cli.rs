use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn lvh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lvh")).args(args).output().expect("run lvh")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn build(dir: &Path, group: &str, lambda: &str) -> PathBuf {
    let p = dir.join(format!("{}.json", group.replace([':', '*'], "_")));
    let o = lvh(&["block", "build", "--group", group, "--lambda", lambda, "--out", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn n_params(p: &Path) -> usize {
    let v: Value = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
    v["parameters"].as_array().unwrap().len()
}

#[test]
fn build_parameter_counts() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(n_params(&build(d.path(), "sl2r", "0")), 4);
    let half = build(d.path(), "sl2r", "1/2");
    assert_eq!(n_params(&half), 2);
    assert_eq!(code(&lvh(&["block", "validate", half.to_str().unwrap()])), 0);
    assert_eq!(n_params(&build(d.path(), "complex:SL2", "0,0")), 2);
}

#[test]
fn corrupted_file_fails_validation() {
    let d = tempfile::tempdir().unwrap();
    let p = build(d.path(), "sl2r", "0");
    let bad = d.path().join("bad.json");
    fs::write(&bad, fs::read_to_string(&p).unwrap().replace("\"noncompact\"", "\"compact\"")).unwrap();
    let o = lvh(&["block", "validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("compact"));
    assert_eq!(code(&lvh(&["compute", "lvm", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&lvh(&["verify", bad.to_str().unwrap()])), 4);
}

#[test]
fn schema_errors_exit_one() {
    let d = tempfile::tempdir().unwrap();
    let junk = d.path().join("junk.json");
    fs::write(&junk, "{\"version\": 1").unwrap();
    assert_eq!(code(&lvh(&["block", "validate", junk.to_str().unwrap()])), 1);
    assert_eq!(code(&lvh(&["block", "info", d.path().join("missing.json").to_str().unwrap()])), 1);
    assert_eq!(code(&lvh(&["block", "build", "--group", "nope", "--lambda", "0"])), 1);
    assert_eq!(code(&lvh(&["frobnicate"])), 1);
}

#[test]
fn compute_lvm_sl2r_is_unitriangular() {
    let d = tempfile::tempdir().unwrap();
    let p = build(d.path(), "sl2r", "0");
    let o = lvh(&["compute", "lvm", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v["params"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(ids.len(), 4);
    let entries = v["entries"].as_array().unwrap();
    for id in &ids {
        let diag = entries.iter().find(|e| e["row"] == *id && e["col"] == *id).unwrap();
        assert_eq!(diag["text"], "1");
    }
    // open parity parameter sits over both closed orbits
    assert_eq!(entries.len(), 6);
}

#[test]
fn compute_hodge_nonintegral_is_diagonal() {
    let d = tempfile::tempdir().unwrap();
    let p = build(d.path(), "sl2r", "1/2");
    let o = lvh(&["compute", "hodge", p.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f[0], f[1]);
        assert_eq!(f[2], "1");
    }
}

#[test]
fn compute_signature_latex_and_dumps() {
    let d = tempfile::tempdir().unwrap();
    let p = build(d.path(), "complex:SL3", "0,0,0,0");
    let out = d.path().join("sig.tex");
    let (h, r, l) = (d.path().join("hecke.json"), d.path().join("r.json"), d.path().join("lvm.json"));
    let o = lvh(&[
        "compute",
        "signature",
        p.to_str().unwrap(),
        "--format",
        "latex",
        "--out",
        out.to_str().unwrap(),
        "--dump-hecke",
        h.to_str().unwrap(),
        "--dump-R",
        r.to_str().unwrap(),
        "--dump-lvm",
        l.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let tex = fs::read_to_string(&out).unwrap();
    assert!(tex.starts_with("\\documentclass"));
    assert!(tex.contains("regularity_unchecked"));
    assert!(tex.contains("\\begin{array}") && tex.trim_end().ends_with("\\end{document}"));
    let hv: Value = serde_json::from_str(&fs::read_to_string(&h).unwrap()).unwrap();
    // G×G has twice the simple roots of SL3
    assert_eq!(hv["operators"].as_array().unwrap().len(), 4);
    assert!(fs::read_to_string(&r).unwrap().contains("\\begin{array}"));
    assert!(fs::read_to_string(&l).unwrap().contains("LVM"));
}

#[test]
fn verify_builtins_with_oracle_and_report() {
    let d = tempfile::tempdir().unwrap();
    for (g, l) in [("sl2r", "0"), ("su21", "1/2,0"), ("gl2r", "1/2,1/2"), ("complex:Sp4", "0,0,0,0")] {
        let p = build(d.path(), g, l);
        let rep = d.path().join("rep.json");
        let o = lvh(&["verify", p.to_str().unwrap(), "--oracle", "--report", rep.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{g}: {}", stdout(&o));
        let v: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
        let checks = v["checks"].as_array().unwrap();
        assert!(checks.iter().any(|c| c["name"] == "oracle"));
        for c in checks {
            assert!(c["name"].is_string() && c.get("witness").is_some());
            assert_eq!(c["status"], "pass");
        }
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let d = tempfile::tempdir().unwrap();
    let p = build(d.path(), "complex:SL3", "0,0,0,0");
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_lvh"))
            .args(["compute", "signature", p.to_str().unwrap(), "--format", "json"])
            .env("LVH_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        o.stdout
    };
    let a = run("1");
    assert_eq!(a, run("4"));
    assert_eq!(a, run("1"));
}

#[test]
fn verify_every_builtin_with_oracle() {
    let d = tempfile::tempdir().unwrap();
    for (i, (g, l)) in lvh_core::builders::builtin_blocks().into_iter().enumerate() {
        let p = d.path().join(format!("b{i}.json"));
        let o = lvh(&["block", "build", "--group", g, "--lambda", l, "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{g} {l}");
        let o = lvh(&["verify", p.to_str().unwrap(), "--oracle"]);
        assert_eq!(code(&o), 0, "{g} {l}: {}", stdout(&o));
    }
}
