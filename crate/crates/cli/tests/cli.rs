use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruminlab")).args(args).env("RUMINLAB_THREADS", "2").output().expect("spawn ruminlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(stdout(&o).trim()).expect("json output");
    v["result"].clone()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn basis_counts() {
    let o = run(&["basis", "--n", "2", "--k", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# ruminlab "));
    assert_eq!(text.lines().count(), 6);
    assert_eq!(json(&["basis", "--n", "3", "--k", "2"])["dim"], 14);
}

#[test]
fn tableaux_listing() {
    let r = json(&["tableaux", "--m", "3", "--l", "2"]);
    assert_eq!(r["count"], 2);
}

#[test]
fn dcheck_message() {
    let o = run(&["dcheck", "--n", "2", "--trials", "20", "--seed", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("seed=7"));
    assert!(text.lines().any(|l| l == "OK: D∘d=0, d∘D=0 (20/20 exact)"), "{text}");
}

#[test]
fn rumin_apply_ops() {
    let r = json(&["rumin-apply", "--n", "1", "--form", "t*dx1", "--op", "d"]);
    assert_eq!(r["result"], "-1/2*x1*dx1^dy1 - dx1^th");
    let r = json(&["rumin-apply", "--n", "1", "--form", "x1*dx1", "--op", "D"]);
    assert_eq!(r["result"], "0");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["basis", "--n", "1", "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["rumin-apply", "--form", "dx1 + dq"]).status.code(), Some(2));
    let o = run(&["normalize", "--n", "1", "--span", "X1 + Y1", "--vertical"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn census_finds_two_planes() {
    let r = json(&["census", "--n", "2", "--k", "2", "--tangent", "X1^Y1^T - X2^Y2^T", "--trials", "3000"]);
    assert_eq!(r["planes"].as_array().unwrap().len(), 2);
    assert_eq!(r["pairwise_not_rank_one"], true);
    let again = json(&["census", "--n", "2", "--k", "2", "--tangent", "X1^Y1^T - X2^Y2^T", "--trials", "3000"]);
    assert_eq!(r, again);
}

#[test]
fn normalize_horizontal() {
    let r = json(&["normalize", "--n", "2", "--span", "X1 + Y2; X2"]);
    assert_eq!(r["a"], 1);
    assert_eq!(r["b"], 0);
}

#[test]
fn extend_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut lines = String::new();
    for i in -2..=2 {
        for j in -2..=2 {
            let (y, t) = (i as f64 * 0.5, j as f64 * 0.5);
            lines.push_str(&format!("{{\"w\":[{y},{t}],\"phi\":[{}]}}\n", 0.5 * y));
        }
    }
    let a = write(dir.path(), "a.jsonl", &lines);
    let g = write(dir.path(), "g.json", r#"{"origin":[-1,-1],"spacing":[0.5,0.5],"counts":[5,5]}"#);
    let out = dir.path().join("out.jsonl").display().to_string();
    let lip = json(&["lip", "--n", "1", "--k", "1", "--in", &a]);
    assert!((lip["lip_lower_bound"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let r = json(&["extend", "--n", "1", "--k", "1", "--in", &a, "--grid", &g, "--out", &out]);
    assert_eq!(r["points"], 25);
    let values = fs::read_to_string(&out).unwrap();
    for line in values.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        let y = v["w"][0].as_f64().unwrap();
        assert!((v["phi"][0].as_f64().unwrap() - 0.5 * y).abs() < 1e-9, "{line}");
    }
}

#[test]
fn currents_and_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let om = write(dir.path(), "om.json", r#"{"core":"dy1^th","window":{"center":[0,0],"radius":[1,1]}}"#);
    let heis = json(&["current", "--n", "1", "--k", "1", "--phi-text", "y1/2", "--omega", &om, "--cnk", "1"]);
    let classical = json(&["current", "--n", "1", "--k", "1", "--phi-text", "y1/2", "--omega", &om, "--classical"]);
    let (a, b) = (heis["value"].as_f64().unwrap(), classical["value"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));

    let b1 = write(dir.path(), "b.json", r#"{"core":"dy1 + x1*dx1","window":{"center":[0.1,0],"radius":[1,1]}}"#);
    let r = json(&["boundary", "--n", "1", "--k", "1", "--phi-text", "y1^2 + t/3", "--omega", &b1, "--cnk", "1"]);
    assert!(r["value"].as_f64().unwrap().abs() <= 1e-9 * r["mass_scale"].as_f64().unwrap());

    let w = write(dir.path(), "w.json", r#"{"center":[0,0],"radius":[1,1]}"#);
    let r = json(&["area-check", "--n", "1", "--k", "1", "--phi-text", "y1^2 + t/3", "--window", &w, "--cnk", "1"]);
    assert!(r["rel_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn blowup_decreases() {
    let r = json(&["blowup", "--n", "1", "--k", "1", "--phi-text", "y1^2/2 + t", "--at", "0,0"]);
    assert_eq!(r["decreasing"], true);
}

#[test]
fn cnk_reports_closed_form() {
    let r = json(&["cnk", "--n", "1", "--k", "1", "--samples", "20000"]);
    assert_eq!(r["closed_form_at_origin"], 1.0);
    assert!((r["estimate"].as_f64().unwrap() - 1.0).abs() < 0.1);
}

#[test]
fn pairing_table_nonempty() {
    let r = json(&["pairing-table", "--a", "1", "--b", "1", "--n", "2"]);
    assert!(!r["table"].as_array().unwrap().is_empty());
}
