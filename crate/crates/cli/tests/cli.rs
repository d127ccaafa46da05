use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn slicedot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicedot")).args(args).env_remove("SLICEDOT_THREADS").output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = slicedot(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = p(dir, name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Two vMF samples a quarter turn apart.
fn two_inputs(dir: &TempDir) -> (String, String) {
    let (a, b) = (p(dir, "a.json"), p(dir, "b.json"));
    ok(&["sample", "--shape", "vmf", "--center", "0,0,1", "--kappa", "50", "--n", "60", "--seed", "1", "-o", &a]);
    ok(&["sample", "--shape", "vmf", "--center", "1,0,0", "--kappa", "50", "--n", "60", "--seed", "2", "-o", &b]);
    (a, b)
}

#[test]
fn distance_reports_value_and_stderr() {
    let dir = TempDir::new().unwrap();
    let (a, b) = two_inputs(&dir);
    let out = ok(&["distance", "--kind", "psw", "--mu", &a, "--nu", &b, "--slices", "1000", "--seed", "7"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = v["value"].as_f64().unwrap();
    assert!(value > 0.0 && value < 2.0);
    assert!(v["stderr"].as_f64().unwrap() > 0.0);
    assert_eq!(v["slices"], 1000);
    // Same seed, same estimate; stdout and file output agree.
    let out_path = p(&dir, "d.json");
    ok(&["distance", "--kind", "psw", "--mu", &a, "--nu", &b, "--slices", "1000", "--seed", "7", "-o", &out_path]);
    assert_eq!(json(Path::new(&out_path)), v);
    let semi = ok(&["distance", "--kind", "ssw", "--mu", &a, "--nu", &b, "--slices", "200"]);
    assert!(serde_json::from_slice::<Value>(&semi.stdout).unwrap()["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn so3_distances() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", r#"{"manifold":"so3","dim":3,"points":[[1,0,0,0,1,0,0,0,1],[0,-1,0,1,0,0,0,0,1]]}"#);
    let s = write(&dir, "s.json", r#"{"manifold":"so3","dim":3,"points":[[1,0,0,0,0,-1,0,1,0]]}"#);
    for kind in ["sosw", "sosw-s3"] {
        let out = ok(&["distance", "--kind", kind, "--mu", &r, "--nu", &s, "--slices", "300"]);
        assert!(serde_json::from_slice::<Value>(&out.stdout).unwrap()["value"].as_f64().unwrap() > 0.0);
    }
    assert_eq!(slicedot(&["distance", "--kind", "psw", "--mu", &r, "--nu", &s]).status.code(), Some(2));
}

#[test]
fn free_barycenter_report_reruns_identically() {
    let dir = TempDir::new().unwrap();
    let (a, b) = two_inputs(&dir);
    let (out, csv) = (p(&dir, "out.json"), p(&dir, "loss.csv"));
    ok(&[
        "bary", "free", "--inputs", &a, &b, "--lambda", "0.5", "0.5", "--iters", "50", "--slices", "100", "--tau",
        "1", "--seed", "7", "-o", &out, "--loss-csv", &csv,
    ]);
    let report = json(Path::new(&out));
    assert_eq!(report["loss"].as_array().unwrap().len(), 50);
    assert_eq!(report["config"]["solver"]["slicing"], "psw");
    assert_eq!(report["result"]["kind"], "measure");
    assert_eq!(report["result"]["measure"]["points"].as_array().unwrap().len(), 60);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 51);

    let again = p(&dir, "again.json");
    ok(&["--threads", "2", "bary", "run", "--spec", &out, "-o", &again]);
    let rerun = json(Path::new(&again));
    assert_eq!(rerun["loss"], report["loss"]);
    assert_eq!(rerun["result"], report["result"]);
    assert_eq!(rerun["environment"]["threads"], 2);
}

#[test]
fn fixed_and_radon_barycenters() {
    let dir = TempDir::new().unwrap();
    let (a, b) = two_inputs(&dir);
    let out = ok(&["bary", "fixed", "--inputs", &a, &b, "--n", "40", "--iters", "20", "--slices", "50", "--tau", "0.01"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let w: Vec<f64> =
        report["result"]["measure"]["weights"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(w.len(), 40);
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);

    let out = ok(&["bary", "radon", "--inputs", &a, &b, "--degree", "8", "--kde-kappa", "10"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let density = &report["result"]["density"];
    assert_eq!(density["thetas"].as_array().unwrap().len(), 9);
    assert_eq!(density["phis"].as_array().unwrap().len(), 18);
    assert_eq!(density["values"].as_array().unwrap().len(), 9 * 18);
}

#[test]
fn experiment_spec_runs() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "nested/report.json");
    let spec = format!(
        r#"{{"name":"so3","inputs":[{{"kind":"so3-cluster","center":[1,0,0,0,1,0,0,0,1],"spread":0.1,"n":20,"seed":1}},
            {{"kind":"uniform-so3","n":20,"seed":2}}],
            "solver":{{"slicing":"sosw","method":"free"}},
            "budget":{{"n":20,"slices":40,"iterations":10,"seed":3,"schedule":{{"kind":"constant","tau":0.5}}}},
            "output":"{out}"}}"#
    );
    let spec_path = write(&dir, "spec.json", &spec);
    ok(&["bary", "run", "--spec", &spec_path]);
    let report = json(Path::new(&out));
    assert_eq!(report["result"]["measure"]["manifold"], "so3");
    assert_eq!(report["loss"].as_array().unwrap().len(), 10);
}

#[test]
fn bench_speed_writes_csv() {
    let dir = TempDir::new().unwrap();
    let (csv, table) = (p(&dir, "t.csv"), p(&dir, "t.json"));
    ok(&[
        "bench", "speed", "--kind", "psw,ssw", "--n", "20..80", "--points", "3", "--slices", "10", "--iters", "2",
        "-o", &csv, "--json", &table,
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().nth(1).unwrap().starts_with("psw,20,3,10,2,"));
    let t = json(Path::new(&table));
    assert_eq!(t["speedups"].as_array().unwrap().len(), 3);
    assert_eq!(t["slopes"].as_array().unwrap().len(), 2);
}

#[test]
fn samples_and_kde() {
    let dir = TempDir::new().unwrap();
    let m = p(&dir, "smiley.json");
    ok(&["sample", "--shape", "smiley", "--n", "100", "--seed", "3", "-o", &m]);
    let v = json(Path::new(&m));
    assert_eq!(v["manifold"], "sphere");
    assert_eq!(v["points"].as_array().unwrap().len(), 100);
    let out = ok(&["kde", "--measure", &m, "--kappa", "20", "--degree", "10"]);
    let d: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(d["values"].as_array().unwrap().len(), 11 * 22);
    let diracs = ok(&["sample", "--shape", "antipodal-diracs"]);
    assert_eq!(serde_json::from_slice::<Value>(&diracs.stdout).unwrap()["weights"], serde_json::json!([0.5, 0.5]));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "bad.json", "{not json");
    let offsphere = write(&dir, "off.json", r#"{"manifold":"sphere","dim":3,"points":[[2,0,0]]}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["distance", "--kind", "psw", "--mu", &garbage, "--nu", &garbage],
        vec!["distance", "--kind", "psw", "--mu", &offsphere, "--nu", &offsphere],
        vec!["distance", "--kind", "psw", "--mu", "/nonexistent", "--nu", "/nonexistent"],
        vec!["distance", "--kind", "psw", "--bogus-flag"],
        vec!["frobnicate"],
        vec!["sample", "--shape", "bagel"],
        vec!["sample", "--shape", "vmf", "--kappa", "3"],
        vec!["bench", "speed", "--kind", "xsw", "--n", "10,20"],
        vec!["--threads", "0", "sample", "--shape", "equator"],
    ];
    for args in cases {
        assert_eq!(slicedot(&args).status.code(), Some(2), "{args:?}");
    }
    let (a, b) = two_inputs(&dir);
    let bad_lambda = slicedot(&["bary", "free", "--inputs", &a, &b, "--lambda", "0.9", "0.9", "--iters", "2"]);
    assert_eq!(bad_lambda.status.code(), Some(2));
    let ssw_fixed = slicedot(&["bary", "fixed", "--inputs", &a, "--slicing", "ssw", "--iters", "2"]);
    assert_eq!(ssw_fixed.status.code(), Some(2));
}

#[test]
fn thread_variable_is_respected_and_the_flag_wins() {
    let dir = TempDir::new().unwrap();
    let (a, b) = two_inputs(&dir);
    let run = |env: &str, flag: Option<&str>| -> Value {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_slicedot"));
        cmd.env("SLICEDOT_THREADS", env);
        if let Some(f) = flag {
            cmd.args(["--threads", f]);
        }
        let out = cmd.args(["bary", "free", "--inputs", &a, &b, "--iters", "3", "--slices", "20"]).output().unwrap();
        assert!(out.status.success());
        serde_json::from_slice(&out.stdout).unwrap()
    };
    let by_env = run("3", None);
    assert_eq!(by_env["environment"]["threads"], 3);
    let by_flag = run("3", Some("1"));
    assert_eq!(by_flag["environment"]["threads"], 1);
    assert_eq!(by_env["loss"], by_flag["loss"]);
}

#[test]
fn plot_jobs_are_checked_against_the_schemas() {
    let dir = TempDir::new().unwrap();
    let (a, b) = two_inputs(&dir);
    let report = p(&dir, "report.json");
    ok(&["bary", "free", "--inputs", &a, &b, "--iters", "5", "--slices", "20", "-o", &report]);
    let plots = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_plots")).args(args).output().unwrap();
    let job = |inputs: &[&str], style: &str, name: &str| {
        let text = serde_json::json!({"inputs": inputs, "style": style, "output": "fig.png"}).to_string();
        write(&dir, name, &text)
    };
    for (inputs, style) in [(vec![a.as_str(), b.as_str()], "scatter3d"), (vec![report.as_str()], "curves"), (vec![report.as_str()], "scatter3d")] {
        let j = job(&inputs, style, "good.json");
        let out = plots(&["check", "--job", &j]);
        assert!(out.status.success(), "{style}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(plots(&["render", "--job", &j]).status.code(), Some(2));
    }
    let bad = job(&[a.as_str()], "so3ball", "bad.json");
    let out = plots(&["check", "--job", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("so3ball"));
    let typo = write(&dir, "typo.json", r#"{"inputs":[],"style":"pie","output":"x"}"#);
    assert_eq!(plots(&["check", "--job", &typo]).status.code(), Some(2));
}
