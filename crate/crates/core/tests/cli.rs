use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubeseeker")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_reports_holzman_numbers() {
    let v = json(&["eval", "holzman", "--cube", "0,0:1", "--tau", "1/2", "--mode", "weak"]);
    assert_eq!(v["f"], "2/9");
    assert_eq!(v["vol_plus"], "1/3");
    assert_eq!(v["vol_minus"], "2/9");
    assert_eq!(v["vol_gap"], "4/9");
    assert_eq!(v["condition"]["holds"], true);
    assert_eq!(json(&["eval", "halfhalf:1", "--cube", "0:1"])["f"], "1/2");
}

#[test]
fn config_files_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("c.json");
    fs::write(&good, r#"{"d":1,"m":2,"f_plus":[[0]],"f_minus":[[1]]}"#).unwrap();
    assert_eq!(json(&["eval", path(&good), "--cube", "1/4:1/2"])["f"], "1/2");

    let overlap = dir.path().join("overlap.json");
    fs::write(&overlap, r#"{"d":1,"m":2,"f_plus":[[0]],"f_minus":[[0]]}"#).unwrap();
    assert_eq!(code(&["eval", path(&overlap), "--cube", "0:1"]), 3);

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"d\":").unwrap();
    assert_eq!(code(&["eval", path(&broken), "--cube", "0:1"]), 2);

    assert_eq!(code(&["eval", "holzman", "--cube", "0,0:2"]), 3);
    assert_eq!(code(&["eval", "holzman", "--cube", "0,0:0.5"]), 2);
    assert_eq!(code(&["--allow-decimal", "eval", "holzman", "--cube", "0,0:0.5"]), 0);
    assert_eq!(code(&["eval", "no-such-file.json", "--cube", "0:1"]), 2);
}

#[test]
fn optimize_variants() {
    let v = json(&["optimize", "slab:1/3:2", "--eps", "1e-6"]);
    assert_eq!((v["lo"].as_str(), v["hi"].as_str()), (Some("1/3"), Some("1/3")));
    let g = json(&["optimize", "halfhalf:1", "--grid-only", "--subdivision", "1"]);
    assert_eq!(g["value"], "1/2");
    let h = json(&["optimize", "holzman", "--eps", "1e-4"]);
    assert_eq!(h["converged"], true);
}

#[test]
fn unconverged_optimization_exits_5() {
    let out = run(&["optimize", "holzman", "--eps", "1e-9", "--max-iterations", "2"]);
    assert_eq!(out.status.code(), Some(5));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["converged"], false);
}

#[test]
fn bounds_outputs() {
    let b = json(&["bounds", "--tau", "1/2", "--d", "1"]);
    assert_eq!(b["upper"], "1/4");
    let t = json(&["bounds", "--transform", "--tau", "1/2", "--s", "1/4", "--theta", "1/6"]);
    assert_eq!((t["tau"].as_str(), t["s"].as_str()), (Some("5/12"), Some("1/8")));
    let c = json(&["bounds", "--corollary", "--s", "1/4"]);
    assert_eq!(c, t);

    let out = run(&["bounds", "--sweep", "1/100:1:1/100", "--d", "2"]);
    assert!(out.status.success());
    let mut rows = csv::Reader::from_reader(out.stdout.as_slice());
    let mut n = 0;
    for row in rows.records() {
        let row = row.unwrap();
        let lower: f64 = row[1].parse().unwrap();
        let upper = cubeseeker::rational::parse(&row[2], false).unwrap();
        assert!(lower <= cubeseeker::rational::to_f64(&upper));
        n += 1;
    }
    assert_eq!(n, 100);
    assert_eq!(code(&["bounds", "--sweep", "1:1/2:1/10"]), 2);
    assert_eq!(code(&["bounds", "--tau", "0"]), 3);
}

#[test]
fn bounds_use_search_records() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("r.jsonl");
    let out = run(&[
        "search", "--d", "2", "--m", "3", "--tau", "1/2", "--mode", "weak", "--budget", "20", "--seed", "3",
        "--eps", "1e-5", "--inject", "holzman", "--out", path(&records),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&records).unwrap();
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();

    let b = json(&["bounds", "--tau", "1/2", "--d", "2", "--records", path(&records)]);
    assert_eq!(b["empirical"]["record"], first["id"]);
    // a planar record does not bound the line
    assert_eq!(code(&["bounds", "--tau", "1/2", "--d", "1", "--records", path(&records), "--record", first["id"].as_str().unwrap()]), 2);
}

#[test]
fn search_and_enumerate_errors() {
    assert_eq!(code(&["enumerate", "--d", "9"]), 4);
    assert_eq!(code(&["search", "--d", "2", "--m", "3", "--tau", "1/2", "--budget", "5"]), 2);
    assert_eq!(code(&["search", "--d", "1", "--m", "1", "--tau", "1", "--budget", "5", "--seed", "1"]), 4);
    assert_eq!(code(&["search", "--d", "2", "--m", "3", "--tau", "1/2", "--budget", "0", "--seed", "1"]), 3);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn search_is_reproducible() {
    let args = ["search", "--d", "2", "--m", "3", "--tau", "1/2", "--budget", "200", "--seed", "7", "--timestamp", "t"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn manifests_round_trip_and_detect_changes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"d":1,"m":3,"f_plus":[[0]],"f_minus":[[2]]}"#).unwrap();
    let out = dir.path().join("opt.json");
    assert_eq!(code(&["optimize", path(&cfg), "--eps", "1e-5", "--out", path(&out)]), 0);
    let manifest = dir.path().join("opt.json.manifest.json");
    let m = cubeseeker::manifest::RunManifest::read(&manifest).unwrap();
    assert_eq!(m.command, "optimize");
    assert_eq!(m.outputs[0].sha256, cubeseeker::manifest::hash_file(&out).unwrap());

    let replay_dir = dir.path().join("again");
    fs::create_dir(&replay_dir).unwrap();
    assert_eq!(code(&["replay", path(&manifest), "--out-dir", path(&replay_dir)]), 0);
    assert_eq!(fs::read(&out).unwrap(), fs::read(replay_dir.join("opt.json")).unwrap());

    // a changed input is caught before anything runs
    fs::write(&cfg, r#"{"d":1,"m":3,"f_plus":[[1]],"f_minus":[[2]]}"#).unwrap();
    assert_eq!(code(&["replay", path(&manifest), "--out-dir", path(&replay_dir)]), 3);
}
