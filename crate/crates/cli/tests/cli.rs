use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn prequant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prequant"))
        .args(args)
        .env_remove("PREQUANT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn scenario_list_and_run() {
    let out = prequant(&["scenario", "list"]);
    assert!(out.status.success());
    let list = stdout_json(&out);
    let names: Vec<&str> = list
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"string-su2"));

    let out = prequant(&["scenario", "run", "heisenberg-r2", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["seed"], 9);
    assert_eq!(report["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(
        prequant(&["scenario", "run", "no-such-scenario"]).status.code(),
        Some(2)
    );
    assert_eq!(
        prequant(&["scenario", "run", "torus-prequantization", "--set", "q=3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        prequant(&["scenario", "run", "torus-prequantization", "--set", "k=1/2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(prequant(&["bracket", "--omega", "dx0^dx1^dx2"]).status.code(), Some(2));
}

#[test]
fn seed_from_environment_and_json_file() {
    let path = scratch("string-su2.json");
    let out = Command::new(env!("CARGO_BIN_EXE_prequant"))
        .args(["scenario", "run", "string-su2", "--json", path.to_str().unwrap()])
        .env("PREQUANT_SEED", "77")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    let report: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(report["seed"], 77);

    let again = Command::new(env!("CARGO_BIN_EXE_prequant"))
        .args(["scenario", "run", "string-su2", "--seed", "77"])
        .output()
        .unwrap();
    assert_eq!(again.stdout, first);
}

#[test]
fn prequantize_round_trip() {
    let c1 = scratch("k1.json");
    let c3 = scratch("k3.json");
    for (k, path) in [("1", &c1), ("3", &c3)] {
        let out = prequant(&["deligne", "prequantize", k]);
        assert!(out.status.success());
        std::fs::write(path, &out.stdout).unwrap();
    }
    let check = prequant(&["deligne", "check", c3.to_str().unwrap()]);
    assert_eq!(stdout_json(&check)["is_cocycle"], true);

    let curv = stdout_json(&prequant(&["deligne", "curv", c3.to_str().unwrap()]));
    assert_eq!(curv["curvature"], "[(3)] dx0^dx1");

    assert_eq!(
        prequant(&["deligne", "gauge", c1.to_str().unwrap(), c1.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let apart = prequant(&["deligne", "gauge", c1.to_str().unwrap(), c3.to_str().unwrap()]);
    assert_eq!(apart.status.code(), Some(1));
    assert_eq!(stdout_json(&apart)["equivalent"], false);
}

#[test]
fn brackets_on_r3() {
    let out = prequant(&[
        "bracket",
        "--omega",
        "dx0^dx1^dx2",
        "--n",
        "2",
        "--pair",
        "x0*dx1",
        "--pair",
        "x1*dx2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["result"]["display"], "(0, [(1)] dx1)");

    let ks = stdout_json(&prequant(&[
        "ks",
        "--omega",
        "dx0^dx1^dx2",
        "--n",
        "2",
        "--field",
        "pd0",
        "--field",
        "pd1",
    ]));
    assert_eq!(ks["cocycle"], "[(1)] dx2");

    let out = prequant(&[
        "jacobi",
        "--omega",
        "dx0^dx1^dx2",
        "--n",
        "2",
        "--pair",
        "x0*dx1",
        "--pair",
        "x2*dx0",
        "--higher",
        "1:x1",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn algebra_commands() {
    assert_eq!(prequant(&["lverify", "--algebra", "su2"]).status.code(), Some(0));
    let coc = stdout_json(&prequant(&["cocycle", "--algebra", "su2", "--cochain", "killing"]));
    assert_eq!(coc["cocycle"], true);

    let not_closed = scratch("one-cochain.json");
    std::fs::write(
        &not_closed,
        r#"{"degree": 1, "values": [{"inputs": ["e1"], "value": "1"}]}"#,
    )
    .unwrap();
    let out = prequant(&["cocycle", "--algebra", "su2", "--cochain", not_closed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let ext = prequant(&["extend", "--algebra", "su2", "--cochain", "killing"]);
    assert!(ext.status.success());
    let ext_path = scratch("string.json");
    std::fs::write(&ext_path, &ext.stdout).unwrap();
    assert_eq!(
        prequant(&["lverify", "--algebra", ext_path.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn kernel_and_compare() {
    let k = stdout_json(&prequant(&["kernel", "--chart", "T2", "--n", "2", "--band", "1"]));
    assert_eq!(k["betti"], serde_json::json!([1, 2]));
    let cmp = stdout_json(&prequant(&["deligne", "compare", "--corpus", "r3"]));
    assert_eq!(cmp["all_exact"], true);
}
