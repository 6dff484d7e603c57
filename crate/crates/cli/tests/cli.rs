use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use polyrigid::io::{parse_framework, write_framework};

fn polyrigid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyrigid")).args(args).env_remove("POLYRIGID_THREADS").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = polyrigid(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = polyrigid(&full);
    assert!(out.status.success(), "{full:?}: {}", String::from_utf8_lossy(&out.stderr));
    path
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn octahedron_analysis() {
    let dir = TempDir::new().unwrap();
    let file = generate(&dir, "oct.json", &["octahedron"]);
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.contains(r#""v-1": ["#) || text.contains(r#""v-1""#));
    assert!(text.contains(r#""9/10""#) && text.contains(r#""9/5""#));
    let r = json(&["analyze", s(&file)]);
    assert_eq!(r["well_positioned"], true);
    assert_eq!(r["rank"], 10);
    assert_eq!(r["rigid"], true);
    assert_eq!(r["redundant"], true);
    assert!(r["monochromatic"].as_array().unwrap().iter().all(|c| c["two_connected"] == true));
    assert_eq!(r["input"], serde_json::from_str::<Value>(&text).unwrap());
}

#[test]
fn square_and_single_edge() {
    let dir = TempDir::new().unwrap();
    let square = generate(&dir, "square.json", &["hypercube", "--d", "2"]);
    let r = json(&["analyze", s(&square)]);
    assert_eq!(r["well_positioned"], false);
    assert!(r["advisory"]["warning"].is_string());
    let edge = write(
        &dir,
        "edge.json",
        r#"{"dim": 2, "norm": "linf", "vertices": ["a", "b"], "edges": [["a", "b"]],
            "positions": {"a": ["0", "0"], "b": ["1", "0.25"]}}"#,
    );
    let r = json(&["analyze", s(&edge)]);
    assert_eq!(r["rank"], 1);
    assert_eq!(r["rigid"], false);
}

#[test]
fn generated_files_round_trip_byte_for_byte() {
    let dir = TempDir::new().unwrap();
    let seed = write(
        &dir,
        "k3.json",
        r#"{"dim": 1, "norm": "linf", "vertices": ["a", "b", "c"], "edges": [["a", "b"], ["a", "c"], ["b", "c"]],
            "positions": {"a": ["0"], "b": ["3/7"], "c": ["2.2"]}}"#,
    );
    let cases: [&[&str]; 7] = [
        &["octahedron"],
        &["k2d", "--d", "3", "--n", "6"],
        &["hypercube", "--d", "3"],
        &["np-gadget", "--seed", s(&seed), "--d", "2"],
        &["flexible", "--graph", "K4", "--norm", "l1"],
        &["random", "--graph", "double-banana", "--dim", "3", "--seed", "5"],
        &["random", "--graph", "K5", "--rigid", "--denominator-bound", "100"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = generate(&dir, &format!("f{i}.json"), args);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(write_framework(&parse_framework(&text).unwrap()), text, "{args:?}");
        let again = generate(&dir, &format!("g{i}.json"), args);
        assert_eq!(std::fs::read_to_string(again).unwrap(), text, "{args:?} is not reproducible");
    }
    let gadget = parse_framework(&std::fs::read_to_string(dir.path().join("f3.json")).unwrap()).unwrap();
    assert_eq!((gadget.graph().vertex_count(), gadget.graph().edge_count()), (7, 19));
    let k6 = parse_framework(&std::fs::read_to_string(dir.path().join("f1.json")).unwrap()).unwrap();
    assert_eq!(k6.graph().edge_count(), 15);
}

#[test]
fn global_verdicts() {
    let dir = TempDir::new().unwrap();
    let k4 = generate(&dir, "k4.json", &["random", "--graph", "K4", "--rigid", "--seed", "2"]);
    let r = json(&["global", s(&k4)]);
    assert_eq!(r["verdict"]["outcome"], "NotGloballyRigid");
    assert_eq!(r["verdict"]["generic"], false);
    let witness = r["exact"]["witness"].as_object().unwrap();
    assert_eq!(witness.len(), 4);
    // The witness has the same edge lengths as the input.
    let mut q = r["input"].clone();
    q["positions"] = r["exact"]["witness"].clone();
    let q = parse_framework(&q.to_string()).unwrap();
    let p = parse_framework(&std::fs::read_to_string(&k4).unwrap()).unwrap();
    assert_eq!(q.edge_lengths(), p.edge_lengths());
    assert_ne!(q.positions(), p.positions());

    let k5 = generate(&dir, "k5.json", &["random", "--graph", "K5", "--rigid", "--seed", "3"]);
    let r = json(&["global", s(&k5), "--assume-generic"]);
    assert_eq!(r["verdict"]["outcome"], "GloballyRigid");
    assert_eq!(r["verdict"]["generic"], true);
    assert_eq!(r["verdict"]["source"], "planar matroid");
    assert!(r["exact"].is_null());
}

#[test]
fn sparsity_reports() {
    let r = json(&["sparsity", "double-banana", "--d", "3", "--k", "6"]);
    assert_eq!(r["tight"], true);
    assert_eq!(r["matroidal"], false);
    assert!(r["rank"].is_null());
    let r = json(&["sparsity", "K5", "--d", "2", "--k", "2"]);
    assert_eq!(r["mdd_connected"], true);
    assert_eq!(r["rank"], 8);
    let r = json(&["sparsity", "K4", "--d", "2", "--k", "2"]);
    assert_eq!(r["tight"], true);
    assert_eq!(r["redundant"], false);
}

#[test]
fn witness_search() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "path.json",
        r#"{"dim": 1, "norm": "linf", "vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]],
            "positions": {"a": ["0"], "b": ["1"], "c": ["3"]}}"#,
    );
    let r = json(&["witness", s(&path), "--restarts", "50"]);
    assert_eq!(r["found"], true);
    let oct = generate(&dir, "oct.json", &["octahedron"]);
    let r = json(&["witness", s(&oct), "--restarts", "100"]);
    assert_eq!(r["found"], false);
    assert_eq!(r["message"], "none found in budget");
}

#[test]
fn exit_codes_and_diagnostics() {
    let dir = TempDir::new().unwrap();
    let out = polyrigid(&["analyze", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = write(&dir, "bad.json", "{\"dim\": 2,\n \"norm\": \"linf\",\n \"vertices\": [\"a\"], \"edges\": [], \"positions\": {\"a\": [\"0\", 1]}}");
    let out = polyrigid(&["analyze", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("positions.a[1]"), "{err}");
    assert_eq!(polyrigid(&["sparsity", "K4", "--d", "0", "--k", "1"]).status.code(), Some(2));
    assert_eq!(polyrigid(&["sparsity", "Q7", "--d", "2", "--k", "2"]).status.code(), Some(2));

    let k4 = generate(&dir, "k4.json", &["random", "--graph", "K4", "--rigid", "--seed", "2"]);
    let lax = polyrigid(&["global", s(&k4), "--budget", "1"]);
    assert_eq!(lax.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&lax.stdout).unwrap();
    assert_eq!(r["verdict"]["outcome"], "BudgetExceeded");
    assert_eq!(polyrigid(&["global", s(&k4), "--budget", "1", "--strict"]).status.code(), Some(3));
}

#[test]
fn threads_from_environment() {
    let dir = TempDir::new().unwrap();
    let k4 = generate(&dir, "k4.json", &["random", "--graph", "K4", "--rigid", "--seed", "4"]);
    let out = Command::new(env!("CARGO_BIN_EXE_polyrigid"))
        .args(["global", s(&k4)])
        .env("POLYRIGID_THREADS", "3")
        .output()
        .unwrap();
    let threaded: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(threaded["parameters"]["threads"], 3);
    let serial = json(&["global", s(&k4)]);
    assert_eq!(serial["exact"], threaded["exact"]);
}
