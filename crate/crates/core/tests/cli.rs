use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn gammacx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gammacx")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

const F2: &str = r#"{"vertices":["x","y"],"edges":[]}"#;
const K3: &str = r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"],["a","c"]]}"#;
const SWAP: &str = r#"{"graph":{"vertices":["x","y"],"edges":[]},"targets":[{"name":"s","images":{"x":"y","y":"x"}}],"relations":["s^2"]}"#;

#[test]
fn partitions_of_f2_and_k3() {
    let d = TempDir::new().unwrap();
    let o = gammacx(&["partitions", &write(&d, "f2.json", F2)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o).as_array().unwrap().len(), 2);
    assert!(o.stdout.ends_with(b"\n"));
    let o = gammacx(&["partitions", &write(&d, "k3.json", K3)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), serde_json::json!([]));
}

#[test]
fn dot_input_is_accepted() {
    let d = TempDir::new().unwrap();
    let o = gammacx(&["partitions", &write(&d, "f2.dot", "graph { x; y; }")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o).as_array().unwrap().len(), 2);
}

#[test]
fn malformed_input_exits_2() {
    let d = TempDir::new().unwrap();
    let o = gammacx(&["partitions", &write(&d, "bad.json", "{\"vertices\": [")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = gammacx(&["partitions", d.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = gammacx(&["types", &write(&d, "loop.json", r#"{"vertices":["a"],"edges":[["a","a"]]}"#)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn types_of_f2() {
    let d = TempDir::new().unwrap();
    let o = gammacx(&["types", &write(&d, "f2.json", F2), "--max-entries", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["complete"], true);
    let mut orders: Vec<u64> = v["types"].as_array().unwrap().iter().map(|t| t["automorphism_order"].as_u64().unwrap()).collect();
    orders.sort();
    assert_eq!(orders, vec![8, 12]);
}

#[test]
fn invariant_subgraphs_and_subset_test() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "p3.json", r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]]}"#);
    let o = gammacx(&["invariant-subgraphs", &g]);
    assert_eq!(o.status.code(), Some(0));
    let all = stdout_json(&o);
    assert!(all.as_array().unwrap().iter().any(|e| e["vertices"] == serde_json::json!(["a", "c"])));
    let o = gammacx(&["invariant-subgraphs", &g, "--subset", "a"]);
    let v = stdout_json(&o);
    assert_eq!(v["invariant"], false);
    assert_eq!(v["violations"][0]["condition"], "i");
    assert_eq!(v["violations"][0]["y"], "c");
}

#[test]
fn blowup_from_collection() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "f2.json", F2);
    let o = gammacx(&["partitions", &g]);
    let ps = stdout_json(&o);
    let one = serde_json::json!([ps[0]]);
    let c = write(&d, "c.json", &one.to_string());
    let o = gammacx(&["blowup", &g, &c]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["complex"]["num_vertices"], 2);
    assert_eq!(v["complex"]["edges"].as_array().unwrap().len(), 3);
    // The two partitions of F2 are incompatible.
    let c = write(&d, "both.json", &ps.to_string());
    assert_eq!(gammacx(&["blowup", &g, &c]).status.code(), Some(2));
}

#[test]
fn realize_check_and_tamper() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "swap.json", SWAP);
    let cert = d.path().join("cert.json");
    let o = gammacx(&["realize", &p, "-o", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read(&cert).unwrap();
    let o = gammacx(&["realize", &p]);
    assert_eq!(o.stdout, first, "output is deterministic");

    let o = gammacx(&["check", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["valid"], true);

    let mut v: Value = serde_json::from_slice(&first).unwrap();
    v["witnesses"]["s"] = Value::String("x y".into());
    let bad = write(&d, "bad.json", &v.to_string());
    let o = gammacx(&["check", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout_json(&o)["reason"].as_str().unwrap().contains("witness fails"));
}

#[test]
fn realize_not_found_exits_3() {
    // A transvection has infinite order, so no complex carries it; with no
    // relation the search runs through the whole small budget.
    let d = TempDir::new().unwrap();
    let p = write(
        &d,
        "t.json",
        r#"{"graph":{"vertices":["x","y"],"edges":[]},"targets":[{"name":"t","images":{"x":"x y","y":"y"},"inverse":{"x":"x y^-1","y":"y"}}],"budget":{"max_entries":1,"subdivide":false}}"#,
    );
    let o = gammacx(&["realize", &p]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["status"], "not-found-within-budget");
}

#[test]
fn unknown_vertex_in_problem_exits_2() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "p.json", &SWAP.replace(r#""y":"x""#, r#""q":"x""#));
    assert_eq!(gammacx(&["realize", &p]).status.code(), Some(2));
}
