use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_andreadakis")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim().to_string()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn gamma_degree() {
    assert_eq!(stdout(&["gamma-degree", "--n", "2", "--max-degree", "5", "[x1,[x1,x2]]"]), "3");
    assert_eq!(json(&["gamma-degree", "--n", "2", "--max-degree", "2", "[x1,[x1,x2]]"]), serde_json::json!({"degree_at_least": 3}));
    assert_eq!(json(&["gamma-degree", "--n", "3", "--max-degree", "4", "x1 x2"]), serde_json::json!({"degree": 1}));
}

#[test]
fn automorphisms() {
    assert_eq!(stdout(&["aut", "a-degree", "--n", "2", "--images", "x1; x1 x2 x1^-1"]), "1");
    assert_eq!(
        stdout(&["aut", "g-degree-triangular", "--n", "3", "--max-degree", "5", "--images", "x1; x2; [x1,x2] x3 [x1,x2]^-1"]),
        "2"
    );
    assert_eq!(stdout(&["aut", "decompose", "--n", "3", "--images", "x1; x2; x1 x3 x1^-1"]), "K(3,1)");
}

#[test]
fn braids() {
    let combed = stdout(&["braid", "comb", "--n", "3", "A(1,2) A(1,3)"]);
    assert_eq!(combed, "b2 = A(1,2)\nb3 = A(1,3)");
    let v = json(&["braid", "degree", "--n", "3", "--max-degree", "5", "A(1,2) A(1,3) A(1,2)^-1 A(1,3)^-1"]);
    assert_eq!(v["verdict"], "EQUAL");
    assert_eq!(v["gamma"]["degree"], 2);
}

#[test]
fn lie_and_dk() {
    assert_eq!(stdout(&["lie", "dim", "--n", "2", "--k", "5"]), "6");
    assert_eq!(stdout(&["lie", "bracket", "--n", "2", "x1", "x2"]), "[x1,x2]");
    assert_eq!(stdout(&["dk", "dim", "--n", "4", "--k", "2"]), "4");
    assert_eq!(stdout(&["dk", "bracket", "--n", "3", "t(1,2)", "t(1,3) + t(2,3)"]), "0");
}

#[test]
fn verify_exit_codes_and_determinism() {
    let args = ["--format", "json", "verify", "--target", "braid", "--n", "3", "--samples", "20", "--seed", "4"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = Command::new(env!("CARGO_BIN_EXE_andreadakis"))
        .args(args)
        .env("ANDREADAKIS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["failed"], 0);
    assert!(report.get("wall_time_ms").is_none());

    let replay = json(&["verify", "--target", "braid", "--n", "3", "--samples", "20", "--seed", "4", "--replay", "3"]);
    assert_eq!(replay, report["records"][3]);

    let timed = json(&["verify", "--target", "dk", "--n", "3", "--samples", "4", "--timing"]);
    assert!(timed["wall_time_ms"].is_u64());
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(run(&["verify", "--target", "braid", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--target", "nope", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["gamma-degree", "--n", "2", "x7"]).status.code(), Some(2));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_andreadakis"))
        .args(["lie", "dim", "--n", "2", "--k", "3"])
        .env("ANDREADAKIS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn tables() {
    let v = json(&["tables", "--n-max", "3", "--k-max", "5"]);
    assert_eq!(v["witt"][0], serde_json::json!([2, 1, 2, 3, 6]));
    assert_eq!(v["dk"][1], serde_json::json!([3, 1, 2, 3, 6]));
    assert_eq!(v["enumeration_agrees"], true);
}
