use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ramcycles"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn ok_json(args: &[&str], stdin: &str) -> Value {
    let out = run(args, stdin);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn err_json(args: &[&str], stdin: &str, exit: i32) -> Value {
    let out = run(args, stdin);
    assert_eq!(
        out.status.code(),
        Some(exit),
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(out.stdout.is_empty());
    let record: Value = serde_json::from_slice(&out.stderr).unwrap();
    for key in ["code", "message", "location"] {
        assert!(record.get(key).is_some(), "missing {key} in {record}");
    }
    record
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/golden")
        .join(name)
}

const H1: &str = r#"[[0, {"a": "0", "b": "1"}], [{"a": "0", "b": "-1"}, 0]]"#;

#[test]
fn unimodular_cycle_is_a_single_point() {
    let v = ok_json(&["cycle", "--p", "3", "--epsilon", "-1"], "[[1]]");
    assert_eq!(v["status"], "nonempty");
    assert_eq!(v["t"], 0);
    assert_eq!(v["dimension"], 0);
    assert_eq!(v["single_point"], true);
    assert_eq!(v["delta_sq"], "2");
    // u₀ = −(−1)⁻¹·2 = 2
    assert_eq!(v["gram"], json!([[{"a": "2", "b": "0"}]]));
}

#[test]
fn global_reports_match_golden_files() {
    for name in ["global_identity", "global_diag_2_5", "global_diag_1_3"] {
        let input = std::fs::read_to_string(golden(&format!("{name}.input.json"))).unwrap();
        let expected = std::fs::read_to_string(golden(&format!("{name}.output.json"))).unwrap();
        let out = run(&["global"], &input);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{name}");
    }
    let v = ok_json(
        &["global"],
        &std::fs::read_to_string(golden("global_diag_2_5.input.json")).unwrap(),
    );
    assert_eq!(v["status"], "empty");
    assert_eq!(v["diff0"], json!([2, 5]));
}

#[test]
fn file_argument_and_stdin_agree() {
    let path = golden("global_identity.input.json");
    let from_file = run(&["global", path.to_str().unwrap()], "");
    let from_stdin = run(&["global", "-"], &std::fs::read_to_string(&path).unwrap());
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_stdin.stdout);
    let missing = run(&["global", "/nonexistent/request.json"], "");
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn domain_errors_exit_2() {
    let r = err_json(&["cycle", "--p", "2"], "[[1]]", 2);
    assert_eq!(r["code"], "unsupported-prime");
    let r = err_json(&["cycle", "--p", "9"], "[[1]]", 2);
    assert_eq!(r["code"], "not-prime");
    let r = err_json(&["jordan", "--p", "3"], "[[1, 1], [1, 1]]", 2);
    assert_eq!(r["code"], "singular-matrix");
    let r = err_json(&["cycle", "--p", "3", "--raw"], r#"[["1/3"]]"#, 2);
    assert_eq!(r["code"], "nonintegral");
    let r = err_json(&["cycle", "--p", "3", "--delta-sq", "1"], "[[1]]", 2);
    assert_eq!(r["code"], "invalid-context");
    let r = err_json(
        &["global"],
        r#"{"delta": -3, "matrix": [[{"x": "1/2"}]]}"#,
        2,
    );
    assert_eq!(r["code"], "not-in-ring-of-integers");
    assert_eq!(r["location"], "$.matrix[0][0]");
    let r = err_json(&["hilbert"], r#"{"a": 0, "b": 1, "place": 3}"#, 2);
    assert_eq!(r["code"], "zero-argument");
}

#[test]
fn nonintegral_t_gives_an_empty_cycle() {
    let v = ok_json(
        &["cycle", "--p", "3"],
        r#"[[1, {"a": "1/3", "b": "0"}], [{"a": "1/3", "b": "0"}, 1]]"#,
    );
    assert_eq!(v["status"], "empty-nonintegral");
    assert_eq!(v["nonintegral_entry"], json!([0, 1]));
    assert!(v.get("gram").is_none());
}

#[test]
fn schema_errors_exit_1() {
    let r = err_json(&["cycle", "--p", "3"], "[[1]", 1);
    assert_eq!(r["code"], "schema");
    assert!(r["location"].as_str().unwrap().starts_with("line 1"));
    let r = err_json(
        &["cycle", "--p", "3"],
        r#"{"matrix": [[1]], "extra": true}"#,
        1,
    );
    assert_eq!(r["location"], "$.extra");
    let r = err_json(&["cycle", "--p", "3"], r#"[[{"a": "1", "c": "2"}]]"#, 1);
    assert_eq!(r["location"], "$[0][0]");
    let r = err_json(&["jordan", "--p", "3"], "[[1, 2]]", 1);
    assert_eq!(r["code"], "dimension-mismatch");
    let r = err_json(
        &["jordan", "--p", "3"],
        r#"[[1, {"a": "0", "b": "1"}], [{"a": "0", "b": "1"}, 1]]"#,
        1,
    );
    assert_eq!(r["code"], "hermitian-violation");
    let r = err_json(
        &["global"],
        r#"{"delta": -3, "matrix": [[{"x": "1"}]], "p": 3}"#,
        1,
    );
    assert_eq!(r["code"], "schema");
    let r = err_json(&["hilbert"], r#"{"a": 1, "b": 2, "place": "north"}"#, 1);
    assert_eq!(r["location"], "$.place");
    let r = err_json(&["cycle"], "[[1]]", 1);
    assert_eq!(r["code"], "usage");
    let r = err_json(&["cycle", "--p", "3", "--epsilon", "x"], "[[1]]", 1);
    assert_eq!(r["location"], "--epsilon");
}

#[test]
fn resource_errors_exit_3() {
    let r = err_json(
        &["vertices", "--p", "3", "--raw", "--max-candidates", "3"],
        H1,
        3,
    );
    assert_eq!(r["code"], "enumeration-limit");
    let r = err_json(&["vertices", "--p", "3", "--raw", "--max-rank", "1"], H1, 3);
    assert_eq!(r["code"], "enumeration-limit");
    // det = 1000003·1000033 has no factor below the bound
    let input = r#"{"delta": -3, "matrix": [[{"x": "1000003"}, {"x": "0"}], [{"x": "0"}, {"x": "1000033"}]]}"#;
    let r = err_json(&["global", "--factor-bound", "1000"], input, 3);
    assert_eq!(r["code"], "factorization-limit");
}

#[test]
fn outputs_are_deterministic() {
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["jordan", "--p", "5"], H1),
        (vec!["cycle", "--p", "3", "--raw"], H1),
        (vec!["vertices", "--p", "3", "--raw", "--dot"], H1),
        (vec!["verify", "--p", "5", "--raw"], H1),
        (vec!["hilbert"], r#"{"a": "2/3", "b": -5, "place": 2}"#),
    ];
    for (args, input) in cases {
        let a = run(&args, input);
        let b = run(&args, input);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn scaled_gram_round_trips() {
    let inputs = [
        H1,
        "[[1, 0], [0, 3]]",
        r#"[[3, {"a": "1", "b": "1"}], [{"a": "1", "b": "-1"}, 9]]"#,
    ];
    for input in inputs {
        for eps in ["1", "-1", "2"] {
            let args = ["cycle", "--p", "5", "--epsilon", eps];
            let first = run(&args, input);
            assert_eq!(first.status.code(), Some(0));
            let v: Value = serde_json::from_slice(&first.stdout).unwrap();
            let doc = json!({"matrix": v["gram"]}).to_string();
            let again = run(&["cycle", "--p", "5", "--epsilon", eps, "--raw"], &doc);
            assert_eq!(first.stdout, again.stdout, "{input} ε = {eps}");

            let via_t = run(&["vertices", "--p", "5", "--epsilon", eps], input);
            let via_l = run(&["vertices", "--p", "5", "--epsilon", eps, "--raw"], &doc);
            assert_eq!(via_t.stdout, via_l.stdout, "{input} ε = {eps}");
        }
    }
}

#[test]
fn vertices_and_verify_agree_with_cycle() {
    let cycle = ok_json(&["cycle", "--p", "3", "--raw"], H1);
    let vertices = ok_json(&["vertices", "--p", "3", "--raw", "--dot"], H1);
    let verify = ok_json(&["verify", "--p", "3", "--raw"], H1);
    assert_eq!(vertices["max_type"], cycle["t"]);
    assert_eq!(verify["all_passed"], true);
    assert_eq!(verify["invariants"]["t"], cycle["t"]);
    assert_eq!(
        verify["vertex_count"],
        vertices["vertices"].as_array().unwrap().len()
    );
    assert!(vertices["dot"].as_str().unwrap().starts_with("digraph"));
    assert_eq!((vertices["max_count"] == 1), (cycle["irreducible"] == true));
}

#[test]
fn hilbert_command() {
    let v = ok_json(&["hilbert"], r#"{"a": -1, "b": -1, "place": "real"}"#);
    assert_eq!(v["value"], -1);
    assert_eq!(v["place"], "real");
    let v = ok_json(&["hilbert"], r#"{"a": "2", "b": "7", "place": "7"}"#);
    assert_eq!(v["value"], 1);
    let v = ok_json(&["hilbert"], r#"{"a": -1, "b": -1, "place": 2}"#);
    assert_eq!(v["value"], -1);
}

#[test]
fn jordan_output_shape() {
    let v = ok_json(&["jordan", "--p", "3"], H1);
    assert_eq!(
        v,
        json!([{"scale": 1, "rank": 2, "det_val": 2, "det_unit_is_square": v[0]["det_unit_is_square"], "split": true}])
    );
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"], "");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["jordan", "cycle", "vertices", "verify", "global", "hilbert"] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
