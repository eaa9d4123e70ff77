use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn cq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cq")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cq(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn phi_json_document() {
    let doc = json(&["phi", "--n", "4", "--d", "3"]);
    assert_eq!(doc["result"], 9);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["meta"]["params"]["phi"]["n"], 4);
    assert!(doc["meta"].get("elapsed_ms").is_none());
    let timed = json(&["phi", "--n", "3", "--d", "2", "--timings"]);
    assert!(timed["meta"]["elapsed_ms"].is_number());
}

#[test]
fn json_round_trip_is_byte_identical() {
    for args in [
        vec!["phi", "--n", "5", "--d", "8", "--format", "json"],
        vec!["phi-poly", "--d", "3", "--format", "json"],
        vec!["cells", "param", "--sigma", "1|2|3", "--format", "json"],
        vec!["monk", "--i", "2", "--w", "1,3,2,4", "--format", "json"],
    ] {
        let out = stdout(&args);
        let reparsed: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(serde_json::to_string(&reparsed).unwrap(), out.trim_end());
    }
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let one = stdout(&["delta-poly", "--m", "3", "--s", "1", "--jobs", "1", "--format", "json"]);
    let four = stdout(&["delta-poly", "--m", "3", "--s", "1", "--jobs", "4", "--format", "json"]);
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v["meta"] = Value::Null;
        v
    };
    assert_eq!(strip(&one), strip(&four));
    assert_eq!(one, stdout(&["delta-poly", "--m", "3", "--s", "1", "--jobs", "1", "--format", "json"]));
}

#[test]
fn big_integers_are_unquoted() {
    let out = stdout(&["hypersurface-count", "--d", "9", "--n", "4", "--b", "20", "--format", "json"]);
    let expected = (num_bigint::BigInt::from(4) * num_bigint::BigInt::from(8).pow(3)).pow(20);
    assert!(out.contains(&format!("\"result\":{expected}")), "{out}");
}

#[test]
fn matroid_commands() {
    let c4 = temp_file("4 4\n1 2\n2 3\n3 4\n4 1\n");
    let path = c4.path().to_str().unwrap();
    assert_eq!(stdout(&["matroid", "charpoly", "--graph", path]), "λ^3 - 4*λ^2 + 6*λ - 3\nreduced: 1 3 3\n");
    let doc = json(&["matroid", "charpoly", "--graph", path]);
    assert_eq!(doc["result"]["polynomial"]["coefficients"], serde_json::json!([-3, 6, -4, 1]));
    assert_eq!(stdout(&["matroid", "reduced", "--uniform", "3,3"]), "1 2 1\n");
    assert_eq!(stdout(&["matroid", "chromatic", "--graph", path]), "q^4 - 4*q^3 + 6*q^2 - 3*q\n");
    assert_eq!(stdout(&["matroid", "euler", "--nu", "1,2,2,1"]), "0\n");
    let looped = temp_file("1 1\n1 1\n");
    let out = cq(&["matroid", "reduced", "--graph", looped.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let matrix = temp_file("1 2 3\n");
    assert_eq!(stdout(&["matroid", "reduced", "--subspace", matrix.path().to_str().unwrap()]), "1 2\n");
    assert_eq!(stdout(&["matroid", "reduced", "--columns", matrix.path().to_str().unwrap()]), "1\n");
}

#[test]
fn toric_commands() {
    assert_eq!(stdout(&["toric", "mu-generic", "--n", "2"]), "1 2 1\n");
    assert_eq!(stdout(&["toric", "mu-generic", "--n", "3", "--distinguished", "4"]), "1 3 3 1\n");
    let doc = json(&["toric", "fan-check", "--permutohedral", "2"]);
    assert_eq!(doc["result"]["rays"], 6);
    let p2 = temp_file("2 3 3\n1 0\n0 1\n-1 -1\n1 2\n2 3\n3 1\n");
    let p2 = p2.path().to_str().unwrap();
    assert_eq!(stdout(&["toric", "integral", "--fan", p2, "--rays", "1,1"]), "1\n");
    let bad = temp_file("1 2 2\n2\n-1\n1\n2\n");
    let out = cq(&["toric", "fan-check", "--fan", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fan not smooth"));
}

#[test]
fn cells_commands() {
    assert_eq!(stdout(&["cells", "--n", "3", "--histogram"]), "1 2 3 3 2 1\n");
    assert_eq!(stdout(&["cells", "weight", "--sigma", "2|13"]), "3\n");
    assert_eq!(stdout(&["cells", "enumerate", "--n", "3"]).lines().count(), 12);
    assert_eq!(stdout(&["cells", "verify", "--sigma", "2|13", "--values", "x13=1,x23=1,y1=1"]), "true lambda=1\n");
    let doc = json(&["cells", "verify", "--sigma", "1|2|3|4", "--seed", "7"]);
    assert_eq!(doc["result"]["holds"], true);
    assert_eq!(cq(&["cells", "weight", "--sigma", "1|1"]).status.code(), Some(2));
}

#[test]
fn segre_commands() {
    let data = r#"{"degF":4,"nL":2,"mY":1,"s":[0,6]}"#;
    assert_eq!(stdout(&["segre", "mu", "--data", data, "--i", "2"]), "3\n");
    let file = temp_file(r#"{"degF":3,"nL":3,"mY":1,"s":[2,-5]}"#);
    let at = format!("@{}", file.path().display());
    assert_eq!(stdout(&["segre", "nu", "--data", &at, "--i", "3"]), "1\n");
    assert_eq!(stdout(&["segre", "correct", "--mu", "4", "--n", "5", "--b", "1", "--s", "-7,2"]), "1\n");
    assert_eq!(stdout(&["segre", "correct", "--mu", "4", "--n", "5", "--b", "-1"]), "4\n");
    assert_eq!(stdout(&["segre", "compare", "--mu", "1,2,4", "--nu", "1,3,4"]), "false\n");
}

#[test]
fn quadrics_commands() {
    assert_eq!(stdout(&["delta", "--m", "1", "--n", "3", "--r", "2"]), "3\n");
    assert_eq!(stdout(&["pataki", "--m", "1", "--n", "3", "--r", "1"]), "false\n");
    assert_eq!(stdout(&["phi-c", "--n", "4", "--c", "2", "--d", "2"]), "6\n");
    assert_eq!(stdout(&["product", "--n", "2", "--a", "2", "--b", "0"]), "4\n");
    assert_eq!(stdout(&["flag-integral", "--n", "3", "--b", "2,1"]), "1\n");
    assert_eq!(stdout(&["phi-poly", "--d", "2"]), "n - 1\n");
}

#[test]
fn exit_codes() {
    assert_eq!(cq(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cq(&["phi", "--n", "4"]).status.code(), Some(2));
    let out = cq(&["phi", "--n", "4", "--d", "11"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(cq(&["hypersurface-count", "--d", "6", "--n", "2", "--b", "1"]).status.code(), Some(3));
    assert_eq!(cq(&["flag-integral", "--n", "3", "--b", "1,1"]).status.code(), Some(3));
}
