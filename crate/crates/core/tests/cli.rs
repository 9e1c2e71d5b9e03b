use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sparsereal"))
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, Value, Output) {
    let out = bin().args(args).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exited normally"), v, out)
}

fn bound_value<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["name"] == name)
        .map(|b| &b["value"])
        .unwrap()
}

#[test]
fn bound_on_trinomial_file() {
    let (code, v, _) = run(&["bound", "--system", &data("trinomial.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "1");
    let main = bound_value(&v, "polytope_volume");
    assert_eq!(
        (main["num"].to_string(), main["den"].to_string()),
        ("30".into(), "1".into())
    );
}

#[test]
fn snf_inline_matrix() {
    let (code, v, _) = run(&["snf", "--matrix", "2 0; 0 3"]);
    assert_eq!(code, 0);
    assert_eq!(v["D"].to_string(), "[1,6]");
}

#[test]
fn thousandth_root_of_two() {
    let (code, v, _) = run(&[
        "solve-ksum",
        "--f",
        "x^1000 - 2",
        "--R",
        "2",
        "--eps",
        "1e-12",
    ]);
    assert_eq!(code, 0);
    assert!(
        v["root"]["value"].to_string().starts_with("1.000693387"),
        "{v}"
    );
    assert_eq!(v["sign_alternations"], 1);
}

#[test]
fn exit_codes_and_error_documents() {
    let (code, v, _) = run(&["snf", "--matrix", "1 2; 3 q"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "parse_error");

    let (code, v, _) = run(&["bound", "--system", "/nonexistent/system.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "io_error");

    let (code, v, _) = run(&[
        "solve-ksum",
        "--f",
        "x^3 - 2*x + 2",
        "--R",
        "2",
        "--eps",
        "1e-6",
    ]);
    assert_eq!(code, 3);
    assert!(v["error"]["code"].is_string());

    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
    let (code, _, out) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("solve-binomial"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec![
            "bound".to_string(),
            "--system".into(),
            data("spikes_n2_s1.json"),
        ],
        vec![
            "solve-ksum".into(),
            "--f".into(),
            "x^(7/3) - 3*x^(1/2) - 1".into(),
            "--R".into(),
            "10".into(),
            "--eps".into(),
            "1e-20".into(),
        ],
        vec!["solve-binomial".into(), data("binomial_2x2.json")],
    ] {
        let a = bin().args(&args).output().unwrap();
        let b = bin().args(&args).output().unwrap();
        assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn batch_reports_each_file_in_order() {
    let files = [
        data("trinomial.json"),
        data("two_circles.json"),
        "/nonexistent.json".to_string(),
    ];
    let (code, v, _) = run(&[
        "bound", "--batch", &files[0], "--batch", &files[1], "--batch", &files[2],
    ]);
    assert_eq!(code, 0);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for (r, f) in reports.iter().zip(&files) {
        assert_eq!(r["file"], f.as_str());
    }
    assert!(reports[0]["result"]["bounds"].is_array());
    assert_eq!(reports[2]["result"]["error"]["code"], "io_error");
}

#[test]
fn binomial_from_file_and_stdin() {
    let (code, v, _) = run(&["solve-binomial", &data("binomial_2x2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["complex_root_count"], 1);
    let coords: Vec<f64> = v["roots"][0]["coords"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_f64().unwrap())
        .collect();
    assert!((coords[0] - 2.0).abs() < 1e-10 && (coords[1] - 3.0).abs() < 1e-10);

    let mut child = bin()
        .args(["solve-binomial", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"D": [[2, 0], [0, 3]], "c": [-4, -8], "R": 10, "epsilon": "1/1000000"}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["complex_root_count"], 6);
    assert_eq!(v["snf_diagonal"].to_string(), "[1,6]");
}

#[test]
fn volume_and_text_report() {
    let (code, v, _) = run(&["volume", "--points", "0 0 0; 1 0 0; 0 1 0; 0 0 1"]);
    assert_eq!(code, 0);
    assert_eq!(v["normalized_volume"]["num"], 1);

    let out = bin()
        .args(["--text", "snf", "--matrix", "2 0; 0 3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "D: [1, 6]"), "{text}");
}
