use std::io::Write;
use std::process::{Command, Output, Stdio};

use clusterexp::geometry::Triangulation;
use clusterexp::laurent::LaurentPoly;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_clusterexp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        pipe.write_all(text.as_bytes()).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_prints_text_and_json() {
    let o = run(
        &[
            "expand",
            "--orientation",
            "FF",
            "--interval",
            "1,2",
            "--json",
        ],
        None,
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1*x4*x7 + x2*x3*x5 + x3*x4*x6"));
    let v: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    let p = LaurentPoly::from_json(&v).unwrap();
    assert_eq!(p.to_string(), "x1*x4*x7 + x2*x3*x5 + x3*x4*x6");
}

#[test]
fn reads_a_document_from_stdin() {
    let o = run(
        &["expand", "--input", "-", "--method", "snake"],
        Some(r#"{"n":3,"orientation":"FF"}"#),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o).trim(),
        "x1*x2*x4*x8 + x1*x4*x7*x9 + x2*x3*x5*x9 + x3*x4*x6*x9"
    );
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(
        run(&["expand", "--input", "-"], Some("{not json"))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["expand", "--input", "-"], Some(r#"{"n":2}"#))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["expand", "--n", "2", "--interval", "1,3"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["expand", "--orientation", "FX"], None).status.code(),
        Some(2)
    );
}

#[test]
fn seed_limit_breach_exits_3() {
    let o = run(
        &[
            "expand",
            "--n",
            "3",
            "--method",
            "oracle",
            "--seed-limit",
            "3",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn triangulation_export_round_trips() {
    for orientation in ["F", "FB", "BFFB"] {
        let o = run(
            &[
                "export",
                "--orientation",
                orientation,
                "--what",
                "triangulation",
                "--format",
                "json",
            ],
            None,
        );
        assert!(o.status.success());
        let back = Triangulation::from_json_str(&stdout(&o)).unwrap();
        let again = run(
            &[
                "export",
                "--input",
                "-",
                "--what",
                "triangulation",
                "--format",
                "json",
            ],
            Some(&stdout(&o)),
        );
        assert_eq!(stdout(&again), stdout(&o));
        assert_eq!(back.n(), orientation.len() + 1);
    }
}

#[test]
fn snake_export_counts() {
    let o = run(
        &[
            "export",
            "--orientation",
            "FF",
            "--what",
            "snake",
            "--interval",
            "1,2",
            "--format",
            "json",
        ],
        None,
    );
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let edges = v["edges"].as_array().unwrap();
    let diagonals = edges.iter().filter(|e| e["kind"] == "TileDiagonal").count();
    assert_eq!(v["num_vertices"].as_u64(), Some(6));
    assert_eq!(edges.len() - diagonals, 7);
    assert_eq!(diagonals, 2);
}

#[test]
fn dot_exports_style_frozen_vertices() {
    let o = run(
        &[
            "export",
            "--orientation",
            "F",
            "--what",
            "qp",
            "--format",
            "dot",
        ],
        None,
    );
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("fillcolor=lightgray").count(), 5);
    assert_eq!(dot.matches("style=dashed").count(), 3);
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--all", "--max-n", "3"], None);
    let b = run(&["verify", "--all", "--max-n", "3"], None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
