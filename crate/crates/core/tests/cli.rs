use std::path::PathBuf;
use std::process::Command;

use jsonschema::JSONSchema;
use serde_json::Value;
use shadowtrace::cli::{run, Outcome};
use shadowtrace::group::TransferMatrix;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn path(rel: &str) -> String {
    root().join(rel).to_string_lossy().into_owned()
}

fn st(args: &[&str]) -> Outcome {
    run(std::iter::once("shadowtrace").chain(args.iter().copied()))
}

fn schema(name: &str) -> JSONSchema {
    let load = |f: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(root().join("schemas").join(f)).unwrap()).unwrap()
    };
    let mut opts = JSONSchema::options();
    for f in ["transfer_matrix.schema.json", "check.schema.json"] {
        opts.with_document(format!("https://shadowtrace.local/schemas/{f}"), load(f));
    }
    opts.compile(&load(name)).expect("schema compiles")
}

/// Parses a `--format json` output, which must be one newline-terminated document.
fn single_document(out: &str) -> Value {
    assert!(out.ends_with("}\n"), "not newline-terminated: {out:?}");
    let mut stream = serde_json::Deserializer::from_str(out).into_iter::<Value>();
    let v = stream.next().unwrap().unwrap();
    assert!(stream.next().is_none(), "more than one document");
    v
}

fn assert_valid(schema_name: &str, v: &Value) {
    let s = schema(schema_name);
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema_name}: {msgs:?}");
}

#[test]
fn s3_a3_table() {
    let out = st(&["transfer", "--group", &path("data/groups/s3.json"), "--subgroup", "a3", "--format", "table"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let rows: Vec<&str> = out.stdout.lines().skip(1).map(|l| l.split("  ").find(|s| !s.is_empty()).unwrap().trim()).collect();
    assert_eq!(rows, ["e", "(1 2 3)", "(1 3 2)"]);
}

#[test]
fn table_and_json_agree() {
    let g = path("data/groups/s3.json");
    for sub in ["a3", "trivial", "s2", "<(1 2 3), (1 2)>"] {
        let table = st(&["transfer", "--group", &g, "--subgroup", sub]);
        let json = st(&["transfer", "--group", &g, "--subgroup", sub, "--format", "json"]);
        assert_eq!((table.code, json.code), (0, 0));
        let v = single_document(&json.stdout);
        assert_valid("transfer.schema.json", &v);
        let t = TransferMatrix::from_json(&v["transfer"]).unwrap();
        let parsed = TransferMatrix::parse_table(&table.stdout, &t.row_labels, &t.col_labels).unwrap();
        assert_eq!(parsed, t.entries, "{sub}");
    }
}

#[test]
fn cli_json_matches_golden() {
    let out = st(&["transfer", "--group", &path("data/groups/s3.json"), "--subgroup", "a3", "--format", "json"]);
    let v = single_document(&out.stdout);
    let golden = std::fs::read_to_string(root().join("tests/golden/s3_a3.json")).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v["transfer"]).unwrap() + "\n", golden);
}

#[test]
fn z4_becker_gottlieb() {
    let out = st(&["transfer", "--group", &path("data/groups/z4.json"), "--subgroup", "{0,2}", "--check-bg"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("BG composite = 2 (index 2), Pass"), "{}", out.stdout);
    let out = st(&["transfer", "--group", &path("data/groups/z4.json"), "--subgroup", "{0,2}", "--check-bg", "--format", "json"]);
    let v = single_document(&out.stdout);
    assert_eq!(v["checks"][0]["value"], 2);
    assert_eq!(v["checks"][0]["verdict"], "Pass");
}

#[test]
fn failing_check_exits_one() {
    // the Euler composite is not scalar for S3 / A3
    let out = st(&["transfer", "--group", &path("data/groups/s3.json"), "--subgroup", "a3", "--check-euler"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("`euler`"), "{}", out.stderr);
    assert!(out.stdout.contains("Fail"));
}

#[test]
fn corpus_all_proved() {
    let out = st(&["corpus", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = single_document(&out.stdout);
    assert_valid("run_report.schema.json", &v);
    let tasks = v["tasks"].as_array().unwrap();
    assert_eq!(tasks.len(), 7);
    assert!(tasks.iter().all(|t| t["verdict"] == "Proved"));
}

#[test]
fn demo_document_checks() {
    let out = st(&["check", &path("data/models/demo.st"), "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = single_document(&out.stdout);
    assert_valid("run_report.schema.json", &v);
    let names: Vec<&str> = v["tasks"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["tri_left", "trace Q2", "trace R", "transfer C", "transfer D"]);
}

fn without_timings(mut v: Value) -> Value {
    for t in v["tasks"].as_array_mut().unwrap() {
        t["elapsed_ms"] = Value::Null;
    }
    v
}

#[test]
fn jobs_keep_input_order() {
    let file = path("data/models/demo.st");
    let seq = single_document(&st(&["check", &file, "--format", "json"]).stdout);
    let par = single_document(&st(&["--jobs", "3", "check", &file, "--format", "json"]).stdout);
    assert_eq!(without_timings(seq), without_timings(par));
}

#[test]
fn trace_of_document_and_json_file() {
    let out = st(&["trace", "--model", "bimod", &path("data/models/demo.st"), "--bimodule", "Q2", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = single_document(&out.stdout);
    assert_valid("run_report.schema.json", &v);
    assert_eq!(v["tasks"][0]["artifacts"]["matrix"], serde_json::json!([["2"]]));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("m.json");
    let qz2: Value = serde_json::from_str(&std::fs::read_to_string(root().join("data/models/qz2.json")).unwrap()).unwrap();
    let doc = serde_json::json!({
        "left": qz2,
        "right": qz2,
        "bimodule": {
            "dim": 2,
            "left": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
            "right": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]
        }
    });
    std::fs::write(&f, doc.to_string()).unwrap();
    let out = st(&["trace", "--model", "bimod", f.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("Pass"));
}

#[test]
fn normalize_reports_normal_form() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("n.st");
    std::fs::write(&f, "0cell A;\n1cell P : A -> A;\n2cell f : P => P;\nexpr e = id(P) ; f ; id(P);\n").unwrap();
    let out = st(&["normalize", f.to_str().unwrap(), "--expr", "e", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = single_document(&out.stdout);
    assert_valid("normalize.schema.json", &v);
    assert_eq!(v["normal_form"], "f");
    assert_eq!(st(&["normalize", f.to_str().unwrap(), "--expr", "nope"]).code, 2);
}

#[test]
fn unknown_search_names_the_task() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s.st");
    std::fs::write(
        &f,
        "0cell A;\n1cell P : A -> A;\n2cell f : P => P;\n2cell g : P => P;\nsearch same : f == g budget 50;\n",
    )
    .unwrap();
    let out = st(&["check", f.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("task `same` Unknown"), "{}", out.stderr);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.st");
    std::fs::write(&f, "0cell A;\n1cell X : A -> B;\n").unwrap();
    let out = st(&["check", f.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains(":2:16:"), "{}", out.stderr);

    std::fs::write(&f, "0cell A, B;\n1cell X : A -> B;\nshadow;\nexpr e = sh[id(X)];\n").unwrap();
    let out = st(&["check", f.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains(":4:10: ill-typed"), "{}", out.stderr);

    assert_eq!(st(&["check", "/nonexistent/file.st"]).code, 2);
    assert_eq!(st(&["frobnicate"]).code, 2);
    assert_eq!(st(&["--jobs", "0", "corpus"]).code, 2);
    assert_eq!(st(&["transfer", "--group", &path("data/groups/s3.json"), "--subgroup", "{1,2}"]).code, 2);
    assert_eq!(st(&["transfer", "--group", &path("data/groups/s3.json"), "--subgroup", "missing"]).code, 2);
    assert_eq!(st(&["--help"]).code, 0);
}

#[test]
fn model_files_resolve_relative_to_the_document() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(root().join("data/groups/z4.json"), dir.path().join("z4.json")).unwrap();
    let f = dir.path().join("t.st");
    std::fs::write(&f, "group G = \"z4.json\";\ncover C = G / z2;\ntransfer C check_bg check_euler;\n").unwrap();
    let out = st(&["check", f.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    std::fs::write(&f, "group G = \"missing.json\";\n").unwrap();
    assert_eq!(st(&["check", f.to_str().unwrap()]).code, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_shadowtrace");
    let ok = Command::new(bin).arg("corpus").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout).unwrap().contains("7/7 tasks ok"));
    let bad = Command::new(bin).args(["check", "/nonexistent.st"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
