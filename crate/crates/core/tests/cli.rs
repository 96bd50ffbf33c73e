//! CLI reports against checked-in goldens, plus exit-code conventions.

use serde_json::Value;
use std::path::Path;

use ppvkit::cli::report::input_hash;
use ppvkit::cli::{run, Command, Options};

const GOLDENS: &[(&str, &str)] = &[
    ("ppv", "ex1"),
    ("constant-quotient", "ex1"),
    ("ppv", "ex2"),
    ("constant-quotient", "ex2"),
    ("ppv", "pf"),
    ("relations", "pf"),
    ("pv", "ex1"),
    ("prolong", "ex1"),
    ("rational-integral", "pf"),
    ("ppv", "c7"),
];

fn read(rel: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn reports_match_goldens() {
    for (cmd, input) in GOLDENS {
        let text = read(&format!("data/{input}.toml"));
        let report = run(Command::parse(cmd).unwrap(), &text, &Options::default()).unwrap();
        let golden: Value = serde_json::from_str(&read(&format!("golden/{cmd}-{input}.json"))).unwrap();
        assert_eq!(report.json, golden, "{cmd} on {input}");
        assert_eq!(report.exit_code, 0, "{cmd} on {input}");
    }
}

#[test]
fn hash_is_sha256_of_the_document() {
    assert_eq!(input_hash("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

#[test]
fn malformed_documents_exit_one() {
    let opts = Options::default();
    for doc in ["matrix = [[\"t/\"]]", "matrix = [[\"1\", \"2\"]]", "not toml", "matrix = [[\"1/z\"]]"] {
        let err = run(Command::Pv, doc, &opts).unwrap_err();
        assert_eq!(err.exit_code(), 1, "{doc}");
    }
    let zero = Options {
        max_s: Some(0),
        ..Options::default()
    };
    assert_eq!(run(Command::Ppv, "matrix = [[\"t/x\"]]", &zero).unwrap_err().exit_code(), 1);
    assert!(Command::parse("solve").is_none());
}

#[test]
fn unsupported_systems_exit_two() {
    let doc = "matrix = [[\"1\", \"1\"], [\"x\", \"1\"]]";
    let report = run(Command::Pv, doc, &Options::default()).unwrap();
    assert_eq!(report.exit_code, 2);
    assert_eq!(report.json["outcome"], "unsupported");
    let report = run(Command::Ppv, doc, &Options::default()).unwrap();
    assert_eq!(report.exit_code, 2);
}

#[test]
fn bound_limits_the_ppv_search() {
    let opts = Options {
        max_s: Some(1),
        ..Options::default()
    };
    let report = run(Command::Ppv, "matrix = [[\"t/x\"]]", &opts).unwrap();
    // level 1 is reached but its projection is never tested
    assert_eq!(report.json["outcome"], "not_halted");
    assert_eq!(report.exit_code, 2);
}
