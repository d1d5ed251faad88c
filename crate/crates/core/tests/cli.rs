use std::process::{Command, Output};

use enriques_monodromy::catalog::{embedded_default, Catalog};
use enriques_monodromy::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["enriques"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enriques"))
        .args(args)
        .output()
        .unwrap()
}

fn assert_single_error_line(err: &str, prefix: &str) {
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err:?}");
    assert!(lines[0].starts_with(prefix), "{err:?}");
}

#[test]
fn monodromy_json_reports_d8() {
    let (code, out, err) = run(&[
        "monodromy",
        "--half1",
        "V4+S",
        "--half2",
        "4S",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["half2"]["order"], 8);
    assert_eq!(v["half2"]["id"], "D8");
    assert_eq!(v["family"], "GR_Surface");
    assert_eq!(v["exceptional"], true);
}

#[test]
fn json_is_byte_stable() {
    for args in [
        &[
            "monodromy",
            "--half1",
            "V3",
            "--half2",
            "V1 + 4S",
            "--format",
            "json",
        ][..],
        &[
            "derive", "--half1", "V3", "--half2", "V1 + 4S", "--format", "json",
        ][..],
        &["verify", "--format", "json"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}

#[test]
fn classify_undefined() {
    let (code, out, _) = run(&["classify", "--half1", "0", "--half2", "0"]);
    assert_eq!(code, 0);
    assert!(out.to_lowercase().contains("undefined"), "{out}");
}

#[test]
fn derive_dot() {
    let (code, out, _) = run(&[
        "derive", "--half1", "V3", "--half2", "V1 + 4S", "--format", "dot",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches(" -> ").count(), 4);
}

#[test]
fn exit_codes_and_prefixes() {
    let (code, _, err) = run(&["monodromy", "--half1", "V5", "--half2", "0"]);
    assert_eq!(code, 2);
    assert_single_error_line(&err, "E_NOT_IN_CATALOG");

    let (code, out, err) = run(&["classify", "--half1", "V0", "--half2", "0"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert_single_error_line(&err, "E_VALIDATION");

    let (code, _, err) = run(&[
        "classify", "--half1", "0", "--half2", "0", "--format", "dot",
    ]);
    assert_eq!(code, 1);
    assert_single_error_line(&err, "E_USAGE");

    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    assert_single_error_line(&err, "E_USAGE");

    let (code, _, err) = run(&["scheme", "parse", "<1<>"]);
    assert_eq!(code, 3);
    assert_single_error_line(&err, "E_VALIDATION");

    let (code, _, err) = run(&["verify", "--catalog", "/nonexistent/catalog.json"]);
    assert_eq!(code, 3);
    assert_single_error_line(&err, "E_VALIDATION");
}

#[test]
fn scheme_and_rootscheme_commands() {
    let (code, out, _) = run(&["scheme", "canon", "<1<1> u 1>"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "<1 u 1<1>>");

    let (code, out, _) = run(&["scheme", "equiv", "<2|0>", "<0|2>"]);
    assert_eq!(code, 0);
    assert!(out.contains("true"), "{out}");

    let (code, out, _) = run(&[
        "rootscheme",
        "sym",
        "([] . [] . [] . [] .)",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["induced"]["id"], "D8");
}

#[test]
fn catalog_dump_parses_back() {
    let (code, out, _) = run(&["catalog-dump"]);
    assert_eq!(code, 0);
    let c = Catalog::parse(&out).unwrap();
    assert_eq!(c, embedded_default());
    assert_eq!(c.format(), out);
}

#[test]
fn binary_streams() {
    let ok = binary(&["verify"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(ok.stderr.is_empty());

    let bad = binary(&["monodromy", "--half1", "V5", "--half2", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("E_NOT_IN_CATALOG"));
}
