use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const GRADUATION: &str = include_str!("../../core/tests/data/graduation.xml");
const CROPS: &str = include_str!("../../core/tests/data/crops.xml");
const REMOTE_A: &str =
    "      <edge toID=\"0.4\" type=\"A\">\n        <attributes remote=\"True\"/>\n      </edge>\n";

fn ucca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucca"))
        .args(args)
        .env_remove("UCCA_OUTPUT")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn dir_with(files: &[(&str, &str)]) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in files {
        fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn without_remote() -> String {
    assert!(GRADUATION.contains(REMOTE_A));
    GRADUATION.replace(REMOTE_A, "")
}

fn with_label(old: &str, new: &str) -> String {
    assert!(GRADUATION.contains(old));
    GRADUATION.replacen(old, new, 1)
}

#[test]
fn identity_evaluation_scores_one() {
    let gold = dir_with(&[("f1.xml", GRADUATION), ("f2.xml", CROPS)]);
    let out = ucca(&[
        "evaluate",
        "--gold",
        s(gold.path()),
        "--system",
        s(gold.path()),
        "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["labeled"]["all"]["f1"], 1.0);
    assert_eq!(v["unlabeled"]["all"]["f1"], 1.0);
    // 11 + 24 edges, minus the one into the implicit unit (empty yield)
    assert_eq!(v["labeled"]["all"]["gold"], 34);
}

#[test]
fn remote_deleted_system_scores_zero_on_remotes() {
    let gold = dir_with(&[("f1.xml", GRADUATION)]);
    let system = dir_with(&[("f1.xml", &without_remote())]);
    let out = ucca(&[
        "evaluate",
        "--gold",
        s(gold.path()),
        "--system",
        s(system.path()),
        "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["labeled"]["remote"]["f1"], 0.0);
    assert_eq!(v["labeled"]["primary"]["f1"], 1.0);
    let all = v["labeled"]["all"]["f1"].as_f64().unwrap();
    assert!((all - 20.0 / 21.0).abs() < 1e-9);
}

#[test]
fn table_and_json_carry_the_same_numbers() {
    let gold = dir_with(&[("f1.xml", GRADUATION)]);
    let system = dir_with(&[("f1.xml", &without_remote())]);
    let args = [
        "evaluate",
        "--gold",
        s(gold.path()),
        "--system",
        s(system.path()),
        "--fine-grained",
    ];
    let table = stdout(&ucca(&args));
    let mut with_json = args.to_vec();
    with_json.push("--json");
    let v = json(&ucca(&with_json));
    for (mode, class) in [
        ("labeled", "all"),
        ("labeled", "remote"),
        ("unlabeled", "primary"),
    ] {
        let r = &v[mode][class];
        let row = format!(
            "{:<20} {:>8.4} {:>8.4} {:>8.4}  {}/{}/{}",
            format!("{mode} {class}"),
            r["precision"].as_f64().unwrap(),
            r["recall"].as_f64().unwrap(),
            r["f1"].as_f64().unwrap(),
            r["matched"],
            r["predicted"],
            r["gold"]
        );
        assert!(table.contains(&row), "{row}\n{table}");
    }
    assert_eq!(v["categories"]["A"]["matched"], 2);
    assert!(table.contains("Participant (A)"));
}

#[test]
fn section_flags() {
    let gold = dir_with(&[("f1.xml", GRADUATION)]);
    let g = s(gold.path());
    let v = json(&ucca(&[
        "evaluate",
        "--gold",
        g,
        "--system",
        g,
        "--json",
        "--unlabeled",
    ]));
    assert!(v.get("labeled").is_none());
    assert!(v.get("unlabeled").is_some());
    assert!(v.get("categories").is_none());
    let v = json(&ucca(&["evaluate", "--gold", g, "--system", g, "--json"]));
    assert!(v.get("labeled").is_some() && v.get("categories").is_none());
    let v = json(&ucca(&[
        "evaluate",
        "--gold",
        g,
        "--system",
        g,
        "--json",
        "--exclude-punct",
    ]));
    assert_eq!(v["labeled"]["all"]["gold"], 10);
}

#[test]
fn evaluation_normalizes_unless_told_not_to() {
    // Gold says D where the system still says T.
    let gold = dir_with(&[(
        "f1.xml",
        &with_label(r#"toID="0.1" type="L""#, r#"toID="0.1" type="D""#),
    )]);
    let system = dir_with(&[(
        "f1.xml",
        &with_label(r#"toID="0.1" type="L""#, r#"toID="0.1" type="T""#),
    )]);
    let base = [
        "evaluate",
        "--gold",
        s(gold.path()),
        "--system",
        s(system.path()),
        "--json",
    ];
    let v = json(&ucca(&base));
    assert_eq!(v["labeled"]["all"]["f1"], 1.0);
    let mut raw = base.to_vec();
    raw.push("--no-normalize");
    let v = json(&ucca(&raw));
    assert_eq!(v["labeled"]["all"]["matched"], 10);
}

#[test]
fn single_files_pair_directly() {
    let a = dir_with(&[("gold.xml", GRADUATION), ("sys.xml", &without_remote())]);
    let out = ucca(&[
        "evaluate",
        "--gold",
        s(&path(&a, "gold.xml")),
        "--system",
        s(&path(&a, "sys.xml")),
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["labeled"]["remote"]["gold"], 1);
}

#[test]
fn unmatched_files_fail_loudly() {
    let gold = dir_with(&[("a.xml", GRADUATION), ("b.xml", CROPS)]);
    let system = dir_with(&[("a.xml", GRADUATION), ("c.xml", CROPS)]);
    let out = ucca(&[
        "evaluate",
        "--gold",
        s(gold.path()),
        "--system",
        s(system.path()),
    ]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("no system file for: b"), "{err}");
    assert!(err.contains("no gold file for: c"), "{err}");
    assert!(stdout(&out).is_empty());
}

#[test]
fn pairing_ignores_listing_order() {
    // Files are created in a different order in each directory.
    let gold = dir_with(&[("x.xml", GRADUATION), ("y.xml", CROPS)]);
    let system = dir_with(&[("y.xml", CROPS), ("x.xml", &without_remote())]);
    let v = json(&ucca(&[
        "evaluate",
        "--gold",
        s(gold.path()),
        "--system",
        s(system.path()),
        "--json",
    ]));
    assert_eq!(v["labeled"]["primary"]["f1"], 1.0);
    assert_eq!(v["labeled"]["remote"]["matched"], 0);
}

#[test]
fn token_mismatch_exits_3() {
    let gold = dir_with(&[("p.xml", GRADUATION)]);
    let system = dir_with(&[("p.xml", CROPS)]);
    let out = ucca(&[
        "evaluate",
        "--gold",
        s(gold.path()),
        "--system",
        s(system.path()),
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("token mismatch"));
}

#[test]
fn parse_errors_exit_2_and_name_the_file() {
    let dir = dir_with(&[
        ("good.xml", GRADUATION),
        ("bad.xml", "<root passageID=\"x\">"),
    ]);
    for args in [
        vec!["stats", s(dir.path())],
        vec!["validate", s(dir.path())],
        vec![
            "evaluate",
            "--gold",
            s(dir.path()),
            "--system",
            s(dir.path()),
        ],
    ] {
        let out = ucca(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(stderr(&out).contains("bad.xml"), "{}", stderr(&out));
    }
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&ucca(&[])), 1);
    assert_eq!(code(&ucca(&["frobnicate"])), 1);
    assert_eq!(code(&ucca(&["evaluate", "--system", "x"])), 1);
    assert_eq!(code(&ucca(&["convert", "x.xml", "--to", "amr"])), 1);
    assert_eq!(code(&ucca(&["stats", "/definitely/not/here"])), 1);
    assert_eq!(code(&ucca(&["validate", "x", "--rules", "V9"])), 1);
    assert_eq!(code(&ucca(&["--help"])), 0);
}

#[test]
fn validate_reports_legacy_labels() {
    let dir = dir_with(&[(
        "t.xml",
        &with_label(r#"toID="0.1" type="L""#, r#"toID="0.1" type="T""#),
    )]);
    let file = path(&dir, "t.xml");
    let out = ucca(&["validate", s(&file), "--json"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines
        .iter()
        .any(|v| v["rule"] == "V0" && v["passage"] == "graduation"));
    for v in &lines {
        for key in ["passage", "rule", "ref", "message"] {
            assert!(v.get(key).is_some());
        }
    }
    assert_eq!(code(&ucca(&["validate", s(&file), "--strict"])), 4);
    let only_v2 = ucca(&["validate", s(&file), "--strict", "--rules", "V2"]);
    assert_eq!(code(&only_v2), 0);
    assert!(stdout(&only_v2).is_empty());
}

#[test]
fn normalize_writes_clean_files() {
    let input = dir_with(&[(
        "t.xml",
        &with_label(r#"toID="0.1" type="L""#, r#"toID="0.1" type="T""#),
    )]);
    let out_dir = tempfile::tempdir().unwrap();
    let target = out_dir.path().join("normalized");
    let out = ucca(&["normalize", s(input.path()), "--out", s(&target)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let written = fs::read_to_string(target.join("t.xml")).unwrap();
    assert!(written.contains(r#"toID="0.1" type="D""#));
    assert_eq!(code(&ucca(&["validate", s(&target), "--strict"])), 0);
}

#[test]
fn stats_output() {
    let dir = dir_with(&[("f1.xml", GRADUATION)]);
    let v = json(&ucca(&["stats", s(dir.path()), "--json"]));
    assert_eq!(v["tokens"], 7);
    assert_eq!(v["non_terminals"], 4);
    assert_eq!(v["edges"], 11);
    let table = stdout(&ucca(&["stats", s(dir.path())]));
    assert!(table.contains("% remote"));
    assert!(table.contains("9.09"));
    assert!(table.lines().all(|l| l == l.trim_end()));
}

#[test]
fn output_format_from_environment() {
    let dir = dir_with(&[("f1.xml", GRADUATION)]);
    let out = Command::new(env!("CARGO_BIN_EXE_ucca"))
        .args(["stats", s(dir.path())])
        .env("UCCA_OUTPUT", "json")
        .output()
        .unwrap();
    assert_eq!(json(&out)["passages"], 1);
    let out = Command::new(env!("CARGO_BIN_EXE_ucca"))
        .args(["stats", s(dir.path()), "--format", "table"])
        .env("UCCA_OUTPUT", "json")
        .output()
        .unwrap();
    assert!(stdout(&out).starts_with("# passages"));
}

#[test]
fn convert_text_and_bilexical() {
    let dir = dir_with(&[("a.xml", GRADUATION), ("b.xml", CROPS)]);
    let text = stdout(&ucca(&["convert", s(dir.path()), "--to", "text"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "After graduation , John moved to Paris");

    let bilex = stdout(&ucca(&["convert", s(dir.path()), "--to", "bilexical"]));
    let blocks: Vec<&str> = bilex.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].lines().next(), Some("1\tAfter\t2\tL"));
    assert_eq!(blocks[1].lines().count(), 19);

    let out = tempfile::tempdir().unwrap();
    let status = ucca(&[
        "convert",
        s(dir.path()),
        "--to",
        "bilexical",
        "--out",
        s(out.path()),
    ]);
    assert_eq!(code(&status), 0);
    let a = fs::read_to_string(out.path().join("a.tsv")).unwrap();
    assert_eq!(a.lines().nth(1), Some("2\tgraduation\t0\tROOT"));
    assert!(out.path().join("b.tsv").exists());
}

#[test]
fn runs_are_deterministic() {
    let dir = dir_with(&[("a.xml", GRADUATION), ("b.xml", CROPS)]);
    let d = s(dir.path());
    for args in [
        vec!["stats", d, "--json"],
        vec![
            "evaluate",
            "--gold",
            d,
            "--system",
            d,
            "--fine-grained",
            "--json",
        ],
        vec!["validate", d],
        vec!["convert", d, "--to", "bilexical"],
    ] {
        assert_eq!(ucca(&args).stdout, ucca(&args).stdout, "{args:?}");
    }
}
