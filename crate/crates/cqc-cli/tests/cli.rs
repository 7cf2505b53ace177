//! End-to-end checks of the binary: output shapes, exit codes, backoff
//! behaviour and the documented fixture results.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../cqc/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn cqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn disambiguate_picks_sense_two_for_both_words() {
    let out = cqc(&["disambiguate", "--dict", &fixture("worked_example.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("language\tn\t1\tlingua\t2\t"));
    assert!(text.contains("language\tn\t1\tlinguaggio\t2\t"));
}

#[test]
fn disambiguate_summary_counts_senses_and_words() {
    let out = cqc(&["disambiguate", "--dict", &fixture("play.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    let json_start = text.find('{').unwrap();
    let summary: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(summary["entries"], 11);
    assert_eq!(summary["senses"], 14);
    assert_eq!(
        summary["answered"].as_u64().unwrap() + summary["abstained"].as_u64().unwrap(),
        22
    );
}

#[test]
fn first_sense_backoff_answers_every_resolvable_word() {
    let out = cqc(&[
        "disambiguate",
        "--dict",
        &fixture("worked_example.json"),
        "--algorithm",
        "fs",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains("ABSTAIN"));
    let json_start = text.find('{').unwrap();
    let summary: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(summary["abstained"], 0);

    // backoff reaches the same full coverage for the path algorithm
    let backed = cqc(&[
        "disambiguate",
        "--dict",
        &fixture("worked_example.json"),
        "--backoff",
        "fs",
    ]);
    let text = stdout(&backed);
    let json_start = text.find('{').unwrap();
    let summary: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(summary["abstained"], 0);
}

#[test]
fn evaluate_reports_perfect_metrics_on_the_worked_gold() {
    let out = cqc(&[
        "evaluate",
        "--dict",
        &fixture("worked_example.json"),
        "--gold",
        &fixture("gold_worked.tsv"),
    ]);
    assert!(out.status.success());
    let metrics: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(metrics["f1"], 1.0);
    assert_eq!(metrics["counts"]["gold_total"], 2);
}

#[test]
fn enhance_reports_six_ranked_issues_and_honours_the_type_filter() {
    let out = cqc(&["enhance", "--dict", &fixture("six_patterns.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].starts_with("use_of_variant\t0.1353\t"));
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(stderr.contains("very unlikely"));

    let filtered = cqc(&[
        "enhance",
        "--dict",
        &fixture("six_patterns.json"),
        "--type",
        "misalignment",
    ]);
    let text = stdout(&filtered);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("misalignment\t"));

    let clean = cqc(&["enhance", "--dict", &fixture("clean_reciprocal.json")]);
    assert!(clean.status.success());
    assert!(stdout(&clean).is_empty());
}

#[test]
fn synonyms_sense_level_prints_the_two_decimal_score() {
    let dir = tempfile::tempdir().unwrap();
    let dict = dir.path().join("two.json");
    std::fs::write(
        &dict,
        r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[{"id":"1","translations":["a"],"ref":null}]}
        ]}"#,
    )
    .unwrap();
    let out = cqc(&[
        "synonyms",
        "--dict",
        dict.to_str().unwrap(),
        "--lemma",
        "a",
        "--pos",
        "n",
        "--lang",
        "en",
        "--level",
        "sense",
        "--sense",
        "1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "it\tb#n#1\t0.14\n");
}

#[test]
fn synonyms_word_level_reports_precision_at_k() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.txt");
    std::fs::write(&gold, "felice#a\n").unwrap();
    let out = cqc(&[
        "synonyms",
        "--dict",
        &fixture("toefl_dict.json"),
        "--lemma",
        "glad",
        "--pos",
        "a",
        "--lang",
        "en",
        "--k",
        "1,3",
        "--gold-synonyms",
        gold.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let json_start = text.find('[').unwrap();
    let report: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(report[0]["k"], 1);
    assert_eq!(report[0]["precision"], 1.0);
    assert_eq!(report[1]["k"], 3);
    assert!((report[1]["precision"].as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-9);
}

#[test]
fn toefl_answers_four_of_five() {
    let out = cqc(&[
        "toefl",
        "--dict",
        &fixture("toefl_dict.json"),
        "--questions",
        &fixture("toefl_small.tsv"),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("glad\thappy\t"));
    assert!(text.contains("phantom\tABSTAIN\t0.00"));
    let json_start = text.find('{').unwrap();
    let report: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(report["precision"], 1.0);
    assert_eq!(report["recall"], 0.8);
}

#[test]
fn graph_dump_lists_edges_with_kind() {
    let out = cqc(&["graph-dump", "--dict", &fixture("worked_example.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("language\tn\t1\tlingua\tn\t2\ttranslation\n"));
    assert!(text.lines().all(|l| l.split('\t').count() == 7));

    let plain = cqc(&[
        "graph-dump",
        "--dict",
        &fixture("worked_example.json"),
        "--include-meta",
        "false",
    ]);
    assert!(!stdout(&plain).contains("\tmeta\n"));
    assert!(stdout(&out).contains("\tmeta\n"));
}

#[test]
fn input_errors_exit_one() {
    let missing = cqc(&["disambiguate", "--dict", "/no/such/file.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(!String::from_utf8(missing.stderr).unwrap().is_empty());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "not json").unwrap();
    let parse = cqc(&["disambiguate", "--dict", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(1));
}

#[test]
fn config_errors_exit_two() {
    let dict = fixture("worked_example.json");
    let deep = cqc(&["disambiguate", "--dict", &dict, "--max-depth", "9"]);
    assert_eq!(deep.status.code(), Some(2));

    let algo = cqc(&["disambiguate", "--dict", &dict, "--algorithm", "bogus"]);
    assert_eq!(algo.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.tsv");
    std::fs::write(&empty, "").unwrap();
    let gold = cqc(&[
        "evaluate",
        "--dict",
        &dict,
        "--gold",
        empty.to_str().unwrap(),
    ]);
    assert_eq!(gold.status.code(), Some(2));
}
