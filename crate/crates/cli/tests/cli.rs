use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_comment-lens"));
    cmd.env_remove("RUST_LOG");
    cmd
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn error_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap_or("");
    serde_json::from_str(line).unwrap_or_else(|_| panic!("not a JSON error line: {text}"))
}

fn demo_store(dir: &Path) -> PathBuf {
    let store = dir.join("store");
    let out = run(&[
        "ingest",
        "--manifest",
        s(&fixtures().join("demo/manifest.tsv")),
        "--out",
        s(&store),
        "--bootstrap-labels",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    store
}

#[test]
fn train_classify_adapt_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let store = demo_store(dir.path());
    let models = dir.path().join("models");
    for task in ["extent", "target", "category"] {
        let model = models.join(format!("{task}.json"));
        let out = run(&["train", "--task", task, "--store", s(&store), "--out", s(&model), "--min-examples", "2"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(models.join(format!("{task}.rules.txt")).is_file());
    }
    let classified = dir.path().join("classified.jsonl");
    let out = run(&["classify", "--store", s(&store), "--models", s(&models), "--out", s(&classified)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let records = fs::read_to_string(store.join("java-demo/records.jsonl")).unwrap();
    let text = fs::read_to_string(&classified).unwrap();
    assert_eq!(text.lines().count(), records.lines().count());
    assert!(text.lines().all(|l| {
        let v: Value = serde_json::from_str(l).unwrap();
        v["category"].is_string() && v["target"].is_string()
    }));

    let out = run(&["stats", "--store", s(&store), "--models", s(&models), "--json"]);
    let stats: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stats[0]["project"], "java-demo");

    let out = run(&["mine", "--store", s(&store), "--models", s(&models), "--top", "3"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 4);

    let out = run(&["grep", "--store", s(&store), "--models", s(&models), "clear", "cache"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("clear the cache"));

    let adapted = dir.path().join("py/category.json");
    let out = run(&["adapt", "--model", s(&models.join("category.json")), "--out", s(&adapted)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(adapted.is_file());
}

#[test]
fn eval_pairs_reports_scores() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.tsv");
    let mut text = String::new();
    for (actual, predicted, n) in [("Po", "Po", 31), ("Po", "Pr", 4), ("Pr", "Po", 20), ("Pr", "Pr", 9)] {
        for _ in 0..n {
            text += &format!("{actual}\t{predicted}\n");
        }
    }
    fs::write(&pairs, text).unwrap();
    let out = run(&["eval", "--pairs", s(&pairs)]);
    assert!(out.status.success());
    let report = String::from_utf8_lossy(&out.stdout);
    assert!(report.contains("0.61 (31/51)"), "{report}");
    assert!(report.contains("0.89 (31/35)"), "{report}");
    assert!(report.contains("accuracy 0.625 (40/64)"), "{report}");
    let out = run(&["eval", "--pairs", s(&pairs), "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["scores"][0]["tp"], 31);
}

#[test]
fn classify_on_empty_store_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let manifest = dir.path().join("m.tsv");
    fs::write(&manifest, "empty\tempty\n").unwrap();
    let store = dir.path().join("store");
    assert!(run(&["ingest", "--manifest", s(&manifest), "--out", s(&store)]).status.success());
    let models = fixtures_models(dir.path());
    let out = run(&["classify", "--store", s(&store), "--models", s(&models)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

fn fixtures_models(dir: &Path) -> PathBuf {
    let store = demo_store(&dir.join("demo"));
    let models = dir.join("models");
    for task in ["target", "category"] {
        let model = models.join(format!("{task}.json"));
        assert!(run(&["train", "--task", task, "--store", s(&store), "--out", s(&model)]).status.success());
    }
    models
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sample", "--store", s(&dir.path().join("missing")), "--size", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_json(&out)["error"], "usage");

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let manifest = dir.path().join("m.tsv");
    fs::write(&manifest, "gone\tno/such/dir\nalso-gone\tnowhere\n").unwrap();
    let out = run(&["ingest", "--manifest", s(&manifest), "--out", s(&dir.path().join("st"))]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_json(&out)["code"], 3);

    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "Postcondition\tNotALabel\n").unwrap();
    let out = run(&["eval", "--pairs", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"], "data");

    let out = run(&["annotate", "--tasks", s(&bad), "--sessions", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kl_and_agree_from_records() {
    let dir = tempfile::tempdir().unwrap();
    let store = demo_store(dir.path());
    let records = store.join("java-demo/records.jsonl");
    let out = run(&["kl", "--p", s(&records), "--q", s(&records), "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["kl"].as_f64().unwrap().abs() < 1e-12);

    let text = fs::read_to_string(&records).unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    fs::write(&a, &text).unwrap();
    fs::write(&b, &text).unwrap();
    let out = run(&["agree", s(&a), s(&b), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["fleiss_kappa"], 1.0);
    assert_eq!(v["cohen_kappa"], 1.0);
    let out = run(&["agree", s(&a)]);
    assert_eq!(out.status.code(), Some(2));
}
