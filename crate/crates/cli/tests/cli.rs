use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tom(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tom")).current_dir(dir).args(args).output().unwrap()
}

fn ok(out: Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn default_config_parses_back() {
    let tmp = tempfile::tempdir().unwrap();
    let text = ok(tom(tmp.path(), &["default-config"]));
    assert!(text.contains("[graph]") && text.contains("layout_seed = 42"));
    fs::write(tmp.path().join("tom.toml"), &text).unwrap();
    ok(tom(tmp.path(), &["--config", "tom.toml", "synth", "--docs", "40", "--output", "corpus.jsonl"]));
    ok(tom(tmp.path(), &["--config", "tom.toml", "--quiet", "run", "--out", "a"]));
    assert!(tmp.path().join("a/manifest.json").is_file());
}

#[test]
fn stage_by_stage_matches_run() {
    let tmp = tempfile::tempdir().unwrap();
    ok(tom(tmp.path(), &["synth", "--docs", "60", "--output", "corpus.jsonl"]));
    ok(tom(tmp.path(), &["run", "--out", "full", "--seed", "7", "--threads", "2"]));
    for stage in ["ingest", "termgraph", "topics", "basemap", "overlay", "cluster", "baseline", "trends", "crosstab", "render"] {
        ok(tom(tmp.path(), &["--quiet", "--out", "staged", "--seed", "7", stage]));
    }
    for f in ["topics.json", "basemap.json", "tom_clusters.csv", "vsm_clusters.csv", "crosstab.csv", "profiles/0/overlay.svg"] {
        assert_eq!(fs::read(tmp.path().join("full").join(f)).unwrap(), fs::read(tmp.path().join("staged").join(f)).unwrap(), "{f}");
    }
    let manifest = fs::read_to_string(tmp.path().join("full/manifest.json")).unwrap();
    assert!(manifest.contains("\"layout_seed\": 7"));
}

#[test]
fn errors_exit_nonzero_with_stage_name() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tom(tmp.path(), &["topics", "--out", "nothing"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("topics"));
    let out = tom(tmp.path(), &["run", "--input", "missing.jsonl"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ingest"));
    fs::write(tmp.path().join("bad.toml"), "[graph]\nedge_threshold = 2.0\n").unwrap();
    assert!(!tom(tmp.path(), &["--config", "bad.toml", "run"]).status.success());
}
