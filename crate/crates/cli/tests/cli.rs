use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model(name: &str) -> PathBuf {
    models().join(format!("{name}.model"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_movcone")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Copies the bundled models (and their ideal files) into a scratch dir.
fn scratch() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(models()).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    dir
}

fn edit(dir: &Path, name: &str, from: &str, to: &str) -> PathBuf {
    let p = dir.join(format!("{name}.model"));
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.contains(from), "{from}");
    fs::write(&p, text.replacen(from, to, 1)).unwrap();
    p
}

#[test]
fn verify_passes_on_bundled_models() {
    for name in ["example41", "oguiso", "synthetic-bminus-empty"] {
        let o = run(&["verify", path(&model(name)), "--samples", "200"]);
        assert!(o.status.success(), "{name}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
    let o = run(&["verify", path(&model("example41")), "--samples", "50"]);
    assert!(stdout(&o).contains("lambda = 23 + 4*sqrt(33)"));
}

#[test]
fn verify_reports_a_tampered_involution() {
    let dir = scratch();
    let p = edit(dir.path(), "example41", "[1, 6, 0, -1]", "[1, 6, 0, 1]");
    let o = run(&["verify", path(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL\tinvolution")), "{}", stdout(&o));
}

#[test]
fn verify_reports_inconsistent_c2() {
    let dir = scratch();
    let p = edit(dir.path(), "example41", "[44, 56]", "[45, 56]");
    let o = run(&["verify", path(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL\tchi-integrality")), "{}", stdout(&o));
}

#[test]
fn reduce_and_h0() {
    let m = model("example41");
    let o = run(&["reduce", path(&m), "-1,8"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "word: [sigma^-1]\nreduced: 1,0\n");

    let o = run(&["h0", path(&m), "1,1"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("h0: 16\n"), "{}", stdout(&o));

    let o = run(&["h0", path(&m), "-1,0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["h0", path(&m), "one,two"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_summary_and_csv() {
    let m = model("oguiso");
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let o = run(&["sweep", path(&m), "--out", path(&csv)]);
    assert!(o.status.success());
    let out = stdout(&o);
    let slope: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("slope: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((1.45..1.55).contains(&slope));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("m,p,q,h0,l1_approx,word_len,skipped\n"));
    assert_eq!(text.lines().count(), 14);

    let o = run(&["sweep", path(&m), "--out", "-"]);
    assert!(stdout(&o).starts_with("m,p,q"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("slope: "));
}

#[test]
fn sweep_rejects_bad_ample_class() {
    let o = run(&["sweep", path(&model("example41")), "--ample", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sweep", path(&model("example41")), "--mmin", "8", "--mmax", "64"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_files_exit_with_parse_code() {
    let dir = scratch();
    let bad = dir.path().join("bad.model");
    fs::write(&bad, "{ \"name\": ").unwrap();
    assert_eq!(run(&["verify", path(&bad)]).status.code(), Some(3));

    let p = edit(dir.path(), "oguiso", "columns-are-images", "rows-are-images");
    assert_eq!(run(&["h0", path(&p), "1,1"]).status.code(), Some(3));

    let missing = dir.path().join("nope.model");
    assert_eq!(run(&["verify", path(&missing)]).status.code(), Some(3));
}

#[test]
fn bundled_models_round_trip() {
    for name in ["example41", "oguiso", "synthetic-bminus-empty"] {
        let text = fs::read_to_string(model(name)).unwrap();
        let file = movcone_core::model_file::ModelFile::parse(&text).unwrap();
        assert_eq!(file.render(), text, "{name}");
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["convention"], "columns-are-images");
    }
}

#[test]
fn derive_recomputes_oguiso() {
    let dir = scratch();
    let p = dir.path().join("oguiso.model");
    let before = fs::read_to_string(&p).unwrap();
    let o = run(&["derive", path(&p)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("triform (2, 6, 6, 2), c2form (44, 44)"));
    assert_eq!(fs::read_to_string(&p).unwrap(), before);

    let out = dir.path().join("fresh.model");
    edit(dir.path(), "oguiso", "\"triform\": [2, 6, 6, 2]", "\"triform\": [2, 6, 6, 3]");
    assert_eq!(run(&["derive", path(&p), "--out", path(&out)]).status.code(), Some(2));
    let o = run(&["derive", path(&p), "--out", path(&out), "--force"]);
    assert!(o.status.success());
    let fresh: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(fresh["triform"], serde_json::json!([2, 6, 6, 2]));
}

#[test]
fn derive_surfaces_the_example_discrepancy() {
    let dir = scratch();
    let p = dir.path().join("example41.model");
    let before = fs::read_to_string(&p).unwrap();
    let o = run(&["derive", path(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));
    assert_eq!(fs::read_to_string(&p).unwrap(), before);
}
