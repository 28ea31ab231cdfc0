use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gmt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmt")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn bundled(name: &str) -> String {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_str().unwrap().to_string()
}

fn fresh_fixtures() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fx");
    assert_eq!(code(&gmt(&["fixtures", "--output", out.to_str().unwrap()])), 0);
    (dir, out)
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn bundled_fixtures_are_current() {
    let (_tmp, dir) = fresh_fixtures();
    for name in ["cp2.w.json", "cp2.gw.json", "octic.w.json", "octic.gw.json"] {
        assert_eq!(fs::read(p(&dir, name)).unwrap(), fs::read(bundled(name)).unwrap(), "{name}");
    }
}

#[test]
fn fixtures_rerun_is_byte_identical() {
    let (_tmp, dir) = fresh_fixtures();
    let first = fs::read(p(&dir, "octic.w.json")).unwrap();
    assert_eq!(code(&gmt(&["fixtures", "--output", dir.to_str().unwrap()])), 0);
    assert_eq!(fs::read(p(&dir, "octic.w.json")).unwrap(), first);
}

#[test]
fn fixtures_into_bad_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("plain");
    fs::write(&file, "x").unwrap();
    let out = gmt(&["fixtures", "--output", &p(&file, "sub")]);
    assert_eq!(code(&out), 1);
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&gmt(&["validate", "--input", &bundled("octic.w.json")])), 0);
    assert_eq!(code(&gmt(&["validate", "--input", &bundled("octic.gw.json")])), 0);
    assert_eq!(code(&gmt(&["validate", "--input", "/nonexistent/t.json"])), 1);

    let tmp = tempfile::tempdir().unwrap();
    let dup = tmp.path().join("dup.json");
    fs::write(
        &dup,
        r#"{"kind": "W", "N": 8, "k": 8, "entries": [
            {"a": 2, "b": 2, "insertions": [2], "d": 1, "value": "1"},
            {"a": 2, "b": 2, "insertions": [2], "d": 1, "value": "2"}
        ]}"#,
    )
    .unwrap();
    let out = gmt(&["validate", "--input", dup.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("w(2,2|2)_1"));
}

#[test]
fn context_override_mismatch() {
    let out = gmt(&["validate", "--input", &bundled("octic.w.json"), "--N", "5"]);
    assert_eq!(code(&out), 2);
    assert_eq!(code(&gmt(&["validate", "--input", &bundled("octic.w.json"), "--N", "8", "--k", "8"])), 0);
}

#[test]
fn verify_theorem_on_fixtures() {
    for family in ["octic", "cp2"] {
        let w = bundled(&format!("{family}.w.json"));
        let gw = bundled(&format!("{family}.gw.json"));
        let out = gmt(&["verify-theorem", "--w", &w, "--gw", &gw, "--all"]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
    let out = gmt(&[
        "verify-theorem",
        "--w",
        &bundled("octic.w.json"),
        "--gw",
        &bundled("octic.gw.json"),
        "--key",
        "2,2|2|1",
        "--key",
        "2,2|2|2",
    ]);
    let text = stdout(&out);
    assert!(text.contains("PASS w(2,2|2)_1") && text.contains("PASS w(2,2|2)_2"), "{text}");
    assert!(text.contains("2 passed, 0 failed"));
}

#[test]
fn verify_theorem_reports_perturbation() {
    let tmp = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(bundled("octic.w.json")).unwrap().replace("83871744", "83871745");
    let w = tmp.path().join("w.json");
    fs::write(&w, text).unwrap();
    let out = gmt(&["verify-theorem", "--w", w.to_str().unwrap(), "--gw", &bundled("octic.gw.json"), "--all"]);
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("FAIL w(2,2|2)_1") && text.contains("difference lhs - rhs = 1"), "{text}");
}

#[test]
fn gw_from_w_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out_path = p(tmp.path(), "gw.json");
    let out = gmt(&["gw-from-w", "--w", &bundled("octic.w.json"), "--all", "--output", &out_path]);
    assert_eq!(code(&out), 0);
    let written = fs::read_to_string(&out_path).unwrap();
    assert!(written.contains("\"59021312\"") && written.contains("\"821654084851712\""));
    assert_eq!(written, fs::read_to_string(bundled("octic.gw.json")).unwrap());

    let out = gmt(&["gw-from-w", "--w", &bundled("cp2.w.json"), "--key", "1,1|2,2|1"]);
    assert_eq!(stdout(&out), "<2,2>_1 = 1\n1 entries\n");

    let out = gmt(&["gw-from-w", "--w", &bundled("cp2.w.json"), "--dmax", "0", "--nmax", "0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["table"]["entries"].as_array().unwrap().len(), 0);
}

#[test]
fn w_from_gw_output() {
    let tmp = tempfile::tempdir().unwrap();
    let mirror = tmp.path().join("mirror.json");
    fs::write(
        &mirror,
        r#"{"kind": "W", "N": 8, "k": 8, "entries": [
            {"a": 4, "b": 0, "insertions": [2], "d": 1, "value": "24850432"}
        ]}"#,
    )
    .unwrap();
    let out = gmt(&[
        "w-from-gw",
        "--gw",
        &bundled("octic.gw.json"),
        "--mirror-data",
        mirror.to_str().unwrap(),
        "--key",
        "2,2|2|1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "w(2,2|2)_1 = 83871744\n1 entries\n");
}

#[test]
fn verify_conjecture_runs() {
    let out = gmt(&[
        "verify-conjecture",
        "--w",
        &bundled("octic.w.json"),
        "--gw",
        &bundled("octic.gw.json"),
        "--a",
        "2",
        "--b",
        "2",
        "--dmax",
        "2",
        "--nmax",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = gmt(&[
        "verify-conjecture",
        "--w",
        &bundled("cp2.w.json"),
        "--gw",
        &bundled("cp2.gw.json"),
        "--a",
        "1",
        "--b",
        "1",
        "--dmax",
        "1",
        "--nmax",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = gmt(&["verify-conjecture", "--selftest", "--trials", "10", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).ends_with("10/10 trials passed\n"));
}

#[test]
fn predict_worked_examples() {
    let out = gmt(&["predict", "--N", "4", "--k", "1", "--key", "1,2|2|1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("coinciding={2} new: count -1 excluded"), "{text}");
    assert!(!text.contains(" permitted"));

    let out = gmt(&["predict", "--N", "4", "--k", "1", "--key", "1,1|2,2|1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let permitted: Vec<_> = v["patterns"].as_array().unwrap().iter().filter(|p| p["permitted"] == true).collect();
    assert_eq!(permitted.len(), 1);
    assert_eq!(permitted[0]["count"], 0);

    let out = gmt(&["predict", "--N", "8", "--k", "8", "--key", "2,2|2|2"]);
    let text = stdout(&out);
    assert!(text.contains("g=2 l=1 σ=(2) coinciding={2} new: count 2 permitted"), "{text}");
    assert!(text.contains("note: old pattern g=1 l=1: l-1-(N-k)g = 0 but -(g-l)-(N-k-1)g = 1"));
    assert!(!text.contains("unsupported"));

    assert_eq!(code(&gmt(&["predict", "--key", "2,2|2|1"])), 2);
    assert_eq!(code(&gmt(&["predict", "--N", "8", "--k", "8", "--key", "2,2|3|1"])), 2);
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify-theorem",
        "--w",
        &bundled("octic.w.json"),
        "--gw",
        &bundled("octic.gw.json"),
        "--all",
        "--format",
        "json",
    ];
    let first = gmt(&args).stdout;
    assert_eq!(gmt(&args).stdout, first);
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["passed"], 5);
}

#[test]
fn missing_entries_policy() {
    // the d = 2 identity needs w(5,0|)_1; drop it and the run fails unless missing means zero
    let tmp = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(bundled("octic.w.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut v = v.clone();
    v["entries"].as_array_mut().unwrap().retain(|e| e["a"] != 5);
    let w = tmp.path().join("w.json");
    fs::write(&w, serde_json::to_string(&v).unwrap()).unwrap();
    let base = ["verify-theorem", "--w", w.to_str().unwrap(), "--gw", &bundled("octic.gw.json"), "--key", "2,2|2|2"];
    let out = gmt(&base);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing table entry for w(5,0|)_1"));
    let mut with_zero = base.to_vec();
    with_zero.push("--assume-missing-zero");
    assert_eq!(code(&gmt(&with_zero)), 3);
}
