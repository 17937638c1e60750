use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn homindex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homindex")).args(args).output().unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn list_contains_registry_names() {
    let out = homindex(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("shift:inverse-poly"));
    assert!(text.contains("potential:gaussian"));
    assert!(text.contains("kind:dirac-schatten"));
}

#[test]
fn list_json_parses() {
    let out = homindex(&["list", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().len() > 20);
}

#[test]
fn verify_symbolic_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = homindex(&["verify-symbolic", "--n-max", "4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("verify-symbolic-n4.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "check_id,anchor,value,bound,tolerance,pass");
    assert_eq!(csv.lines().count(), 1 + 16);
}

#[test]
fn shipped_configs_pass() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["run".to_string(), "--out".into(), dir.path().display().to_string()];
    for name in ["symbolic", "index_shift", "homotopy", "transgression_linear", "resolvent", "derivative", "scaling"] {
        args.push(configs().join(format!("{name}.json")).display().to_string());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_homindex")).args(&args).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("index_shift.json").exists());
}

#[test]
fn exit_codes_follow_contract() {
    let dir = tempfile::tempdir().unwrap();
    let failing = write(
        dir.path(),
        "fail.json",
        r#"{"name":"fail","kind":"index-shift",
            "parameters":{"rule":{"rule":"inverse-poly","scale":1.0,"alpha":1.0},"n":2,"expected":0.0}}"#,
    );
    assert_eq!(homindex(&["run", failing.to_str().unwrap()]).status.code(), Some(1));

    let unknown = write(dir.path(), "unknown.json", r#"{"name":"u","kind":"nope","parameters":{}}"#);
    assert_eq!(homindex(&["run", unknown.to_str().unwrap()]).status.code(), Some(2));

    let bad_tol = write(
        dir.path(),
        "tol.json",
        r#"{"name":"t","kind":"verify-symbolic","parameters":{},"tolerances":{"index":0.0}}"#,
    );
    assert_eq!(homindex(&["run", bad_tol.to_str().unwrap()]).status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    assert_eq!(homindex(&["run", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn budget_env_var_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "big.json",
        r#"{"name":"big","kind":"scaling","parameters":{
            "lattice":{"n":1,"points":16,"half_width":4.0},
            "potential":{"potential":"zero"},"lambdas":[1.0]}}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_homindex"))
        .env("HOMINDEX_BUDGET", "64")
        .args(["run", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn jobs_flag_does_not_change_output() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = configs().join("resolvent.json");
    let cfg = cfg.to_str().unwrap();
    assert!(homindex(&["run", cfg, "--jobs", "1", "--out", a.path().to_str().unwrap()]).status.success());
    assert!(homindex(&["run", cfg, "--jobs", "4", "--out", b.path().to_str().unwrap()]).status.success());
    let read = |d: &Path| std::fs::read(d.join("resolvent.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}
