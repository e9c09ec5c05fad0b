use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("tva-test-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn config(dir: &Path, lie: &str, extra: &str) -> PathBuf {
    let text = format!(
        r#"{{"lie": "{}", "rank": 1, "level": "1",
            "window": {{"m0": [-1, 1], "m": [[-1, 1]], "states": ["vac", "e", "f(-1,0)*vac"]}},
            "suite": {{"random_pairs": 1, "v0": {{"depth": 2, "max_degree": 2}}}}{extra}}}"#,
        data(lie)
    );
    let p = dir.join("tva.json");
    std::fs::write(&p, text).unwrap();
    p
}

fn tva(cfg: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tva")).arg("--config").arg(cfg).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_exit_codes() {
    let d = scratch("validate");
    assert_eq!(tva(&config(&d, "sl2.json", ""), &["validate"]).status.code(), Some(0));
    let bad = tva(&config(&d, "sl2_bad_form.json", ""), &["validate"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("Invariance"));
    std::fs::write(d.join("broken.json"), "{\"dim\": 3,").unwrap();
    let cfg = config(&d, "sl2.json", "").display().to_string();
    let text = std::fs::read_to_string(&cfg).unwrap().replace(&data("sl2.json"), &d.join("broken.json").display().to_string());
    std::fs::write(&cfg, text).unwrap();
    let out = tva(Path::new(&cfg), &["validate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn computations_print_exact_states() {
    let d = scratch("compute");
    let cfg = config(&d, "sl2.json", "");
    assert!(stdout(&tva(&cfg, &["product", "e", "1", "0", "f"])).starts_with("1·|1⟩"));
    assert!(stdout(&tva(&cfg, &["product", "e", "0", "0", "f"])).starts_with("1·|h⟩"));
    assert!(stdout(&tva(&cfg, &["product", "1", "-1", "0", "e(-2,1)*h"])).starts_with("1·e(-2,1)|h⟩"));
    assert!(stdout(&tva(&cfg, &["act", "e", "-1", "2", "vac"])).starts_with("1·e(-1,2)|1⟩"));
    assert!(stdout(&tva(&cfg, &["locality", "e", "f"])).contains("\"order\":2"));
    assert_eq!(tva(&cfg, &["act", "q", "-1", "0", "vac"]).status.code(), Some(2));
    assert_eq!(tva(&cfg, &["act", "e", "-1", "0,1", "vac"]).status.code(), Some(2));
}

#[test]
fn axioms_pass_deterministically_and_cache_is_transparent() {
    let d = scratch("axioms");
    let cfg = config(&d, "sl2.json", "");
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        for f in v.as_array_mut().unwrap() {
            f["wall_ms"] = Value::Null;
        }
        v
    };
    let a = tva(&cfg, &["axioms"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = tva(&cfg, &["--jobs", "1", "axioms"]);
    assert_eq!(strip(&a), strip(&b));
    let cache = d.join("cache.json");
    let c1 = tva(&cfg, &["--cache", cache.to_str().unwrap(), "axioms"]);
    let c2 = tva(&cfg, &["--cache", cache.to_str().unwrap(), "axioms"]);
    assert!(cache.exists());
    assert_eq!(strip(&a), strip(&c1));
    assert_eq!(strip(&a), strip(&c2));
}

#[test]
fn budget_guard_refuses_large_runs() {
    let d = scratch("budget");
    let cfg = config(&d, "sl2.json", "");
    let out = tva(&cfg, &["--budget", "10", "axioms"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("estimated"));
}

#[test]
fn mutation_mode_detects_everything() {
    let d = scratch("mutate");
    let cfg = config(&d, "sl2.json", "");
    let out = tva(&cfg, &["--mutate", "axioms"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 27 + 9 + 1);
}

#[test]
fn invalid_algebra_fails_the_suite() {
    let d = scratch("invalid");
    let cfg = config(&d, "sl2_bad_form.json", "");
    assert_eq!(tva(&cfg, &["axioms"]).status.code(), Some(1));
}

#[test]
fn v0_lists_depth_one_basis_and_reports() {
    let d = scratch("v0");
    let cfg = config(&d, "sl2.json", r#", "outputs": {"json": "r.json", "csv": "r.csv"}"#);
    let out = tva(&cfg, &["v0", "--depth", "1", "--max-degree", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 10);
    assert_eq!(v["tails_absent"], Value::Bool(true));
    assert_eq!(tva(&cfg, &["axioms"]).status.code(), Some(0));
    let r = tva(&cfg, &["report", d.join("r.json").to_str().unwrap(), "--csv", d.join("again.csv").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("jacobi"));
    assert_eq!(std::fs::read_to_string(d.join("r.csv")).unwrap().lines().count(), std::fs::read_to_string(d.join("again.csv")).unwrap().lines().count());
}
