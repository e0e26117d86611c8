//! End-to-end checks of the `edgestat` binary.

use std::path::Path;
use std::process::{Command, Output};

fn edgestat(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgestat"))
        .env("EDGESTAT_CACHE", cache)
        .args(args)
        .output()
        .expect("spawn edgestat")
}

const MC: &str = r#"
kind = "mc_event"
[graph]
family = "gnp"
n = 300
p = 0.02
seed = 2
[params]
k = 12
ell = 2
events = ["X=2", "Dstar"]
[mc]
trials = 5000
seed = 9
"#;

const PMF: &str = "kind = \"exact_pmf\"\n[graph]\nfamily = \"cycle\"\nn = 5\n[params]\nk = 3\n";

#[test]
fn run_prints_json_and_honours_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mc.toml");
    std::fs::write(&cfg, MC).unwrap();
    let cache = dir.path().join("cache");
    let a = edgestat(&cache, &["run", cfg.to_str().unwrap(), "--seed", "3", "--trials", "2000"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["mc"]["seed"], 3);
    assert_eq!(v["config"]["mc"]["trials"], 2000);
    assert_eq!(v["run"]["from_cache"], false);
    let b = edgestat(&cache, &["run", cfg.to_str().unwrap(), "--seed", "3", "--trials", "2000"]);
    let w: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(w["run"]["from_cache"], true);
    assert_eq!(v["payload"], w["payload"]);
}

#[test]
fn sweep_writes_reports_and_audit_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let configs = dir.path().join("configs");
    std::fs::create_dir(&configs).unwrap();
    std::fs::write(configs.join("mc.toml"), MC).unwrap();
    std::fs::write(configs.join("pmf.toml"), PMF).unwrap();
    std::fs::write(configs.join("broken.toml"), "kind = \"exact_pmf\"\n[params]\nk = 3\n").unwrap();
    let cache = dir.path().join("cache");

    let out = edgestat(&cache, &["sweep", configs.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(!out.status.success(), "a broken config fails the sweep");
    assert_eq!(text.lines().filter(|l| l.starts_with("ok\t")).count(), 2, "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("error\t")).count(), 1, "{text}");
    let csv = std::fs::read_to_string(configs.join("reports/pmf.csv")).unwrap();
    assert!(csv.contains("\r\n"));
    assert!(configs.join("reports/mc.json").exists());

    // Floating-point payloads must survive the cache round trip bit for bit.
    let audit = edgestat(&cache, &["cache", "audit", "--fraction", "1"]);
    assert!(audit.status.success(), "{}", String::from_utf8_lossy(&audit.stdout));
    let report: serde_json::Value = serde_json::from_slice(&audit.stdout).unwrap();
    assert_eq!(report["entries"], 2);
    assert_eq!(report["matched"], 2);
}

#[test]
fn out_dir_receives_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c5.toml");
    std::fs::write(&cfg, PMF).unwrap();
    let out = dir.path().join("out");
    let r = edgestat(&dir.path().join("cache"), &["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--no-cache"]);
    assert!(r.status.success());
    assert!(r.stdout.is_empty());
    assert!(out.join("c5.json").exists() && out.join("c5.csv").exists());
    assert!(!dir.path().join("cache").exists(), "--no-cache never touches the cache");
}

#[test]
fn bad_audit_fraction_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let r = edgestat(dir.path(), &["cache", "audit", "--fraction", "0"]);
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("--fraction"));
}
