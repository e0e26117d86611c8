//! Config-driven experiments with a content-addressed cache, as used by the `edgestat` binary.

use edgestat::report::{run_experiment, Cache, ExperimentConfig};

const CONFIG: &str = r#"
name = "c5-triples"
kind = "exact_pmf"

[graph]
family = "cycle"
n = 5

[params]
k = 3
"#;

fn main() -> edgestat::Result<()> {
    let dir = tempfile::tempdir()?;
    let cache = Cache::new(dir.path().join("cache"));
    let cfg = ExperimentConfig::from_toml(CONFIG, dir.path())?;

    let first = run_experiment(&cfg, Some(&cache))?;
    let second = run_experiment(&cfg, Some(&cache))?;
    println!("key {}", first.cache_key);
    println!("second run served from cache: {}", second.run.as_ref().is_some_and(|r| r.from_cache));
    print!("{}", first.without_timing().to_json());
    print!("{}", first.csv()?.to_rfc4180());

    let audit = cache.audit(1.0, 0)?;
    println!("audit: {} of {} entries match", audit.matched, audit.entries);
    Ok(())
}
