use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use edgestat::report::{
    apply_overrides, run_experiment, sweep_dir, write_outputs, Cache, ExperimentConfig, OutputSpec, CACHE_ENV,
};

/// Batch runner for induced-edge-count experiments.
#[derive(Parser)]
#[command(version, about, after_help = format!("The cache root is read from ${CACHE_ENV} (default ./.edgestat-cache)."))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Directory for <name>.json and <name>.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Neither read nor write the cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Run every *.toml config in a directory.
    Sweep {
        dir: PathBuf,
        /// Report directory; defaults to <dir>/reports.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        command: CacheCommand,
    },
}

#[derive(Subcommand)]
enum CacheCommand {
    /// Recompute a random sample of cached entries and compare payloads.
    Audit {
        #[arg(long, default_value_t = 0.1)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> edgestat::Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            seed,
            trials,
            out,
            no_cache,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            apply_overrides(&mut cfg, seed, trials)?;
            let cache = (!no_cache).then(Cache::from_env);
            let record = run_experiment(&cfg, cache.as_ref())?;
            let mut dest = cfg.output.clone();
            if out.is_some() {
                dest = OutputSpec {
                    dir: out,
                    ..OutputSpec::default()
                };
            }
            let written = write_outputs(&record, &dest)?;
            if written.json.is_none() && written.csv.is_none() {
                print!("{}", record.to_json());
            }
            for p in written.json.iter().chain(&written.csv) {
                eprintln!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { dir, out, no_cache } => {
            let cache = (!no_cache).then(Cache::from_env);
            let out_dir = out.unwrap_or_else(|| dir.join("reports"));
            let items = sweep_dir(&dir, cache.as_ref())?;
            let mut failed = 0;
            for item in &items {
                let name = item.config_path.display();
                match &item.outcome {
                    Ok(rec) => {
                        write_outputs(
                            rec,
                            &OutputSpec {
                                dir: Some(out_dir.clone()),
                                ..OutputSpec::default()
                            },
                        )?;
                        let cached = rec.run.as_ref().is_some_and(|r| r.from_cache);
                        println!("ok\t{name}\t{}{}", rec.name, if cached { "\t(cached)" } else { "" });
                    }
                    Err(e) => {
                        failed += 1;
                        println!("error\t{name}\t{e}");
                    }
                }
            }
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Cache {
            command: CacheCommand::Audit { fraction, seed },
        } => {
            if !(fraction > 0.0 && fraction <= 1.0) {
                return Err(edgestat::Error::Config(format!("--fraction {fraction} must lie in (0, 1]")));
            }
            let cache = Cache::from_env();
            let report = cache.audit(fraction, seed)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.is_clean() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
