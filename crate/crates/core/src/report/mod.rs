//! Batch experiments: TOML configs in, JSON reports and CSV tables out.
//!
//! A config names an experiment kind, an input graph where the kind needs one, the
//! parameters and the Monte Carlo settings:
//!
//! ```toml
//! name = "c5"
//! kind = "exact_pmf"
//!
//! [graph]
//! family = "cycle"
//! n = 5
//!
//! [params]
//! k = 3
//! ```
//!
//! Results are cached under the SHA-256 of the canonical config JSON, the crate version
//! and the bytes of every input file, so a repeated run is served from disk.

mod cache;
mod config;
mod payload;

pub use cache::{write_atomic, AuditProblem, AuditReport, Cache, CACHE_ENV, DEFAULT_CACHE_DIR};
pub use config::{ExperimentConfig, ExperimentKind, GraphSource, OutputSpec, Params};
pub use payload::*;

use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{config as config_err, file_err, Error, Result};
use crate::graph::{generate, Graph};
use crate::graph6::{parse_graph6, read_graph6_lines};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Wall-clock information; the only part of a record that may differ between runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInfo {
    pub duration_ms: u64,
    pub from_cache: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub version: String,
    pub name: String,
    pub kind: ExperimentKind,
    pub cache_key: String,
    pub config: ExperimentConfig,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
}

impl ReportRecord {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }

    /// The record without run information, which is byte-stable across runs.
    pub fn without_timing(&self) -> ReportRecord {
        ReportRecord {
            run: None,
            ..self.clone()
        }
    }

    pub fn csv(&self) -> Result<CsvTable> {
        csv_projection(self.kind, &self.payload)
    }
}

/// Reads a whitespace-separated edge list. Blank lines and `#` comments are skipped;
/// the vertex count is `n` when given, else one more than the largest endpoint.
pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| config_err(format!("edge list line {}: {s:?} is not a vertex index", i + 1)))
        };
        match parts.as_slice() {
            [u, v] => edges.push((parse(u)?, parse(v)?)),
            _ => return Err(config_err(format!("edge list line {}: expected two vertex indices", i + 1))),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, &edges)
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(file_err(path))
}

/// Builds the input graph of `source`.
pub fn load_graph(source: &GraphSource) -> Result<Graph> {
    match source {
        GraphSource::Family(spec) => generate(spec),
        GraphSource::Graph6 { path, line } => {
            let file = std::fs::File::open(path).map_err(file_err(path))?;
            let want = line.unwrap_or(1);
            for (no, g) in read_graph6_lines(BufReader::new(file)) {
                if no == want {
                    return g;
                }
                if no > want {
                    break;
                }
            }
            // line numbers count blank lines too, so fall back to a direct read
            let text = std::fs::read_to_string(path).map_err(file_err(path))?;
            match text.lines().nth(want - 1) {
                Some(l) if !l.trim().is_empty() => parse_graph6(l.trim_end()),
                _ => Err(config_err(format!("{}: no graph6 entry on line {want}", path.display()))),
            }
        }
        GraphSource::EdgeList { path, n } => {
            let text = std::fs::read_to_string(path).map_err(file_err(path))?;
            parse_edge_list(&text, *n)
        }
    }
}

fn input_files(cfg: &ExperimentConfig) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = cfg
        .graph
        .as_ref()
        .map(|g| g.files().into_iter().map(Path::to_path_buf).collect())
        .unwrap_or_default();
    files.extend(cfg.params.catalog.clone());
    files
}

/// SHA-256 over the crate version, the canonical config and every input file.
pub fn cache_key(cfg: &ExperimentConfig) -> Result<String> {
    let mut h = Sha256::new();
    h.update(ARTIFACT_VERSION.as_bytes());
    h.update([0]);
    h.update(cfg.canonical_json().as_bytes());
    for f in input_files(cfg) {
        let bytes = read(&f)?;
        h.update([0]);
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    Ok(hex::encode(h.finalize()))
}

/// Key and freshly computed payload, bypassing the cache.
pub fn compute_payload(cfg: &ExperimentConfig) -> Result<(String, Value)> {
    cfg.validate()?;
    let key = cache_key(cfg)?;
    let graph = cfg.graph.as_ref().map(load_graph).transpose()?;
    let payload = compute(cfg, graph.as_ref())?;
    Ok((key, payload))
}

/// Runs one experiment, consulting and updating `cache` when given.
pub fn run_experiment(cfg: &ExperimentConfig, cache: Option<&Cache>) -> Result<ReportRecord> {
    let start = Instant::now();
    cfg.validate()?;
    let key = cache_key(cfg)?;
    if let Some(hit) = cache.and_then(|c| c.get(&key)) {
        return Ok(ReportRecord {
            run: Some(RunInfo {
                duration_ms: start.elapsed().as_millis() as u64,
                from_cache: true,
            }),
            ..hit
        });
    }
    let (key, payload) = compute_payload(cfg)?;
    let mut record = ReportRecord {
        version: ARTIFACT_VERSION.to_string(),
        name: cfg.name().to_string(),
        kind: cfg.kind,
        cache_key: key,
        config: cfg.clone(),
        payload,
        run: None,
    };
    if let Some(c) = cache {
        c.put(&record)?;
    }
    record.run = Some(RunInfo {
        duration_ms: start.elapsed().as_millis() as u64,
        from_cache: false,
    });
    Ok(record)
}

/// Paths written by [`write_outputs`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Written {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Writes the JSON report and CSV table to the paths in `out`; `out.dir` supplies
/// `<name>.json` and `<name>.csv` for paths not given explicitly.
pub fn write_outputs(record: &ReportRecord, out: &OutputSpec) -> Result<Written> {
    let from_dir = |ext: &str| out.dir.as_ref().map(|d| d.join(format!("{}.{ext}", record.name)));
    let json = out.json.clone().or_else(|| from_dir("json"));
    let csv = out.csv.clone().or_else(|| from_dir("csv"));
    if let Some(p) = &json {
        write_atomic(p, record.to_json().as_bytes())?;
    }
    if let Some(p) = &csv {
        write_atomic(p, record.csv()?.to_rfc4180().as_bytes())?;
    }
    Ok(Written { json, csv })
}

/// Runs independent configs in parallel; results come back in input order and one
/// failure does not stop the others.
pub fn sweep(configs: &[ExperimentConfig], cache: Option<&Cache>) -> Vec<Result<ReportRecord>> {
    configs.par_iter().map(|c| run_experiment(c, cache)).collect()
}

#[derive(Debug)]
pub struct SweepItem {
    pub config_path: PathBuf,
    pub outcome: Result<ReportRecord>,
}

/// Every `*.toml` file of `dir` in file-name order, run as one sweep.
pub fn sweep_dir(dir: &Path, cache: Option<&Cache>) -> Result<Vec<SweepItem>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(file_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    let loaded: Vec<Result<ExperimentConfig>> = paths.iter().map(|p| ExperimentConfig::load(p)).collect();
    let outcomes: Vec<Result<ReportRecord>> = loaded
        .into_par_iter()
        .map(|c| c.and_then(|c| run_experiment(&c, cache)))
        .collect();
    Ok(paths
        .into_iter()
        .zip(outcomes)
        .map(|(config_path, outcome)| SweepItem { config_path, outcome })
        .collect())
}

/// Applies command-line overrides of the Monte Carlo seed and trial count.
pub fn apply_overrides(cfg: &mut ExperimentConfig, seed: Option<u64>, trials: Option<u64>) -> Result<()> {
    if seed.is_none() && trials.is_none() {
        return Ok(());
    }
    let mc = cfg.mc.as_mut().ok_or_else(|| {
        Error::Config(format!("kind {} has no [mc] table to override", cfg.kind.as_str()))
    })?;
    if let Some(s) = seed {
        mc.seed = s;
    }
    if let Some(t) = trials {
        mc.trials = t;
    }
    cfg.validate()
}
