//! Content-addressed cache of report records.
//!
//! An entry lives at `<root>/<key[..2]>/<key>.json` and holds one [`ReportRecord`]
//! without its run information. Writes go to a temporary file in the same directory
//! that is then renamed into place, so readers never see a partial entry.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{compute_payload, ReportRecord};
use crate::error::{file_err, Result};
use crate::rng::stream_rng;

/// Environment variable naming the cache root.
pub const CACHE_ENV: &str = "EDGESTAT_CACHE";

/// Cache root used when [`CACHE_ENV`] is unset, relative to the working directory.
pub const DEFAULT_CACHE_DIR: &str = ".edgestat-cache";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cache {
    root: PathBuf,
}

/// Writes `bytes` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(file_err(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(file_err(dir))?;
    tmp.write_all(bytes).map_err(file_err(path))?;
    tmp.as_file().sync_all().map_err(file_err(path))?;
    tmp.persist(path).map_err(|e| file_err(path)(e.error))?;
    Ok(())
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    /// Root from [`CACHE_ENV`], else [`DEFAULT_CACHE_DIR`].
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Cache::new(p),
            _ => Cache::new(DEFAULT_CACHE_DIR),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path_of(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2.min(key.len())]).join(format!("{key}.json"))
    }

    /// The stored record for `key`; unreadable entries count as misses.
    pub fn get(&self, key: &str) -> Option<ReportRecord> {
        let text = std::fs::read_to_string(self.path_of(key)).ok()?;
        let rec: ReportRecord = serde_json::from_str(&text).ok()?;
        (rec.cache_key == key).then_some(rec)
    }

    pub fn put(&self, record: &ReportRecord) -> Result<()> {
        let mut stored = record.clone();
        stored.run = None;
        let mut text = serde_json::to_string_pretty(&stored)?;
        text.push('\n');
        write_atomic(&self.path_of(&record.cache_key), text.as_bytes())
    }

    /// All keys, sorted.
    pub fn keys(&self) -> Result<Vec<String>> {
        let mut keys = Vec::new();
        let top = match std::fs::read_dir(&self.root) {
            Ok(d) => d,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(keys),
            Err(e) => return Err(file_err(&self.root)(e)),
        };
        for shard in top {
            let shard = shard?.path();
            if !shard.is_dir() {
                continue;
            }
            for entry in std::fs::read_dir(&shard).map_err(file_err(&shard))? {
                let p = entry?.path();
                if p.extension().is_some_and(|e| e == "json") {
                    if let Some(stem) = p.file_stem() {
                        keys.push(stem.to_string_lossy().into_owned());
                    }
                }
            }
        }
        keys.sort();
        Ok(keys)
    }

    /// Recomputes a random `fraction` of the entries (at least one when any exist) and
    /// compares payloads. The sample is drawn from `seed`.
    pub fn audit(&self, fraction: f64, seed: u64) -> Result<AuditReport> {
        let mut keys = self.keys()?;
        let entries = keys.len();
        let want = if entries == 0 {
            0
        } else {
            ((entries as f64 * fraction).ceil() as usize).clamp(1, entries)
        };
        keys.shuffle(&mut stream_rng(seed, 0));
        keys.truncate(want);
        keys.sort();
        let mut report = AuditReport {
            entries,
            audited: keys.len(),
            ..AuditReport::default()
        };
        for key in keys {
            let Some(rec) = self.get(&key) else {
                report.problems.push(AuditProblem {
                    key,
                    problem: "unreadable entry".into(),
                });
                continue;
            };
            match compute_payload(&rec.config) {
                Ok((fresh_key, payload)) => {
                    if fresh_key != key {
                        report.problems.push(AuditProblem {
                            key,
                            problem: format!("inputs changed since caching (key now {fresh_key})"),
                        });
                    } else if payload == rec.payload {
                        report.matched += 1;
                    } else {
                        report.mismatched.push(key);
                    }
                }
                Err(e) => report.problems.push(AuditProblem {
                    key,
                    problem: e.to_string(),
                }),
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditProblem {
    pub key: String,
    pub problem: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub entries: usize,
    pub audited: usize,
    pub matched: usize,
    /// Entries whose recomputed payload differs from the stored one.
    pub mismatched: Vec<String>,
    /// Entries that could not be recomputed.
    pub problems: Vec<AuditProblem>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.mismatched.is_empty() && self.problems.is_empty()
    }
}
