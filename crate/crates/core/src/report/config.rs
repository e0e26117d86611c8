use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{config, file_err, Result};
use crate::events::EventId;
use crate::graph::FamilySpec;
use crate::mc::McConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ExactPmf,
    Extremal,
    Monotonicity,
    McEvent,
    Containment,
    Coupling,
    Moments,
    EventFrequencies,
    Hypergeom,
    PoissonBound,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::ExactPmf => "exact_pmf",
            ExperimentKind::Extremal => "extremal",
            ExperimentKind::Monotonicity => "monotonicity",
            ExperimentKind::McEvent => "mc_event",
            ExperimentKind::Containment => "containment",
            ExperimentKind::Coupling => "coupling",
            ExperimentKind::Moments => "moments",
            ExperimentKind::EventFrequencies => "event_frequencies",
            ExperimentKind::Hypergeom => "hypergeom",
            ExperimentKind::PoissonBound => "poisson_bound",
        }
    }

    pub fn needs_graph(self) -> bool {
        matches!(
            self,
            ExperimentKind::ExactPmf
                | ExperimentKind::McEvent
                | ExperimentKind::Containment
                | ExperimentKind::Coupling
                | ExperimentKind::Moments
                | ExperimentKind::EventFrequencies
        )
    }

    pub fn needs_mc(self) -> bool {
        matches!(
            self,
            ExperimentKind::McEvent
                | ExperimentKind::Containment
                | ExperimentKind::Coupling
                | ExperimentKind::EventFrequencies
        )
    }
}

/// Where the input graph comes from.
///
/// In a config file this is the `[graph]` table: either the fields of a [`FamilySpec`]
/// (`family = "cycle"`, `n = 5`), or `graph6 = "file"` (with an optional 1-based
/// `line`), or `edge_list = "file"` (with an optional vertex count `n`).
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    Family(FamilySpec),
    Graph6 { path: PathBuf, line: Option<usize> },
    EdgeList { path: PathBuf, n: Option<usize> },
}

impl GraphSource {
    pub fn files(&self) -> Vec<&Path> {
        match self {
            GraphSource::Family(_) => vec![],
            GraphSource::Graph6 { path, .. } | GraphSource::EdgeList { path, .. } => vec![path.as_path()],
        }
    }

    fn resolve(&mut self, base: &Path) {
        match self {
            GraphSource::Family(_) => {}
            GraphSource::Graph6 { path, .. } | GraphSource::EdgeList { path, .. } => {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
    }
}

fn take_usize(table: &mut Map<String, Value>, key: &str) -> Result<Option<usize>> {
    match table.remove(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| config(format!("graph.{key} must be a non-negative integer, got {v}"))),
    }
}

impl TryFrom<Map<String, Value>> for GraphSource {
    type Error = crate::Error;

    fn try_from(mut t: Map<String, Value>) -> Result<Self> {
        let has = |k: &str| t.contains_key(k);
        let sources = [has("family"), has("graph6"), has("edge_list")];
        if sources.iter().filter(|&&b| b).count() != 1 {
            return Err(config("graph: give exactly one of `family`, `graph6` or `edge_list`"));
        }
        let path = |v: Value, key: &str| match v {
            Value::String(s) => Ok(PathBuf::from(s)),
            other => Err(config(format!("graph.{key} must be a file path, got {other}"))),
        };
        if let Some(v) = t.remove("graph6") {
            let p = path(v, "graph6")?;
            let line = take_usize(&mut t, "line")?;
            if let Some(extra) = t.keys().next() {
                return Err(config(format!("graph: unexpected key `{extra}` next to graph6")));
            }
            return Ok(GraphSource::Graph6 { path: p, line });
        }
        if let Some(v) = t.remove("edge_list") {
            let p = path(v, "edge_list")?;
            let n = take_usize(&mut t, "n")?;
            if let Some(extra) = t.keys().next() {
                return Err(config(format!("graph: unexpected key `{extra}` next to edge_list")));
            }
            return Ok(GraphSource::EdgeList { path: p, n });
        }
        let spec: FamilySpec =
            serde_json::from_value(Value::Object(t)).map_err(|e| config(format!("graph: {e}")))?;
        spec.validate().map_err(|e| config(format!("graph: {e}")))?;
        Ok(GraphSource::Family(spec))
    }
}

impl From<&GraphSource> for Map<String, Value> {
    fn from(g: &GraphSource) -> Self {
        match g {
            GraphSource::Family(spec) => match serde_json::to_value(spec).expect("family specs serialize") {
                Value::Object(m) => m,
                _ => unreachable!("family specs are tables"),
            },
            GraphSource::Graph6 { path, line } => {
                let mut m = Map::new();
                m.insert("graph6".into(), Value::String(path.display().to_string()));
                if let Some(l) = line {
                    m.insert("line".into(), (*l).into());
                }
                m
            }
            GraphSource::EdgeList { path, n } => {
                let mut m = Map::new();
                m.insert("edge_list".into(), Value::String(path.display().to_string()));
                if let Some(n) = n {
                    m.insert("n".into(), (*n).into());
                }
                m
            }
        }
    }
}

impl Serialize for GraphSource {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Map::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphSource {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = Map::deserialize(d)?;
        GraphSource::try_from(m).map_err(serde::de::Error::custom)
    }
}

/// Kind-specific parameters; only the ones a kind reads may be set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    /// Slow-growth parameter; defaults to `max(1, ln k)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    /// `|Q|`; defaults to the value implied by `w`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Vertex count for `extremal`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Vertex counts for `monotonicity`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    /// graph6 catalog for `extremal`; exhaustive labelled search when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<PathBuf>,
    /// Events for `mc_event` and `event_frequencies`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<Vec<EventId>>,
    /// `E` and `F` of `containment`, estimating `Pr[E \ F]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<EventId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within: Option<EventId>,
    /// Conditioned draws for the `E[e(Q) | X = ell]` check in `event_frequencies`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditional_samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<u64>,
    /// Largest `d` for `poisson_bound`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u64>,
    /// Enumeration budget for exact computations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_cap: Option<u64>,
    /// Also compute `Var[X - Z]` exactly in `moments`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<bool>,
}

/// Where reports go. Not part of the cache key or the config echo.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Directory for `<name>.json` and `<name>.csv`.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSource>,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
    #[serde(default, skip_serializing)]
    pub output: OutputSpec,
}

fn need<T: Copy>(v: Option<T>, field: &str, kind: ExperimentKind) -> Result<T> {
    v.ok_or_else(|| config(format!("params.{field} is required for kind {}", kind.as_str())))
}

impl ExperimentConfig {
    /// Parses TOML text; relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| config(e.to_string()))?;
        if let Some(g) = cfg.graph.as_mut() {
            g.resolve(base);
        }
        if let Some(c) = cfg.params.catalog.as_mut() {
            if c.is_relative() {
                *c = base.join(&*c);
            }
        }
        for p in [&mut cfg.output.dir, &mut cfg.output.json, &mut cfg.output.csv].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(file_err(path))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut cfg = Self::from_toml(&text, base).map_err(|e| config(format!("{}: {e}", path.display())))?;
        if cfg.name.is_none() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(cfg)
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or(self.kind.as_str())
    }

    /// Field-level checks that do not need the graph.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind;
        let p = &self.params;
        if kind.needs_graph() != self.graph.is_some() {
            return Err(config(if kind.needs_graph() {
                format!("kind {} needs a [graph] table", kind.as_str())
            } else {
                format!("kind {} takes no [graph] table", kind.as_str())
            }));
        }
        if kind.needs_mc() {
            let mc = self
                .mc
                .as_ref()
                .ok_or_else(|| config(format!("kind {} needs an [mc] table with trials and seed", kind.as_str())))?;
            mc.validate().map_err(|e| config(format!("mc: {e}")))?;
        }
        if let Some(w) = p.w {
            if !(w.is_finite() && w > 0.0) {
                return Err(config(format!("params.w must be a positive number, got {w}")));
            }
        }
        match kind {
            ExperimentKind::ExactPmf => {
                need(p.k, "k", kind)?;
            }
            ExperimentKind::Extremal => {
                need(p.n, "n", kind)?;
                need(p.k, "k", kind)?;
                need(p.ell, "ell", kind)?;
            }
            ExperimentKind::Monotonicity => {
                need(p.k, "k", kind)?;
                need(p.ell, "ell", kind)?;
                if p.n_list.as_ref().is_none_or(|l| l.is_empty()) {
                    return Err(config("params.n_list must list at least one vertex count"));
                }
            }
            ExperimentKind::McEvent => {
                need(p.k, "k", kind)?;
                need(p.ell, "ell", kind)?;
                if p.events.as_ref().is_none_or(|e| e.is_empty()) {
                    return Err(config("params.events must name at least one event"));
                }
            }
            ExperimentKind::Containment => {
                need(p.k, "k", kind)?;
                need(p.ell, "ell", kind)?;
                need(p.event, "event", kind)?;
                need(p.within, "within", kind)?;
            }
            ExperimentKind::Coupling | ExperimentKind::Moments | ExperimentKind::EventFrequencies => {
                need(p.k, "k", kind)?;
                need(p.ell, "ell", kind)?;
            }
            ExperimentKind::Hypergeom => {
                let n = need(p.population, "population", kind)?;
                let t = need(p.special, "special", kind)?;
                let m = need(p.draws, "draws", kind)?;
                if t > n || m > n {
                    return Err(config("params.special and params.draws must not exceed params.population"));
                }
            }
            ExperimentKind::PoissonBound => {
                if need(p.d_max, "d_max", kind)? == 0 {
                    return Err(config("params.d_max must be at least 1"));
                }
            }
        }
        Ok(())
    }

    /// Canonical JSON of everything that determines the payload.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("configs serialize")
    }
}
