//! Kind-specific result payloads and their CSV projections.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{ExperimentConfig, ExperimentKind};
use crate::coloring::{coupling_report, CouplingReport, DEFAULT_STEP_CAP};
use crate::dist::{exact_pmf_with_budget, max_over_graphs, monotonicity_report_with, ExtremalSource, DEFAULT_ENUMERATION_BUDGET};
use crate::error::{config, Result};
use crate::events::{
    anti_concentration, conditional_q_edges, hypergeom_pmf, poisson_mode_bound, predicted_mode_degree,
    variance_x_minus_z_with_budget, AntiConcentration, ConditionalQEdges, EventId, EventSetup, HypergeomSpec,
    ModePrediction,
};
use crate::exact::{fraction_string, to_f64, RationalRepr};
use crate::graph::Graph;
use crate::graph6::write_graph6;
use crate::mc::{estimate_containment, estimate_events, Estimate, McConfig};

/// Header plus rows, all cells already formatted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    /// RFC 4180 text: comma separated, CRLF line ends, quoting where needed.
    pub fn to_rfc4180(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }
}

fn num(x: f64) -> String {
    // shortest round-trip form, so CSV and JSON agree exactly
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn witness_graph6(g: &Graph) -> Option<String> {
    write_graph6(g).ok()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactPmfPayload {
    pub n: usize,
    pub k: usize,
    pub subsets: u64,
    /// `ell -> Pr[X = ell]` for every `ell` with positive probability.
    pub probs: BTreeMap<u64, String>,
    pub probs_f64: BTreeMap<u64, f64>,
    pub counts: BTreeMap<u64, u64>,
    pub mean: RationalRepr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalPayload {
    pub n: usize,
    pub k: usize,
    pub ell: u64,
    pub value: String,
    pub value_f64: f64,
    pub witness_graph6: Option<String>,
    pub witness_edges: Vec<(usize, usize)>,
    pub graphs_scanned: u64,
    pub source: ExtremalSource,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityRowPayload {
    pub n: usize,
    pub value: String,
    pub value_f64: f64,
    pub witness_graph6: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityPayload {
    pub k: usize,
    pub ell: u64,
    pub rows: Vec<MonotonicityRowPayload>,
    pub non_increasing: bool,
    pub violations: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetupEcho {
    pub n: usize,
    pub k: usize,
    pub ell: u64,
    pub w: f64,
    pub m: usize,
}

impl From<&EventSetup<'_>> for SetupEcho {
    fn from(s: &EventSetup<'_>) -> Self {
        SetupEcho {
            n: s.graph.n(),
            k: s.k,
            ell: s.ell,
            w: s.w,
            m: s.m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedEstimate {
    pub event: EventId,
    pub estimate: Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEventPayload {
    pub setup: SetupEcho,
    pub estimates: Vec<NamedEstimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentPayload {
    pub setup: SetupEcho,
    pub event: EventId,
    pub within: EventId,
    /// `Pr[E \ F]`.
    pub difference: Estimate,
    pub intersection: Estimate,
    pub event_estimate: Estimate,
    pub conditional_miss: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariancePayload {
    pub variance: RationalRepr,
    pub var_heavy: RationalRepr,
    pub var_light: RationalRepr,
    pub bound: f64,
    pub bound_holds: bool,
    pub decomposition_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentsPayload {
    pub setup: SetupEcho,
    pub threshold: f64,
    pub heavy_vertices: usize,
    pub light_vertices: usize,
    pub heavy_edges: usize,
    pub light_edges: usize,
    pub mu1: RationalRepr,
    pub mu2: RationalRepr,
    pub mu: RationalRepr,
    pub mode_prediction: ModePrediction,
    pub variance: Option<VariancePayload>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventFrequenciesPayload {
    pub setup: SetupEcho,
    pub mode_prediction: ModePrediction,
    pub estimates: Vec<NamedEstimate>,
    pub conditional_q_edges: Option<ConditionalQEdges>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergeomRow {
    pub i: u64,
    pub prob: String,
    pub prob_f64: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergeomPayload {
    pub spec: HypergeomSpec,
    pub mean: f64,
    pub variance: f64,
    pub argmax: u64,
    pub max: RationalRepr,
    pub unimodal: bool,
    pub anti_concentration: AntiConcentration,
    pub pmf: Vec<HypergeomRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonRow {
    pub d: u64,
    pub value: f64,
    pub ln_value: f64,
    pub maximized_at_d: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonPayload {
    pub d_max: u64,
    pub inverse_e: f64,
    /// Every value is at most `1/e` (within `1e-9`).
    pub all_at_most_inverse_e: bool,
    /// `|value(1) - 1/e| <= 1e-9`.
    pub equality_at_one: bool,
    pub rows: Vec<PoissonRow>,
}

/// Tolerance of the `1/e` comparisons in [`PoissonPayload`].
pub const POISSON_TOLERANCE: f64 = 1e-9;

fn setup_for<'g>(cfg: &ExperimentConfig, g: &'g Graph) -> Result<EventSetup<'g>> {
    let p = &cfg.params;
    let k = p.k.expect("validated");
    let ell = p.ell.expect("validated");
    let setup = match p.w {
        Some(w) => EventSetup::with_w(g, k, ell, w)?,
        None => EventSetup::new(g, k, ell)?,
    };
    match p.m {
        Some(m) => setup.with_m(m),
        None => Ok(setup),
    }
}

fn mc_of(cfg: &ExperimentConfig) -> &McConfig {
    cfg.mc.as_ref().expect("validated")
}

fn named(list: Vec<(EventId, Estimate)>) -> Vec<NamedEstimate> {
    list.into_iter()
        .map(|(event, estimate)| NamedEstimate { event, estimate })
        .collect()
}

/// Computes the payload of `cfg` on `graph` (present exactly for kinds that need one).
pub fn compute(cfg: &ExperimentConfig, graph: Option<&Graph>) -> Result<Value> {
    let p = &cfg.params;
    let budget = p.budget.unwrap_or(DEFAULT_ENUMERATION_BUDGET);
    let value = match cfg.kind {
        ExperimentKind::ExactPmf => {
            let g = graph.expect("validated");
            let t = exact_pmf_with_budget(g, p.k.expect("validated"), budget)?;
            let probs = t.probs();
            serde_json::to_value(ExactPmfPayload {
                n: t.n,
                k: t.k,
                subsets: t.total,
                probs: probs.iter().map(|(&l, r)| (l as u64, fraction_string(r))).collect(),
                probs_f64: probs.iter().map(|(&l, r)| (l as u64, to_f64(r))).collect(),
                counts: t
                    .counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(l, &c)| (l as u64, c))
                    .collect(),
                mean: RationalRepr::from(&t.mean()),
            })?
        }
        ExperimentKind::Extremal => {
            let source = match &p.catalog {
                Some(path) => ExtremalSource::Catalog { path: path.clone() },
                None => ExtremalSource::ExhaustiveLabeled,
            };
            let r = max_over_graphs(p.n.unwrap(), p.k.unwrap(), p.ell.unwrap() as usize, &source)?;
            serde_json::to_value(ExtremalPayload {
                n: r.n,
                k: r.k,
                ell: r.ell as u64,
                value: fraction_string(&r.value),
                value_f64: to_f64(&r.value),
                witness_graph6: witness_graph6(&r.witness),
                witness_edges: r.witness.edges(),
                graphs_scanned: r.graphs_scanned,
                source: r.source,
            })?
        }
        ExperimentKind::Monotonicity => {
            let points: Vec<_> = p
                .n_list
                .as_ref()
                .unwrap()
                .iter()
                .map(|&n| (n, ExtremalSource::ExhaustiveLabeled))
                .collect();
            let r = monotonicity_report_with(&points, p.k.unwrap(), p.ell.unwrap() as usize)?;
            serde_json::to_value(MonotonicityPayload {
                k: r.k,
                ell: r.ell as u64,
                non_increasing: r.is_non_increasing(),
                violations: r.violations.clone(),
                rows: r
                    .rows
                    .iter()
                    .map(|row| MonotonicityRowPayload {
                        n: row.n,
                        value: fraction_string(&row.value),
                        value_f64: to_f64(&row.value),
                        witness_graph6: witness_graph6(&row.witness),
                    })
                    .collect(),
            })?
        }
        ExperimentKind::McEvent => {
            let g = graph.expect("validated");
            let setup = setup_for(cfg, g)?;
            let ids = p.events.as_ref().unwrap();
            serde_json::to_value(McEventPayload {
                setup: SetupEcho::from(&setup),
                estimates: named(estimate_events(&setup, ids, mc_of(cfg))),
            })?
        }
        ExperimentKind::Containment => {
            let g = graph.expect("validated");
            let setup = setup_for(cfg, g)?;
            let (e, f) = (p.event.unwrap(), p.within.unwrap());
            let c = estimate_containment(
                &setup,
                |ctx| crate::events::eval_event(ctx, e),
                |ctx| crate::events::eval_event(ctx, f),
                mc_of(cfg),
            );
            serde_json::to_value(ContainmentPayload {
                setup: SetupEcho::from(&setup),
                event: e,
                within: f,
                difference: c.difference,
                intersection: c.intersection,
                event_estimate: c.event,
                conditional_miss: c.conditional_miss,
            })?
        }
        ExperimentKind::Coupling => {
            let g = graph.expect("validated");
            let r = coupling_report(
                g,
                p.k.unwrap(),
                p.ell.unwrap(),
                mc_of(cfg),
                p.step_cap.unwrap_or(DEFAULT_STEP_CAP),
            )?;
            serde_json::to_value(r)?
        }
        ExperimentKind::Moments => {
            let g = graph.expect("validated");
            let setup = setup_for(cfg, g)?;
            let m = &setup.moments;
            let variance = if p.variance.unwrap_or(false) {
                let v = variance_x_minus_z_with_budget(g, setup.k, setup.ell, budget)?;
                Some(VariancePayload {
                    variance: RationalRepr::from(&v.variance),
                    var_heavy: RationalRepr::from(&v.var_heavy),
                    var_light: RationalRepr::from(&v.var_light),
                    bound: v.bound,
                    bound_holds: v.bound_holds,
                    decomposition_holds: v.decomposition_holds,
                })
            } else {
                None
            };
            serde_json::to_value(MomentsPayload {
                setup: SetupEcho::from(&setup),
                threshold: setup.split.threshold.value(),
                heavy_vertices: setup.split.heavy.len(),
                light_vertices: setup.split.light.len(),
                heavy_edges: m.heavy_edges,
                light_edges: m.light_edges,
                mu1: RationalRepr::from(&m.mu1),
                mu2: RationalRepr::from(&m.mu2),
                mu: RationalRepr::from(&m.mu),
                mode_prediction: predicted_mode_degree(&setup),
                variance,
            })?
        }
        ExperimentKind::EventFrequencies => {
            let g = graph.expect("validated");
            let setup = setup_for(cfg, g)?;
            let mode = predicted_mode_degree(&setup);
            let ids = match &p.events {
                Some(ids) => ids.clone(),
                None => vec![
                    EventId::XEquals(setup.ell),
                    EventId::D(mode.nearest.max(0) as u64),
                    EventId::Dstar,
                    EventId::E1,
                    EventId::E2,
                    EventId::E3,
                    EventId::E4,
                    EventId::F1,
                    EventId::F2,
                    EventId::F3,
                    EventId::F4,
                ],
            };
            let mc = mc_of(cfg);
            let conditional = match p.conditional_samples {
                Some(s) if setup.m >= 1 => Some(conditional_q_edges(&setup, mc.seed, s)?),
                Some(_) => return Err(config("params.conditional_samples needs m >= 1")),
                None => None,
            };
            serde_json::to_value(EventFrequenciesPayload {
                setup: SetupEcho::from(&setup),
                mode_prediction: mode,
                estimates: named(estimate_events(&setup, &ids, mc)),
                conditional_q_edges: conditional,
            })?
        }
        ExperimentKind::Hypergeom => {
            let spec = HypergeomSpec {
                population: p.population.unwrap(),
                special: p.special.unwrap(),
                draws: p.draws.unwrap(),
            };
            let pmf = hypergeom_pmf(spec)?;
            serde_json::to_value(HypergeomPayload {
                spec,
                mean: spec.mean(),
                variance: spec.variance(),
                argmax: pmf.argmax,
                max: RationalRepr::from(&pmf.max),
                unimodal: pmf.is_unimodal(),
                anti_concentration: anti_concentration(spec)?,
                pmf: pmf
                    .probs
                    .iter()
                    .enumerate()
                    .map(|(j, q)| HypergeomRow {
                        i: pmf.min + j as u64,
                        prob: fraction_string(q),
                        prob_f64: to_f64(q),
                    })
                    .collect(),
            })?
        }
        ExperimentKind::PoissonBound => {
            let d_max = p.d_max.unwrap();
            let inv_e = (-1.0f64).exp();
            let rows = (1..=d_max)
                .map(|d| {
                    poisson_mode_bound(d).map(|b| PoissonRow {
                        d,
                        value: b.value,
                        ln_value: b.ln_value,
                        maximized_at_d: b.maximized_at_d,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            serde_json::to_value(PoissonPayload {
                d_max,
                inverse_e: inv_e,
                all_at_most_inverse_e: rows.iter().all(|r| r.value <= inv_e + POISSON_TOLERANCE),
                equality_at_one: (rows[0].value - inv_e).abs() <= POISSON_TOLERANCE,
                rows,
            })?
        }
    };
    Ok(value)
}

const ESTIMATE_COLUMNS: [&str; 6] = ["successes", "trials", "point", "ci_low", "ci_high", "confidence_level"];

fn estimate_cells(e: &Estimate) -> Vec<String> {
    vec![
        e.successes.to_string(),
        e.trials.to_string(),
        num(e.point),
        num(e.ci_low),
        num(e.ci_high),
        num(e.confidence_level),
    ]
}

fn estimate_table(first: &str, rows: Vec<(String, &Estimate)>) -> CsvTable {
    let mut header = vec![first];
    header.extend(ESTIMATE_COLUMNS);
    let mut t = CsvTable::new(&header);
    for (label, e) in rows {
        t.push(std::iter::once(label).chain(estimate_cells(e)));
    }
    t
}

fn repr_row(name: &str, r: &RationalRepr) -> Vec<String> {
    vec![name.to_string(), r.fraction.clone(), num(r.value)]
}

/// The plot-ready table of a payload. Every cell is read back from the JSON payload.
pub fn csv_projection(kind: ExperimentKind, payload: &Value) -> Result<CsvTable> {
    let v = payload.clone();
    Ok(match kind {
        ExperimentKind::ExactPmf => {
            let p: ExactPmfPayload = serde_json::from_value(v)?;
            let mut t = CsvTable::new(&["ell", "count", "probability", "probability_f64"]);
            for (l, frac) in &p.probs {
                t.push([l.to_string(), p.counts[l].to_string(), frac.clone(), num(p.probs_f64[l])]);
            }
            t
        }
        ExperimentKind::Extremal => {
            let p: ExtremalPayload = serde_json::from_value(v)?;
            let mut t = CsvTable::new(&["n", "k", "ell", "value", "value_f64", "witness_graph6", "graphs_scanned"]);
            t.push([
                p.n.to_string(),
                p.k.to_string(),
                p.ell.to_string(),
                p.value,
                num(p.value_f64),
                p.witness_graph6.unwrap_or_default(),
                p.graphs_scanned.to_string(),
            ]);
            t
        }
        ExperimentKind::Monotonicity => {
            let p: MonotonicityPayload = serde_json::from_value(v)?;
            let mut t = CsvTable::new(&["n", "value", "value_f64", "witness_graph6"]);
            for r in p.rows {
                t.push([r.n.to_string(), r.value, num(r.value_f64), r.witness_graph6.unwrap_or_default()]);
            }
            t
        }
        ExperimentKind::McEvent => {
            let p: McEventPayload = serde_json::from_value(v)?;
            estimate_table("event", p.estimates.iter().map(|e| (e.event.to_string(), &e.estimate)).collect())
        }
        ExperimentKind::EventFrequencies => {
            let p: EventFrequenciesPayload = serde_json::from_value(v)?;
            estimate_table("event", p.estimates.iter().map(|e| (e.event.to_string(), &e.estimate)).collect())
        }
        ExperimentKind::Containment => {
            let p: ContainmentPayload = serde_json::from_value(v)?;
            estimate_table(
                "quantity",
                vec![
                    ("difference".into(), &p.difference),
                    ("intersection".into(), &p.intersection),
                    ("event".into(), &p.event_estimate),
                ],
            )
        }
        ExperimentKind::Coupling => {
            let p: CouplingReport = serde_json::from_value(v)?;
            estimate_table(
                "quantity",
                vec![
                    ("pr_x_tilde".into(), &p.pr_x_tilde),
                    ("pr_both".into(), &p.pr_both),
                    ("pr_y1".into(), &p.pr_y1),
                    ("pr_distinct".into(), &p.pr_distinct),
                ],
            )
        }
        ExperimentKind::Moments => {
            let p: MomentsPayload = serde_json::from_value(v)?;
            let mut t = CsvTable::new(&["quantity", "fraction", "value"]);
            t.push(repr_row("mu1", &p.mu1));
            t.push(repr_row("mu2", &p.mu2));
            t.push(repr_row("mu", &p.mu));
            if let Some(var) = &p.variance {
                t.push(repr_row("var_x_minus_z", &var.variance));
                t.push(repr_row("var_heavy", &var.var_heavy));
                t.push(repr_row("var_light", &var.var_light));
            }
            t
        }
        ExperimentKind::Hypergeom => {
            let p: HypergeomPayload = serde_json::from_value(v)?;
            let mut t = CsvTable::new(&["i", "probability", "probability_f64"]);
            for r in p.pmf {
                t.push([r.i.to_string(), r.prob, num(r.prob_f64)]);
            }
            t
        }
        ExperimentKind::PoissonBound => {
            let p: PoissonPayload = serde_json::from_value(v)?;
            let mut t = CsvTable::new(&["d", "value", "ln_value", "maximized_at_d"]);
            for r in p.rows {
                t.push([r.d.to_string(), num(r.value), num(r.ln_value), r.maximized_at_d.to_string()]);
            }
            t
        }
    })
}
