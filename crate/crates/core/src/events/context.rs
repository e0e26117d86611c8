use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::moments::{exact_moments_with_split, MomentReport};
use crate::error::{invalid, Error, Result};
use crate::graph::{DegreeThreshold, Graph, HeavyLightSplit, VertexSet};

/// Default slow-growth parameter: `max(1, ln k)`.
pub fn default_w(k: usize) -> f64 {
    (k as f64).ln().max(1.0)
}

/// Split size `m = round(k / (w^(1/3) sqrt(ell)))` clamped to `[1, k-1]`; `0` when `k < 2`.
pub fn default_m(k: usize, ell: u64, w: f64) -> usize {
    if k < 2 {
        return 0;
    }
    let raw = k as f64 / (w.cbrt() * (ell as f64).sqrt());
    let r = if raw.is_finite() { raw.round() as usize } else { k - 1 };
    r.clamp(1, k - 1)
}

/// Everything about a sampling experiment that does not depend on the draw: the graph,
/// `(k, ell, w, m)`, the heavy/light split and the exact moments `mu_1, mu_2`.
#[derive(Clone, Debug)]
pub struct EventSetup<'g> {
    pub graph: &'g Graph,
    pub k: usize,
    pub ell: u64,
    pub w: f64,
    pub m: usize,
    pub split: HeavyLightSplit,
    pub moments: MomentReport,
}

impl<'g> EventSetup<'g> {
    /// Setup with the default `w` and the `m` it implies.
    pub fn new(graph: &'g Graph, k: usize, ell: u64) -> Result<Self> {
        Self::with_w(graph, k, ell, default_w(k))
    }

    pub fn with_w(graph: &'g Graph, k: usize, ell: u64, w: f64) -> Result<Self> {
        if k == 0 || k > graph.n() {
            return Err(invalid(format!("k = {k} must satisfy 1 <= k <= n = {}", graph.n())));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(invalid(format!("w = {w} must be a positive real")));
        }
        // ell = 0 puts every vertex above the threshold
        let threshold = DegreeThreshold { n: graph.n(), k, ell };
        let mut heavy = VertexSet::empty(graph.n());
        for v in 0..graph.n() {
            if threshold.is_met_by(graph.degree(v)) {
                heavy.insert(v);
            }
        }
        let split = HeavyLightSplit {
            light: heavy.complement(),
            heavy,
            threshold,
        };
        let moments = exact_moments_with_split(graph, k, &split);
        Ok(EventSetup {
            graph,
            k,
            ell,
            w,
            m: default_m(k, ell, w),
            split,
            moments,
        })
    }

    /// Overrides the split size; `m = 0` makes `S = A` and `Q` empty.
    pub fn with_m(mut self, m: usize) -> Result<Self> {
        if m >= self.k {
            return Err(invalid(format!("m = {m} must be below k = {}", self.k)));
        }
        self.m = m;
        Ok(self)
    }

    /// `w * sqrt(ell)`, the exception allowance of `D_d` and `D_*`.
    pub fn d_allowance(&self) -> f64 {
        self.w * (self.ell as f64).sqrt()
    }

    /// `w * ell^(5/6)`, the half-width in `F_3` (and a third of the one in `F_4`).
    pub fn f_width(&self) -> f64 {
        self.w * (self.ell as f64).powf(5.0 / 6.0)
    }
}

/// One two-phase draw `A = S ∪ Q` with cached degrees.
///
/// `vertices()` lists `S` first (`|S| = k - m`) and then `Q`; `deg_a[i]` is `e(v_i, A)`
/// and `deg_s[i]` is `e(v_i, S)` for the `i`-th listed vertex.
#[derive(Clone, Debug)]
pub struct SampleContext<'a, 'g> {
    setup: &'a EventSetup<'g>,
    vertices: Vec<usize>,
    s_len: usize,
    s: VertexSet,
    q: VertexSet,
    a: VertexSet,
    deg_a: Vec<u32>,
    deg_s: Vec<u32>,
    e_s: usize,
    e_q: usize,
    e_a: usize,
}

impl<'a, 'g> SampleContext<'a, 'g> {
    /// Context for the draw whose first `s_len` vertices form `S` and the rest `Q`.
    pub fn new(setup: &'a EventSetup<'g>, vertices: Vec<usize>, s_len: usize) -> Result<Self> {
        let g = setup.graph;
        if s_len > vertices.len() {
            return Err(invalid("S is longer than the vertex list"));
        }
        let mut a = VertexSet::empty(g.n());
        let mut s = VertexSet::empty(g.n());
        let mut q = VertexSet::empty(g.n());
        for (i, &v) in vertices.iter().enumerate() {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if !a.insert(v) {
                return Err(invalid(format!("vertex {v} drawn twice")));
            }
            if i < s_len {
                s.insert(v);
            } else {
                q.insert(v);
            }
        }
        let len = vertices.len();
        let mut deg_a = vec![0u32; len];
        let mut deg_s = vec![0u32; len];
        let (mut e_s, mut e_q, mut e_a) = (0, 0, 0);
        for i in 0..len {
            for j in i + 1..len {
                if !g.has_edge(vertices[i], vertices[j]) {
                    continue;
                }
                e_a += 1;
                deg_a[i] += 1;
                deg_a[j] += 1;
                match (i < s_len, j < s_len) {
                    (true, true) => {
                        e_s += 1;
                        deg_s[i] += 1;
                        deg_s[j] += 1;
                    }
                    (false, false) => e_q += 1,
                    // i < j, so i is the S endpoint
                    _ => deg_s[j] += 1,
                }
            }
        }
        Ok(SampleContext {
            setup,
            vertices,
            s_len,
            s,
            q,
            a,
            deg_a,
            deg_s,
            e_s,
            e_q,
            e_a,
        })
    }

    pub fn setup(&self) -> &EventSetup<'g> {
        self.setup
    }

    pub fn graph(&self) -> &'g Graph {
        self.setup.graph
    }

    /// `S` then `Q`.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn s_vertices(&self) -> &[usize] {
        &self.vertices[..self.s_len]
    }

    pub fn q_vertices(&self) -> &[usize] {
        &self.vertices[self.s_len..]
    }

    pub fn a(&self) -> &VertexSet {
        &self.a
    }

    pub fn s(&self) -> &VertexSet {
        &self.s
    }

    pub fn q(&self) -> &VertexSet {
        &self.q
    }

    /// `X_{G,k} = e(A)`.
    pub fn x(&self) -> usize {
        self.e_a
    }

    pub fn e_s(&self) -> usize {
        self.e_s
    }

    pub fn e_q(&self) -> usize {
        self.e_q
    }

    /// `e(v, A)` for every listed vertex.
    pub fn degrees_in_a(&self) -> &[u32] {
        &self.deg_a
    }

    /// `e(v, S)` for every listed vertex.
    pub fn degrees_into_s(&self) -> &[u32] {
        &self.deg_s
    }

    /// `sum_{v in Q} e(v, S)`.
    pub fn q_into_s(&self) -> usize {
        self.deg_s[self.s_len..].iter().map(|&d| d as usize).sum()
    }

    pub fn is_heavy(&self, index: usize) -> bool {
        self.setup.split.is_heavy(self.vertices[index])
    }
}

/// The events of the decomposition, evaluated on a [`SampleContext`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EventId {
    /// All but at most `w sqrt(ell)` vertices of `A` have degree `d` in `G[A]`.
    D(u64),
    /// All but at most `w sqrt(ell)` vertices of `A` share one degree in `G[A]`.
    Dstar,
    /// `e(Q) = 0`.
    E1,
    /// `e(S) + sum_{v in Q} e(v, S) = ell`.
    E2,
    /// All but at most `w^(1/3)` vertices of `Q` have the same degree into `S`.
    E3,
    /// All but at most `w^(1/3)` vertices of `Q` have the same degree in `A`.
    E4,
    /// Every light `v` in `A` has `e(v, A) <= 2 ell^(1/3)`.
    F1,
    /// Every heavy `v` in `A` has `e(v, A) >= ell^(1/3) / 2`.
    F2,
    /// `|X - Z - mu| <= w ell^(5/6)`.
    F3,
    /// `|Z - k D| <= 3 w ell^(5/6)`, `D` the mode degree of `G[A]`.
    F4,
    /// `X_{G,k} = ell`.
    XEquals(u64),
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventId::D(d) => write!(f, "D({d})"),
            EventId::Dstar => f.write_str("Dstar"),
            EventId::E1 => f.write_str("E1"),
            EventId::E2 => f.write_str("E2"),
            EventId::E3 => f.write_str("E3"),
            EventId::E4 => f.write_str("E4"),
            EventId::F1 => f.write_str("F1"),
            EventId::F2 => f.write_str("F2"),
            EventId::F3 => f.write_str("F3"),
            EventId::F4 => f.write_str("F4"),
            EventId::XEquals(l) => write!(f, "X={l}"),
        }
    }
}

impl FromStr for EventId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let parse_num = |x: &str| {
            x.parse::<u64>()
                .map_err(|_| invalid(format!("bad number in event id {s:?}")))
        };
        Ok(match t.as_str() {
            "Dstar" | "D*" => EventId::Dstar,
            "E1" => EventId::E1,
            "E2" => EventId::E2,
            "E3" => EventId::E3,
            "E4" => EventId::E4,
            "F1" => EventId::F1,
            "F2" => EventId::F2,
            "F3" => EventId::F3,
            "F4" => EventId::F4,
            _ => {
                if let Some(rest) = t.strip_prefix("X=") {
                    EventId::XEquals(parse_num(rest)?)
                } else if let Some(inner) = t.strip_prefix("D(").and_then(|r| r.strip_suffix(')')) {
                    EventId::D(parse_num(inner)?)
                } else {
                    return Err(invalid(format!(
                        "unknown event id {s:?}; expected D(d), Dstar, E1..E4, F1..F4 or X=l"
                    )));
                }
            }
        })
    }
}

impl TryFrom<String> for EventId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<EventId> for String {
    fn from(e: EventId) -> String {
        e.to_string()
    }
}
