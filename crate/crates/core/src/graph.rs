//! Simple graphs with packed bitset adjacency rows, vertex sets, and the two counting
//! primitives everything else is built from: `e(S)` ([`Graph::induced_edges`]) and
//! `e(v, S)` ([`Graph::degree_into`]).

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::stream_rng;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Iterates the indices of set bits in a word slice.
pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            }
        })
    })
}

/// A subset of `{0, .., n-1}` stored as a bitset with a cached size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
    size: usize,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; words_for(n)],
            size: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    /// Builds a set from vertex indices; duplicates are collapsed.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Universe size.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && (self.words[v / 64] >> (v % 64)) & 1 == 1
    }

    /// Adds `v`; returns whether it was newly inserted. Panics if `v` is out of range.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.n, "vertex {v} out of range {}", self.n);
        let bit = 1u64 << (v % 64);
        let w = &mut self.words[v / 64];
        if *w & bit == 0 {
            *w |= bit;
            self.size += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if !self.contains(v) {
            return false;
        }
        self.words[v / 64] &= !(1u64 << (v % 64));
        self.size -= 1;
        true
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_bits(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.n, other.n);
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        VertexSet { n: self.n, words, size }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.n, other.n);
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        VertexSet { n: self.n, words, size }
    }

    pub fn complement(&self) -> VertexSet {
        let mut out = VertexSet::full(self.n);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o &= !w;
        }
        out.size = self.n - self.size;
        out
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Immutable simple graph on vertices `0..n`.
///
/// Row `v` is a bitset of the neighbours of `v`; rows are stored back to back, each
/// `ceil(n / 64)` words long. The adjacency is symmetric and irreflexive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    wpr: usize,
    rows: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Graph on `n` vertices with the given edges; repeated pairs collapse to one edge.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut g = Graph::empty_unchecked(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            g.add_edge_unchecked(u, v);
        }
        Ok(g)
    }

    pub(crate) fn empty_unchecked(n: usize) -> Self {
        let wpr = words_for(n);
        Graph {
            n,
            wpr,
            rows: vec![0; n * wpr],
            edge_count: 0,
        }
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (bu, bv) = (1u64 << (v % 64), 1u64 << (u % 64));
        let iu = u * self.wpr + v / 64;
        if self.rows[iu] & bu == 0 {
            self.rows[iu] |= bu;
            self.rows[v * self.wpr + u / 64] |= bv;
            self.edge_count += 1;
        }
    }

    /// Builds a graph on `n <= 64` vertices from single-word rows. The caller guarantees
    /// symmetry and irreflexivity.
    pub(crate) fn from_small_rows(n: usize, rows: &[u64]) -> Self {
        debug_assert!(n <= 64 && rows.len() == n);
        let edge_count = rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2;
        Graph {
            n,
            wpr: 1,
            rows: rows.to_vec(),
            edge_count,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Words per adjacency row.
    pub fn row_words(&self) -> usize {
        self.wpr
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.wpr..(v + 1) * self.wpr]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.rows[u * self.wpr + v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// `e(v, S)`: neighbours of `v` inside `s`. `v` itself never counts.
    #[inline]
    pub fn degree_into(&self, v: usize, s: &VertexSet) -> usize {
        debug_assert_eq!(s.universe(), self.n);
        and_popcount(self.row(v), s.words()) as usize
    }

    /// `e(S)`: edges with both endpoints in `s`.
    pub fn induced_edges(&self, s: &VertexSet) -> usize {
        debug_assert_eq!(s.universe(), self.n);
        s.iter().map(|v| self.degree_into(v, s)).sum::<usize>() / 2
    }

    /// `e(S)` for a set given as a list of distinct vertices, by pairwise adjacency
    /// tests. Cheaper than [`Graph::induced_edges`] when `|S|^2` is small against `n`.
    pub fn induced_edges_of(&self, vertices: &[usize]) -> usize {
        let mut e = 0;
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                e += self.has_edge(u, v) as usize;
            }
        }
        e
    }

    /// The complement graph on the same vertex set.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty_unchecked(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge_unchecked(u, v);
                }
            }
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty_unchecked(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge_unchecked(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge_unchecked(u + self.n, v + self.n);
        }
        g
    }

    /// Graph obtained by relabelling vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(invalid("permutation length differs from vertex count"));
        }
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n, &edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// A vertex set together with its induced edge count, updated incrementally.
///
/// Each insertion or removal costs one row-AND-popcount; this is what lets subset
/// enumeration move from one k-subset to the next in constant work per move.
#[derive(Clone, Debug)]
pub struct EdgeTally {
    set: VertexSet,
    edges: usize,
}

impl EdgeTally {
    pub fn new(g: &Graph) -> Self {
        EdgeTally {
            set: VertexSet::empty(g.n()),
            edges: 0,
        }
    }

    pub fn from_set(g: &Graph, set: VertexSet) -> Self {
        let edges = g.induced_edges(&set);
        EdgeTally { set, edges }
    }

    /// Edge count change caused by adding `v` (`v` not yet a member).
    #[inline]
    pub fn delta_add(&self, g: &Graph, v: usize) -> usize {
        g.degree_into(v, &self.set)
    }

    pub fn add(&mut self, g: &Graph, v: usize) {
        if !self.set.contains(v) {
            self.edges += g.degree_into(v, &self.set);
            self.set.insert(v);
        }
    }

    pub fn remove(&mut self, g: &Graph, v: usize) {
        if self.set.remove(v) {
            self.edges -= g.degree_into(v, &self.set);
        }
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }
}

/// Graph families used as experiment inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Empty { n: usize },
    Complete { n: usize },
    /// Cycle `0-1-...-(n-1)-0`; `n >= 3`.
    Cycle { n: usize },
    /// Parts `0..a` and `a..a+b`.
    CompleteBipartite { a: usize, b: usize },
    /// Erdős–Rényi `G(n, p)`; each pair `u < v`, in row-major order, is kept when a
    /// Bernoulli(p) draw from stream 0 of `seed` succeeds.
    Gnp { n: usize, p: f64, seed: u64 },
    /// Disjoint union of the parts, in order.
    UnionOf { parts: Vec<FamilySpec> },
    /// `copies` disjoint copies of `of`.
    Copies { copies: usize, of: Box<FamilySpec> },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |n: usize, what: &str| {
            if n == 0 {
                Err(invalid(format!("{what} must be positive")))
            } else {
                Ok(())
            }
        };
        match self {
            FamilySpec::Empty { n } | FamilySpec::Complete { n } => positive(*n, "n"),
            FamilySpec::Cycle { n } => {
                if *n < 3 {
                    Err(invalid("a cycle needs at least 3 vertices"))
                } else {
                    Ok(())
                }
            }
            FamilySpec::CompleteBipartite { a, b } => {
                positive(*a, "part size a")?;
                positive(*b, "part size b")
            }
            FamilySpec::Gnp { n, p, .. } => {
                positive(*n, "n")?;
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::Probability(*p));
                }
                Ok(())
            }
            FamilySpec::UnionOf { parts } => {
                if parts.is_empty() {
                    return Err(invalid("union_of needs at least one part"));
                }
                parts.iter().try_for_each(|p| p.validate())
            }
            FamilySpec::Copies { copies, of } => {
                positive(*copies, "copies")?;
                of.validate()
            }
        }
    }
}

/// Builds the graph described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    Ok(match spec {
        FamilySpec::Empty { n } => Graph::empty_unchecked(*n),
        FamilySpec::Complete { n } => {
            let mut g = Graph::empty_unchecked(*n);
            for u in 0..*n {
                for v in u + 1..*n {
                    g.add_edge_unchecked(u, v);
                }
            }
            g
        }
        FamilySpec::Cycle { n } => {
            let mut g = Graph::empty_unchecked(*n);
            for v in 0..*n {
                g.add_edge_unchecked(v, (v + 1) % n);
            }
            g
        }
        FamilySpec::CompleteBipartite { a, b } => {
            let mut g = Graph::empty_unchecked(a + b);
            for u in 0..*a {
                for v in *a..a + b {
                    g.add_edge_unchecked(u, v);
                }
            }
            g
        }
        FamilySpec::Gnp { n, p, seed } => {
            let mut g = Graph::empty_unchecked(*n);
            let mut rng = stream_rng(*seed, 0);
            for u in 0..*n {
                for v in u + 1..*n {
                    if rng.random_bool(*p) {
                        g.add_edge_unchecked(u, v);
                    }
                }
            }
            g
        }
        FamilySpec::UnionOf { parts } => {
            let mut it = parts.iter();
            let mut g = generate(it.next().expect("validated non-empty"))?;
            for p in it {
                g = g.disjoint_union(&generate(p)?);
            }
            g
        }
        FamilySpec::Copies { copies, of } => {
            let one = generate(of)?;
            let mut g = one.clone();
            for _ in 1..*copies {
                g = g.disjoint_union(&one);
            }
            g
        }
    })
}

/// The heavy/light threshold `n * ell^(1/3) / k`, kept symbolic so comparisons are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeThreshold {
    pub n: usize,
    pub k: usize,
    pub ell: u64,
}

impl DegreeThreshold {
    /// `deg >= n * ell^(1/3) / k`, decided as `(k * deg)^3 >= n^3 * ell` in integers.
    pub fn is_met_by(&self, deg: usize) -> bool {
        let lhs = (self.k as u128 * deg as u128).pow(3);
        let rhs = (self.n as u128).pow(3) * self.ell as u128;
        lhs >= rhs
    }

    pub fn value(&self) -> f64 {
        self.n as f64 * (self.ell as f64).cbrt() / self.k as f64
    }
}

/// Partition of the vertices by degree against [`DegreeThreshold`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyLightSplit {
    pub heavy: VertexSet,
    pub light: VertexSet,
    pub threshold: DegreeThreshold,
}

impl HeavyLightSplit {
    pub fn is_heavy(&self, v: usize) -> bool {
        self.heavy.contains(v)
    }
}

/// Splits the vertices of `g` into heavy (`deg >= n ell^(1/3) / k`) and light ones.
pub fn heavy_light(g: &Graph, k: usize, ell: u64) -> Result<HeavyLightSplit> {
    if k == 0 || ell == 0 {
        return Err(invalid("heavy/light split needs k >= 1 and ell >= 1"));
    }
    let threshold = DegreeThreshold { n: g.n(), k, ell };
    let mut heavy = VertexSet::empty(g.n());
    for v in 0..g.n() {
        if threshold.is_met_by(g.degree(v)) {
            heavy.insert(v);
        }
    }
    let light = heavy.complement();
    Ok(HeavyLightSplit {
        heavy,
        light,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(n: usize) -> Graph {
        generate(&FamilySpec::Complete { n }).unwrap()
    }

    fn c5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn from_edges_examples() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(k3, k(3));
        let e2 = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(e2.edge_count(), 0);
        assert_eq!(e2.n(), 2);
        assert!(c5().degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn from_edges_collapses_duplicates() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(Graph::from_edges(3, &[(1, 1)]), Err(Error::Loop(1))));
        assert!(matches!(Graph::from_edges(0, &[]), Err(Error::NoVertices)));
    }

    #[test]
    fn induced_edges_examples() {
        let s = VertexSet::from_vertices(5, [0, 1, 2]).unwrap();
        assert_eq!(c5().induced_edges(&s), 2);
        let e5 = generate(&FamilySpec::Empty { n: 5 }).unwrap();
        assert_eq!(e5.induced_edges(&VertexSet::full(5)), 0);
        assert_eq!(e5.induced_edges(&VertexSet::empty(5)), 0);
        let k4 = k(4);
        for drop in 0..4 {
            let s = VertexSet::from_vertices(4, (0..4).filter(|&v| v != drop)).unwrap();
            assert_eq!(k4.induced_edges(&s), 3);
        }
    }

    #[test]
    fn degree_into_examples() {
        let s = VertexSet::from_vertices(5, [1, 2, 3, 4]).unwrap();
        assert_eq!(c5().degree_into(0, &s), 2);
        let e5 = generate(&FamilySpec::Empty { n: 5 }).unwrap();
        assert_eq!(e5.degree_into(0, &VertexSet::from_vertices(5, [1, 2]).unwrap()), 0);
        let s = VertexSet::from_vertices(5, [1, 2, 3]).unwrap();
        assert_eq!(k(5).degree_into(0, &s), 3);
        // v itself is ignored
        let s = VertexSet::from_vertices(5, [0, 1, 2, 3]).unwrap();
        assert_eq!(k(5).degree_into(0, &s), 3);
    }

    #[test]
    fn generate_examples() {
        let star = generate(&FamilySpec::CompleteBipartite { a: 1, b: 4 }).unwrap();
        assert_eq!(star.edge_count(), 4);
        assert_eq!(star.degree(0), 4);
        let g0 = generate(&FamilySpec::Gnp { n: 100, p: 0.0, seed: 3 }).unwrap();
        assert_eq!(g0.edge_count(), 0);
        let g1 = generate(&FamilySpec::Gnp { n: 100, p: 1.0, seed: 3 }).unwrap();
        assert_eq!(g1, k(100));
        assert!(matches!(
            generate(&FamilySpec::Gnp { n: 10, p: 1.5, seed: 0 }),
            Err(Error::Probability(_))
        ));
        let cyc = generate(&FamilySpec::Cycle { n: 5 }).unwrap();
        assert_eq!(cyc, c5());
        let two = generate(&FamilySpec::Copies {
            copies: 2,
            of: Box::new(FamilySpec::Cycle { n: 5 }),
        })
        .unwrap();
        assert_eq!(two.n(), 10);
        assert_eq!(two.edge_count(), 10);
        assert!(two.has_edge(9, 5) && !two.has_edge(4, 5));
    }

    #[test]
    fn gnp_is_a_pure_function_of_its_inputs() {
        let spec = FamilySpec::Gnp { n: 80, p: 0.3, seed: 42 };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = FamilySpec::Gnp { n: 80, p: 0.3, seed: 43 };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn heavy_light_examples() {
        let e10 = generate(&FamilySpec::Empty { n: 10 }).unwrap();
        let s = heavy_light(&e10, 3, 1).unwrap();
        assert_eq!(s.light.len(), 10);
        assert!(s.heavy.is_empty());

        let s = heavy_light(&k(10), 10, 1).unwrap();
        assert_eq!(s.heavy.len(), 10);

        let star = generate(&FamilySpec::CompleteBipartite { a: 1, b: 9 }).unwrap();
        let s = heavy_light(&star, 5, 8).unwrap();
        assert_eq!(s.threshold.value(), 4.0);
        assert_eq!(s.heavy.to_vec(), vec![0]);
        assert_eq!(s.light.len(), 9);
    }

    #[test]
    fn threshold_exact_at_integer_boundary() {
        // n * ell^(1/3) / k lands exactly on an integer degree in each case.
        for &(n, k, ell, d) in &[(10, 5, 8, 4), (27, 9, 27, 9), (12, 4, 1, 3), (100, 20, 125, 25)] {
            let t = DegreeThreshold { n, k, ell };
            assert!(t.is_met_by(d), "{n} {k} {ell}");
            assert!(!t.is_met_by(d - 1));
            assert_eq!(t.is_met_by(d), d as f64 >= t.value());
        }
    }

    #[test]
    fn edge_tally_tracks_induced_edges() {
        let g = c5();
        let mut t = EdgeTally::new(&g);
        t.add(&g, 0);
        t.add(&g, 1);
        assert_eq!(t.edges(), 1);
        assert_eq!(t.delta_add(&g, 2), 1);
        t.add(&g, 2);
        assert_eq!(t.edges(), 2);
        t.remove(&g, 1);
        assert_eq!(t.edges(), 0);
        t.remove(&g, 1);
        assert_eq!(t.edges(), 0);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..80).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..200).prop_map(move |pairs| {
                let edges: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn adjacency_invariants(g in arb_graph()) {
            let mut pop = 0;
            for u in 0..g.n() {
                prop_assert!(!g.has_edge(u, u));
                for v in 0..g.n() {
                    prop_assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
                }
                pop += g.degree(u);
            }
            prop_assert_eq!(pop, 2 * g.edge_count());
        }

        #[test]
        fn handshake_on_subsets(g in arb_graph(), mask in proptest::collection::vec(any::<bool>(), 80)) {
            let s = VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&v| mask[v])).unwrap();
            let total: usize = s.iter().map(|v| g.degree_into(v, &s)).sum();
            prop_assert_eq!(total % 2, 0);
            prop_assert_eq!(g.induced_edges(&s), total / 2);
            prop_assert_eq!(g.induced_edges_of(&s.to_vec()), total / 2);
        }

        #[test]
        fn complement_is_an_involution(g in arb_graph()) {
            let c = g.complement();
            prop_assert_eq!(c.edge_count() + g.edge_count(), g.n() * (g.n() - 1) / 2);
            prop_assert_eq!(c.complement(), g);
        }
    }
}
