//! Exact law of `X_{G,k}` (edges induced by a uniform k-subset) and the extremal value
//! `I(n, k, ell) = max_G Pr[X_{G,k} = ell]` over labelled graphs or a graph6 catalog.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, RevolvingDoor, Swap};
use crate::error::{invalid, Error, Result};
use crate::exact::ratio;
use crate::graph::{EdgeTally, Graph, VertexSet};
use crate::graph6::read_graph6_lines;

/// Default cap on `C(n, k)` for full enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 500_000_000;

/// Largest `n` for the exhaustive labelled search (`2^21` graphs at `n = 7`).
pub const MAX_EXHAUSTIVE_N: usize = 7;

/// Exact distribution of `X_{G,k}`: `counts[ell]` k-subsets induce `ell` edges, out of
/// `total = C(n, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistTable {
    pub n: usize,
    pub k: usize,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl DistTable {
    /// `C(k, 2)`, the largest possible value of `X_{G,k}`.
    pub fn support_max(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn prob(&self, ell: usize) -> BigRational {
        let c = self.counts.get(ell).copied().unwrap_or(0);
        ratio(c, self.total)
    }

    /// Non-zero probabilities keyed by edge count.
    pub fn probs(&self) -> BTreeMap<usize, BigRational> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(ell, &c)| (ell, ratio(c, self.total)))
            .collect()
    }

    pub fn total_mass(&self) -> BigRational {
        self.probs().values().fold(BigRational::zero(), |a, p| a + p)
    }

    pub fn mean(&self) -> BigRational {
        let s: u128 = self.counts.iter().enumerate().map(|(e, &c)| e as u128 * c as u128).sum();
        ratio(s, self.total)
    }
}

fn check_budget(n: usize, k: usize, budget: u64) -> Result<u64> {
    if k == 0 || k > n {
        return Err(invalid(format!("subset size k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    match binomial(n as u64, k as u64) {
        Some(c) if c <= budget as u128 => Ok(c as u64),
        c => Err(Error::BudgetExceeded {
            n,
            k,
            subsets: c.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string()),
            budget,
        }),
    }
}

/// Tallies `e(A)` over all k-subsets of a graph with single-word rows.
fn tally_small(rows: &[u64], k: usize, swaps: &[Swap], counts: &mut [u64]) {
    let mut mask: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut e: u32 = (0..k).map(|v| (rows[v] & mask).count_ones()).sum::<u32>() / 2;
    counts[e as usize] += 1;
    for s in swaps {
        mask &= !(1u64 << s.out);
        e -= (rows[s.out] & mask).count_ones();
        e += (rows[s.into] & mask).count_ones();
        mask |= 1u64 << s.into;
        counts[e as usize] += 1;
    }
}

fn tally(g: &Graph, k: usize, counts: &mut [u64]) {
    if g.row_words() == 1 {
        let rows: Vec<u64> = (0..g.n()).map(|v| g.row(v)[0]).collect();
        let mut rd = RevolvingDoor::new(g.n(), k);
        let swaps: Vec<Swap> = std::iter::from_fn(|| rd.next_swap()).collect();
        tally_small(&rows, k, &swaps, counts);
        return;
    }
    let mut rd = RevolvingDoor::new(g.n(), k);
    let start = VertexSet::from_vertices(g.n(), rd.current().iter().copied()).expect("in range");
    let mut t = EdgeTally::from_set(g, start);
    counts[t.edges()] += 1;
    while let Some(s) = rd.next_swap() {
        t.remove(g, s.out);
        t.add(g, s.into);
        counts[t.edges()] += 1;
    }
}

/// Exact law of `X_{G,k}` with the default enumeration budget.
pub fn exact_pmf(g: &Graph, k: usize) -> Result<DistTable> {
    exact_pmf_with_budget(g, k, DEFAULT_ENUMERATION_BUDGET)
}

/// Exact law of `X_{G,k}`, enumerating all `C(n, k)` subsets in revolving-door order.
pub fn exact_pmf_with_budget(g: &Graph, k: usize, budget: u64) -> Result<DistTable> {
    let total = check_budget(g.n(), k, budget)?;
    let mut counts = vec![0u64; k * (k - 1) / 2 + 1];
    tally(g, k, &mut counts);
    Ok(DistTable {
        n: g.n(),
        k,
        counts,
        total,
    })
}

/// `Pr[X_{G,k} = ell]`; zero outside `0..=C(k,2)`.
pub fn exact_prob(g: &Graph, k: usize, ell: usize) -> Result<BigRational> {
    Ok(exact_pmf(g, k)?.prob(ell))
}

/// Where the extremal search takes its graphs from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtremalSource {
    /// All `2^C(n,2)` labelled graphs on `n <= 7` vertices.
    ExhaustiveLabeled,
    /// graph6 lines, one `n`-vertex graph per line.
    Catalog { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalResult {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub value: BigRational,
    /// First scanned graph attaining `value`.
    pub witness: Graph,
    pub graphs_scanned: u64,
    pub source: ExtremalSource,
}

/// Position of each labelled-graph index bit: bit `b` is the `b`-th pair of the graph6
/// upper triangle order `(0,1), (0,2), (1,2), (0,3), ...`.
fn pair_order(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    pairs
}

fn rows_of_index(pairs: &[(usize, usize)], index: u64, rows: &mut [u64]) {
    rows.iter_mut().for_each(|r| *r = 0);
    let mut bits = index;
    while bits != 0 {
        let b = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let (i, j) = pairs[b];
        rows[i] |= 1 << j;
        rows[j] |= 1 << i;
    }
}

/// The labelled graph with the given index in the exhaustive scan order.
pub fn labeled_graph(n: usize, index: u64) -> Graph {
    let pairs = pair_order(n);
    let mut rows = vec![0u64; n];
    rows_of_index(&pairs, index, &mut rows);
    Graph::from_small_rows(n, &rows)
}

const SHARDS: u64 = 64;

fn scan_labeled(n: usize, k: usize, ell: usize) -> (u64, u64) {
    let pairs = pair_order(n);
    let space: u64 = 1 << pairs.len();
    let swaps = RevolvingDoor::all_swaps(n, k);
    let support = k * (k - 1) / 2 + 1;
    let shards = SHARDS.min(space);
    let per = space / shards;
    // (best count, first index attaining it), per shard in shard order
    let results: Vec<(u64, u64)> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rows = vec![0u64; n];
            let mut counts = vec![0u64; support];
            let mut best = (0u64, s * per);
            let mut first = true;
            for index in s * per..(s + 1) * per {
                rows_of_index(&pairs, index, &mut rows);
                counts.iter_mut().for_each(|c| *c = 0);
                tally_small(&rows, k, &swaps, &mut counts);
                let c = counts.get(ell).copied().unwrap_or(0);
                if first || c > best.0 {
                    best = (c, index);
                    first = false;
                }
            }
            best
        })
        .collect();
    let mut best = results[0];
    for &r in &results[1..] {
        if r.0 > best.0 {
            best = r;
        }
    }
    best
}

/// `I(n, k, ell)` with a witness.
///
/// Ties go to the first graph in scan order: increasing labelled index for the
/// exhaustive search, file order for a catalog.
pub fn max_over_graphs(n: usize, k: usize, ell: usize, source: &ExtremalSource) -> Result<ExtremalResult> {
    match source {
        ExtremalSource::ExhaustiveLabeled => max_over_labeled(n, k, ell),
        ExtremalSource::Catalog { path } => {
            let file = File::open(path).map_err(crate::error::file_err(path))?;
            let mut r = max_over_catalog(BufReader::new(file), n, k, ell)?;
            r.source = source.clone();
            Ok(r)
        }
    }
}

fn max_over_labeled(n: usize, k: usize, ell: usize) -> Result<ExtremalResult> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(invalid(format!(
            "exhaustive labelled search supports n <= {MAX_EXHAUSTIVE_N}, got {n}"
        )));
    }
    let total = check_budget(n, k, u64::MAX)?;
    let (count, index) = scan_labeled(n, k, ell);
    Ok(ExtremalResult {
        n,
        k,
        ell,
        value: ratio(count, total),
        witness: labeled_graph(n, index),
        graphs_scanned: 1 << (n * (n - 1) / 2),
        source: ExtremalSource::ExhaustiveLabeled,
    })
}

/// Extremal search over graph6 lines read from `reader`. Every graph must have `n`
/// vertices.
pub fn max_over_catalog<R: BufRead>(reader: R, n: usize, k: usize, ell: usize) -> Result<ExtremalResult> {
    let total = check_budget(n, k, DEFAULT_ENUMERATION_BUDGET)?;
    let mut best: Option<(u64, Graph)> = None;
    let mut scanned = 0u64;
    let mut counts = vec![0u64; k * (k - 1) / 2 + 1];
    for (line, parsed) in read_graph6_lines(reader) {
        let g = parsed?;
        if g.n() != n {
            return Err(Error::CatalogVertexCount {
                line,
                expected: n,
                found: g.n(),
            });
        }
        counts.iter_mut().for_each(|c| *c = 0);
        tally(&g, k, &mut counts);
        let c = counts.get(ell).copied().unwrap_or(0);
        scanned += 1;
        if best.as_ref().is_none_or(|(b, _)| c > *b) {
            best = Some((c, g));
        }
    }
    let (count, witness) = best.ok_or_else(|| invalid("catalog contains no graphs"))?;
    Ok(ExtremalResult {
        n,
        k,
        ell,
        value: ratio(count, total),
        witness,
        graphs_scanned: scanned,
        source: ExtremalSource::Catalog {
            path: PathBuf::from("<stream>"),
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityRow {
    pub n: usize,
    pub value: BigRational,
    pub witness: Graph,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub k: usize,
    pub ell: usize,
    pub rows: Vec<MonotonicityRow>,
    /// Pairs `(n_i, n_{i+1})` of consecutive rows where the value went up.
    pub violations: Vec<(usize, usize)>,
}

impl MonotonicityReport {
    pub fn is_non_increasing(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `I(n, k, ell)` for each `n` by exhaustive labelled search, sorted by `n`.
pub fn monotonicity_report(n_list: &[usize], k: usize, ell: usize) -> Result<MonotonicityReport> {
    let points: Vec<_> = n_list.iter().map(|&n| (n, ExtremalSource::ExhaustiveLabeled)).collect();
    monotonicity_report_with(&points, k, ell)
}

/// As [`monotonicity_report`], with an explicit source per `n`.
pub fn monotonicity_report_with(points: &[(usize, ExtremalSource)], k: usize, ell: usize) -> Result<MonotonicityReport> {
    let mut points = points.to_vec();
    points.sort_by_key(|p| p.0);
    let rows = points
        .iter()
        .map(|(n, src)| {
            let r = max_over_graphs(*n, k, ell, src)?;
            Ok(MonotonicityRow {
                n: *n,
                value: r.value,
                witness: r.witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = rows
        .windows(2)
        .filter(|w| w[1].value > w[0].value)
        .map(|w| (w[0].n, w[1].n))
        .collect();
    Ok(MonotonicityReport { k, ell, rows, violations })
}

/// Reads a catalog path and returns the number of graphs in it (used for reporting).
pub fn catalog_len(path: &Path) -> Result<usize> {
    let f = File::open(path)?;
    Ok(BufReader::new(f).lines().filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty())).count())
}

/// Checks that the probabilities sum to one.
pub fn sums_to_one(t: &DistTable) -> bool {
    t.total_mass() == BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};
    use crate::graph6::write_graph6;
    use rand::{Rng, SeedableRng};

    fn c5() -> Graph {
        generate(&FamilySpec::Cycle { n: 5 }).unwrap()
    }

    /// Naive oracle: all k-subsets as bitmasks, edges counted pair by pair.
    fn naive_counts(g: &Graph, k: usize) -> Vec<u64> {
        let n = g.n();
        let mut counts = vec![0u64; k * (k - 1) / 2 + 1];
        for m in 0u64..1 << n {
            if m.count_ones() as usize != k {
                continue;
            }
            let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            let mut e = 0;
            for a in 0..vs.len() {
                for b in a + 1..vs.len() {
                    e += g.has_edge(vs[a], vs[b]) as usize;
                }
            }
            counts[e] += 1;
        }
        counts
    }

    #[test]
    fn exact_pmf_examples() {
        let t = exact_pmf(&c5(), 3).unwrap();
        let probs = t.probs();
        assert_eq!(probs.len(), 2);
        assert_eq!(probs[&1], ratio(1, 2));
        assert_eq!(probs[&2], ratio(1, 2));
        let t = exact_pmf(&generate(&FamilySpec::Empty { n: 6 }).unwrap(), 3).unwrap();
        assert_eq!(t.probs(), BTreeMap::from([(0, ratio(1, 1))]));
        let t = exact_pmf(&generate(&FamilySpec::Complete { n: 4 }).unwrap(), 2).unwrap();
        assert_eq!(t.probs(), BTreeMap::from([(1, ratio(1, 1))]));
    }

    #[test]
    fn exact_prob_examples() {
        assert_eq!(exact_prob(&c5(), 3, 1).unwrap(), ratio(1, 2));
        let e6 = generate(&FamilySpec::Empty { n: 6 }).unwrap();
        assert_eq!(exact_prob(&e6, 3, 1).unwrap(), ratio(0, 1));
        let k3k2 = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert_eq!(exact_prob(&k3k2, 3, 1).unwrap(), ratio(9, 10));
        assert_eq!(exact_prob(&c5(), 3, 99).unwrap(), ratio(0, 1));
    }

    #[test]
    fn budget_and_range_errors() {
        let g = generate(&FamilySpec::Empty { n: 40 }).unwrap();
        assert!(matches!(exact_pmf_with_budget(&g, 20, 1000), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(exact_pmf(&g, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(exact_pmf(&g, 41), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn agrees_with_naive_oracle_on_random_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(1..=14);
            let k = rng.random_range(1..=n);
            let p: f64 = rng.random();
            let g = generate(&FamilySpec::Gnp { n, p, seed: rng.random() }).unwrap();
            let t = exact_pmf(&g, k).unwrap();
            assert_eq!(t.counts, naive_counts(&g, k), "n={n} k={k}");
            assert!(sums_to_one(&t));
        }
    }

    #[test]
    fn multiword_path_matches_single_word_path() {
        // 70 vertices forces two words per row
        let g = generate(&FamilySpec::Gnp { n: 70, p: 0.2, seed: 5 }).unwrap();
        assert_eq!(g.row_words(), 2);
        let t = exact_pmf(&g, 3).unwrap();
        let mut counts = vec![0u64; 4];
        for a in 0..70 {
            for b in a + 1..70 {
                for c in b + 1..70 {
                    let e = g.has_edge(a, b) as usize + g.has_edge(a, c) as usize + g.has_edge(b, c) as usize;
                    counts[e] += 1;
                }
            }
        }
        assert_eq!(t.counts, counts);
    }

    #[test]
    fn labeled_index_follows_graph6_bit_order() {
        // index 1 is the single edge (0,1); index 0b100 is (1,2)
        assert_eq!(labeled_graph(3, 1).edges(), vec![(0, 1)]);
        assert_eq!(labeled_graph(3, 4).edges(), vec![(1, 2)]);
        assert_eq!(write_graph6(&labeled_graph(3, 7)).unwrap(), "Bw");
    }

    #[test]
    fn extremal_small_cases() {
        let r = max_over_graphs(4, 3, 0, &ExtremalSource::ExhaustiveLabeled).unwrap();
        assert_eq!(r.value, ratio(1, 1));
        assert_eq!(r.witness.edge_count(), 0);
        assert_eq!(r.graphs_scanned, 64);
        let r = max_over_graphs(4, 3, 3, &ExtremalSource::ExhaustiveLabeled).unwrap();
        assert_eq!(r.value, ratio(1, 1));
        assert_eq!(r.witness.edge_count(), 6);
        assert!(max_over_graphs(8, 3, 1, &ExtremalSource::ExhaustiveLabeled).is_err());
    }

    #[test]
    fn catalog_search_and_errors() {
        let text = "DQc\nDrw\nD??\n";
        let r = max_over_catalog(text.as_bytes(), 5, 3, 0).unwrap();
        assert_eq!(r.graphs_scanned, 3);
        assert_eq!(r.value, ratio(1, 1));
        assert_eq!(write_graph6(&r.witness).unwrap(), "D??");
        let bad = "DQc\nBw\n";
        assert!(matches!(
            max_over_catalog(bad.as_bytes(), 5, 3, 0),
            Err(Error::CatalogVertexCount { line: 2, expected: 5, found: 3 })
        ));
        assert!(max_over_catalog("".as_bytes(), 5, 3, 0).is_err());
    }

    #[test]
    fn monotonicity_small() {
        let r = monotonicity_report(&[5, 4], 3, 0).unwrap();
        assert_eq!(r.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 5]);
        assert!(r.is_non_increasing());
    }
}
