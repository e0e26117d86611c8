//! Degree statistics of `G[A]`, the heavy/light decomposition `X - Z = H - L`, and the
//! exact first and second moments behind it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::context::{EventSetup, SampleContext};
use crate::combin::{binomial, binomial_big, RevolvingDoor};
use crate::dist::DEFAULT_ENUMERATION_BUDGET;
use crate::error::{invalid, Error, Result};
use crate::exact::{ratio, ratio_big, to_f64};
use crate::graph::{heavy_light, EdgeTally, Graph, HeavyLightSplit, VertexSet};

/// Most frequent value and its multiplicity; ties go to the smallest value.
pub(crate) fn mode_of<I: IntoIterator<Item = u32>>(values: I) -> Option<(u32, usize)> {
    let mut v: Vec<u32> = values.into_iter().collect();
    if v.is_empty() {
        return None;
    }
    v.sort_unstable();
    let mut best = (v[0], 0usize);
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if j - i > best.1 {
            best = (v[i], j - i);
        }
        i = j;
    }
    Some(best)
}

/// Mode `D` of the degrees `e(v, A)`, `v in A`, with its multiplicity. Ties are broken
/// toward the smallest degree.
pub fn mode_degree(g: &Graph, a: &VertexSet) -> Result<(u32, usize)> {
    mode_of(a.iter().map(|v| g.degree_into(v, a) as u32)).ok_or_else(|| invalid("mode degree of an empty set"))
}

/// `Z = sum of e(v, A) over light v in A`.
pub fn light_degree_sum(ctx: &SampleContext<'_, '_>) -> u64 {
    ctx.degrees_in_a()
        .iter()
        .enumerate()
        .filter(|&(i, _)| !ctx.is_heavy(i))
        .map(|(_, &d)| d as u64)
        .sum()
}

/// How two edges `e, f` of the host graph relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRelation {
    Identical,
    ShareOne,
    Disjoint,
}

/// Moments of the indicators `X_e = [e ⊆ A]`, `X_f = [f ⊆ A]` for a uniform k-subset `A`
/// of an `n`-set.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorMoments {
    /// `E[X_e] = C(n-2, k-2) / C(n, k)`.
    pub mean: BigRational,
    /// `Pr[X_e X_f = 1]`.
    pub joint: BigRational,
    /// `Cov[X_e, X_f]` (the variance when the edges are identical).
    pub cov: BigRational,
}

pub fn edge_indicator_moments(n: usize, k: usize, relation: EdgeRelation) -> Result<IndicatorMoments> {
    let need = match relation {
        EdgeRelation::Identical => 2,
        EdgeRelation::ShareOne => 3,
        EdgeRelation::Disjoint => 4,
    };
    if n < need {
        return Err(invalid(format!("{relation:?} edges need n >= {need}, got {n}")));
    }
    if k < 2 || k > n {
        return Err(invalid(format!("k = {k} must satisfy 2 <= k <= n = {n}")));
    }
    let (n64, k64) = (n as u64, k as u64);
    let total = binomial_big(n64, k64);
    let mean = ratio_big(&binomial_big(n64 - 2, k64 - 2), &total);
    let covered = need as u64;
    let joint = if k64 >= covered {
        ratio_big(&binomial_big(n64 - covered, k64 - covered), &total)
    } else {
        BigRational::zero()
    };
    let cov = &joint - &mean * &mean;
    Ok(IndicatorMoments { mean, joint, cov })
}

/// `mu_1 = E[H]`, `mu_2 = E[L]` and `mu = mu_1 - mu_2 = E[X - Z]`, where `H` and `L` are
/// the heavy-heavy and light-light edges induced by `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub heavy_edges: usize,
    pub light_edges: usize,
    pub mu1: BigRational,
    pub mu2: BigRational,
    pub mu: BigRational,
}

pub(crate) fn exact_moments_with_split(g: &Graph, k: usize, split: &HeavyLightSplit) -> MomentReport {
    let n = g.n();
    let pair = if n < 2 {
        BigRational::zero()
    } else {
        ratio((k * (k - 1)) as u64, (n * (n - 1)) as u64)
    };
    let heavy_edges = g.induced_edges(&split.heavy);
    let light_edges = g.induced_edges(&split.light);
    let mu1 = &pair * BigInt::from(heavy_edges);
    let mu2 = &pair * BigInt::from(light_edges);
    MomentReport {
        heavy_edges,
        light_edges,
        mu: &mu1 - &mu2,
        mu1,
        mu2,
    }
}

/// Exact `mu_1, mu_2, mu` by linearity of expectation.
pub fn exact_moments(g: &Graph, k: usize, ell: u64) -> Result<MomentReport> {
    if k == 0 || k > g.n() {
        return Err(invalid(format!("k = {k} must satisfy 1 <= k <= n = {}", g.n())));
    }
    let split = heavy_light(g, k, ell)?;
    Ok(exact_moments_with_split(g, k, &split))
}

/// Exact variance of `X - Z = H - L` by full enumeration, next to the quantities it is
/// compared against.
#[derive(Clone, Debug, PartialEq)]
pub struct VarianceReport {
    pub variance: BigRational,
    pub var_heavy: BigRational,
    pub var_light: BigRational,
    /// `E[H - L]` from the enumeration; equals `mu` from [`exact_moments`].
    pub mean: BigRational,
    /// `30 ell^(5/3)`.
    pub bound: f64,
    pub bound_holds: bool,
    /// `variance <= 2 Var[H] + 2 Var[L]`.
    pub decomposition_holds: bool,
}

#[derive(Default)]
struct Sums {
    s: i128,
    s2: i128,
}

impl Sums {
    fn push(&mut self, x: i64) {
        self.s += x as i128;
        self.s2 += (x as i128) * (x as i128);
    }

    fn variance(&self, count: u64) -> BigRational {
        let n = BigInt::from(count);
        let num = &n * BigInt::from(self.s2) - BigInt::from(self.s) * BigInt::from(self.s);
        BigRational::new(num, &n * &n)
    }
}

pub fn variance_x_minus_z(g: &Graph, k: usize, ell: u64) -> Result<VarianceReport> {
    variance_x_minus_z_with_budget(g, k, ell, DEFAULT_ENUMERATION_BUDGET)
}

pub fn variance_x_minus_z_with_budget(g: &Graph, k: usize, ell: u64, budget: u64) -> Result<VarianceReport> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(invalid(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    let count = match binomial(n as u64, k as u64) {
        Some(c) if c <= budget as u128 => c as u64,
        c => {
            return Err(Error::BudgetExceeded {
                n,
                k,
                subsets: c.map_or_else(|| "more than 2^128".into(), |c| c.to_string()),
                budget,
            })
        }
    };
    let split = heavy_light(g, k, ell)?;
    let mut heavy = EdgeTally::new(g);
    let mut light = EdgeTally::new(g);
    let place = |t: (&mut EdgeTally, &mut EdgeTally), v: usize, add: bool| {
        let tally = if split.is_heavy(v) { t.0 } else { t.1 };
        if add {
            tally.add(g, v);
        } else {
            tally.remove(g, v);
        }
    };
    let mut rd = RevolvingDoor::new(n, k);
    for &v in rd.current() {
        place((&mut heavy, &mut light), v, true);
    }
    let (mut d, mut h, mut l) = (Sums::default(), Sums::default(), Sums::default());
    let mut record = |heavy: &EdgeTally, light: &EdgeTally| {
        let (hh, ll) = (heavy.edges() as i64, light.edges() as i64);
        d.push(hh - ll);
        h.push(hh);
        l.push(ll);
    };
    record(&heavy, &light);
    while let Some(s) = rd.next_swap() {
        place((&mut heavy, &mut light), s.out, false);
        place((&mut heavy, &mut light), s.into, true);
        record(&heavy, &light);
    }
    let variance = d.variance(count);
    let var_heavy = h.variance(count);
    let var_light = l.variance(count);
    let mean = ratio(BigInt::from(d.s), count);
    let bound = 30.0 * (ell as f64).powf(5.0 / 3.0);
    let two = BigInt::from(2);
    let decomposition_holds = variance <= &var_heavy * &two + &var_light * &two;
    Ok(VarianceReport {
        bound_holds: to_f64(&variance) <= bound,
        variance,
        var_heavy,
        var_light,
        mean,
        bound,
        decomposition_holds,
    })
}

/// Integer candidates for the mode degree, from `D = (ell - mu)/k ± (w/k) ell^(5/6)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModePrediction {
    /// `(ell - mu) / k`.
    pub center: f64,
    /// `(w / k) ell^(5/6)`.
    pub half_width: f64,
    /// Integer nearest to `center`, halves rounded down.
    pub nearest: i64,
    /// Integers inside `[center - half_width, center + half_width]`.
    pub candidates: Vec<i64>,
    /// Set when the interval is at least one unit wide, so it cannot single out a degree.
    pub ambiguous: bool,
    /// `Some(nearest)` unless ambiguous.
    pub degree: Option<i64>,
}

pub fn predicted_mode_degree(setup: &EventSetup<'_>) -> ModePrediction {
    let k = setup.k as f64;
    let center = (setup.ell as f64 - to_f64(&setup.moments.mu)) / k;
    let half_width = setup.w / k * (setup.ell as f64).powf(5.0 / 6.0);
    let nearest = (center - 0.5).ceil() as i64;
    let lo = (center - half_width).ceil() as i64;
    let hi = (center + half_width).floor() as i64;
    let candidates: Vec<i64> = (lo..=hi).collect();
    let ambiguous = 2.0 * half_width >= 1.0;
    ModePrediction {
        center,
        half_width,
        nearest,
        candidates,
        ambiguous,
        degree: (!ambiguous).then_some(nearest),
    }
}

/// Lower median of `e(v, S)` over `v ∉ S`: the `ceil(N/2)`-th smallest of the `N` values.
pub fn median_degree_into(g: &Graph, s: &VertexSet) -> Result<usize> {
    let mut vals: Vec<usize> = (0..g.n()).filter(|&v| !s.contains(v)).map(|v| g.degree_into(v, s)).collect();
    if vals.is_empty() {
        return Err(invalid("median over V \\ S is undefined when S = V"));
    }
    vals.sort_unstable();
    Ok(vals[vals.len().div_ceil(2) - 1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCase {
    /// All but at most `w^(1/4) n / m` outside vertices have `e(v, S) = d_med`.
    Concentrated,
    /// At least `w^(1/4) n / m` outside vertices differ from `d_med`.
    Spread,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitCaseReport {
    pub d_med: usize,
    /// Vertices outside `S` whose degree into `S` differs from `d_med`.
    pub differing: usize,
    /// `w^(1/4) n / m`.
    pub threshold: f64,
    pub case: SplitCase,
}

/// Which side of the median dichotomy the exposed set `S` falls on.
pub fn classify_split(ctx: &SampleContext<'_, '_>) -> Result<SplitCaseReport> {
    let g = ctx.graph();
    let s = ctx.s();
    let d_med = median_degree_into(g, s)?;
    let differing = (0..g.n())
        .filter(|&v| !s.contains(v) && g.degree_into(v, s) != d_med)
        .count();
    let setup = ctx.setup();
    let threshold = if setup.m == 0 {
        f64::INFINITY
    } else {
        setup.w.powf(0.25) * g.n() as f64 / setup.m as f64
    };
    let case = if (differing as f64) <= threshold {
        SplitCase::Concentrated
    } else {
        SplitCase::Spread
    };
    Ok(SplitCaseReport {
        d_med,
        differing,
        threshold,
        case,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::exact_pmf;
    use crate::graph::{generate, FamilySpec};

    fn fam(spec: FamilySpec) -> Graph {
        generate(&spec).unwrap()
    }

    /// Brute force over all k-subsets of {0..n-1}, edges e = {0,1} and f by relation.
    fn brute(n: usize, k: usize, relation: EdgeRelation) -> (BigRational, BigRational) {
        let f: (usize, usize) = match relation {
            EdgeRelation::Identical => (0, 1),
            EdgeRelation::ShareOne => (0, 2),
            EdgeRelation::Disjoint => (2, 3),
        };
        let (mut both, mut xe, mut total) = (0u64, 0u64, 0u64);
        for m in 0u32..1 << n {
            if m.count_ones() as usize != k {
                continue;
            }
            total += 1;
            let has = |v: usize| m >> v & 1 == 1;
            let e_in = has(0) && has(1);
            xe += e_in as u64;
            both += (e_in && has(f.0) && has(f.1)) as u64;
        }
        let mean = ratio(xe, total);
        let joint = ratio(both, total);
        (mean.clone(), joint - &mean * &mean)
    }

    #[test]
    fn indicator_examples() {
        let m = edge_indicator_moments(5, 3, EdgeRelation::Identical).unwrap();
        assert_eq!(m.mean, ratio(3, 10));
        assert_eq!(m.cov, ratio(21, 100));
        let m = edge_indicator_moments(5, 3, EdgeRelation::ShareOne).unwrap();
        assert_eq!(m.cov, ratio(1, 100));
        assert!(m.cov <= &m.mean * ratio(3, 5));
        let m = edge_indicator_moments(5, 3, EdgeRelation::Disjoint).unwrap();
        assert_eq!(m.cov, ratio(-9, 100));
        assert!(edge_indicator_moments(3, 2, EdgeRelation::Disjoint).is_err());
        assert!(edge_indicator_moments(5, 1, EdgeRelation::Identical).is_err());
    }

    #[test]
    fn indicator_closed_forms_match_brute_force() {
        for n in 2..=8 {
            for k in 2..=5.min(n) {
                for rel in [EdgeRelation::Identical, EdgeRelation::ShareOne, EdgeRelation::Disjoint] {
                    let Ok(m) = edge_indicator_moments(n, k, rel) else { continue };
                    let (mean, cov) = brute(n, k, rel);
                    assert_eq!(m.mean, mean, "n={n} k={k} {rel:?}");
                    assert_eq!(m.cov, cov, "n={n} k={k} {rel:?}");
                }
            }
        }
    }

    #[test]
    fn mode_degree_examples() {
        let k10 = fam(FamilySpec::Complete { n: 10 });
        let a = VertexSet::from_vertices(10, [1, 4, 6, 9]).unwrap();
        assert_eq!(mode_degree(&k10, &a).unwrap(), (3, 4));
        let e10 = fam(FamilySpec::Empty { n: 10 });
        assert_eq!(mode_degree(&e10, &a).unwrap(), (0, 4));
        let star = fam(FamilySpec::CompleteBipartite { a: 1, b: 9 });
        let a = VertexSet::from_vertices(10, [0, 3, 5, 7]).unwrap();
        assert_eq!(mode_degree(&star, &a).unwrap(), (1, 3));
        // tie between 0 and 1 resolves to 0
        assert_eq!(mode_of([1, 0, 1, 0]), Some((0, 2)));
    }

    #[test]
    fn moment_examples() {
        let e = fam(FamilySpec::Empty { n: 10 });
        let r = exact_moments(&e, 4, 1).unwrap();
        assert!(r.mu1.is_zero() && r.mu2.is_zero() && r.mu.is_zero());

        let k10 = fam(FamilySpec::Complete { n: 10 });
        let r = exact_moments(&k10, 4, 1).unwrap();
        assert_eq!(r.mu1, ratio(6, 1));
        assert!(r.mu2.is_zero());
        assert_eq!(r.mu, ratio(6, 1));
        // cross-check against the exact law of X (all vertices heavy, so H = X)
        assert_eq!(exact_pmf(&k10, 4).unwrap().mean(), r.mu1);

        // all light: a perfect matching on 10 vertices, k = 2, ell = 8 puts the
        // threshold at 10 * 2 / 2 = 10 > 1
        let pm = Graph::from_edges(10, &[(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]).unwrap();
        let r = exact_moments(&pm, 2, 8).unwrap();
        assert!(r.mu1.is_zero());
        assert_eq!(r.mu, -r.mu2.clone());
        assert_eq!(r.mu2, ratio(5, 45));
    }

    #[test]
    fn variance_examples() {
        let e = fam(FamilySpec::Empty { n: 8 });
        assert!(variance_x_minus_z(&e, 3, 1).unwrap().variance.is_zero());

        let c5 = fam(FamilySpec::Cycle { n: 5 });
        let r = variance_x_minus_z(&c5, 3, 1).unwrap();
        assert_eq!(r.variance, ratio(1, 4));
        assert_eq!(r.variance, r.var_heavy);

        let k7 = fam(FamilySpec::Complete { n: 7 });
        let r = variance_x_minus_z(&k7, 3, 1).unwrap();
        assert!(r.variance.is_zero());
    }

    #[test]
    fn variance_mean_matches_linearity() {
        for seed in 0..10 {
            let g = fam(FamilySpec::Gnp { n: 11, p: 0.35, seed });
            for (k, ell) in [(3, 1), (4, 2), (5, 4)] {
                let r = variance_x_minus_z(&g, k, ell).unwrap();
                let m = exact_moments(&g, k, ell).unwrap();
                assert_eq!(r.mean, m.mu, "seed={seed} k={k}");
                assert!(r.decomposition_holds);
            }
        }
    }

    #[test]
    fn variance_budget() {
        let g = fam(FamilySpec::Empty { n: 60 });
        assert!(matches!(
            variance_x_minus_z_with_budget(&g, 10, 1, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn median_examples() {
        let e = fam(FamilySpec::Empty { n: 10 });
        assert_eq!(median_degree_into(&e, &VertexSet::from_vertices(10, [0, 1]).unwrap()).unwrap(), 0);
        let k10 = fam(FamilySpec::Complete { n: 10 });
        assert_eq!(median_degree_into(&k10, &VertexSet::from_vertices(10, [0, 1, 2, 3]).unwrap()).unwrap(), 4);
        let star = fam(FamilySpec::CompleteBipartite { a: 1, b: 9 });
        assert_eq!(median_degree_into(&star, &VertexSet::from_vertices(10, [0]).unwrap()).unwrap(), 1);
        assert!(median_degree_into(&star, &VertexSet::full(10)).is_err());
        // even count: values 0,0,1,1 outside S = {0} in a star with two marked leaves
        let g = Graph::from_edges(5, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(median_degree_into(&g, &VertexSet::from_vertices(5, [0]).unwrap()).unwrap(), 0);
    }

    #[test]
    fn predicted_mode_examples() {
        let e = fam(FamilySpec::Empty { n: 200 });
        // ell <= k/2 with a narrow interval: w = 1, ell = 1, k = 40
        let s = EventSetup::with_w(&e, 40, 1, 1.0).unwrap();
        let p = predicted_mode_degree(&s);
        assert_eq!(p.degree, Some(0));
        // ell = k/2 exactly rounds down
        let s = EventSetup::with_w(&e, 40, 20, 0.001).unwrap();
        assert_eq!(predicted_mode_degree(&s).nearest, 0);
        // ell = k, mu = 0
        let s = EventSetup::with_w(&e, 40, 40, 0.01).unwrap();
        let p = predicted_mode_degree(&s);
        assert_eq!(p.degree, Some(1));
        assert_eq!(p.candidates, vec![1]);
        // wide interval
        let s = EventSetup::with_w(&e, 10, 30, 3.0).unwrap();
        let p = predicted_mode_degree(&s);
        assert!(p.ambiguous && p.degree.is_none());
        assert!(p.candidates.len() >= 2);
    }
}
