//! The black/green sequential colouring process and the geometric-sum law of `Y`.
//!
//! Vertices `v_1, v_2, ...` are drawn uniformly with replacement. `v_1` is black; `v_i` is
//! green iff `v_i` together with the earlier black vertices spans at least `ell` edges,
//! and black otherwise. `L` is the position of the `(k-1)`-th black vertex and `Y` counts
//! the greens before it.
//!
//! Black vertices may repeat. A repeat never changes the black set, so `e(.)` is always
//! taken on the set of distinct black vertices. Since that set spans fewer than `ell`
//! edges, an already black vertex is never green and every run reaches `L` with
//! probability one; the step cap only guards against very long runs.
//!
//! Geometric variables count failures: `Pr[geom(p) = g] = p^g (1 - p)`, the number of
//! greens drawn between consecutive blacks.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{fraction_string, ratio, to_f64};
use crate::graph::Graph;
use crate::mc::{Estimate, McConfig};
use crate::rng::{stream_rng, trial_ranges};

pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

/// Largest parameter count for which [`y1_prob`] is evaluated in exact rationals.
pub const EXACT_PARAM_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Black,
    Green,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Divergence {
    /// Every vertex of the graph would be green.
    AllGreen,
    StepCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stop {
    /// `L`, 1-based.
    At(u64),
    Diverged(Divergence),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessTrace {
    pub sequence: Vec<usize>,
    pub colors: Vec<Color>,
    pub stop: Stop,
    /// Greens strictly before `L`; absent when the run diverged.
    pub y: Option<u64>,
}

impl ProcessTrace {
    /// Black vertices in order of appearance.
    pub fn blacks(&self) -> Vec<usize> {
        self.sequence
            .iter()
            .zip(&self.colors)
            .filter(|(_, &c)| c == Color::Black)
            .map(|(&v, _)| v)
            .collect()
    }
}

/// Incremental state of the black set: `cnt[v] = |N(v) ∩ B|` plus a histogram of `cnt`
/// over vertices outside `B`, so adding a black costs `O(deg)` and counting the vertices
/// that would be green costs `O(|B|)`.
struct Colorer<'g> {
    g: &'g Graph,
    ell: u64,
    in_b: Vec<bool>,
    distinct: Vec<usize>,
    e_b: u64,
    cnt: Vec<u32>,
    hist: Vec<usize>,
    touched: Vec<usize>,
}

impl<'g> Colorer<'g> {
    fn new(g: &'g Graph, ell: u64, max_blacks: usize) -> Self {
        let mut hist = vec![0; max_blacks + 2];
        hist[0] = g.n();
        Colorer {
            g,
            ell,
            in_b: vec![false; g.n()],
            distinct: Vec::new(),
            e_b: 0,
            cnt: vec![0; g.n()],
            hist,
            touched: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.distinct {
            self.in_b[v] = false;
        }
        for &w in &self.touched {
            self.cnt[w] = 0;
        }
        self.distinct.clear();
        self.touched.clear();
        self.hist.iter_mut().for_each(|h| *h = 0);
        self.hist[0] = self.g.n();
        self.e_b = 0;
    }

    /// `e(B ∪ {v}) >= ell`.
    fn closes(&self, v: usize) -> bool {
        let e = if self.in_b[v] { self.e_b } else { self.e_b + self.cnt[v] as u64 };
        e >= self.ell
    }

    fn add_black(&mut self, v: usize) {
        if self.in_b[v] {
            return;
        }
        self.e_b += self.cnt[v] as u64;
        self.hist[self.cnt[v] as usize] -= 1;
        self.in_b[v] = true;
        self.distinct.push(v);
        let g = self.g;
        for w in g.neighbors(v) {
            let c = self.cnt[w] as usize;
            if c == 0 {
                self.touched.push(w);
            }
            if !self.in_b[w] {
                self.hist[c] -= 1;
                if c + 1 >= self.hist.len() {
                    self.hist.resize(c + 2, 0);
                }
                self.hist[c + 1] += 1;
            }
            self.cnt[w] += 1;
        }
    }

    /// `|{v in V : e(B ∪ {v}) >= ell}|`.
    fn closing_count(&self) -> usize {
        if self.e_b >= self.ell {
            return self.g.n();
        }
        let t = (self.ell - self.e_b) as usize;
        self.hist.iter().skip(t).sum()
    }
}

/// Shared driver: draws from `next` until `k - 1` blacks, the cap, or an all-green state.
fn drive<F, S>(c: &mut Colorer<'_>, k: usize, step_cap: u64, mut next: F, mut on_step: S) -> (Stop, u64)
where
    F: FnMut() -> usize,
    S: FnMut(usize, Color),
{
    let mut blacks = 0usize;
    let mut greens = 0u64;
    let mut step = 0u64;
    while step < step_cap {
        let v = next();
        step += 1;
        let color = if blacks > 0 && c.closes(v) { Color::Green } else { Color::Black };
        on_step(v, color);
        match color {
            Color::Green => greens += 1,
            Color::Black => {
                c.add_black(v);
                blacks += 1;
                if blacks == k - 1 {
                    return (Stop::At(step), greens);
                }
                if c.closing_count() == c.g.n() {
                    return (Stop::Diverged(Divergence::AllGreen), greens);
                }
            }
        }
    }
    (Stop::Diverged(Divergence::StepCap), greens)
}

fn check_process_args(g: &Graph, k: usize, ell: u64, step_cap: u64) -> Result<()> {
    if k < 2 || ell < 1 {
        return Err(invalid(format!("the colouring process needs k >= 2 and ell >= 1, got k = {k}, ell = {ell}")));
    }
    if step_cap < k as u64 {
        return Err(invalid(format!("step cap {step_cap} is below k = {k}")));
    }
    if g.n() == 0 {
        return Err(Error::NoVertices);
    }
    Ok(())
}

/// One run of the process, recording the full sequence.
pub fn run_coloring<R: Rng + ?Sized>(g: &Graph, k: usize, ell: u64, rng: &mut R, step_cap: u64) -> Result<ProcessTrace> {
    check_process_args(g, k, ell, step_cap)?;
    let mut c = Colorer::new(g, ell, k);
    let n = g.n();
    let mut sequence = Vec::new();
    let mut colors = Vec::new();
    let (stop, greens) = drive(
        &mut c,
        k,
        step_cap,
        || rng.random_range(0..n),
        |v, col| {
            sequence.push(v);
            colors.push(col);
        },
    );
    let y = matches!(stop, Stop::At(_)).then_some(greens);
    Ok(ProcessTrace { sequence, colors, stop, y })
}

/// Recomputes the colours of a trace from its sequence alone.
pub fn recolor(g: &Graph, ell: u64, sequence: &[usize]) -> Vec<Color> {
    let mut c = Colorer::new(g, ell, sequence.len());
    let mut seen_black = false;
    sequence
        .iter()
        .map(|&v| {
            if seen_black && c.closes(v) {
                Color::Green
            } else {
                seen_black = true;
                c.add_black(v);
                Color::Black
            }
        })
        .collect()
}

/// `p_i = |{v in V : e({u_1..u_i, v}) >= ell}| / n` for `i = 1..k-2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeomParams {
    pub prefix: Vec<usize>,
    pub p: Vec<BigRational>,
}

impl GeomParams {
    /// Parameters not tied to a graph.
    pub fn from_probs(p: Vec<BigRational>) -> Result<Self> {
        for x in &p {
            if x.is_negative() || *x > BigRational::one() {
                return Err(invalid(format!("{} is not a probability", fraction_string(x))));
            }
        }
        Ok(GeomParams { prefix: Vec::new(), p })
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.p.iter().map(to_f64).collect()
    }
}

pub fn geometric_params(g: &Graph, prefix: &[usize], ell: u64) -> Result<GeomParams> {
    if prefix.is_empty() {
        return Err(invalid("the black prefix must have length k - 1 >= 1"));
    }
    for &u in prefix {
        if u >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
        }
    }
    let mut c = Colorer::new(g, ell, prefix.len());
    let n = g.n() as u64;
    let mut p = Vec::with_capacity(prefix.len().saturating_sub(1));
    for &u in &prefix[..prefix.len() - 1] {
        c.add_black(u);
        p.push(ratio(c.closing_count() as u64, n));
    }
    Ok(GeomParams {
        prefix: prefix.to_vec(),
        p,
    })
}

/// `Pr[Y = 1 | U(u)] = sum_i p_i prod_j (1 - p_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Y1Prob {
    /// Present for at most [`EXACT_PARAM_LIMIT`] parameters.
    pub exact: Option<BigRational>,
    pub value: f64,
    /// Bound on `|value - true value|`; zero up to f64 rounding of the exact value.
    pub error_bound: f64,
}

pub fn y1_prob(params: &GeomParams) -> Y1Prob {
    if params.p.len() <= EXACT_PARAM_LIMIT {
        let one = BigRational::one();
        let sum = params.p.iter().fold(BigRational::zero(), |a, x| a + x);
        let prod = params.p.iter().fold(one.clone(), |a, x| a * (&one - x));
        let exact = sum * prod;
        let value = to_f64(&exact);
        return Y1Prob {
            exact: Some(exact),
            value,
            error_bound: value * f64::EPSILON,
        };
    }
    let p = params.as_f64();
    let sum: f64 = p.iter().sum();
    let prod: f64 = p.iter().map(|x| 1.0 - x).product();
    let value = sum * prod;
    // each input carries one rounding, each sum/product step one more
    let steps = (3 * p.len()) as f64 + 2.0;
    Y1Prob {
        exact: None,
        value,
        error_bound: steps * f64::EPSILON * value.max(f64::MIN_POSITIVE),
    }
}

/// `Pr[Y = y]` for `y = 0..=y_max` and the remaining tail mass.
#[derive(Clone, Debug, PartialEq)]
pub struct YPmf {
    pub probs: Vec<BigRational>,
    pub tail: BigRational,
}

/// Exact law of `geom(p_1) + ... + geom(p_{k-2})`, truncated at `y_max`.
pub fn y_pmf(params: &GeomParams, y_max: usize) -> Result<YPmf> {
    if params.p.iter().any(|x| x.is_one()) {
        return Err(Error::Divergent(params.p.iter().position(|x| x.is_one()).unwrap() + 1));
    }
    let one = BigRational::one();
    let mut acc = vec![BigRational::zero(); y_max + 1];
    acc[0] = one.clone();
    for p in &params.p {
        let q = &one - p;
        // geom(p) pmf truncated at y_max
        let mut geo = Vec::with_capacity(y_max + 1);
        let mut pw = one.clone();
        for _ in 0..=y_max {
            geo.push(&pw * &q);
            pw *= p;
        }
        let mut next = vec![BigRational::zero(); y_max + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, gj) in geo.iter().enumerate().take(y_max + 1 - i) {
                next[i + j] += a * gj;
            }
        }
        acc = next;
    }
    let tail = acc.iter().fold(one, |t, x| t - x);
    Ok(YPmf { probs: acc, tail })
}

/// The black vertices of one run, usable as a conditioning prefix.
pub fn process_prefix<R: Rng + ?Sized>(g: &Graph, k: usize, ell: u64, rng: &mut R) -> Result<Vec<usize>> {
    loop {
        let t = run_coloring(g, k, ell, rng, DEFAULT_STEP_CAP)?;
        if t.y.is_some() {
            return Ok(t.blacks());
        }
    }
}

/// Checks that `prefix` can be the black prefix of a run, `Pr[U(u)] > 0`.
pub fn check_prefix(g: &Graph, prefix: &[usize], ell: u64) -> Result<()> {
    if prefix.is_empty() || ell == 0 {
        return Err(invalid("need a non-empty prefix and ell >= 1"));
    }
    let mut c = Colorer::new(g, ell, prefix.len());
    for (i, &u) in prefix.iter().enumerate() {
        if u >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
        }
        if i > 0 && c.closes(u) {
            return Err(invalid(format!(
                "prefix vertex {u} at position {} would be green, so the prefix has probability 0",
                i + 1
            )));
        }
        c.add_black(u);
    }
    Ok(())
}

/// One draw of `Y` from the process conditioned on its first `k - 1` blacks being `prefix`.
///
/// The process is a Markov chain in the black set, so conditioning on `U(u)` factors
/// into independent conditionings of the segments between consecutive blacks. Each
/// segment (greens up to the first black) is redrawn from its start whenever the black
/// that ends it differs from the prescribed one. Returns `None` if `step_cap` draws
/// are used up.
fn conditioned_y_once<R: Rng + ?Sized>(c: &mut Colorer<'_>, prefix: &[usize], rng: &mut R, step_cap: u64) -> Option<u64> {
    c.reset();
    let n = c.g.n();
    c.add_black(prefix[0]);
    let mut y = 0;
    let mut steps = 0u64;
    for &target in &prefix[1..] {
        let mut seg = 0u64;
        loop {
            if steps >= step_cap {
                return None;
            }
            steps += 1;
            let v = rng.random_range(0..n);
            if c.closes(v) {
                seg += 1;
            } else if v == target {
                break;
            } else {
                seg = 0;
            }
        }
        y += seg;
        c.add_black(target);
    }
    Some(y)
}

/// Counts of `Y` over `samples` conditioned runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YHistogram {
    pub counts: Vec<u64>,
    pub samples: u64,
    /// Runs that hit the step cap; they are not in `counts`.
    pub capped: u64,
}

pub fn conditioned_y_histogram(g: &Graph, prefix: &[usize], ell: u64, samples: u64, seed: u64) -> Result<YHistogram> {
    check_prefix(g, prefix, ell)?;
    let parts: Vec<(Vec<u64>, u64)> = trial_ranges(samples)
        .into_par_iter()
        .map(|(stream, _, len)| {
            let mut rng = stream_rng(seed, stream);
            let mut c = Colorer::new(g, ell, prefix.len());
            let mut counts = Vec::new();
            let mut capped = 0;
            for _ in 0..len {
                match conditioned_y_once(&mut c, prefix, &mut rng, DEFAULT_STEP_CAP) {
                    Some(y) => {
                        let y = y as usize;
                        if y >= counts.len() {
                            counts.resize(y + 1, 0);
                        }
                        counts[y] += 1;
                    }
                    None => capped += 1,
                }
            }
            (counts, capped)
        })
        .collect();
    let mut counts: Vec<u64> = Vec::new();
    let mut capped = 0;
    for (c, k) in parts {
        if c.len() > counts.len() {
            counts.resize(c.len(), 0);
        }
        counts.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        capped += k;
    }
    Ok(YHistogram { counts, samples, capped })
}

/// One bin of an observed-versus-exact comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinCheck {
    /// `Some(y)` for `Y = y`, `None` for the tail bin `Y > y_max`.
    pub y: Option<u64>,
    pub observed: u64,
    pub expected: f64,
    pub sigma: f64,
    pub within_3_sigma: bool,
}

/// Bins `0..=y_max` and one tail bin, with `y_max` the first value whose upper tail is
/// below `tail_cut`.
pub fn compare_y_law(params: &GeomParams, hist: &YHistogram, tail_cut: f64) -> Result<Vec<BinCheck>> {
    // extend until the exact tail is small
    let mut y_max = 4;
    let pmf = loop {
        let pmf = y_pmf(params, y_max)?;
        if to_f64(&pmf.tail) < tail_cut || y_max > 4096 {
            break pmf;
        }
        y_max *= 2;
    };
    let mut cut = 0;
    let mut tail = BigRational::one();
    for (y, p) in pmf.probs.iter().enumerate() {
        tail -= p;
        cut = y;
        if to_f64(&tail) < tail_cut {
            break;
        }
    }
    let n = (hist.samples - hist.capped) as f64;
    let bin = |y: Option<u64>, observed: u64, p: f64| {
        let expected = n * p;
        let sigma = (n * p * (1.0 - p)).sqrt();
        BinCheck {
            y,
            observed,
            expected,
            sigma,
            within_3_sigma: (observed as f64 - expected).abs() <= 3.0 * sigma,
        }
    };
    let mut out: Vec<BinCheck> = (0..=cut)
        .map(|y| bin(Some(y as u64), hist.counts.get(y).copied().unwrap_or(0), to_f64(&pmf.probs[y])))
        .collect();
    let observed_tail = hist.counts.iter().skip(cut + 1).sum();
    out.push(bin(None, observed_tail, to_f64(&tail).max(0.0)));
    Ok(out)
}

/// Shared-sequence estimates behind `Pr[X = ell] <= Pr[Y = 1] + o(1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub k: usize,
    pub ell: u64,
    /// `Pr[X~_k = ell]`, `X~_k = e({v_1..v_k})`.
    pub pr_x_tilde: Estimate,
    /// `Pr[X~_k = X~_{k-1} = ell]`.
    pub pr_both: Estimate,
    pub pr_y1: Estimate,
    /// `Pr[v_1..v_k distinct]`.
    pub pr_distinct: Estimate,
    /// Draws with distinct `v_1..v_k`, `X~_k = X~_{k-1} = ell` and `Y != 1`.
    pub implication_violations: u64,
    /// The same with a repeated vertex among `v_1..v_k`, where the implication does not apply.
    pub repeat_exceptions: u64,
    /// Runs that hit the step cap.
    pub diverged: u64,
    /// `(k - 2 ell) / k`.
    pub last_not_bad_ratio: f64,
    /// Exact `Pr[v_1..v_k distinct] = prod_{i<k} (1 - i/n)`.
    pub distinct_exact: f64,
    pub warning: Option<String>,
}

/// Below this exact `Pr[v_1..v_k distinct]` the report carries a warning.
pub const DISTINCT_WARNING_LEVEL: f64 = 0.9;

#[derive(Default, Clone, Copy)]
struct CouplingCounts {
    x_tilde: u64,
    both: u64,
    y1: u64,
    distinct: u64,
    violations: u64,
    repeats: u64,
    diverged: u64,
}

impl std::ops::Add for CouplingCounts {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        CouplingCounts {
            x_tilde: self.x_tilde + o.x_tilde,
            both: self.both + o.both,
            y1: self.y1 + o.y1,
            distinct: self.distinct + o.distinct,
            violations: self.violations + o.violations,
            repeats: self.repeats + o.repeats,
            diverged: self.diverged + o.diverged,
        }
    }
}

pub fn coupling_report(g: &Graph, k: usize, ell: u64, cfg: &McConfig, step_cap: u64) -> Result<CouplingReport> {
    check_process_args(g, k, ell, step_cap)?;
    cfg.validate()?;
    let n = g.n();
    let counts = trial_ranges(cfg.trials)
        .into_par_iter()
        .map(|(stream, _, len)| {
            let mut rng = stream_rng(cfg.seed, stream);
            let mut c = Colorer::new(g, ell, k);
            let mut first: Vec<usize> = Vec::with_capacity(k);
            let mut acc = CouplingCounts::default();
            for _ in 0..len {
                c.reset();
                first.clear();
                let (stop, greens) = drive(
                    &mut c,
                    k,
                    step_cap,
                    || {
                        let v = rng.random_range(0..n);
                        if first.len() < k {
                            first.push(v);
                        }
                        v
                    },
                    |_, _| {},
                );
                // the process may stop before k draws; the sequence continues regardless
                while first.len() < k {
                    first.push(rng.random_range(0..n));
                }
                let mut set = first.clone();
                set.sort_unstable();
                set.dedup();
                let distinct = set.len() == k;
                let xk = g.induced_edges_of(&set) as u64;
                let mut prev = first[..k - 1].to_vec();
                prev.sort_unstable();
                prev.dedup();
                let xk1 = g.induced_edges_of(&prev) as u64;
                let y1 = matches!(stop, Stop::At(_)) && greens == 1;
                acc.distinct += distinct as u64;
                acc.x_tilde += (xk == ell) as u64;
                let both = xk == ell && xk1 == ell;
                acc.both += both as u64;
                acc.y1 += y1 as u64;
                acc.diverged += matches!(stop, Stop::Diverged(_)) as u64;
                if both && !y1 {
                    if distinct {
                        acc.violations += 1;
                    } else {
                        acc.repeats += 1;
                    }
                }
            }
            acc
        })
        .reduce(CouplingCounts::default, |a, b| a + b);
    let distinct_exact: f64 = (1..k).map(|i| 1.0 - i as f64 / n as f64).product();
    let warning = (distinct_exact < DISTINCT_WARNING_LEVEL).then(|| {
        format!(
            "n = {n} is small for k = {k}: Pr[v_1..v_k distinct] = {distinct_exact:.4}, so X~ is a poor proxy for X"
        )
    });
    Ok(CouplingReport {
        k,
        ell,
        pr_x_tilde: Estimate::from_counts(counts.x_tilde, cfg),
        pr_both: Estimate::from_counts(counts.both, cfg),
        pr_y1: Estimate::from_counts(counts.y1, cfg),
        pr_distinct: Estimate::from_counts(counts.distinct, cfg),
        implication_violations: counts.violations,
        repeat_exceptions: counts.repeats,
        diverged: counts.diverged,
        last_not_bad_ratio: (k as f64 - 2.0 * ell as f64) / k as f64,
        distinct_exact,
        warning,
    })
}

/// Serializable view of [`GeomParams`] with fractions as `"num/den"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeomParamsView {
    pub prefix: Vec<usize>,
    pub p: Vec<String>,
    pub y1_prob: f64,
    pub y1_fraction: Option<String>,
}

impl From<&GeomParams> for GeomParamsView {
    fn from(gp: &GeomParams) -> Self {
        let y1 = y1_prob(gp);
        GeomParamsView {
            prefix: gp.prefix.clone(),
            p: gp.p.iter().map(fraction_string).collect(),
            y1_prob: y1.value,
            y1_fraction: y1.exact.as_ref().map(fraction_string),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn fam(spec: FamilySpec) -> Graph {
        generate(&spec).unwrap()
    }

    fn params(p: &[(i64, i64)]) -> GeomParams {
        GeomParams::from_probs(p.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap()
    }

    #[test]
    fn empty_graph_is_all_black() {
        let g = fam(FamilySpec::Empty { n: 10 });
        let t = run_coloring(&g, 4, 1, &mut stream_rng(1, 0), DEFAULT_STEP_CAP).unwrap();
        assert_eq!(t.colors, vec![Color::Black; 3]);
        assert_eq!(t.stop, Stop::At(3));
        assert_eq!(t.y, Some(0));
    }

    #[test]
    fn complete_graph_only_repeats_the_first_black() {
        // with ell = 1 every vertex other than u_1 closes an edge with u_1, so the later
        // blacks are all repeats of u_1 and the run still stops
        let g = fam(FamilySpec::Complete { n: 10 });
        for seed in 0..50 {
            let t = run_coloring(&g, 4, 1, &mut stream_rng(seed, 0), DEFAULT_STEP_CAP).unwrap();
            let b = t.blacks();
            assert_eq!(b.len(), 3);
            assert!(b.iter().all(|&v| v == b[0]));
            assert!(matches!(t.stop, Stop::At(_)));
        }
    }

    #[test]
    fn traces_are_deterministic_and_recolorable() {
        let g = fam(FamilySpec::Gnp { n: 25, p: 0.3, seed: 4 });
        for seed in 0..30 {
            let a = run_coloring(&g, 6, 3, &mut stream_rng(seed, 0), DEFAULT_STEP_CAP).unwrap();
            let b = run_coloring(&g, 6, 3, &mut stream_rng(seed, 0), DEFAULT_STEP_CAP).unwrap();
            assert_eq!(a, b);
            assert_eq!(recolor(&g, 3, &a.sequence), a.colors);
            // independent recomputation from the definition
            let mut blacks: Vec<usize> = Vec::new();
            for (i, &v) in a.sequence.iter().enumerate() {
                let mut s = blacks.clone();
                s.push(v);
                s.sort_unstable();
                s.dedup();
                let green = i > 0 && g.induced_edges_of(&s) >= 3;
                assert_eq!(a.colors[i] == Color::Green, green);
                if !green {
                    blacks.push(v);
                }
            }
            assert_eq!(a.colors[0], Color::Black);
            let Stop::At(l) = a.stop else { panic!() };
            assert_eq!(l as usize, a.sequence.len());
            let greens = a.colors.iter().filter(|&&c| c == Color::Green).count() as u64;
            assert_eq!(a.y, Some(greens));
        }
    }

    #[test]
    fn step_cap_and_argument_errors() {
        let g = fam(FamilySpec::Complete { n: 10 });
        // four blacks in K10 with ell = 1 need four draws of u_1; five steps rarely suffice
        let capped = (0..20)
            .map(|s| run_coloring(&g, 5, 1, &mut stream_rng(s, 0), 5).unwrap())
            .filter(|t| t.stop == Stop::Diverged(Divergence::StepCap))
            .inspect(|t| assert!(t.y.is_none() && t.sequence.len() == 5))
            .count();
        assert!(capped > 0);
        assert!(run_coloring(&g, 1, 1, &mut stream_rng(0, 0), 10).is_err());
        assert!(run_coloring(&g, 3, 0, &mut stream_rng(0, 0), 10).is_err());
        assert!(run_coloring(&g, 5, 1, &mut stream_rng(0, 0), 3).is_err());
    }

    #[test]
    fn geometric_params_examples() {
        let e = fam(FamilySpec::Empty { n: 10 });
        let gp = geometric_params(&e, &[0, 1, 2, 3], 1).unwrap();
        assert!(gp.p.iter().all(|x| x.is_zero()));

        let k10 = fam(FamilySpec::Complete { n: 10 });
        let gp = geometric_params(&k10, &[0, 1, 2], 1).unwrap();
        assert_eq!(gp.p, vec![ratio(9, 10), ratio(1, 1)]);

        let c5 = fam(FamilySpec::Cycle { n: 5 });
        let gp = geometric_params(&c5, &[0, 1, 2], 2).unwrap();
        assert_eq!(gp.p, vec![ratio(0, 1), ratio(2, 5)]);
    }

    #[test]
    fn geometric_params_match_the_definition() {
        let g = fam(FamilySpec::Gnp { n: 18, p: 0.35, seed: 2 });
        let prefix = [3, 9, 9, 14, 0, 7];
        for ell in 1..6u64 {
            let gp = geometric_params(&g, &prefix, ell).unwrap();
            for i in 1..prefix.len() {
                let count = (0..g.n())
                    .filter(|&v| {
                        let mut s: Vec<usize> = prefix[..i].to_vec();
                        s.push(v);
                        s.sort_unstable();
                        s.dedup();
                        g.induced_edges_of(&s) as u64 >= ell
                    })
                    .count();
                assert_eq!(gp.p[i - 1], ratio(count as i64, 18));
            }
        }
    }

    #[test]
    fn y1_and_pmf_examples() {
        assert!(y1_prob(&params(&[(0, 1), (0, 1)])).exact.unwrap().is_zero());
        assert_eq!(y1_prob(&params(&[(1, 2), (1, 2)])).exact.unwrap(), ratio(1, 4));
        let pmf = y_pmf(&params(&[(1, 2), (1, 2)]), 3).unwrap();
        assert_eq!(pmf.probs[1], ratio(1, 4));

        let pmf = y_pmf(&params(&[(0, 1), (0, 1), (0, 1)]), 4).unwrap();
        assert!(pmf.probs[0].is_one() && pmf.tail.is_zero());

        let pmf = y_pmf(&params(&[(1, 3)]), 2).unwrap();
        assert_eq!(pmf.probs, vec![ratio(2, 3), ratio(2, 9), ratio(2, 27)]);
        assert_eq!(pmf.tail, ratio(1, 27));

        assert!(matches!(y_pmf(&params(&[(1, 2), (1, 1)]), 3), Err(Error::Divergent(2))));
        // p = 1 makes the product vanish
        assert!(y1_prob(&params(&[(1, 1), (1, 3)])).exact.unwrap().is_zero());
    }

    #[test]
    fn y1_with_many_parameters() {
        let gp = GeomParams::from_probs(vec![ratio(1, 100); 100]).unwrap();
        let y = y1_prob(&gp);
        assert!(y.exact.is_none());
        assert!((y.value - 0.99f64.powi(100)).abs() < 1e-12);
        assert!((y.value - 0.3660).abs() < 1e-4);
        assert!(y.value <= 1.0 / E);
        assert!(y.error_bound > 0.0 && y.error_bound < 1e-12);
    }

    proptest! {
        #[test]
        fn y1_never_exceeds_inverse_e(p in proptest::collection::vec((0u32..=1000, 1u32..=1000), 1..40)) {
            let gp = GeomParams::from_probs(
                p.iter().map(|&(a, b)| ratio(a.min(b) as i64, b as i64)).collect()
            ).unwrap();
            let y = y1_prob(&gp);
            prop_assert!(y.value <= 1.0 / E + 1e-12);
            if gp.p.iter().all(|x| !x.is_one()) {
                let pmf = y_pmf(&gp, 1).unwrap();
                prop_assert_eq!(&pmf.probs[1], y.exact.as_ref().unwrap());
            }
        }
    }

    #[test]
    fn conditioned_sampler_matches_plain_rejection() {
        // plain rejection on whole runs versus segment restarts, both against y_pmf
        let g = fam(FamilySpec::Cycle { n: 5 });
        check_prefix(&g, &[0, 2, 0], 1).unwrap();
        check_prefix(&g, &[0, 1], 1).unwrap_err();
        let g = fam(FamilySpec::Gnp { n: 6, p: 0.5, seed: 3 });
        let ell = 2;
        let prefix = process_prefix(&g, 4, ell, &mut stream_rng(5, 0)).unwrap();
        check_prefix(&g, &prefix, ell).unwrap();
        let gp = geometric_params(&g, &prefix, ell).unwrap();

        let mut rng = stream_rng(6, 0);
        let mut plain = YHistogram { counts: vec![], samples: 0, capped: 0 };
        while plain.samples < 20_000 {
            let t = run_coloring(&g, 4, ell, &mut rng, DEFAULT_STEP_CAP).unwrap();
            if t.blacks() == prefix {
                let y = t.y.unwrap() as usize;
                if y >= plain.counts.len() {
                    plain.counts.resize(y + 1, 0);
                }
                plain.counts[y] += 1;
                plain.samples += 1;
            }
        }
        let fast = conditioned_y_histogram(&g, &prefix, ell, 100_000, 7).unwrap();
        for h in [&plain, &fast] {
            let checks = compare_y_law(&gp, h, 1e-3).unwrap();
            assert!(checks.iter().all(|c| c.within_3_sigma), "{checks:?}");
        }
    }

    #[test]
    fn coupling_on_empty_graph() {
        let g = fam(FamilySpec::Empty { n: 400 });
        let r = coupling_report(&g, 5, 1, &McConfig::new(5000, 1), DEFAULT_STEP_CAP).unwrap();
        assert_eq!(r.pr_x_tilde.successes, 0);
        assert_eq!(r.pr_both.successes, 0);
        assert_eq!(r.pr_y1.successes, 0);
        assert!(r.pr_distinct.point > 0.9);
        assert_eq!(r.implication_violations, 0);
        assert!(r.warning.is_none());
    }

    #[test]
    fn coupling_implication_holds_on_distinct_draws() {
        for (spec, k, ell) in [
            (FamilySpec::Gnp { n: 40, p: 0.1, seed: 1 }, 6usize, 1u64),
            (FamilySpec::Gnp { n: 30, p: 0.3, seed: 2 }, 6, 3),
            (FamilySpec::CompleteBipartite { a: 5, b: 45 }, 8, 7),
        ] {
            let g = fam(spec);
            let r = coupling_report(&g, k, ell, &McConfig::new(20_000, 3), DEFAULT_STEP_CAP).unwrap();
            assert_eq!(r.implication_violations, 0);
            assert!(r.pr_both.point <= r.pr_x_tilde.point);
        }
        let small = fam(FamilySpec::Complete { n: 12 });
        let r = coupling_report(&small, 6, 1, &McConfig::new(100, 0), DEFAULT_STEP_CAP).unwrap();
        assert!(r.warning.is_some());
    }
}
