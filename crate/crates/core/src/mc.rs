//! Seeded Monte Carlo estimation over uniform k-subsets and two-phase `S`/`Q` draws.
//!
//! Trials are cut into ranges of [`crate::rng::TRIALS_PER_RANGE`]; range `r` draws from stream `r` of
//! the run seed and ranges are merged by integer summation, so an [`Estimate`] depends
//! only on its inputs and never on the thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, Normal};

use crate::error::{invalid, Result};
use crate::events::{eval_event, EventId, EventSetup, SampleContext};
use crate::graph::{Graph, VertexSet};
use crate::rng::{stream_rng, trial_ranges, StreamRng};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    #[default]
    Wilson,
    ClopperPearson,
}

fn default_level() -> f64 {
    0.99
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "default_level")]
    pub confidence_level: f64,
    #[serde(default)]
    pub interval: IntervalKind,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            confidence_level: default_level(),
            interval: IntervalKind::Wilson,
        }
    }

    pub fn with_level(mut self, level: f64) -> Self {
        self.confidence_level = level;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(invalid(format!(
                "confidence level {} must lie strictly between 0 and 1",
                self.confidence_level
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence_level: f64,
    pub interval: IntervalKind,
    pub seed: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, cfg: &McConfig) -> Self {
        let trials = cfg.trials;
        let (ci_low, ci_high) = match cfg.interval {
            IntervalKind::Wilson => wilson_ci(successes, trials, cfg.confidence_level),
            IntervalKind::ClopperPearson => clopper_pearson_ci(successes, trials, cfg.confidence_level),
        };
        Estimate {
            successes,
            trials,
            point: successes as f64 / trials as f64,
            ci_low,
            ci_high,
            confidence_level: cfg.confidence_level,
            interval: cfg.interval,
            seed: cfg.seed,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }

    /// Binomial standard error at the point estimate.
    pub fn std_error(&self) -> f64 {
        (self.point * (1.0 - self.point) / self.trials as f64).sqrt()
    }
}

fn z_for(level: f64) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

/// Wilson score interval.
pub fn wilson_ci(successes: u64, trials: u64, level: f64) -> (f64, f64) {
    assert!(trials >= 1 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = z_for(level);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if successes == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let high = if successes == trials { 1.0 } else { (center + half).clamp(p, 1.0) };
    (low, high)
}

/// Exact (Clopper–Pearson) interval from Beta quantiles.
pub fn clopper_pearson_ci(successes: u64, trials: u64, level: f64) -> (f64, f64) {
    assert!(trials >= 1 && successes <= trials);
    let alpha = 1.0 - level;
    let x = successes as f64;
    let n = trials as f64;
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(x, n - x + 1.0).unwrap().inverse_cdf(alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(x + 1.0, n - x).unwrap().inverse_cdf(1.0 - alpha / 2.0)
    };
    let p = x / n;
    (low.min(p), high.max(p))
}

/// Partial Fisher–Yates over `0..n` with a reusable permutation.
///
/// Each draw costs `O(k)`: the swaps are undone afterwards, so the scratch permutation is
/// the identity again before the next draw.
#[derive(Clone, Debug)]
pub struct Sampler {
    perm: Vec<usize>,
    swaps: Vec<usize>,
}

impl Sampler {
    pub fn new(n: usize) -> Self {
        Sampler {
            perm: (0..n).collect(),
            swaps: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// `k` distinct vertices in draw order, uniform over ordered `k`-tuples.
    pub fn draw<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> Vec<usize> {
        let n = self.perm.len();
        assert!(k <= n, "k = {k} exceeds n = {n}");
        self.swaps.clear();
        for i in 0..k {
            let j = rng.random_range(i..n);
            self.perm.swap(i, j);
            self.swaps.push(j);
        }
        let out = self.perm[..k].to_vec();
        for (i, &j) in self.swaps.iter().enumerate().rev() {
            self.perm.swap(i, j);
        }
        out
    }
}

/// Draws `A` as `S` (the first `k - m` vertices) followed by `Q` (the last `m`), returning
/// the list and `|S|`. `Q` is uniform among `m`-subsets of the complement of `S`.
pub fn draw_split<R: Rng + ?Sized>(sampler: &mut Sampler, k: usize, m: usize, rng: &mut R) -> (Vec<usize>, usize) {
    debug_assert!(m <= k);
    (sampler.draw(k, rng), k - m)
}

/// Uniform `k`-subset of the vertex range.
pub fn sample_ksubset<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Result<VertexSet> {
    if k > g.n() {
        return Err(invalid(format!("k = {k} exceeds n = {}", g.n())));
    }
    VertexSet::from_vertices(g.n(), Sampler::new(g.n()).draw(k, rng))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSample {
    pub s: VertexSet,
    pub q: VertexSet,
    pub a: VertexSet,
}

/// Two-phase draw: `S` of size `k - m`, then `Q` of size `m` from the rest.
pub fn sample_split<R: Rng + ?Sized>(g: &Graph, k: usize, m: usize, rng: &mut R) -> Result<SplitSample> {
    if !(1 <= m && m < k && k <= g.n()) {
        return Err(invalid(format!("need 1 <= m < k <= n, got m = {m}, k = {k}, n = {}", g.n())));
    }
    let (verts, s_len) = draw_split(&mut Sampler::new(g.n()), k, m, rng);
    let s = VertexSet::from_vertices(g.n(), verts[..s_len].iter().copied())?;
    let q = VertexSet::from_vertices(g.n(), verts[s_len..].iter().copied())?;
    let a = s.union(&q);
    Ok(SplitSample { s, q, a })
}

/// Runs `cfg.trials` draws and merges the per-range accumulators in range order.
///
/// `visit` sees one [`SampleContext`] per trial; with `setup.m = 0` the draw is a plain
/// uniform `k`-subset with `S = A`.
pub(crate) fn run_trials<T, I, V, M>(setup: &EventSetup<'_>, cfg: &McConfig, init: I, visit: V, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, &SampleContext<'_, '_>) + Sync,
    M: Fn(T, T) -> T,
{
    let parts: Vec<T> = trial_ranges(cfg.trials)
        .into_par_iter()
        .map(|(stream, _, len)| {
            let mut rng: StreamRng = stream_rng(cfg.seed, stream);
            let mut sampler = Sampler::new(setup.graph.n());
            let mut acc = init();
            for _ in 0..len {
                let (verts, s_len) = draw_split(&mut sampler, setup.k, setup.m, &mut rng);
                let ctx = SampleContext::new(setup, verts, s_len).expect("sampler yields distinct vertices");
                visit(&mut acc, &ctx);
            }
            acc
        })
        .collect();
    parts.into_iter().reduce(merge).unwrap_or_else(init)
}

/// Probability that `pred` holds on a random draw.
pub fn estimate_event<P>(setup: &EventSetup<'_>, pred: P, cfg: &McConfig) -> Estimate
where
    P: Fn(&SampleContext<'_, '_>) -> bool + Sync,
{
    let hits = run_trials(
        setup,
        cfg,
        || 0u64,
        |acc, ctx| {
            if pred(ctx) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    Estimate::from_counts(hits, cfg)
}

/// Several named events estimated on the same draws.
pub fn estimate_events(setup: &EventSetup<'_>, ids: &[EventId], cfg: &McConfig) -> Vec<(EventId, Estimate)> {
    let counts = run_trials(
        setup,
        cfg,
        || vec![0u64; ids.len()],
        |acc, ctx| {
            for (c, &id) in acc.iter_mut().zip(ids) {
                if eval_event(ctx, id) {
                    *c += 1;
                }
            }
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    ids.iter().zip(counts).map(|(&id, c)| (id, Estimate::from_counts(c, cfg))).collect()
}

/// `Pr[E \ F]`, `Pr[E ∩ F]` and `Pr[E]` from one set of draws, so that the first two
/// success counts add up to the third.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub difference: Estimate,
    pub intersection: Estimate,
    pub event: Estimate,
    /// `Pr[E \ F] / Pr[E]` when `E` was observed.
    pub conditional_miss: Option<f64>,
}

pub fn estimate_containment<E, F>(setup: &EventSetup<'_>, e: E, f: F, cfg: &McConfig) -> Containment
where
    E: Fn(&SampleContext<'_, '_>) -> bool + Sync,
    F: Fn(&SampleContext<'_, '_>) -> bool + Sync,
{
    let (diff, both) = run_trials(
        setup,
        cfg,
        || (0u64, 0u64),
        |acc, ctx| {
            if e(ctx) {
                if f(ctx) {
                    acc.1 += 1;
                } else {
                    acc.0 += 1;
                }
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    let total = diff + both;
    Containment {
        difference: Estimate::from_counts(diff, cfg),
        intersection: Estimate::from_counts(both, cfg),
        event: Estimate::from_counts(total, cfg),
        conditional_miss: (total > 0).then(|| diff as f64 / total as f64),
    }
}
