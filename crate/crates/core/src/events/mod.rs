//! Events on a two-phase draw `A = S ∪ Q`, the heavy/light moment formulas, and the
//! hypergeometric and Poisson calculations that go with them.
//!
//! Threshold conventions: every "all but at most `x`" and every one-sided bound is tested
//! with `<=` / `>=` exactly as stated on the event. Bounds that are cube roots of `ell`
//! are compared as integer cubes (`e^3 <= 8 ell` for `e <= 2 ell^(1/3)`,
//! `8 e^3 >= ell` for `e >= ell^(1/3) / 2`, `c^3 <= w` for `c <= w^(1/3)`); the
//! remaining real thresholds (`w sqrt(ell)`, `w ell^(5/6)`) are evaluated in `f64`.

mod context;
mod distributions;
mod moments;

pub use context::{default_m, default_w, EventId, EventSetup, SampleContext};
pub use distributions::{
    anti_concentration, hypergeom_pmf, poisson_mode_bound, poisson_point, AntiConcentration, HypergeomPmf,
    HypergeomSpec, PoissonModeBound,
};
pub use moments::{
    classify_split, edge_indicator_moments, exact_moments, light_degree_sum, median_degree_into, mode_degree,
    predicted_mode_degree, variance_x_minus_z, variance_x_minus_z_with_budget, EdgeRelation, IndicatorMoments,
    ModePrediction, MomentReport, SplitCase, SplitCaseReport, VarianceReport,
};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::binomial;
use crate::exact::{ratio, to_f64};
use crate::mc::{draw_split, Sampler};
use crate::rng::{stream_rng, TRIALS_PER_RANGE};
use moments::mode_of;

/// Vertices whose value differs from the most common one.
fn off_mode_count(values: &[u32]) -> usize {
    mode_of(values.iter().copied()).map_or(0, |(_, c)| values.len() - c)
}

fn cube_at_most(count: usize, w: f64) -> bool {
    (count as f64).powi(3) <= w
}

/// Literal evaluation of `id` on the draw.
pub fn eval_event(ctx: &SampleContext<'_, '_>, id: EventId) -> bool {
    let setup = ctx.setup();
    let ell = setup.ell;
    let deg_a = ctx.degrees_in_a();
    let q_start = ctx.s_vertices().len();
    match id {
        EventId::XEquals(l) => ctx.x() as u64 == l,
        EventId::D(d) => {
            let off = deg_a.iter().filter(|&&x| x as u64 != d).count();
            off as f64 <= setup.d_allowance()
        }
        EventId::Dstar => off_mode_count(deg_a) as f64 <= setup.d_allowance(),
        EventId::E1 => ctx.e_q() == 0,
        EventId::E2 => (ctx.e_s() + ctx.q_into_s()) as u64 == ell,
        EventId::E3 => cube_at_most(off_mode_count(&ctx.degrees_into_s()[q_start..]), setup.w),
        EventId::E4 => cube_at_most(off_mode_count(&deg_a[q_start..]), setup.w),
        EventId::F1 => deg_a
            .iter()
            .enumerate()
            .filter(|&(i, _)| !ctx.is_heavy(i))
            .all(|(_, &e)| (e as u128).pow(3) <= 8 * ell as u128),
        EventId::F2 => deg_a
            .iter()
            .enumerate()
            .filter(|&(i, _)| ctx.is_heavy(i))
            .all(|(_, &e)| 8 * (e as u128).pow(3) >= ell as u128),
        EventId::F3 => {
            let z = light_degree_sum(ctx) as f64;
            (ctx.x() as f64 - z - to_f64(&setup.moments.mu)).abs() <= setup.f_width()
        }
        EventId::F4 => {
            let z = light_degree_sum(ctx) as f64;
            let d = mode_of(deg_a.iter().copied()).map_or(0, |(d, _)| d) as f64;
            (z - setup.k as f64 * d).abs() <= 3.0 * setup.f_width()
        }
    }
}

/// Monte Carlo check of `E[e(Q) | X = ell] = ell C(m,2) / C(k,2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalQEdges {
    pub samples: u64,
    /// Draws made to collect `samples` conditioned ones (whole trial ranges).
    pub draws: u64,
    pub mean: f64,
    pub std_error: f64,
    pub expected: f64,
    pub expected_fraction: String,
    /// `(mean - expected) / std_error`.
    pub z_score: f64,
}

/// `ell C(m,2) / C(k,2)`.
pub fn expected_q_edges(setup: &EventSetup<'_>) -> BigRational {
    let m = setup.m as u64;
    let k = setup.k as u64;
    let num = setup.ell as u128 * binomial(m, 2).unwrap();
    ratio(num, binomial(k, 2).unwrap().max(1))
}

/// Draws split samples until `samples` of them have `X = ell`, and averages `e(Q)` over
/// those. Trial ranges are consumed in stream order, so the result depends only on
/// `(setup, seed, samples)`.
pub fn conditional_q_edges(setup: &EventSetup<'_>, seed: u64, samples: u64) -> crate::Result<ConditionalQEdges> {
    let expected = expected_q_edges(setup);
    const BATCH: u64 = 32;
    let mut values: Vec<u32> = Vec::new();
    let mut next_stream = 0u64;
    let mut draws = 0u64;
    while (values.len() as u64) < samples {
        if next_stream > 1 << 24 {
            return Err(crate::error::invalid(
                "conditioning event X = ell is too rare to collect the requested samples",
            ));
        }
        let batch: Vec<Vec<u32>> = (next_stream..next_stream + BATCH)
            .into_par_iter()
            .map(|stream| {
                let mut rng = stream_rng(seed, stream);
                let mut sampler = Sampler::new(setup.graph.n());
                let mut out = Vec::new();
                for _ in 0..TRIALS_PER_RANGE {
                    let (verts, s_len) = draw_split(&mut sampler, setup.k, setup.m, &mut rng);
                    let ctx = SampleContext::new(setup, verts, s_len).expect("sampler yields distinct vertices");
                    if ctx.x() as u64 == setup.ell {
                        out.push(ctx.e_q() as u32);
                    }
                }
                out
            })
            .collect();
        next_stream += BATCH;
        draws += BATCH * TRIALS_PER_RANGE;
        for b in batch {
            values.extend(b);
        }
    }
    values.truncate(samples as usize);
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let std_error = (var / n).sqrt();
    let exp = to_f64(&expected);
    Ok(ConditionalQEdges {
        samples: values.len() as u64,
        draws,
        mean,
        std_error,
        expected: exp,
        expected_fraction: crate::exact::fraction_string(&expected),
        z_score: if std_error > 0.0 { (mean - exp) / std_error } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec, Graph};
    use crate::mc::McConfig;

    fn fam(spec: FamilySpec) -> Graph {
        generate(&spec).unwrap()
    }

    #[test]
    fn empty_graph_events() {
        let g = fam(FamilySpec::Empty { n: 30 });
        let setup = EventSetup::new(&g, 6, 2).unwrap();
        let ctx = SampleContext::new(&setup, vec![0, 5, 9, 14, 20, 29], 3).unwrap();
        assert!(eval_event(&ctx, EventId::D(0)));
        assert!(eval_event(&ctx, EventId::Dstar));
        assert!(eval_event(&ctx, EventId::E1));
        assert!(eval_event(&ctx, EventId::XEquals(0)));
        assert!(!eval_event(&ctx, EventId::E2));
    }

    #[test]
    fn complete_graph_has_constant_degree() {
        let g = fam(FamilySpec::Complete { n: 10 });
        let setup = EventSetup::new(&g, 4, 1).unwrap();
        let ctx = SampleContext::new(&setup, vec![2, 3, 7, 8], 3).unwrap();
        assert!(eval_event(&ctx, EventId::D(3)));
        assert!(!eval_event(&ctx, EventId::D(2)) || setup.d_allowance() >= 4.0);
        assert!(eval_event(&ctx, EventId::XEquals(6)));
    }

    #[test]
    fn e1_and_x_imply_e2_on_a_grid_of_draws() {
        let g = fam(FamilySpec::Gnp { n: 60, p: 0.05, seed: 1 });
        let setup = EventSetup::new(&g, 12, 3).unwrap();
        let cfg = McConfig::new(20_000, 4);
        let c = crate::mc::estimate_containment(
            &setup,
            |ctx| eval_event(ctx, EventId::E1) && eval_event(ctx, EventId::XEquals(3)),
            |ctx| eval_event(ctx, EventId::E2),
            &cfg,
        );
        assert_eq!(c.difference.successes, 0);
        assert!(c.event.successes > 0);
    }

    #[test]
    fn f1_f2_thresholds_are_exact_cubes() {
        // ell = 8: light vertices need e <= 4, heavy ones e >= 1
        let g = fam(FamilySpec::CompleteBipartite { a: 1, b: 9 });
        let setup = EventSetup::with_w(&g, 6, 8, 1.0).unwrap();
        assert!(setup.split.is_heavy(0));
        let ctx = SampleContext::new(&setup, vec![0, 1, 2, 3, 4, 5], 4).unwrap();
        // center has degree 5 in A, leaves degree 1
        assert!(eval_event(&ctx, EventId::F1));
        assert!(eval_event(&ctx, EventId::F2));
        let ctx = SampleContext::new(&setup, vec![1, 2, 3, 4, 5, 6], 4).unwrap();
        assert!(eval_event(&ctx, EventId::F1) && eval_event(&ctx, EventId::F2));
    }

    #[test]
    fn light_degree_sum_cases() {
        let e = fam(FamilySpec::Empty { n: 20 });
        let s = EventSetup::new(&e, 5, 1).unwrap();
        let ctx = SampleContext::new(&s, vec![0, 1, 2, 3, 4], 3).unwrap();
        assert_eq!(light_degree_sum(&ctx), 0);

        // perfect matching, threshold n ell^(1/3)/k = 20 * 2 / 5 = 8: everything light
        let pm = Graph::from_edges(20, &(0..10).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>()).unwrap();
        let s = EventSetup::new(&pm, 5, 8).unwrap();
        assert!(s.split.heavy.is_empty());
        let ctx = SampleContext::new(&s, vec![0, 1, 2, 3, 6], 3).unwrap();
        assert_eq!(light_degree_sum(&ctx), 2 * ctx.x() as u64);

        let k = fam(FamilySpec::Complete { n: 12 });
        let s = EventSetup::new(&k, 4, 1).unwrap();
        let ctx = SampleContext::new(&s, vec![0, 1, 2, 3], 2).unwrap();
        assert_eq!(light_degree_sum(&ctx), 0);
    }

    #[test]
    fn expected_q_edges_formula() {
        let g = fam(FamilySpec::Copies {
            copies: 50,
            of: Box::new(FamilySpec::Cycle { n: 5 }),
        });
        let setup = EventSetup::new(&g, 10, 2).unwrap();
        assert_eq!(setup.m, 5);
        assert_eq!(expected_q_edges(&setup), ratio(4, 9));
    }
}
