//! Degree events, their containments, and the closed-form moments behind them.

use edgestat::events::{
    anti_concentration, conditional_q_edges, edge_indicator_moments, poisson_mode_bound, EdgeRelation, EventId,
    EventSetup, HypergeomSpec,
};
use edgestat::exact::fraction_string;
use edgestat::graph::{generate, FamilySpec};
use edgestat::mc::{estimate_containment, McConfig};

fn main() -> edgestat::Result<()> {
    let g = generate(&FamilySpec::Copies {
        copies: 50,
        of: Box::new(FamilySpec::Cycle { n: 5 }),
    })?;
    let setup = EventSetup::new(&g, 10, 2)?;

    let c = estimate_containment(
        &setup,
        |s| edgestat::events::eval_event(s, EventId::E1) && s.x() == 2,
        |s| edgestat::events::eval_event(s, EventId::E2),
        &McConfig::new(20_000, 9),
    );
    println!("Pr[E1 and X = 2] = {:.4}, misses of E2: {}", c.event.point, c.difference.successes);

    let q = conditional_q_edges(&setup, 10, 20_000)?;
    println!("E[e(Q) | X = 2] ~ {:.4}, expected {} (z = {:.2})", q.mean, q.expected_fraction, q.z_score);

    for rel in [EdgeRelation::Identical, EdgeRelation::ShareOne, EdgeRelation::Disjoint] {
        let m = edge_indicator_moments(250, 10, rel)?;
        println!("{rel:?}: cov = {}", fraction_string(&m.cov));
    }

    let a = anti_concentration(HypergeomSpec {
        population: 1000,
        special: 300,
        draws: 200,
    })?;
    println!("hypergeometric max prob {:.5}, local limit {:.5}", a.max_prob, a.local_limit);
    println!("Poisson mode bound at d = 1: {:.6}", poisson_mode_bound(1)?.value);
    Ok(())
}
