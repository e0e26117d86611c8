//! Monte Carlo estimates with confidence intervals on a graph too large to enumerate.
//!
//! Results depend only on the seed, never on the number of rayon threads.

use edgestat::events::{EventId, EventSetup};
use edgestat::graph::{generate, FamilySpec};
use edgestat::mc::{estimate_event, estimate_events, IntervalKind, McConfig};

fn main() -> edgestat::Result<()> {
    // G(n, p) with p = 1/C(k,2): the edge count of a random k-set is close to Poisson(1).
    let k = 25;
    let p = 1.0 / 300.0;
    let g = generate(&FamilySpec::Gnp { n: 10_000, p, seed: 7 })?;
    let setup = EventSetup::new(&g, k, 1)?;

    let cfg = McConfig::new(50_000, 42);
    let est = estimate_event(&setup, |c| c.x() == 1, &cfg);
    println!(
        "Pr[X = 1] ~ {:.4}  99% Wilson [{:.4}, {:.4}]  (1/e = {:.4})",
        est.point,
        est.ci_low,
        est.ci_high,
        (-1.0f64).exp()
    );

    let mut exact_cfg = cfg.clone();
    exact_cfg.interval = IntervalKind::ClopperPearson;
    for (id, e) in estimate_events(&setup, &[EventId::XEquals(0), EventId::XEquals(2)], &exact_cfg) {
        println!("{id}: {:.4} [{:.4}, {:.4}] (Clopper-Pearson)", e.point, e.ci_low, e.ci_high);
    }
    Ok(())
}
