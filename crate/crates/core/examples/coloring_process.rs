//! The sequential coloring process and the geometric-sum law of its stopping count.

use edgestat::coloring::{
    compare_y_law, conditioned_y_histogram, coupling_report, geometric_params, process_prefix, run_coloring, y1_prob,
    y_pmf, DEFAULT_STEP_CAP,
};
use edgestat::exact::fraction_string;
use edgestat::graph::{generate, FamilySpec};
use edgestat::mc::McConfig;
use edgestat::rng::stream_rng;

fn main() -> edgestat::Result<()> {
    let g = generate(&FamilySpec::Gnp { n: 20, p: 0.3, seed: 11 })?;
    let (k, ell) = (5, 2);
    let mut rng = stream_rng(1, 0);

    let trace = run_coloring(&g, k, ell, &mut rng, DEFAULT_STEP_CAP)?;
    println!("one run: {:?} stop = {:?}, Y = {:?}", trace.sequence, trace.stop, trace.y);

    // Fix the black vertices, then Y is a sum of independent geometrics.
    let prefix = process_prefix(&g, k, ell, &mut rng)?;
    let params = geometric_params(&g, &prefix, ell)?;
    let y1 = y1_prob(&params);
    println!("blacks {prefix:?}, Pr[Y = 1] = {:.6} (<= 1/e)", y1.value);
    let pmf = y_pmf(&params, 4)?;
    for (y, p) in pmf.probs.iter().enumerate() {
        println!("  Pr[Y = {y}] = {}", fraction_string(p));
    }

    let hist = conditioned_y_histogram(&g, &prefix, ell, 20_000, 3)?;
    let bins = compare_y_law(&params, &hist, 1e-3)?;
    let ok = bins.iter().filter(|b| b.within_3_sigma).count();
    println!("{ok}/{} bins of the simulated law within 3 sigma", bins.len());

    let c = coupling_report(&g, k, ell, &McConfig::new(20_000, 5), DEFAULT_STEP_CAP)?;
    println!(
        "coupling: Pr[X~ = ell] = {:.4}, Pr[Y = 1] = {:.4}, violations {}",
        c.pr_x_tilde.point, c.pr_y1.point, c.implication_violations
    );
    Ok(())
}
