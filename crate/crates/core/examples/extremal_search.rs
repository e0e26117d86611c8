//! Maximum of Pr[X = ell] over every graph on n vertices, with a witness.
//!
//! `cargo run --release --example extremal_search -- 6 3 1` searches n = 6, k = 3, ell = 1.

use edgestat::dist::{max_over_graphs, monotonicity_report, ExtremalSource};
use edgestat::exact::fraction_string;

fn main() -> edgestat::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, k, ell) = match args[..] {
        [n, k, ell] => (n, k, ell),
        _ => (5, 3, 1),
    };
    let r = max_over_graphs(n, k, ell, &ExtremalSource::ExhaustiveLabeled)?;
    println!(
        "I({n},{k},{ell}) = {} over {} labelled graphs",
        fraction_string(&r.value),
        r.graphs_scanned
    );
    println!("witness edges: {:?}", r.witness.edges());

    // The maximum cannot grow with n: a witness on n+1 vertices restricts to n.
    let mono = monotonicity_report(&[4, 5, 6], 3, 1)?;
    for row in &mono.rows {
        println!("I({},3,1) = {}", row.n, fraction_string(&row.value));
    }
    println!("non-increasing: {}", mono.is_non_increasing());
    Ok(())
}
