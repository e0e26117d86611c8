//! Exact distribution of the induced edge count on a few small graphs.
//!
//! Run with `cargo run --example exact_distribution`.

use edgestat::dist::exact_pmf;
use edgestat::exact::fraction_string;
use edgestat::graph::{generate, FamilySpec};

fn main() -> edgestat::Result<()> {
    let graphs = [
        ("C5", FamilySpec::Cycle { n: 5 }),
        ("K3+K2", FamilySpec::UnionOf {
            parts: vec![FamilySpec::Complete { n: 3 }, FamilySpec::Complete { n: 2 }],
        }),
        ("K_{3,4}", FamilySpec::CompleteBipartite { a: 3, b: 4 }),
    ];
    for (name, spec) in graphs {
        let g = generate(&spec)?;
        let table = exact_pmf(&g, 3)?;
        println!("{name}: n = {}, k = 3, {} triples", g.n(), table.total);
        for (ell, p) in table.probs() {
            println!("  Pr[X = {ell}] = {}", fraction_string(&p));
        }
        println!("  E[X] = {}", fraction_string(&table.mean()));
    }
    Ok(())
}
