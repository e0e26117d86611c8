//! Reading and writing graph6, including a catalog with one graph per line.

use std::io::Cursor;

use edgestat::dist::max_over_catalog;
use edgestat::exact::fraction_string;
use edgestat::graph::{generate, FamilySpec};
use edgestat::graph6::{parse_graph6, read_graph6_lines, write_graph6};

fn main() -> edgestat::Result<()> {
    let c5 = generate(&FamilySpec::Cycle { n: 5 })?;
    let text = write_graph6(&c5)?;
    println!("C5 as graph6: {text}");
    assert_eq!(parse_graph6(&text)?, c5);

    let catalog = ["D??", "DQc", "D`_", "DBw", "D~{"]
        .iter()
        .map(|s| format!("{s}\n"))
        .collect::<String>();
    for (line, g) in read_graph6_lines(Cursor::new(catalog.as_bytes())) {
        let g = g?;
        println!("line {line}: n = {}, {} edges", g.n(), g.edge_count());
    }
    let best = max_over_catalog(Cursor::new(catalog.as_bytes()), 5, 3, 1)?;
    println!("best Pr[X = 1] in catalog: {} by {:?}", fraction_string(&best.value), best.witness.edges());
    Ok(())
}
