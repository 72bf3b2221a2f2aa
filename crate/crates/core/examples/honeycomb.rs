//! Prints the hexagon graph of the 2x3 classes as Graphviz DOT.
//!
//! Usage: `cargo run --example honeycomb | dot -Tsvg > honeycomb.svg`

use spectral_cmi::classes::{honeycomb, honeycomb_edges, r23_table, to_dot, xi_orbits};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = r23_table()?;
    for h in honeycomb(&table)? {
        eprintln!("hexagon {:>2}: {:?}", h.major, h.members);
    }
    let (fixed, pairs) = xi_orbits(&table)?;
    eprintln!("xi: {} fixed classes, {} pairs", fixed.len(), pairs.len());
    let nodes: Vec<usize> = (1..=table.len()).collect();
    print!(
        "{}",
        to_dot("honeycomb", &table, &nodes, &honeycomb_edges(&table)?)?
    );
    Ok(())
}
