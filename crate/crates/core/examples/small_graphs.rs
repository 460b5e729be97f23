//! r_max of a few small digraphs, computed by both methods.
//!
//!     cargo run --example small_graphs

use rrobust::compute::{compute_rmax, ComputeOptions, Method};
use rrobust::Digraph;

fn main() -> rrobust::Result<()> {
    let graphs = [
        ("D3", Digraph::from_edges(3, &[(2, 1), (3, 1), (1, 2), (3, 2), (1, 3)])?),
        ("K5", Digraph::complete(5)?),
        ("K6", Digraph::complete(6)?),
        ("C6", Digraph::directed_cycle(6)?),
        ("empty(0)", Digraph::empty(0)?),
        ("single vertex", Digraph::empty(1)?),
    ];

    println!("{:<14} {:>5} {:>11}  witness", "graph", "milp", "exhaustive");
    for (name, g) in &graphs {
        let milp = compute_rmax(g, &ComputeOptions::default())?;
        let ex = compute_rmax(
            g,
            &ComputeOptions {
                method: Method::Exhaustive,
                ..Default::default()
            },
        )?;
        let witness = ex.witness.map_or("-".to_string(), |w| w.to_string());
        println!(
            "{:<14} {:>5} {:>11}  {}",
            name,
            milp.r_max().unwrap(),
            ex.r_max().unwrap(),
            witness
        );
    }
    Ok(())
}
