//! Builds the mixed-integer program for a graph and prints it in LP-file form,
//! then checks the objective on every encoded subset pair.
//!
//!     cargo run --example milp_model

use rrobust::exhaustive::enumerate_unordered_pairs;
use rrobust::milp::{build_milp, build_milp_with, encode, objective_value, MilpOptions, RowKind};
use rrobust::Digraph;

fn main() -> rrobust::Result<()> {
    let d3 = Digraph::from_edges(3, &[(2, 1), (3, 1), (1, 2), (3, 2), (1, 3)])?;
    let lap = d3.laplacian();
    println!("Laplacian of D3:");
    for row in lap.rows() {
        println!("  {row:?}");
    }

    let model = build_milp(&lap)?;
    println!("\n{}", model.dump());

    for kind in [RowKind::Epigraph, RowKind::Disjoint, RowKind::Cardinality, RowKind::Symmetry] {
        println!("{kind:?} rows: {}", model.count_rows(kind));
    }
    let plain = build_milp_with(&lap, MilpOptions { symmetry_break: false })?;
    println!("without symmetry breaking: {} rows", plain.rows().len());

    println!("\nobjective on each pair:");
    for pair in enumerate_unordered_pairs(3) {
        let b = encode(&pair)?;
        println!(
            "  {pair}  b1={:?} b2={:?}  objective {}  (direct {})",
            b.b1,
            b.b2,
            objective_value(&lap, &b)?,
            pair.value(&d3)
        );
    }
    Ok(())
}
