//! Asks "is the graph at least γ-robust?" without computing r_max exactly.
//!
//!     cargo run --release --example threshold_query

use rrobust::bnb::{solve, solve_with_threshold, BnbStatus, SolveOptions};
use rrobust::generators::gen_k_in;
use rrobust::milp::build_milp;
use rrobust::Digraph;

fn ask(name: &str, g: &Digraph, gamma: u32) -> rrobust::Result<()> {
    let model = build_milp(&g.laplacian())?;
    let opts = SolveOptions::default();
    let full = solve(&model, &opts)?;
    let res = solve_with_threshold(&model, gamma, &opts)?;
    match res.status {
        BnbStatus::ProvenAtLeast(_) => {
            println!("{name}: r_max >= {gamma} proven after {} nodes", res.nodes_explored)
        }
        BnbStatus::RefutedBelow(_) => {
            let pair = res.certificate().expect("refutation carries a pair");
            println!(
                "{name}: r_max < {gamma}, certificate {pair} reaches only {} ({} nodes)",
                pair.value(g),
                res.nodes_explored
            );
        }
        other => println!("{name}: {other:?}"),
    }
    println!("   full solve: r_max = {:?} after {} nodes", full.r_max(), full.nodes_explored);
    Ok(())
}

fn main() -> rrobust::Result<()> {
    ask("K6", &Digraph::complete(6)?, 2)?;
    ask("D3", &Digraph::from_edges(3, &[(2, 1), (3, 1), (1, 2), (3, 2), (1, 3)])?, 2)?;
    ask("4-in n=14", &gen_k_in(14, 4, 5)?, 3)?;
    Ok(())
}
