//! The subset-pair search on its own: pair counts, reachability of single
//! sets and the first minimizing pair.
//!
//!     cargo run --release --example exhaustive_search [n] [seed]

use std::time::Instant;

use rrobust::exhaustive::{
    determine_robustness, determine_robustness_with, enumerate_unordered_pairs,
    initial_upper_bound, pair_count, ExhaustiveOptions, ExhaustiveOutcome,
};
use rrobust::generators::gen_random_digraph;
use rrobust::{Digraph, NodeSet};

fn main() -> rrobust::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(12, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    println!("ordered pairs |T| by n:");
    for m in 2..=8 {
        let unordered = enumerate_unordered_pairs(m).count();
        println!("  n={m}: {} ({} unordered)", pair_count(m), unordered);
    }

    let d3 = Digraph::from_edges(3, &[(2, 1), (3, 1), (1, 2), (3, 2), (1, 3)])?;
    println!("\nD3 pairs and their value max(R(S1), R(S2)):");
    for pair in enumerate_unordered_pairs(3) {
        println!("  {pair}  -> {}", pair.value(&d3));
    }
    let s = NodeSet::from_vertices(3, &[1, 2])?;
    println!("R({s}) = {}", d3.reachability(&s));

    let g = gen_random_digraph(n, 0.5, seed)?;
    println!("\nrandom digraph n={n} p=0.5 seed={seed}, {} edges", g.edge_count());
    println!("initial bound min(max(min in-degree, 1), ceil(n/2)) = {}", initial_upper_bound(&g)?);

    let t = Instant::now();
    let res = determine_robustness(&g)?;
    println!(
        "r_max = {}  witness {}  ({} of {} unordered pairs visited, {:.2?})",
        res.r_max,
        res.witness,
        res.pairs_examined,
        pair_count(n) / 2,
        t.elapsed()
    );

    let t = Instant::now();
    let opts = ExhaustiveOptions {
        parallel: true,
        ..Default::default()
    };
    if let ExhaustiveOutcome::Complete(par) = determine_robustness_with(&g, &opts)? {
        println!("parallel: r_max = {}  witness {}  ({:.2?})", par.r_max, par.witness, t.elapsed());
    }
    Ok(())
}
