//! Runs branch and bound with tracing and prints how the bounds close.
//!
//!     cargo run --release --example bnb_trace [n] [seed]

use rrobust::bnb::{solve, SolveOptions};
use rrobust::exhaustive::determine_robustness;
use rrobust::generators::gen_random_digraph;
use rrobust::milp::build_milp;

fn main() -> rrobust::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(9, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(3, |s| s.parse().expect("seed"));

    let g = gen_random_digraph(n, 0.5, seed)?;
    let model = build_milp(&g.laplacian())?;
    let res = solve(
        &model,
        &SolveOptions {
            trace: true,
            ..Default::default()
        },
    )?;

    // Print every line while the tree is small, otherwise only bound changes.
    let mut last = None;
    for line in &res.trace {
        let bounds = (line.lower_bound, line.upper_bound);
        if res.trace.len() <= 40 || last != Some(bounds) {
            println!("{line}");
        }
        last = Some(bounds);
    }
    println!(
        "\nstatus {:?}, r_max = {:?}, root LP {:.4}, {} nodes, {} LP iterations, {} warm starts, {:.2?}",
        res.status,
        res.r_max(),
        res.root_lp_value.unwrap_or(f64::NAN),
        res.nodes_explored,
        res.lp_iterations,
        res.warm_starts,
        res.elapsed
    );
    if let Some(pair) = res.certificate() {
        println!("optimal pair {pair} with value {}", pair.value(&g));
    }
    println!("exhaustive check: {}", determine_robustness(&g)?.r_max);
    Ok(())
}
