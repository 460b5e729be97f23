//! A reduced timing sweep: both methods on random digraphs, written as CSV and
//! as min/median/max plot data.
//!
//!     cargo run --release --example benchmark_sweep [trials]

use rrobust::bench::{emit_csv, emit_plotdata, run_benchmark, series, BenchConfig};
use rrobust::generators::GraphModel;

fn main() -> rrobust::Result<()> {
    let trials: u32 = std::env::args().nth(1).map_or(10, |s| s.parse().expect("trials"));
    let cfg = BenchConfig {
        models: vec![GraphModel::Digraph, GraphModel::Kin],
        p: vec![0.5],
        k: vec![4],
        exhaustive_sizes: (7..=12).collect(),
        milp_sizes: (7..=14).collect(),
        trials,
        timeout_secs: 30.0,
        ..Default::default()
    };
    println!("config:\n{}", cfg.to_toml_string());

    let records = run_benchmark(&cfg)?;
    let dir = std::env::temp_dir();
    let csv = dir.join("rrobust-bench.csv");
    let dat = dir.join("rrobust-bench.dat");
    emit_csv(&csv, &records)?;
    emit_plotdata(&dat, &records)?;
    println!("{} records -> {} and {}", records.len(), csv.display(), dat.display());

    for s in series(&records) {
        println!("\n{} param={} {}", s.model, s.param, s.method);
        for p in &s.points {
            println!(
                "  n={:>2}  min {:>9.3} ms  median {:>9.3} ms  max {:>9.3} ms",
                p.n, p.min_ms, p.median_ms, p.max_ms
            );
        }
    }
    Ok(())
}
