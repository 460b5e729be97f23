//! Command-line front end.
//!
//! Exit codes: 0 success, 1 computation error, 2 input error, 3 timeout
//! (bounds are still printed).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use rrobust::bench::{self, BenchConfig};
use rrobust::compute::{compute_rmax, ComputeOptions, Method, OutcomeStatus};
use rrobust::edge_list;
use rrobust::generators::{GenSpec, GraphModel, ModelParam};
use rrobust::Error;

#[derive(Parser)]
#[command(name = "rrobust", version, about = "Maximum r-robustness of digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute r_max of a graph stored as an edge list.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "milp")]
        method: Method,
        /// Only decide whether r_max >= γ.
        #[arg(long, value_name = "γ")]
        threshold: Option<u32>,
        /// Wall-clock limit in seconds.
        #[arg(long, value_name = "S")]
        timeout: Option<f64>,
        #[arg(long)]
        no_symmetry_break: bool,
        /// Print one line per branch-and-bound node to stderr.
        #[arg(long)]
        trace: bool,
        /// Use all cores for the exhaustive search.
        #[arg(long)]
        parallel: bool,
    },
    /// Generate a seeded random graph.
    Gen {
        #[arg(long)]
        model: GraphModel,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        p: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time both methods over a grid of random graphs.
    Bench(BenchArgs),
    /// Check that both methods agree on small random graphs.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// TOML grid; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<GraphModel>>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Sizes for the exhaustive search, e.g. `7..15` or `7,9,11`.
    #[arg(long, value_parser = parse_sizes)]
    exhaustive_sizes: Option<Sizes>,
    #[arg(long, value_parser = parse_sizes)]
    milp_sizes: Option<Sizes>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Per-trial limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    no_symmetry_break: bool,
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    plotdata: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct Sizes(Vec<usize>);

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    if s.trim().is_empty() {
        return Ok(Sizes(Vec::new()));
    }
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|e| format!("{e}"))?;
        return Ok(Sizes((a..=b).collect()));
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()
        .map(Sizes)
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_input_error() { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            input,
            method,
            threshold,
            timeout,
            no_symmetry_break,
            trace,
            parallel,
        } => compute(
            input,
            ComputeOptions {
                method,
                threshold,
                timeout: timeout.map(Duration::from_secs_f64),
                symmetry_break: !no_symmetry_break,
                trace,
                parallel,
            },
        ),
        Command::Gen {
            model,
            n,
            p,
            k,
            seed,
            out,
        } => gen(model, n, p, k, seed, out),
        Command::Bench(args) => run_bench(args),
        Command::Verify {
            n_max,
            trials,
            seed,
        } => verify(n_max, trials, seed),
    };
    result.unwrap_or_else(|e| exit_for(&e))
}

fn compute(input: PathBuf, opts: ComputeOptions) -> rrobust::Result<ExitCode> {
    if opts.timeout.is_some_and(|t| t.is_zero()) {
        return Err(Error::InvalidParameter("timeout must be positive".into()));
    }
    let g = edge_list::read(&input)?;
    let out = compute_rmax(&g, &opts)?;
    for line in &out.trace {
        eprintln!("{line}");
    }
    println!("n = {}", g.n());
    println!("method = {}", out.method);
    let code = match out.status {
        OutcomeStatus::Exact => {
            println!("r_max = {}", out.upper);
            0
        }
        OutcomeStatus::ProvenAtLeast(g) => {
            println!("r_max >= {g}");
            0
        }
        OutcomeStatus::RefutedBelow(g) => {
            println!("r_max < {g}");
            0
        }
        OutcomeStatus::Timeout => {
            println!("timeout: {} <= r_max <= {}", out.lower, out.upper);
            3
        }
    };
    if let Some(w) = &out.witness {
        println!("witness = {w}");
    }
    let label = match out.method {
        Method::Milp => "nodes",
        Method::Exhaustive => "pairs",
    };
    println!("{label} = {}", out.search_count);
    println!("elapsed_ms = {:.3}", out.elapsed.as_secs_f64() * 1000.0);
    Ok(ExitCode::from(code))
}

fn gen(
    model: GraphModel,
    n: usize,
    p: Option<f64>,
    k: Option<usize>,
    seed: u64,
    out: PathBuf,
) -> rrobust::Result<ExitCode> {
    let param = match (p, k) {
        (Some(p), _) => ModelParam::P(p),
        (None, Some(k)) => ModelParam::K(k),
        (None, None) => unreachable!("clap requires one of --p and --k"),
    };
    let g = GenSpec {
        model,
        n,
        param,
        seed,
    }
    .generate()?;
    edge_list::write(&out, &g)?;
    println!("wrote {} ({} vertices, {} edges)", out.display(), g.n(), g.edge_count());
    Ok(ExitCode::SUCCESS)
}

fn run_bench(args: BenchArgs) -> rrobust::Result<ExitCode> {
    let mut cfg = match &args.config {
        Some(path) => BenchConfig::load(path)?,
        None => BenchConfig::default(),
    };
    if let Some(v) = args.models {
        cfg.models = v;
    }
    if let Some(v) = args.p {
        cfg.p = v;
    }
    if let Some(v) = args.k {
        cfg.k = v;
    }
    if let Some(Sizes(v)) = args.exhaustive_sizes {
        cfg.exhaustive_sizes = v;
    }
    if let Some(Sizes(v)) = args.milp_sizes {
        cfg.milp_sizes = v;
    }
    if let Some(v) = args.trials {
        cfg.trials = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.timeout {
        cfg.timeout_secs = v;
    }
    cfg.symmetry_break &= !args.no_symmetry_break;
    cfg.parallel |= args.parallel;

    let records = if cfg.parallel {
        bench::run_benchmark(&cfg)?
    } else {
        let mut recs = Vec::new();
        bench::run_benchmark_each(&cfg, |r| {
            eprintln!(
                "{} n={} param={} trial={} {}: r_max={} {:.3} ms",
                r.model,
                r.n,
                r.param,
                r.trial,
                r.method,
                r.r_max.map_or("-".to_string(), |v| v.to_string()),
                r.elapsed_ms
            );
            recs.push(r.clone());
        })?;
        recs
    };
    bench::emit_csv(&args.out, &records)?;
    if let Some(path) = &args.plotdata {
        bench::emit_plotdata(path, &records)?;
    }
    println!("{} records written to {}", records.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(n_max: usize, trials: u32, seed: u64) -> rrobust::Result<ExitCode> {
    if n_max > 16 {
        return Err(Error::InvalidParameter(format!(
            "n-max = {n_max} is too large for the exhaustive search (max 16)"
        )));
    }
    let report = bench::verify_equivalence(n_max, trials, seed)?;
    for (spec, milp, ex) in &report.mismatches {
        println!(
            "MISMATCH {} n={} param={} seed={}: milp={milp} exhaustive={ex}",
            spec.model, spec.n, spec.param, spec.seed
        );
    }
    println!(
        "{} graphs checked, {} mismatches",
        report.graphs_checked,
        report.mismatches.len()
    );
    Ok(if report.all_match() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
