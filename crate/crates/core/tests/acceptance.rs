//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.
//!
//!     cargo test --release --test acceptance

mod common;

use std::time::{Duration, Instant};

use common::{d3_edges, naive_from, NaiveGraph};
use rrobust::bench::{median, run_benchmark, BenchConfig};
use rrobust::bnb::{solve, solve_with_threshold, BnbStatus, SolveOptions};
use rrobust::compute::{compute_rmax, ComputeOptions, Method, OutcomeStatus};
use rrobust::exhaustive::{determine_robustness, enumerate_unordered_pairs, pair_count};
use rrobust::generators::{
    gen_random_digraph, GenSpec, GraphModel, ModelParam, SplitMix64,
};
use rrobust::lp::{lp_relax, Domain, EPS_FEAS};
use rrobust::milp::{build_milp, check_feasible, BinaryPair};
use rrobust::{Digraph, NodeSet};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn milp_value(d: &Digraph) -> u32 {
    compute_rmax(d, &ComputeOptions::default())
        .unwrap()
        .r_max()
        .expect("no time limit")
}

fn params(model: GraphModel) -> Vec<ModelParam> {
    if model.uses_k() {
        vec![ModelParam::K(3), ModelParam::K(4)]
    } else {
        vec![ModelParam::P(0.3), ModelParam::P(0.5), ModelParam::P(0.8)]
    }
}

fn oracle_equivalence() -> Outcome {
    let mut graphs = 0;
    let mut mismatches = Vec::new();
    for model in GraphModel::ALL {
        for param in params(model) {
            for n in 4..=10 {
                for seed in 0..100 {
                    let spec = GenSpec {
                        model,
                        n,
                        param,
                        seed,
                    };
                    if spec.validate().is_err() {
                        // k-regular models need k < n
                        continue;
                    }
                    let g = spec.generate().unwrap();
                    let ex = determine_robustness(&g).unwrap().r_max;
                    let milp = milp_value(&g);
                    graphs += 1;
                    if ex != milp {
                        mismatches.push(format!("{model} n={n} {param} seed={seed}: {milp} vs {ex}"));
                    }
                }
            }
        }
    }
    ensure(mismatches.is_empty(), || {
        format!("{} mismatches, first: {}", mismatches.len(), mismatches[0])
    })?;
    Ok(format!("{graphs} graphs, 0 mismatches"))
}

fn conventions() -> Outcome {
    for method in [Method::Milp, Method::Exhaustive] {
        for (n, want) in [(0usize, 0u32), (1, 1)] {
            let out = compute_rmax(
                &Digraph::empty(n).unwrap(),
                &ComputeOptions {
                    method,
                    ..Default::default()
                },
            )
            .map_err(|e| e.to_string())?;
            ensure(out.r_max() == Some(want) && !out.engine_invoked, || {
                format!("{method} n={n}: {:?}, engine invoked {}", out.r_max(), out.engine_invoked)
            })?;
        }
    }
    Ok("n=0 -> 0, n=1 -> 1, no engine invoked".into())
}

fn structural_values() -> Outcome {
    let check = |name: String, g: &Digraph, want: u32| -> Result<(), String> {
        let naive = naive_from(g).r_max();
        let ex = determine_robustness(g).unwrap().r_max;
        let milp = milp_value(g);
        ensure(naive == want && ex == want && milp == want, || {
            format!("{name}: expected {want}, naive {naive}, exhaustive {ex}, milp {milp}")
        })
    };
    for n in 2..=10 {
        check(format!("K{n}"), &Digraph::complete(n).unwrap(), n.div_ceil(2) as u32)?;
    }
    for n in 3..=10 {
        check(format!("C{n}"), &Digraph::directed_cycle(n).unwrap(), 1)?;
    }
    check("D3".into(), &Digraph::from_edges(3, &d3_edges()).unwrap(), 1)?;
    Ok("K2..K10, C3..C10, D3 all exact".into())
}

fn cardinality_formula() -> Outcome {
    for n in 2..=10usize {
        let enumerated = 2 * enumerate_unordered_pairs(n).count() as u128;
        let mut sum = 0u128;
        let mut binom = 1u128;
        for p in 1..=n as u128 {
            binom = binom * (n as u128 - p + 1) / p;
            if p >= 2 {
                sum += binom * (2u128.pow(p as u32) - 2);
            }
        }
        let closed = 3u128.pow(n as u32) + 1 - 2u128.pow(n as u32 + 1);
        let got = pair_count(n);
        ensure(got == enumerated && got == sum && got == closed, || {
            format!("n={n}: pair_count {got}, enumerated {enumerated}, sum {sum}, closed {closed}")
        })?;
    }
    Ok("n=2..10 agree".into())
}

fn bijection_counting() -> Outcome {
    for n in 2..=6usize {
        let mut brute = 0u128;
        let mut via_model = 0u128;
        for a in 0u32..1 << n {
            for b in 0u32..1 << n {
                let ones = |x: u32| x.count_ones() as usize;
                if a & b == 0 && (1..n).contains(&ones(a)) && (1..n).contains(&ones(b)) {
                    brute += 1;
                }
                let bits = |x: u32| (0..n).map(|k| ((x >> k) & 1) as u8).collect::<Vec<_>>();
                if check_feasible(&BinaryPair::new(bits(a), bits(b))) {
                    via_model += 1;
                }
            }
        }
        let want = pair_count(n);
        ensure(brute == want && via_model == want, || {
            format!("n={n}: brute {brute}, check_feasible {via_model}, pair_count {want}")
        })?;
    }
    Ok("|B| = |T| for n=2..6".into())
}

fn laplacian_identity() -> Outcome {
    let mut rng = SplitMix64::new(0x5eed);
    let samples = 10_000;
    for s in 0..samples {
        let n = 1 + rng.below(8);
        let p = rng.next_f64();
        let mut edges = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j && rng.next_f64() < p {
                    edges.push((i, j));
                }
            }
        }
        let g = Digraph::from_edges(n, &edges).unwrap();
        let naive = NaiveGraph::new(n, &edges);
        let lap = g.laplacian();
        let mut mask = 0u64;
        while mask == 0 {
            mask = rng.next_u64() & ((1u64 << n) - 1);
        }
        let set = NodeSet::from_mask(n, mask);
        let member: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
        let j = 1 + rng.below(n);

        let action = lap.row_action(j, &set);
        let outside = (0..n).filter(|&i| naive.inn[j - 1][i] && !member[i]).count() as i64;
        let inside = (0..n).filter(|&i| naive.inn[j - 1][i] && member[i]).count() as i64;
        let want = if member[j - 1] { outside } else { -inside };
        ensure(action == want && action == naive.laplacian_times_indicator(j - 1, &member), || {
            format!("sample {s}: row {j} on {set} gives {action}, expected {want}")
        })?;

        let by_rows = (1..=n).map(|r| lap.row_action(r, &set)).max().unwrap();
        let direct = naive.reach(&member) as i64;
        ensure(by_rows == direct && g.reachability(&set) as i64 == direct, || {
            format!("sample {s}: max row action {by_rows}, reachability {direct} on {set}")
        })?;
    }
    Ok(format!("{samples} samples, 0 violations"))
}

fn bound_invariants() -> Outcome {
    let mut runs = 0;
    for model in GraphModel::ALL {
        for param in params(model) {
            for n in 4..=12 {
                for seed in 0..10 {
                    let spec = GenSpec {
                        model,
                        n,
                        param,
                        seed: 1000 + seed,
                    };
                    if spec.validate().is_err() {
                        continue;
                    }
                    let g = spec.generate().unwrap();
                    let naive = naive_from(&g);
                    let r = determine_robustness(&g).unwrap().r_max as i64;
                    let min_in = (0..n).map(|j| naive.in_degree(j)).min().unwrap();
                    let cap = min_in.max(1).min(n.div_ceil(2)) as i64;
                    let tag = || format!("{model} n={n} {param} seed={}", spec.seed);
                    ensure(r <= cap, || format!("{}: r_max {r} above {cap}", tag()))?;

                    let model_ = build_milp(&g.laplacian()).unwrap();
                    let res = solve(
                        &model_,
                        &SolveOptions {
                            trace: true,
                            ..Default::default()
                        },
                    )
                    .unwrap();
                    // The solver skips the root when the starting incumbent is already 0.
                    let free = vec![Domain::Free; model_.num_vars()];
                    let root = lp_relax(&model_, &free).unwrap().value;
                    ensure(res.root_lp_value.is_none_or(|v| (v - root).abs() < 1e-6), || {
                        format!("{}: reported root {:?} vs {root}", tag(), res.root_lp_value)
                    })?;
                    ensure(root <= r as f64 + EPS_FEAS, || {
                        format!("{}: root LP {root} above r_max {r}", tag())
                    })?;
                    let mut prev = (i64::MIN, i64::MAX);
                    for line in &res.trace {
                        ensure(line.lower_bound >= prev.0 && line.upper_bound <= prev.1, || {
                            format!("{}: bounds not monotone at {line}", tag())
                        })?;
                        ensure(line.lower_bound <= r && r <= line.upper_bound, || {
                            format!("{}: {line} does not bracket {r}", tag())
                        })?;
                        prev = (line.lower_bound, line.upper_bound);
                    }
                    ensure(
                        res.status == BnbStatus::Optimal
                            && res.lower_bound == r
                            && res.upper_bound == r,
                        || format!("{}: final {:?} [{}, {}]", tag(), res.status, res.lower_bound, res.upper_bound),
                    )?;
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} traced solves, 0 violations"))
}

fn threshold_mode() -> Outcome {
    let k6 = build_milp(&Digraph::complete(6).unwrap().laplacian()).unwrap();
    let opts = SolveOptions::default();
    let full = solve(&k6, &opts).unwrap();
    let early = solve_with_threshold(&k6, 2, &opts).unwrap();
    ensure(early.status == BnbStatus::ProvenAtLeast(2), || {
        format!("K6 gamma=2: {:?}", early.status)
    })?;
    ensure(early.nodes_explored <= full.nodes_explored, || {
        format!("K6: {} nodes vs {} for the full solve", early.nodes_explored, full.nodes_explored)
    })?;

    let d3 = Digraph::from_edges(3, &d3_edges()).unwrap();
    let res = solve_with_threshold(&build_milp(&d3.laplacian()).unwrap(), 2, &opts).unwrap();
    ensure(res.status == BnbStatus::RefutedBelow(2), || format!("D3 gamma=2: {:?}", res.status))?;
    let pair = res.certificate().ok_or("D3: no certificate")?;
    let naive = naive_from(&d3);
    let side = |s: &NodeSet| (1..=3).map(|v| s.contains(v)).collect::<Vec<bool>>();
    let (a, b) = (side(&pair.s1), side(&pair.s2));
    let valid = a.contains(&true)
        && b.contains(&true)
        && a.iter().zip(&b).all(|(x, y)| !(*x && *y))
        && naive.reach(&a).max(naive.reach(&b)) < 2;
    ensure(valid, || format!("D3 certificate {pair} is not valid"))?;
    Ok(format!(
        "K6 proven >= 2 in {} of {} nodes; D3 refuted by {pair}",
        early.nodes_explored, full.nodes_explored
    ))
}

fn timing_trend() -> Outcome {
    let cfg = BenchConfig {
        models: vec![GraphModel::Digraph],
        p: vec![0.5],
        k: vec![],
        exhaustive_sizes: vec![12],
        milp_sizes: vec![12],
        trials: 20,
        ..Default::default()
    };
    let records = run_benchmark(&cfg).map_err(|e| e.to_string())?;
    let times = |m: Method| -> Vec<f64> {
        records.iter().filter(|r| r.method == m).map(|r| r.elapsed_ms).collect()
    };
    let (mut milp, mut ex) = (times(Method::Milp), times(Method::Exhaustive));
    let (mm, me) = (median(&mut milp), median(&mut ex));
    let detail = format!("median milp {mm:.3} ms, median exhaustive {me:.3} ms");
    ensure(mm < me, || detail.clone())?;
    Ok(detail)
}

fn milp_scale() -> Outcome {
    let limit = Duration::from_secs(300);
    let mut completed = 0;
    let mut slowest = Duration::ZERO;
    for seed in 0..100 {
        let g = gen_random_digraph(20, 0.5, seed).unwrap();
        let out = compute_rmax(
            &g,
            &ComputeOptions {
                timeout: Some(limit),
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        if out.status == OutcomeStatus::Exact {
            completed += 1;
            slowest = slowest.max(out.elapsed);
        }
    }
    let detail = format!("{completed}/100 completed within 300 s, slowest {slowest:.2?}");
    ensure(completed >= 95, || detail.clone())?;
    Ok(detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("size conventions", conventions),
        ("structural values", structural_values),
        ("pair-count formula", cardinality_formula),
        ("binary pair counting", bijection_counting),
        ("laplacian identity", laplacian_identity),
        ("bound invariants", bound_invariants),
        ("threshold mode", threshold_mode),
        ("timing trend at n=12", timing_trend),
        ("milp at n=20", milp_scale),
    ];
    // `cargo test --test acceptance -- <n>...` runs a subset.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({secs:.1} s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} ({secs:.1} s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
