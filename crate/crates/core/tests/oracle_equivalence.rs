mod common;

use proptest::prelude::*;

use common::{fixtures_dir, naive_from, NaiveGraph};
use rrobust::bnb::{solve, SolveOptions};
use rrobust::compute::{compute_rmax, ComputeOptions, Method};
use rrobust::edge_list;
use rrobust::milp::{build_milp_with, objective_value, MilpOptions};
use rrobust::Digraph;

fn both(d: &Digraph) -> (u32, u32) {
    let run = |method| {
        compute_rmax(
            d,
            &ComputeOptions {
                method,
                ..Default::default()
            },
        )
        .unwrap()
        .r_max()
        .unwrap()
    };
    (run(Method::Milp), run(Method::Exhaustive))
}

#[test]
fn fixtures_agree() {
    let expected = [
        ("d3.txt", 1),
        ("k4.txt", 2),
        ("c5.txt", 1),
        ("outbranching.txt", 1),
        ("empty0.txt", 0),
        ("single.txt", 1),
        ("digraph10.txt", u32::MAX),
        ("kin9.txt", u32::MAX),
    ];
    for (file, want) in expected {
        let g = edge_list::read(fixtures_dir().join(file)).unwrap();
        let (milp, ex) = both(&g);
        let naive = naive_from(&g).r_max();
        assert_eq!(milp, ex, "{file}");
        assert_eq!(ex, naive, "{file}");
        if want != u32::MAX {
            assert_eq!(ex, want, "{file}");
        }
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&e, _)| e)
                .collect();
            (n, edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fuzzed_graphs_agree((n, edges) in arb_graph(8)) {
        let g = Digraph::from_edges(n, &edges).unwrap();
        let (milp, ex) = both(&g);
        prop_assert_eq!(milp, ex);
        prop_assert_eq!(ex, NaiveGraph::new(n, &edges).r_max());
    }

    #[test]
    fn solver_variants_agree((n, edges) in arb_graph(7)) {
        let g = Digraph::from_edges(n, &edges).unwrap();
        let lap = g.laplacian();
        let mut values = Vec::new();
        for symmetry_break in [true, false] {
            let model = build_milp_with(&lap, MilpOptions { symmetry_break }).unwrap();
            for warm_start in [true, false] {
                let res = solve(&model, &SolveOptions { warm_start, ..Default::default() }).unwrap();
                let inc = res.incumbent.clone().unwrap();
                prop_assert_eq!(objective_value(&lap, &inc).unwrap(), res.upper_bound);
                values.push(res.r_max().unwrap());
            }
        }
        prop_assert!(values.windows(2).all(|w| w[0] == w[1]), "{:?}", values);
    }
}

#[test]
fn sequential_solves_are_deterministic() {
    let g = edge_list::read(fixtures_dir().join("digraph10.txt")).unwrap();
    let model = build_milp_with(&g.laplacian(), MilpOptions::default()).unwrap();
    let a = solve(&model, &SolveOptions::default()).unwrap();
    let b = solve(&model, &SolveOptions::default()).unwrap();
    assert_eq!(a.nodes_explored, b.nodes_explored);
    assert_eq!(a.lp_iterations, b.lp_iterations);
    assert_eq!(a.incumbent, b.incumbent);
}
