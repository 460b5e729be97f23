//! Branch and bound over the robustness MILP.
//!
//! Nodes are processed best-first by the LP value inherited from their parent,
//! FIFO among equal bounds. Because every integer-feasible objective is an
//! integer, the global lower bound is `ceil(min open bound - EPS_INT)` and a
//! node is pruned once `ceil(bound - EPS_INT)` reaches the incumbent value.
//!
//! Branching picks the most fractional binary (lowest index on ties); the
//! `0` child is queued before the `1` child. Before the search the incumbent
//! is seeded with `({v}, V \ {v})` for a vertex `v` of minimum in-degree.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::exhaustive::SubsetPair;
use crate::lp::{lp_relax_keep, Domain, LpResult, Tableau, EPS_INT};
use crate::milp::{check_feasible, decode, objective_value, BinaryPair, MilpModel};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Record one [`TraceLine`] per processed node.
    pub trace: bool,
    /// Start child relaxations from a cached parent tableau when available.
    pub warm_start: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_limit: None,
            time_limit: None,
            trace: false,
            warm_start: true,
        }
    }
}

/// Upper limit on cached tableau entries (f64s) for warm starts.
const CACHE_BUDGET: usize = 32 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BnbStatus {
    Optimal,
    /// The lower bound reached the threshold: `r_max >= γ`.
    ProvenAtLeast(u32),
    /// The incumbent fell below the threshold: `r_max < γ`.
    RefutedBelow(u32),
    /// A node or time limit stopped the search; the bounds still hold.
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceLine {
    pub node: u64,
    pub depth: u32,
    /// `None` when the node's relaxation was infeasible.
    pub lp_value: Option<f64>,
    pub lower_bound: i64,
    pub upper_bound: i64,
}

impl std::fmt::Display for TraceLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lp = self
            .lp_value
            .map_or_else(|| "infeasible".to_string(), |v| format!("{v:.6}"));
        write!(
            f,
            "node={} depth={} lp={} lb={} ub={}",
            self.node, self.depth, lp, self.lower_bound, self.upper_bound
        )
    }
}

#[derive(Clone, Debug)]
pub struct BnbResult {
    pub status: BnbStatus,
    pub lower_bound: i64,
    pub upper_bound: i64,
    pub incumbent: Option<BinaryPair>,
    pub nodes_explored: u64,
    pub lp_iterations: u64,
    /// Relaxations solved from a cached parent tableau instead of from scratch.
    pub warm_starts: u64,
    pub elapsed: Duration,
    pub root_lp_value: Option<f64>,
    pub trace: Vec<TraceLine>,
}

impl BnbResult {
    /// The optimum, when the search closed the gap.
    pub fn r_max(&self) -> Option<u32> {
        (self.status == BnbStatus::Optimal).then_some(self.upper_bound as u32)
    }

    /// The incumbent as a subset pair; for a refuted threshold this is the certificate.
    pub fn certificate(&self) -> Option<SubsetPair> {
        self.incumbent.as_ref().and_then(|b| decode(b).ok())
    }
}

#[derive(Clone, Debug)]
pub struct BnbNode {
    /// Domain per model variable; only integer variables are ever narrowed.
    pub fixings: Vec<Domain>,
    pub parent_bound: f64,
    pub depth: u32,
    /// Processing index of the parent and the fixing that created this node.
    origin: Option<(u64, usize, Domain)>,
}

/// Final tableaus of recently processed nodes, kept until both children have used them.
struct WarmCache {
    entries: HashMap<u64, (Tableau, u8)>,
    order: VecDeque<u64>,
    capacity: usize,
}

impl WarmCache {
    fn new(tableau_size: usize) -> Self {
        WarmCache {
            entries: HashMap::new(),
            order: VecDeque::new(),
            capacity: (CACHE_BUDGET / tableau_size.max(1)).max(2),
        }
    }

    fn insert(&mut self, id: u64, tab: Tableau) {
        while self.entries.len() >= self.capacity {
            match self.order.pop_front() {
                Some(old) => {
                    self.entries.remove(&old);
                }
                None => break,
            }
        }
        self.entries.insert(id, (tab, 2));
        self.order.push_back(id);
    }

    fn take(&mut self, id: u64) -> Option<Tableau> {
        let (tab, left) = self.entries.get_mut(&id)?;
        *left -= 1;
        if *left == 0 {
            self.order.retain(|&k| k != id);
            self.entries.remove(&id).map(|(t, _)| t)
        } else {
            Some(tab.clone())
        }
    }
}

struct Queued {
    bound: f64,
    seq: u64,
    node: BnbNode,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(self.seq.cmp(&other.seq))
    }
}

#[inline]
fn integer_ceil(v: f64) -> i64 {
    (v - EPS_INT).ceil() as i64
}

/// Most fractional integer variable, lowest index on ties.
pub fn branch_select(model: &MilpModel, lp: &LpResult) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for k in model.integer_vars() {
        let v = lp.point[k];
        let frac = v - v.floor();
        if frac <= EPS_INT || frac >= 1.0 - EPS_INT {
            continue;
        }
        let dist = (frac - 0.5).abs();
        if best.is_none_or(|(_, d)| dist < d - 1e-12) {
            best = Some((k, dist));
        }
    }
    best.map(|(k, _)| k).ok_or(Error::NothingToBranch)
}

/// Rounds an LP point to a member of `B`, or `None` if the repair fails.
///
/// Each binary rounds to nearest (0.5 goes up). A vertex claimed by both
/// blocks stays in the block with the larger LP value, `b1` on ties. A block
/// holding all `n` vertices drops its entry with the smallest LP value
/// (highest index on ties). An empty block takes the unclaimed vertex with
/// its largest LP value (lowest index on ties), or failing that one from the
/// other block if that block can spare it.
pub fn round_to_incumbent(model: &MilpModel, lp: &LpResult) -> Option<BinaryPair> {
    let n = model.n();
    let x1: Vec<f64> = (1..=n).map(|j| lp.point[model.b1_var(j)]).collect();
    let x2: Vec<f64> = (1..=n).map(|j| lp.point[model.b2_var(j)]).collect();
    let round = |v: f64| u8::from(v >= 0.5);
    let mut b1: Vec<u8> = x1.iter().map(|&v| round(v)).collect();
    let mut b2: Vec<u8> = x2.iter().map(|&v| round(v)).collect();

    for j in 0..n {
        if b1[j] == 1 && b2[j] == 1 {
            if x1[j] >= x2[j] {
                b2[j] = 0;
            } else {
                b1[j] = 0;
            }
        }
    }

    fn drop_smallest(b: &mut [u8], x: &[f64]) {
        if b.iter().all(|&v| v == 1) {
            let mut pick = 0;
            for j in 1..b.len() {
                if x[j] <= x[pick] {
                    pick = j;
                }
            }
            b[pick] = 0;
        }
    }
    drop_smallest(&mut b1, &x1);
    drop_smallest(&mut b2, &x2);

    fn fill(mine: &mut [u8], other: &mut [u8], x: &[f64]) {
        if mine.contains(&1) {
            return;
        }
        let best_of = |cands: &mut dyn Iterator<Item = usize>| {
            cands.fold(None::<usize>, |acc, j| match acc {
                Some(a) if x[a] >= x[j] => Some(a),
                _ => Some(j),
            })
        };
        let n = mine.len();
        let free = best_of(&mut (0..n).filter(|&j| other[j] == 0));
        if let Some(j) = free {
            mine[j] = 1;
            return;
        }
        if other.iter().filter(|&&v| v == 1).count() >= 2 {
            if let Some(j) = best_of(&mut (0..n).filter(|&j| other[j] == 1)) {
                other[j] = 0;
                mine[j] = 1;
            }
        }
    }
    fill(&mut b1, &mut b2, &x1);
    fill(&mut b2, &mut b1, &x2);

    let pair = BinaryPair::new(b1, b2);
    check_feasible(&pair).then_some(pair)
}

/// Orients a pair so that it satisfies the symmetry-break row when the model has one.
fn orient(model: &MilpModel, pair: BinaryPair) -> BinaryPair {
    if model.symmetry_break() && pair.b2[0] == 1 {
        pair.swapped()
    } else {
        pair
    }
}

fn initial_incumbent(model: &MilpModel) -> BinaryPair {
    let n = model.n();
    let l = model.laplacian();
    let v = (0..n).min_by_key(|&j| l.row(j + 1)[j]).unwrap_or(0);
    let mut b1 = vec![0u8; n];
    let mut b2 = vec![1u8; n];
    b1[v] = 1;
    b2[v] = 0;
    orient(model, BinaryPair::new(b1, b2))
}

pub fn solve(model: &MilpModel, opts: &SolveOptions) -> Result<BnbResult> {
    run(model, None, opts)
}

/// Stops early once `r_max >= gamma` is proven or refuted.
pub fn solve_with_threshold(model: &MilpModel, gamma: u32, opts: &SolveOptions) -> Result<BnbResult> {
    if gamma < 1 {
        return Err(Error::InvalidParameter("threshold must be at least 1".into()));
    }
    run(model, Some(gamma), opts)
}

fn run(model: &MilpModel, gamma: Option<u32>, opts: &SolveOptions) -> Result<BnbResult> {
    let start = Instant::now();
    let laplacian = model.laplacian();

    let mut incumbent = initial_incumbent(model);
    let mut upper = objective_value(laplacian, &incumbent)?;

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Reverse(Queued {
        bound: 0.0,
        seq,
        node: BnbNode {
            fixings: vec![Domain::Free; model.num_vars()],
            parent_bound: 0.0,
            depth: 0,
            origin: None,
        },
    }));
    let mut cache = WarmCache::new(model.num_vars() * model.rows().len() * 3);

    let mut nodes = 0u64;
    let mut lp_iterations = 0u64;
    let mut warm_starts = 0u64;
    let mut root_lp_value = None;
    let mut trace = Vec::new();

    let lower_of = |heap: &BinaryHeap<Reverse<Queued>>, upper: i64| -> i64 {
        heap.peek()
            .map_or(upper, |Reverse(q)| integer_ceil(q.bound).max(0).min(upper))
    };

    let status = loop {
        let lower = lower_of(&heap, upper);
        if let Some(g) = gamma {
            if lower >= g as i64 {
                break BnbStatus::ProvenAtLeast(g);
            }
            if upper < g as i64 {
                break BnbStatus::RefutedBelow(g);
            }
        }
        if lower >= upper {
            break BnbStatus::Optimal;
        }
        if opts.node_limit.is_some_and(|l| nodes >= l)
            || opts.time_limit.is_some_and(|t| start.elapsed() >= t)
        {
            break BnbStatus::Timeout;
        }

        let Reverse(Queued { node, .. }) = heap.pop().expect("lower < upper implies an open node");
        if integer_ceil(node.parent_bound) >= upper {
            continue;
        }
        let warm = match (opts.warm_start, node.origin) {
            (true, Some((parent, var, dom))) => cache.take(parent).map(|t| (t, var, dom)),
            _ => None,
        };
        let resolved = match warm {
            Some((parent, var, dom)) => parent.resolve_fixed(var, dom)?,
            None => None,
        };
        let (lp, tab) = match resolved {
            Some(r) => {
                warm_starts += 1;
                r
            }
            None => lp_relax_keep(model, &node.fixings)?,
        };
        nodes += 1;
        lp_iterations += lp.iterations as u64;
        if nodes == 1 && lp.is_optimal() {
            root_lp_value = Some(lp.value);
        }

        let mut branch_on = None;
        if lp.is_optimal() && integer_ceil(lp.value) < upper {
            match branch_select(model, &lp) {
                Err(Error::NothingToBranch) => {
                    let pair = model.pair_from_point(&lp.point);
                    let value = objective_value(laplacian, &pair)?;
                    if value < upper {
                        upper = value;
                        incumbent = pair;
                    }
                }
                Err(e) => return Err(e),
                Ok(k) => {
                    if let Some(pair) = round_to_incumbent(model, &lp) {
                        let value = objective_value(laplacian, &pair)?;
                        if value < upper {
                            upper = value;
                            incumbent = orient(model, pair);
                        }
                    }
                    branch_on = Some(k);
                }
            }
        }
        if let Some(k) = branch_on {
            if integer_ceil(lp.value) < upper {
                if opts.warm_start {
                    if let Some(tab) = tab {
                        cache.insert(nodes, tab);
                    }
                }
                for dom in [Domain::Zero, Domain::One] {
                    let mut fixings = node.fixings.clone();
                    fixings[k] = dom;
                    seq += 1;
                    heap.push(Reverse(Queued {
                        bound: lp.value,
                        seq,
                        node: BnbNode {
                            fixings,
                            parent_bound: lp.value,
                            depth: node.depth + 1,
                            origin: Some((nodes, k, dom)),
                        },
                    }));
                }
            }
        }

        if opts.trace {
            trace.push(TraceLine {
                node: nodes,
                depth: node.depth,
                lp_value: lp.is_optimal().then_some(lp.value),
                lower_bound: lower_of(&heap, upper),
                upper_bound: upper,
            });
        }
    };

    let lower = match status {
        BnbStatus::Optimal => upper,
        _ => lower_of(&heap, upper),
    };
    Ok(BnbResult {
        status,
        lower_bound: lower,
        upper_bound: upper,
        incumbent: Some(incumbent),
        nodes_explored: nodes,
        lp_iterations,
        warm_starts,
        elapsed: start.elapsed(),
        root_lp_value,
        trace,
    })
}
