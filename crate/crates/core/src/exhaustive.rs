//! Exhaustive search over pairs of nonempty disjoint vertex subsets.
//!
//! `r_max(D)` is the minimum, over all such pairs `(S1, S2)`, of
//! `max(R(S1), R(S2))`. The search keeps a running minimum, seeded with the
//! upper bound `min(max(δ^in, 1), ⌈n/2⌉)`, and stops as soon as it reaches 0.
//!
//! Unordered pairs are visited by union `K` in increasing mask order. Within
//! a union, the lowest vertex of `K` is always placed in `S1` and the rest of
//! `S1` runs over the submasks of `K` minus that vertex in increasing order,
//! which yields each of the `2^{|K|-1} - 1` splits of `K` once. For the
//! three-vertex graph with `N_1 = {2,3}`, `N_2 = {1,3}`, `N_3 = {1}` the six
//! pairs are
//!
//! ```text
//! K        S1      S2      R(S1) R(S2)  max
//! {1,2}    {1}     {2}     2     2      2
//! {1,3}    {1}     {3}     2     1      2
//! {2,3}    {2}     {3}     2     1      2
//! {1,2,3}  {1}     {2,3}   2     1      2
//! {1,2,3}  {1,2}   {3}     1     1      1
//! {1,2,3}  {1,3}   {2}     1     2      2
//! ```
//!
//! so `r_max = 1` with witness `({1,2}, {3})`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{full_mask, reach_at_least, reach_mask, Digraph, NodeSet};

/// An ordered pair of nonempty, disjoint vertex subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetPair {
    pub s1: NodeSet,
    pub s2: NodeSet,
}

impl SubsetPair {
    pub fn new(s1: NodeSet, s2: NodeSet) -> Result<Self> {
        if s1.universe() != s2.universe() {
            return Err(Error::NotInT(format!(
                "sets live in different vertex ranges ({} vs {})",
                s1.universe(),
                s2.universe()
            )));
        }
        if s1.is_empty() || s2.is_empty() {
            return Err(Error::NotInT("both sets must be nonempty".into()));
        }
        if !s1.is_disjoint(&s2) {
            return Err(Error::NotInT(format!("{s1} and {s2} intersect")));
        }
        Ok(SubsetPair { s1, s2 })
    }

    /// Convenience constructor from 1-based vertex lists.
    pub fn from_vertices(n: usize, s1: &[usize], s2: &[usize]) -> Result<Self> {
        SubsetPair::new(NodeSet::from_vertices(n, s1)?, NodeSet::from_vertices(n, s2)?)
    }

    pub(crate) fn from_masks_unchecked(n: usize, s1: u64, s2: u64) -> Self {
        SubsetPair {
            s1: NodeSet::from_mask(n, s1),
            s2: NodeSet::from_mask(n, s2),
        }
    }

    pub fn swapped(&self) -> Self {
        SubsetPair {
            s1: self.s2,
            s2: self.s1,
        }
    }

    /// `max(R(S1), R(S2))`.
    pub fn value(&self, d: &Digraph) -> u32 {
        d.reachability(&self.s1).max(d.reachability(&self.s2))
    }

    /// Same unordered pair, ignoring orientation.
    pub fn same_unordered(&self, other: &SubsetPair) -> bool {
        self == other || *self == other.swapped()
    }
}

impl std::fmt::Display for SubsetPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.s1, self.s2)
    }
}

/// `|T|`, the number of ordered pairs of nonempty disjoint subsets of an `n`-set:
/// `Σ_{p=2}^{n} C(n,p) (2^p - 2)`.
pub fn pair_count(n: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128; // C(n, p), built incrementally
    for p in 1..=n {
        binom = binom * (n - p + 1) as u128 / p as u128;
        if p >= 2 {
            total += binom * ((1u128 << p) - 2);
        }
    }
    total
}

/// Iterator over every unordered pair of nonempty disjoint subsets of `1..=n`,
/// each exactly once, oriented so that `S1` holds the lowest vertex of `S1 ∪ S2`.
pub fn enumerate_unordered_pairs(n: usize) -> UnorderedPairs {
    UnorderedPairs::new(n, 0, full_mask(n))
}

#[derive(Clone, Debug)]
pub struct UnorderedPairs {
    n: usize,
    /// Current union.
    k: u64,
    /// Last union to visit, inclusive.
    last: u64,
    rest: u64,
    sub: u64,
    done: bool,
}

impl UnorderedPairs {
    fn new(n: usize, first: u64, last: u64) -> Self {
        let mut it = UnorderedPairs {
            n,
            k: first,
            last,
            rest: 0,
            sub: 0,
            done: false,
        };
        it.seek_union();
        it
    }

    /// Moves `k` forward to the next union with at least two members.
    fn seek_union(&mut self) {
        while self.k.count_ones() < 2 {
            if self.k >= self.last {
                self.done = true;
                return;
            }
            self.k += 1;
        }
        let low = self.k & self.k.wrapping_neg();
        self.rest = self.k ^ low;
        self.sub = 0;
    }

    fn advance_union(&mut self) {
        if self.k >= self.last {
            self.done = true;
            return;
        }
        self.k += 1;
        self.seek_union();
    }
}

impl Iterator for UnorderedPairs {
    type Item = SubsetPair;

    fn next(&mut self) -> Option<SubsetPair> {
        if self.done {
            return None;
        }
        let low = self.k & self.k.wrapping_neg();
        let s1 = low | self.sub;
        let s2 = self.rest ^ self.sub;
        // Next submask of `rest` in increasing order; the full submask would leave S2 empty.
        self.sub = (self.sub | !self.rest).wrapping_add(1) & self.rest;
        if self.sub == self.rest {
            self.advance_union();
        }
        Some(SubsetPair::from_masks_unchecked(self.n, s1, s2))
    }
}

/// Whether at least one of `S1`, `S2` is `r`-reachable.
pub fn robust_holds_s1(d: &Digraph, pair: &SubsetPair, r: u32) -> bool {
    d.is_reachable(&pair.s1, r) || d.is_reachable(&pair.s2, r)
}

/// Whether `pair` proves that `d` is not `beta`-robust.
pub fn is_not_beta_robust_certificate(d: &Digraph, pair: &SubsetPair, beta: u32) -> bool {
    pair.value(d) < beta
}

/// The starting upper bound `min(max(δ^in, 1), ⌈n/2⌉)`.
pub fn initial_upper_bound(d: &Digraph) -> Result<u32> {
    let delta = d.min_in_degree()? as u32;
    Ok(delta.max(1).min(d.n().div_ceil(2) as u32))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveResult {
    pub r_max: u32,
    /// First pair in enumeration order attaining `r_max`.
    pub witness: SubsetPair,
    pub pairs_examined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExhaustiveOutcome {
    Complete(ExhaustiveResult),
    /// The deadline passed first. `upper_bound` is still a valid bound on `r_max`.
    TimedOut {
        upper_bound: u32,
        witness: Option<SubsetPair>,
        pairs_examined: u64,
    },
}

#[derive(Clone, Debug, Default)]
pub struct ExhaustiveOptions {
    pub deadline: Option<Instant>,
    /// Split the union range across rayon workers.
    pub parallel: bool,
}

/// `r_max(d)` by full enumeration. Requires `n >= 2`.
pub fn determine_robustness(d: &Digraph) -> Result<ExhaustiveResult> {
    match determine_robustness_with(d, &ExhaustiveOptions::default())? {
        ExhaustiveOutcome::Complete(r) => Ok(r),
        ExhaustiveOutcome::TimedOut { .. } => unreachable!("no deadline was set"),
    }
}

pub fn determine_robustness_with(
    d: &Digraph,
    opts: &ExhaustiveOptions,
) -> Result<ExhaustiveOutcome> {
    let n = d.n();
    if n < 2 {
        return Err(Error::ModelTooSmall(n));
    }
    let cutoff = initial_upper_bound(d)? + 1;
    let last = full_mask(n);

    let (best, pairs, timed_out) = if opts.parallel && n >= 8 {
        let chunk_bits = 6.min(n - 2);
        let width = 1u64 << (n - chunk_bits);
        let chunks = 1usize << chunk_bits;
        let zero_at = AtomicUsize::new(usize::MAX);
        let locals: Vec<Scan> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let first = c as u64 * width;
                let end = first + (width - 1);
                let stop = || zero_at.load(Ordering::Relaxed) < c;
                let scan = scan(d, first, end, cutoff, opts.deadline, stop);
                if scan.best.map(|b| b.0) == Some(0) {
                    zero_at.fetch_min(c, Ordering::Relaxed);
                }
                scan
            })
            .collect();
        let pairs = locals.iter().map(|s| s.pairs).sum();
        let timed_out = locals.iter().any(|s| s.timed_out);
        // Chunks are in enumeration order, so the first strict minimum matches the sequential witness.
        let mut best: Option<(u32, u64, u64)> = None;
        for s in &locals {
            if let Some(b) = s.best {
                if best.is_none_or(|cur| b.0 < cur.0) {
                    best = Some(b);
                }
            }
        }
        (best, pairs, timed_out)
    } else {
        let s = scan(d, 0, last, cutoff, opts.deadline, || false);
        (s.best, s.pairs, s.timed_out)
    };

    let witness = best.map(|(_, s1, s2)| SubsetPair::from_masks_unchecked(n, s1, s2));
    if timed_out && best.map(|b| b.0) != Some(0) {
        return Ok(ExhaustiveOutcome::TimedOut {
            upper_bound: best.map_or(cutoff - 1, |b| b.0),
            witness,
            pairs_examined: pairs,
        });
    }
    let (r_max, ..) = best.expect("the initial bound is attained by some pair");
    Ok(ExhaustiveOutcome::Complete(ExhaustiveResult {
        r_max,
        witness: witness.unwrap(),
        pairs_examined: pairs,
    }))
}

struct Scan {
    best: Option<(u32, u64, u64)>,
    pairs: u64,
    timed_out: bool,
}

/// Scans unions `first..=last`. A pair replaces the current best only when its
/// value is strictly below `cutoff`, which then drops to that value.
fn scan(
    d: &Digraph,
    first: u64,
    last: u64,
    mut cutoff: u32,
    deadline: Option<Instant>,
    stop: impl Fn() -> bool,
) -> Scan {
    let masks = d.in_masks();
    let mut best = None;
    let mut pairs = 0u64;
    let mut since_check = 0u64;
    let mut k = first;
    loop {
        if k.count_ones() >= 2 {
            let low = k & k.wrapping_neg();
            let rest = k ^ low;
            let mut sub = 0u64;
            while sub != rest {
                let s1 = low | sub;
                let s2 = rest ^ sub;
                pairs += 1;
                // A pair can only lower the minimum if both sets fall short of it.
                if !reach_at_least(masks, s1, cutoff) && !reach_at_least(masks, s2, cutoff) {
                    cutoff = reach_mask(masks, s1).max(reach_mask(masks, s2));
                    best = Some((cutoff, s1, s2));
                    if cutoff == 0 {
                        return Scan {
                            best,
                            pairs,
                            timed_out: false,
                        };
                    }
                }
                sub = (sub | !rest).wrapping_add(1) & rest;
            }
            since_check += (1u64 << (k.count_ones() - 1)) - 1;
            if since_check >= 4096 {
                since_check = 0;
                let late = deadline.is_some_and(|t| Instant::now() >= t);
                if late || stop() {
                    return Scan {
                        best,
                        pairs,
                        timed_out: late,
                    };
                }
            }
        }
        if k >= last {
            break;
        }
        k += 1;
    }
    Scan {
        best,
        pairs,
        timed_out: false,
    }
}
