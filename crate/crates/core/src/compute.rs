//! Top-level `r_max` computation with the small-graph conventions.
//!
//! The empty graph is 0-robust and the single-vertex graph is 1-robust; both
//! are answered here without invoking either engine.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bnb::{self, BnbStatus, SolveOptions, TraceLine};
use crate::error::{Error, Result};
use crate::exhaustive::{self, ExhaustiveOptions, ExhaustiveOutcome, SubsetPair};
use crate::graph::Digraph;
use crate::milp::{build_milp_with, MilpOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Milp,
    Exhaustive,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Milp => "milp",
            Method::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "milp" => Ok(Method::Milp),
            "exhaustive" => Ok(Method::Exhaustive),
            other => Err(Error::InvalidParameter(format!(
                "unknown method `{other}` (expected milp or exhaustive)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    pub method: Method,
    /// Stop once `r_max >= γ` is proven or refuted (MILP); the exhaustive
    /// engine computes the exact value and classifies it.
    pub threshold: Option<u32>,
    pub timeout: Option<Duration>,
    pub symmetry_break: bool,
    pub trace: bool,
    pub parallel: bool,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            method: Method::Milp,
            threshold: None,
            timeout: None,
            symmetry_break: true,
            trace: false,
            parallel: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeStatus {
    Exact,
    ProvenAtLeast(u32),
    RefutedBelow(u32),
    Timeout,
}

#[derive(Clone, Debug)]
pub struct ComputeOutcome {
    /// `lower <= r_max <= upper`; equal when the status is exact.
    pub lower: u32,
    pub upper: u32,
    pub status: OutcomeStatus,
    pub method: Method,
    /// Minimizing pair, or the certificate for a refuted threshold.
    pub witness: Option<SubsetPair>,
    /// B&B nodes or subset pairs examined.
    pub search_count: u64,
    /// False when a convention answered without running an engine.
    pub engine_invoked: bool,
    pub elapsed: Duration,
    pub trace: Vec<TraceLine>,
}

impl ComputeOutcome {
    pub fn r_max(&self) -> Option<u32> {
        (self.status == OutcomeStatus::Exact).then_some(self.upper)
    }

    fn convention(value: u32, method: Method) -> Self {
        ComputeOutcome {
            lower: value,
            upper: value,
            status: OutcomeStatus::Exact,
            method,
            witness: None,
            search_count: 0,
            engine_invoked: false,
            elapsed: Duration::ZERO,
            trace: Vec::new(),
        }
    }
}

pub fn compute_rmax(d: &Digraph, opts: &ComputeOptions) -> Result<ComputeOutcome> {
    match d.n() {
        0 => return Ok(ComputeOutcome::convention(0, opts.method)),
        1 => return Ok(ComputeOutcome::convention(1, opts.method)),
        _ => {}
    }
    match opts.method {
        Method::Exhaustive => run_exhaustive(d, opts),
        Method::Milp => run_milp(d, opts),
    }
}

fn run_exhaustive(d: &Digraph, opts: &ComputeOptions) -> Result<ComputeOutcome> {
    let start = Instant::now();
    let out = exhaustive::determine_robustness_with(
        d,
        &ExhaustiveOptions {
            deadline: opts.timeout.map(|t| start + t),
            parallel: opts.parallel,
        },
    )?;
    let elapsed = start.elapsed();
    Ok(match out {
        ExhaustiveOutcome::Complete(r) => {
            let status = match opts.threshold {
                Some(g) if r.r_max >= g => OutcomeStatus::ProvenAtLeast(g),
                Some(g) => OutcomeStatus::RefutedBelow(g),
                None => OutcomeStatus::Exact,
            };
            ComputeOutcome {
                lower: r.r_max,
                upper: r.r_max,
                status,
                method: Method::Exhaustive,
                witness: Some(r.witness),
                search_count: r.pairs_examined,
                engine_invoked: true,
                elapsed,
                trace: Vec::new(),
            }
        }
        ExhaustiveOutcome::TimedOut {
            upper_bound,
            witness,
            pairs_examined,
        } => ComputeOutcome {
            lower: 0,
            upper: upper_bound,
            status: OutcomeStatus::Timeout,
            method: Method::Exhaustive,
            witness,
            search_count: pairs_examined,
            engine_invoked: true,
            elapsed,
            trace: Vec::new(),
        },
    })
}

fn run_milp(d: &Digraph, opts: &ComputeOptions) -> Result<ComputeOutcome> {
    let start = Instant::now();
    let model = build_milp_with(
        &d.laplacian(),
        MilpOptions {
            symmetry_break: opts.symmetry_break,
        },
    )?;
    let solve_opts = SolveOptions {
        time_limit: opts.timeout,
        trace: opts.trace,
        ..Default::default()
    };
    let r = match opts.threshold {
        Some(g) => bnb::solve_with_threshold(&model, g, &solve_opts)?,
        None => bnb::solve(&model, &solve_opts)?,
    };
    let elapsed = start.elapsed();
    let status = match r.status {
        BnbStatus::Optimal => match opts.threshold {
            Some(g) if r.upper_bound >= g as i64 => OutcomeStatus::ProvenAtLeast(g),
            Some(g) => OutcomeStatus::RefutedBelow(g),
            None => OutcomeStatus::Exact,
        },
        BnbStatus::ProvenAtLeast(g) => OutcomeStatus::ProvenAtLeast(g),
        BnbStatus::RefutedBelow(g) => OutcomeStatus::RefutedBelow(g),
        BnbStatus::Timeout => OutcomeStatus::Timeout,
    };
    let witness = r.certificate();
    Ok(ComputeOutcome {
        lower: r.lower_bound.max(0) as u32,
        upper: r.upper_bound as u32,
        status,
        method: Method::Milp,
        witness,
        search_count: r.nodes_explored,
        engine_invoked: true,
        elapsed,
        trace: r.trace,
    })
}
