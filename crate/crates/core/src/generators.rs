//! Seeded random digraphs.
//!
//! All draws come from [`SplitMix64`], so a given [`GenSpec`] produces the
//! same edge list on every platform. Draw order:
//!
//! * probability models visit pairs with `i` ascending, then `j` ascending,
//!   and draw one uniform real per pair (unordered pairs `i < j` for the
//!   undirected model, ordered pairs `i != j` for the directed one);
//! * `k`-out visits nodes ascending; each node draws `k` distinct targets by
//!   repeated uniform integers in `[0, n-1)`, skipping over itself and
//!   rejecting repeats. `k`-in reverses a `k`-out draw.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// The splitmix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `floor(u * m)` for a uniform real `u`; slightly biased for large `m`.
    pub fn below(&mut self, m: usize) -> usize {
        (self.next_f64() * m as f64) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphModel {
    /// Undirected Erdős–Rényi `G(n, p)`, stored as a symmetric digraph.
    Erdos,
    /// Each ordered pair independently with probability `p`.
    Digraph,
    /// Every node has exactly `k` in-neighbors.
    Kin,
    /// Every node has exactly `k` out-neighbors.
    Kout,
}

impl GraphModel {
    pub const ALL: [GraphModel; 4] = [
        GraphModel::Erdos,
        GraphModel::Digraph,
        GraphModel::Kin,
        GraphModel::Kout,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GraphModel::Erdos => "erdos",
            GraphModel::Digraph => "digraph",
            GraphModel::Kin => "kin",
            GraphModel::Kout => "kout",
        }
    }

    pub fn uses_k(&self) -> bool {
        matches!(self, GraphModel::Kin | GraphModel::Kout)
    }
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for GraphModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erdos" => Ok(GraphModel::Erdos),
            "digraph" => Ok(GraphModel::Digraph),
            "kin" => Ok(GraphModel::Kin),
            "kout" => Ok(GraphModel::Kout),
            other => Err(Error::InvalidParameter(format!(
                "unknown graph model `{other}` (expected erdos, digraph, kin or kout)"
            ))),
        }
    }
}

/// Edge probability or degree, depending on the model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelParam {
    K(usize),
    P(f64),
}

impl fmt::Display for ModelParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelParam::P(p) => write!(f, "{p}"),
            ModelParam::K(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub model: GraphModel,
    pub n: usize,
    pub param: ModelParam,
    pub seed: u64,
}

impl GenSpec {
    /// Checks the parameter against the model; a `p` model needs `p` in `[0, 1]`,
    /// a `k` model needs `1 <= k <= n-1`.
    pub fn validate(&self) -> Result<()> {
        match (self.model.uses_k(), self.param) {
            (false, ModelParam::P(p)) if (0.0..=1.0).contains(&p) => Ok(()),
            (false, ModelParam::P(p)) => {
                Err(Error::InvalidParameter(format!("p = {p} is outside [0, 1]")))
            }
            (true, ModelParam::K(k)) if k >= 1 && k < self.n => Ok(()),
            (true, ModelParam::K(k)) => Err(Error::InvalidParameter(format!(
                "k = {k} is outside 1..={} for n = {}",
                self.n.saturating_sub(1),
                self.n
            ))),
            (true, ModelParam::P(_)) => Err(Error::InvalidParameter(format!(
                "model {} takes an integer k, not p",
                self.model
            ))),
            (false, ModelParam::K(_)) => Err(Error::InvalidParameter(format!(
                "model {} takes a probability p, not k",
                self.model
            ))),
        }
    }

    pub fn generate(&self) -> Result<Digraph> {
        self.validate()?;
        match (self.model, self.param) {
            (GraphModel::Erdos, ModelParam::P(p)) => gen_erdos_undirected(self.n, p, self.seed),
            (GraphModel::Digraph, ModelParam::P(p)) => gen_random_digraph(self.n, p, self.seed),
            (GraphModel::Kin, ModelParam::K(k)) => gen_k_in(self.n, k, self.seed),
            (GraphModel::Kout, ModelParam::K(k)) => gen_k_out(self.n, k, self.seed),
            _ => unreachable!("validated above"),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p = {p} is outside [0, 1]")))
    }
}

pub fn gen_erdos_undirected(n: usize, p: f64, seed: u64) -> Result<Digraph> {
    check_p(p)?;
    let mut rng = SplitMix64::new(seed);
    let mut g = Digraph::empty(n)?;
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.next_f64() < p {
                g.insert_edge(i, j)?;
                g.insert_edge(j, i)?;
            }
        }
    }
    Ok(g)
}

pub fn gen_random_digraph(n: usize, p: f64, seed: u64) -> Result<Digraph> {
    check_p(p)?;
    let mut rng = SplitMix64::new(seed);
    let mut g = Digraph::empty(n)?;
    for i in 1..=n {
        for j in 1..=n {
            if i != j && rng.next_f64() < p {
                g.insert_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

pub fn gen_k_out(n: usize, k: usize, seed: u64) -> Result<Digraph> {
    if k < 1 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} is outside 1..={} for n = {n}",
            n.saturating_sub(1)
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut g = Digraph::empty(n)?;
    for i in 1..=n {
        let mut chosen = 0usize;
        while chosen < k {
            let mut j = rng.below(n - 1) + 1;
            if j >= i {
                j += 1;
            }
            if !g.has_edge(i, j) {
                g.insert_edge(i, j)?;
                chosen += 1;
            }
        }
    }
    Ok(g)
}

pub fn gen_k_in(n: usize, k: usize, seed: u64) -> Result<Digraph> {
    Ok(gen_k_out(n, k, seed)?.reversed())
}
