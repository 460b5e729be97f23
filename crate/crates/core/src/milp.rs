//! The mixed-integer program whose optimum is `r_max(D)`.
//!
//! Variables: `t` (index 0, continuous, `t >= 0`) followed by the binaries
//! `b1_1..b1_n` (indices `1..=n`) and `b2_1..b2_n` (indices `n+1..=2n`).
//!
//! ```text
//! minimize    t
//! subject to  L b1 - t 1 <= 0                 (n rows)
//!             L b2 - t 1 <= 0                 (n rows)
//!             b1_j + b2_j <= 1                (n rows)
//!             1 <= sum(b1) <= n-1, 1 <= sum(b2) <= n-1   (4 one-sided rows)
//!             b2_1 = 0                        (optional symmetry break)
//!             0 <= b <= 1, b integer
//! ```
//!
//! Swapping `b1` and `b2` maps feasible points to feasible points with the
//! same objective, so fixing vertex 1 out of `S2` loses no optimum.
//!
//! # Dump format
//!
//! [`MilpModel::dump`] writes an LP-style listing that is byte-stable across runs:
//!
//! ```text
//! \ r-robustness MILP n=<n> vars=<2n+1> rows=<count>
//! Minimize
//!  obj: t
//! Subject To
//!  <row name>: <terms> <sense> <rhs>
//! Bounds
//!  0 <= t <= +inf
//!  0 <= b1_1 <= 1
//! Binary
//!  b1_1 b1_2 ...
//! End
//! ```
//!
//! Terms are written `+ c name` / `- c name` with the coefficient omitted when
//! its magnitude is 1, in increasing variable order. Row names are
//! `epi1_j`, `epi2_j`, `disj_j`, `card1_lo`, `card1_hi`, `card2_lo`, `card2_hi`
//! and `sym`.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::exhaustive::SubsetPair;
use crate::graph::{LaplacianMatrix, NodeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Epigraph,
    Disjoint,
    Cardinality,
    Symmetry,
}

/// One sparse linear constraint `Σ coeff·x sense rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub name: String,
    pub kind: RowKind,
    /// `(variable index, coefficient)`, sorted by index, no zero coefficients.
    pub coeffs: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Row {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(k, c)| c as f64 * x[k]).sum()
    }

    pub fn is_satisfied(&self, x: &[f64], tol: f64) -> bool {
        let a = self.activity(x);
        let b = self.rhs as f64;
        match self.sense {
            Sense::Le => a <= b + tol,
            Sense::Ge => a >= b - tol,
            Sense::Eq => (a - b).abs() <= tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MilpOptions {
    /// Add the row `b2_1 = 0`.
    pub symmetry_break: bool,
}

impl Default for MilpOptions {
    fn default() -> Self {
        MilpOptions {
            symmetry_break: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MilpModel {
    n: usize,
    laplacian: LaplacianMatrix,
    objective: Vec<i64>,
    rows: Vec<Row>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    integer: Vec<bool>,
    names: Vec<String>,
    symmetry_break: bool,
}

/// Builds the model with the symmetry-breaking row.
pub fn build_milp(laplacian: &LaplacianMatrix) -> Result<MilpModel> {
    build_milp_with(laplacian, MilpOptions::default())
}

pub fn build_milp_with(laplacian: &LaplacianMatrix, opts: MilpOptions) -> Result<MilpModel> {
    let n = laplacian.n();
    if n < 2 {
        return Err(Error::ModelTooSmall(n));
    }
    let nv = 2 * n + 1;
    let b1 = |j: usize| j;
    let b2 = |j: usize| n + j;

    let mut names = Vec::with_capacity(nv);
    names.push("t".to_string());
    names.extend((1..=n).map(|j| format!("b1_{j}")));
    names.extend((1..=n).map(|j| format!("b2_{j}")));

    let mut rows = Vec::with_capacity(3 * n + 5);
    for (block, var) in [(1, &b1 as &dyn Fn(usize) -> usize), (2, &b2)] {
        for j in 1..=n {
            let mut coeffs = vec![(0, -1)];
            coeffs.extend(
                laplacian
                    .row(j)
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(i, &v)| (var(i + 1), v)),
            );
            rows.push(Row {
                name: format!("epi{block}_{j}"),
                kind: RowKind::Epigraph,
                coeffs,
                sense: Sense::Le,
                rhs: 0,
            });
        }
    }
    for j in 1..=n {
        rows.push(Row {
            name: format!("disj_{j}"),
            kind: RowKind::Disjoint,
            coeffs: vec![(b1(j), 1), (b2(j), 1)],
            sense: Sense::Le,
            rhs: 1,
        });
    }
    for (block, var) in [(1, &b1 as &dyn Fn(usize) -> usize), (2, &b2)] {
        let coeffs: Vec<_> = (1..=n).map(|j| (var(j), 1)).collect();
        rows.push(Row {
            name: format!("card{block}_lo"),
            kind: RowKind::Cardinality,
            coeffs: coeffs.clone(),
            sense: Sense::Ge,
            rhs: 1,
        });
        rows.push(Row {
            name: format!("card{block}_hi"),
            kind: RowKind::Cardinality,
            coeffs,
            sense: Sense::Le,
            rhs: n as i64 - 1,
        });
    }
    if opts.symmetry_break {
        rows.push(Row {
            name: "sym".into(),
            kind: RowKind::Symmetry,
            coeffs: vec![(b2(1), 1)],
            sense: Sense::Eq,
            rhs: 0,
        });
    }

    let mut lower = vec![0.0; nv];
    let mut upper = vec![1.0; nv];
    let mut integer = vec![true; nv];
    lower[0] = 0.0;
    upper[0] = f64::INFINITY;
    integer[0] = false;
    let mut objective = vec![0; nv];
    objective[0] = 1;

    Ok(MilpModel {
        n,
        laplacian: laplacian.clone(),
        objective,
        rows,
        lower,
        upper,
        integer,
        names,
        symmetry_break: opts.symmetry_break,
    })
}

impl MilpModel {
    /// Vertex count of the underlying graph.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn laplacian(&self) -> &LaplacianMatrix {
        &self.laplacian
    }

    pub fn objective(&self) -> &[i64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn is_integer(&self, var: usize) -> bool {
        self.integer[var]
    }

    /// Indices of the integer variables, ascending.
    pub fn integer_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vars()).filter(|&k| self.integer[k])
    }

    pub fn var_name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn symmetry_break(&self) -> bool {
        self.symmetry_break
    }

    pub fn count_rows(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }

    pub fn t_var(&self) -> usize {
        0
    }

    pub fn b1_var(&self, j: usize) -> usize {
        j
    }

    pub fn b2_var(&self, j: usize) -> usize {
        self.n + j
    }

    /// Splits a full variable vector into its binary blocks, rounding each entry.
    pub fn pair_from_point(&self, x: &[f64]) -> BinaryPair {
        let n = self.n;
        let round = |v: f64| if v >= 0.5 { 1 } else { 0 };
        BinaryPair {
            b1: x[1..=n].iter().map(|&v| round(v)).collect(),
            b2: x[n + 1..=2 * n].iter().map(|&v| round(v)).collect(),
        }
    }

    /// The full variable vector for a binary pair with `t` at its smallest feasible value.
    pub fn point_from_pair(&self, pair: &BinaryPair) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.num_vars());
        x.push(0.0);
        x.extend(pair.b1.iter().map(|&v| v as f64));
        x.extend(pair.b2.iter().map(|&v| v as f64));
        x[0] = self.minimal_t(&x);
        x
    }

    /// Smallest `t` satisfying `t >= 0` and every epigraph row for the given binaries.
    pub fn minimal_t(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.kind == RowKind::Epigraph)
            .map(|r| {
                r.coeffs
                    .iter()
                    .filter(|&&(k, _)| k != 0)
                    .map(|&(k, c)| c as f64 * x[k])
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Rows and bounds hold within `tol`; integrality is not checked.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.num_vars()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&l, &u))| v >= l - tol && v <= u + tol)
            && self.rows.iter().all(|r| r.is_satisfied(x, tol))
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "\\ r-robustness MILP n={} vars={} rows={}",
            self.n,
            self.num_vars(),
            self.rows.len()
        );
        out.push_str("Minimize\n obj:");
        let obj: Vec<_> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k, c))
            .collect();
        self.write_terms(&mut out, &obj, true);
        out.push_str("\nSubject To\n");
        for r in &self.rows {
            let _ = write!(out, " {}:", r.name);
            self.write_terms(&mut out, &r.coeffs, false);
            let _ = writeln!(out, " {} {}", r.sense, r.rhs);
        }
        out.push_str("Bounds\n");
        for k in 0..self.num_vars() {
            let fmt_bound = |v: f64| {
                if v == f64::INFINITY {
                    "+inf".to_string()
                } else if v == f64::NEG_INFINITY {
                    "-inf".to_string()
                } else {
                    format!("{v}")
                }
            };
            let _ = writeln!(
                out,
                " {} <= {} <= {}",
                fmt_bound(self.lower[k]),
                self.names[k],
                fmt_bound(self.upper[k])
            );
        }
        out.push_str("Binary\n");
        let bins: Vec<&str> = self.integer_vars().map(|k| self.names[k].as_str()).collect();
        let _ = writeln!(out, " {}", bins.join(" "));
        out.push_str("End\n");
        out
    }

    fn write_terms(&self, out: &mut String, terms: &[(usize, i64)], first_bare: bool) {
        for (pos, &(k, c)) in terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            let mag = c.unsigned_abs();
            if pos == 0 && first_bare && c > 0 {
                out.push(' ');
            } else {
                let _ = write!(out, " {sign} ");
            }
            if mag != 1 {
                let _ = write!(out, "{mag} ");
            }
            out.push_str(&self.names[k]);
        }
    }
}

impl fmt::Display for MilpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Binary encodings `(b1, b2)` of a subset pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryPair {
    pub b1: Vec<u8>,
    pub b2: Vec<u8>,
}

impl BinaryPair {
    pub fn new(b1: Vec<u8>, b2: Vec<u8>) -> Self {
        BinaryPair { b1, b2 }
    }

    pub fn n(&self) -> usize {
        self.b1.len()
    }

    pub fn swapped(&self) -> Self {
        BinaryPair {
            b1: self.b2.clone(),
            b2: self.b1.clone(),
        }
    }
}

/// Membership in `B`: equal lengths, 0/1 entries, `b1 + b2 <= 1`,
/// and `1 <= sum(b) <= n-1` for both blocks.
pub fn check_feasible(pair: &BinaryPair) -> bool {
    membership_error(pair).is_none()
}

fn membership_error(pair: &BinaryPair) -> Option<String> {
    let n = pair.b1.len();
    if pair.b2.len() != n {
        return Some(format!("block lengths differ ({n} vs {})", pair.b2.len()));
    }
    if pair.b1.iter().chain(&pair.b2).any(|&v| v > 1) {
        return Some("entries must be 0 or 1".into());
    }
    if let Some(j) = (0..n).find(|&j| pair.b1[j] + pair.b2[j] > 1) {
        return Some(format!("vertex {} is in both blocks", j + 1));
    }
    for (name, b) in [("b1", &pair.b1), ("b2", &pair.b2)] {
        let s: usize = b.iter().map(|&v| v as usize).sum();
        if s < 1 || s + 1 > n {
            return Some(format!("{name} has {s} ones, need 1..={}", n.saturating_sub(1)));
        }
    }
    None
}

/// `max(max_i L_i b1, max_j L_j b2)` in exact integer arithmetic.
pub fn objective_value(laplacian: &LaplacianMatrix, pair: &BinaryPair) -> Result<i64> {
    if let Some(why) = membership_error(pair) {
        return Err(Error::NotInB(why));
    }
    if pair.n() != laplacian.n() {
        return Err(Error::NotInB(format!(
            "pair has length {}, Laplacian has order {}",
            pair.n(),
            laplacian.n()
        )));
    }
    let block_max = |b: &[u8]| {
        laplacian
            .rows()
            .map(|row| row.iter().zip(b).map(|(&l, &v)| l * v as i64).sum::<i64>())
            .max()
            .unwrap_or(0)
    };
    Ok(block_max(&pair.b1).max(block_max(&pair.b2)))
}

pub fn encode(pair: &SubsetPair) -> Result<BinaryPair> {
    let p = SubsetPair::new(pair.s1, pair.s2)?;
    Ok(BinaryPair {
        b1: p.s1.indicator(),
        b2: p.s2.indicator(),
    })
}

pub fn decode(pair: &BinaryPair) -> Result<SubsetPair> {
    if let Some(why) = membership_error(pair) {
        return Err(Error::NotInB(why));
    }
    SubsetPair::new(
        NodeSet::from_indicator(&pair.b1)?,
        NodeSet::from_indicator(&pair.b2)?,
    )
}
