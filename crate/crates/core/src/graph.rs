//! Simple digraphs, vertex subsets and the graph Laplacian.
//!
//! Vertices are numbered `1..=n` in every public signature. Internally a
//! vertex `v` is bit `v - 1` of a `u64`, which caps graphs at 64 vertices.
//!
//! An edge `(i, j)` points from `i` to `j`, so `i` is an in-neighbor of `j`
//! and belongs to `N_j`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of the vertices `1..=n`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet {
    mask: u64,
    n: usize,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        NodeSet { mask: 0, n }
    }

    pub fn full(n: usize) -> Self {
        NodeSet {
            mask: full_mask(n),
            n,
        }
    }

    /// Builds a set from a raw mask; bits at or above `n` are discarded.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        NodeSet {
            mask: mask & full_mask(n),
            n,
        }
    }

    /// Builds a set from 1-based vertex labels.
    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        let mut mask = 0u64;
        for &v in vertices {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            mask |= 1 << (v - 1);
        }
        Ok(NodeSet { mask, n })
    }

    /// Inverse of [`NodeSet::indicator`]. Entries must be 0 or 1.
    pub fn from_indicator(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        let mut mask = 0u64;
        for (k, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => mask |= 1 << k,
                other => {
                    return Err(Error::NotInB(format!(
                        "indicator entry {} is {other}, expected 0 or 1",
                        k + 1
                    )))
                }
            }
        }
        Ok(NodeSet { mask, n })
    }

    /// The indicator vector: entry `j - 1` is 1 iff vertex `j` is in the set.
    pub fn indicator(&self) -> Vec<u8> {
        (0..self.n).map(|k| ((self.mask >> k) & 1) as u8).collect()
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v >= 1 && v <= self.n && (self.mask >> (v - 1)) & 1 == 1
    }

    pub fn complement(&self) -> Self {
        NodeSet {
            mask: !self.mask & full_mask(self.n),
            n: self.n,
        }
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.mask & other.mask == 0
    }

    /// Members in increasing order, 1-based.
    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        let mut rest = self.mask;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k + 1)
            }
        })
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.vertices()).finish()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.vertices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An immutable simple digraph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    /// Bit `i` of `in_masks[j]` is set iff `(i + 1, j + 1)` is an edge.
    in_masks: Vec<u64>,
}

impl Digraph {
    /// Builds a digraph from 1-based ordered pairs `(i, j)`, each an edge from `i` to `j`.
    ///
    /// Self-loops, repeated edges and out-of-range labels are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Digraph::empty(n)?;
        for &(i, j) in edges {
            g.insert_edge(i, j)?;
        }
        Ok(g)
    }

    /// The edgeless digraph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(Digraph {
            n,
            in_masks: vec![0; n],
        })
    }

    /// The complete digraph: every ordered pair of distinct vertices is an edge.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Digraph::empty(n)?;
        let all = full_mask(n);
        for (j, m) in g.in_masks.iter_mut().enumerate() {
            *m = all & !(1 << j);
        }
        Ok(g)
    }

    /// The directed cycle `1 -> 2 -> ... -> n -> 1`.
    pub fn directed_cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Digraph::from_edges(n, &edges)
    }

    pub(crate) fn insert_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.n;
        for v in [i, j] {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        let bit = 1u64 << (i - 1);
        if self.in_masks[j - 1] & bit != 0 {
            return Err(Error::DuplicateEdge(i, j));
        }
        self.in_masks[j - 1] |= bit;
        Ok(())
    }

    /// A copy of this graph with the edge `(i, j)` added.
    pub fn with_edge(&self, i: usize, j: usize) -> Result<Self> {
        let mut g = self.clone();
        g.insert_edge(i, j)?;
        Ok(g)
    }

    /// The same vertex set with every edge reversed.
    pub fn reversed(&self) -> Self {
        let mut out = vec![0u64; self.n];
        for (j, &m) in self.in_masks.iter().enumerate() {
            let mut rest = m;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                out[i] |= 1 << j;
            }
        }
        Digraph {
            n: self.n,
            in_masks: out,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.in_masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && i <= self.n && j <= self.n && (self.in_masks[j - 1] >> (i - 1)) & 1 == 1
    }

    /// `N_j`, the in-neighbors of vertex `j`.
    pub fn in_neighbors(&self, j: usize) -> NodeSet {
        NodeSet::from_mask(self.n, self.in_masks[j - 1])
    }

    /// Raw in-neighbor masks, indexed by 0-based vertex.
    #[inline]
    pub fn in_masks(&self) -> &[u64] {
        &self.in_masks
    }

    /// All edges as 1-based `(i, j)` pairs, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in 0..self.n {
                if (self.in_masks[j] >> i) & 1 == 1 {
                    edges.push((i + 1, j + 1));
                }
            }
        }
        edges
    }

    pub fn in_degree(&self, j: usize) -> usize {
        self.in_masks[j - 1].count_ones() as usize
    }

    pub fn out_degree(&self, i: usize) -> usize {
        let bit = 1u64 << (i - 1);
        self.in_masks.iter().filter(|&&m| m & bit != 0).count()
    }

    /// `δ^in(D)`, the smallest in-degree.
    pub fn min_in_degree(&self) -> Result<usize> {
        self.in_masks
            .iter()
            .map(|m| m.count_ones() as usize)
            .min()
            .ok_or(Error::EmptyGraph("minimum in-degree"))
    }

    /// Vertex with the smallest in-degree, lowest label on ties.
    pub fn argmin_in_degree(&self) -> Option<usize> {
        (1..=self.n).min_by_key(|&j| self.in_degree(j))
    }

    pub fn is_symmetric(&self) -> bool {
        self.in_masks.iter().enumerate().all(|(j, &m)| {
            let mut rest = m;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if (self.in_masks[i] >> j) & 1 == 0 {
                    return false;
                }
            }
            true
        })
    }

    pub fn laplacian(&self) -> LaplacianMatrix {
        LaplacianMatrix::from_digraph(self)
    }

    /// The reachability `R(S)`: the largest `|N_i \ S|` over `i` in `S`, or 0 for the empty set.
    #[inline]
    pub fn reachability(&self, s: &NodeSet) -> u32 {
        reach_mask(&self.in_masks, s.mask())
    }

    /// Whether `S` is `r`-reachable, i.e. `R(S) >= r`.
    #[inline]
    pub fn is_reachable(&self, s: &NodeSet, r: u32) -> bool {
        reach_at_least(&self.in_masks, s.mask(), r)
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

#[inline]
pub(crate) fn reach_mask(in_masks: &[u64], s: u64) -> u32 {
    let outside = !s;
    let mut best = 0;
    let mut rest = s;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        best = best.max((in_masks[j] & outside).count_ones());
    }
    best
}

/// `R(S) >= r`, stopping at the first row that proves it.
#[inline]
pub(crate) fn reach_at_least(in_masks: &[u64], s: u64, r: u32) -> bool {
    if r == 0 {
        return s != 0;
    }
    let outside = !s;
    let mut rest = s;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (in_masks[j] & outside).count_ones() >= r {
            return true;
        }
    }
    false
}

/// Dense integer Laplacian: `L[j][j] = |N_j|`, `L[j][i] = -1` for `i` in `N_j`, 0 elsewhere.
#[derive(Clone, PartialEq, Eq)]
pub struct LaplacianMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl LaplacianMatrix {
    pub fn from_digraph(d: &Digraph) -> Self {
        let n = d.n();
        let mut entries = vec![0i64; n * n];
        for j in 0..n {
            let m = d.in_masks()[j];
            entries[j * n + j] = m.count_ones() as i64;
            for i in 0..n {
                if (m >> i) & 1 == 1 {
                    entries[j * n + i] = -1;
                }
            }
        }
        LaplacianMatrix { n, entries }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `L_{j,i}` with 1-based indices.
    pub fn get(&self, j: usize, i: usize) -> i64 {
        self.entries[(j - 1) * self.n + (i - 1)]
    }

    /// Row `L_j` (1-based `j`) as a slice indexed by 0-based column.
    pub fn row(&self, j: usize) -> &[i64] {
        let start = (j - 1) * self.n;
        &self.entries[start..start + self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    /// `L_j · σ(S)`. Equals `|N_j \ S|` when `j` is in `S` and `-|N_j ∩ S|` otherwise.
    pub fn row_action(&self, j: usize, s: &NodeSet) -> i64 {
        self.row(j)
            .iter()
            .enumerate()
            .filter(|(i, _)| (s.mask() >> i) & 1 == 1)
            .map(|(_, &v)| v)
            .sum()
    }

    /// `L_j · x` for an arbitrary real vector.
    pub fn row_dot(&self, j: usize, x: &[f64]) -> f64 {
        self.row(j).iter().zip(x).map(|(&a, &b)| a as f64 * b).sum()
    }

    /// Recovers the digraph: `i` is an in-neighbor of `j` iff `L_{j,i} = -1`.
    pub fn to_digraph(&self) -> Digraph {
        let mut in_masks = vec![0u64; self.n];
        for (j, m) in in_masks.iter_mut().enumerate() {
            for i in 0..self.n {
                if self.entries[j * self.n + i] == -1 {
                    *m |= 1 << i;
                }
            }
        }
        Digraph { n: self.n, in_masks }
    }
}

impl fmt::Debug for LaplacianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}
