//! Brute-force reference computations shared by the integration tests.
//! Nothing here goes through the library's bitmask or LP code.

#![allow(dead_code)]

/// Edge `(i, j)` means `i -> j`, so `i` is an in-neighbor of `j`. 1-based.
pub struct NaiveGraph {
    pub n: usize,
    /// `inn[j][i]` is true when `i -> j`.
    pub inn: Vec<Vec<bool>>,
}

impl NaiveGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut inn = vec![vec![false; n]; n];
        for &(i, j) in edges {
            inn[j - 1][i - 1] = true;
        }
        NaiveGraph { n, inn }
    }

    pub fn in_degree(&self, j: usize) -> usize {
        self.inn[j].iter().filter(|&&b| b).count()
    }

    /// Largest number of outside in-neighbors over members of `set`.
    pub fn reach(&self, set: &[bool]) -> u32 {
        let mut best = 0;
        for j in 0..self.n {
            if !set[j] {
                continue;
            }
            let outside = (0..self.n).filter(|&i| self.inn[j][i] && !set[i]).count() as u32;
            best = best.max(outside);
        }
        best
    }

    /// Row `j` of the Laplacian applied to the indicator of `set`.
    pub fn laplacian_times_indicator(&self, j: usize, set: &[bool]) -> i64 {
        let mut acc = if set[j] { self.in_degree(j) as i64 } else { 0 };
        for i in 0..self.n {
            if self.inn[j][i] && set[i] {
                acc -= 1;
            }
        }
        acc
    }

    /// Minimum over every labelling of vertices into {none, S1, S2} with both
    /// sides nonempty of `max(reach(S1), reach(S2))`.
    pub fn r_max(&self) -> u32 {
        match self.n {
            0 => return 0,
            1 => return 1,
            _ => {}
        }
        let mut best = u32::MAX;
        let total = 3usize.pow(self.n as u32);
        let mut s1 = vec![false; self.n];
        let mut s2 = vec![false; self.n];
        for code in 0..total {
            let mut c = code;
            for v in 0..self.n {
                s1[v] = c % 3 == 1;
                s2[v] = c % 3 == 2;
                c /= 3;
            }
            if !s1.contains(&true) || !s2.contains(&true) {
                continue;
            }
            best = best.min(self.reach(&s1).max(self.reach(&s2)));
        }
        best
    }
}

pub fn naive_from(d: &rrobust::Digraph) -> NaiveGraph {
    NaiveGraph::new(d.n(), &d.edges())
}

pub fn d3_edges() -> Vec<(usize, usize)> {
    vec![(2, 1), (3, 1), (1, 2), (3, 2), (1, 3)]
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}
