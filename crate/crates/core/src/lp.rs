//! Dense bounded-variable primal simplex.
//!
//! Every row `a x (<=|>=|=) b` gets a slack `s` with `a x + s = b`; the slack
//! bounds encode the sense (`[0, inf)`, `(-inf, 0]`, `[0, 0]`). The slack
//! basis is the starting point. Rows whose slack starts outside its bounds
//! receive an artificial variable, and phase 1 drives the artificials to 0.
//!
//! Pricing is Dantzig's rule until a run of degenerate pivots exceeds
//! [`STALL_LIMIT`], after which Bland's rule takes over for the rest of the phase.

use crate::error::{Error, Result};
use crate::milp::{MilpModel, Sense};

pub const EPS_FEAS: f64 = 1e-9;
pub const EPS_INT: f64 = 1e-6;

const EPS_PIVOT: f64 = 1e-9;
const EPS_COST: f64 = 1e-9;
const STALL_LIMIT: usize = 50;
const MAX_ITERATIONS: usize = 100_000;

/// Sparse coefficients, sense and right-hand side of one constraint.
type DenseRow = (Vec<(usize, f64)>, Sense, f64);

/// Domain of a binary variable inside a branch-and-bound node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Domain {
    #[default]
    Free,
    Zero,
    One,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value; meaningful only when optimal.
    pub value: f64,
    /// Structural variable values; meaningful only when optimal.
    pub point: Vec<f64>,
    /// Basic variable per tableau row. Indices `>= num_vars` are slacks
    /// (`num_vars + row`) or artificials.
    pub basis: Vec<usize>,
    pub iterations: usize,
}

impl LpResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves the relaxation of `model` with integrality dropped and each binary
/// narrowed to its domain in `fixings` (indexed by variable; missing entries are free).
pub fn lp_relax(model: &MilpModel, fixings: &[Domain]) -> Result<LpResult> {
    Ok(lp_relax_keep(model, fixings)?.0)
}

fn infeasible(iterations: usize) -> LpResult {
    LpResult {
        status: LpStatus::Infeasible,
        value: f64::INFINITY,
        point: Vec::new(),
        basis: Vec::new(),
        iterations,
    }
}

/// Like [`lp_relax`], also returning the final tableau when the relaxation is optimal.
pub(crate) fn lp_relax_keep(
    model: &MilpModel,
    fixings: &[Domain],
) -> Result<(LpResult, Option<Tableau>)> {
    let nv = model.num_vars();
    let mut lower = model.lower().to_vec();
    let mut upper = model.upper().to_vec();
    for (k, d) in fixings.iter().enumerate().take(nv) {
        match d {
            Domain::Free => {}
            Domain::Zero => upper[k] = upper[k].min(0.0),
            Domain::One => lower[k] = lower[k].max(1.0),
        }
    }
    if lower.iter().zip(&upper).any(|(l, u)| l > u) {
        return Ok((infeasible(0), None));
    }
    let rows: Vec<DenseRow> = model
        .rows()
        .iter()
        .map(|r| {
            (
                r.coeffs.iter().map(|&(k, c)| (k, c as f64)).collect(),
                r.sense,
                r.rhs as f64,
            )
        })
        .collect();
    let cost: Vec<f64> = model.objective().iter().map(|&c| c as f64).collect();
    let mut tab = Tableau::new(&cost, &rows, &lower, &upper);
    let lp = tab.solve()?;
    Ok(if lp.is_optimal() { (lp, Some(tab)) } else { (lp, None) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Status {
    Basic,
    Lower,
    Upper,
    /// Nonbasic free variable sitting at 0.
    Zero,
}

#[derive(Clone)]
pub struct Tableau {
    m: usize,
    nv: usize,
    ncols: usize,
    /// Row-major `m x ncols` matrix `B^{-1} [A | I | artificials]`.
    t: Vec<f64>,
    /// Values of the basic variables, by row.
    beta: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Reduced costs for the active phase.
    d: Vec<f64>,
    /// Objective over the structural variables.
    cost: Vec<f64>,
    iterations: usize,
}

impl Tableau {
    fn new(
        cost: &[f64],
        rows: &[DenseRow],
        lower: &[f64],
        upper: &[f64],
    ) -> Self {
        let nv = cost.len();
        let m = rows.len();

        let mut lo = lower.to_vec();
        let mut up = upper.to_vec();
        for (_, sense, _) in rows {
            let (l, u) = match sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            lo.push(l);
            up.push(u);
        }

        let mut status = Vec::with_capacity(nv + m);
        let mut x = vec![0.0; nv];
        for k in 0..nv {
            let (s, v) = if lo[k].is_finite() {
                (Status::Lower, lo[k])
            } else if up[k].is_finite() {
                (Status::Upper, up[k])
            } else {
                (Status::Zero, 0.0)
            };
            status.push(s);
            x[k] = v;
        }

        // Slack values for the starting point; out-of-range slacks are parked at
        // their nearest bound and an artificial absorbs the residual.
        let mut artificial_rows = Vec::new();
        let mut beta = vec![0.0; m];
        let mut sign = vec![1.0; m];
        for (r, (coeffs, _, rhs)) in rows.iter().enumerate() {
            let s = rhs - coeffs.iter().map(|&(k, c)| c * x[k]).sum::<f64>();
            let (l, u) = (lo[nv + r], up[nv + r]);
            if s < l - EPS_FEAS || s > u + EPS_FEAS {
                let park = s.clamp(l, u);
                sign[r] = if s > park { 1.0 } else { -1.0 };
                beta[r] = (s - park).abs();
                status.push(if park == l { Status::Lower } else { Status::Upper });
                artificial_rows.push(r);
            } else {
                beta[r] = s;
                status.push(Status::Basic);
            }
        }

        let ncols = nv + m + artificial_rows.len();
        let mut t = vec![0.0; m * ncols];
        for (r, (coeffs, _, _)) in rows.iter().enumerate() {
            let row = &mut t[r * ncols..(r + 1) * ncols];
            for &(k, c) in coeffs {
                row[k] += c * sign[r];
            }
            row[nv + r] = sign[r];
        }
        let mut basis: Vec<usize> = (0..m).map(|r| nv + r).collect();
        for (a, &r) in artificial_rows.iter().enumerate() {
            let col = nv + m + a;
            t[r * ncols + col] = 1.0;
            basis[r] = col;
            status.push(Status::Basic);
            lo.push(0.0);
            up.push(f64::INFINITY);
        }

        Tableau {
            m,
            nv,
            ncols,
            t,
            beta,
            basis,
            status,
            lower: lo,
            upper: up,
            d: vec![0.0; ncols],
            cost: cost.to_vec(),
            iterations: 0,
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            Status::Lower => self.lower[j],
            Status::Upper => self.upper[j],
            Status::Zero | Status::Basic => 0.0,
        }
    }

    fn set_costs(&mut self, cost: &[f64]) {
        self.d.copy_from_slice(cost);
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.t[r * self.ncols..(r + 1) * self.ncols];
                for (dj, &a) in self.d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
    }

    fn solve(&mut self) -> Result<LpResult> {
        let first_art = self.nv + self.m;
        if self.ncols > first_art {
            let mut c1 = vec![0.0; self.ncols];
            c1[first_art..].iter_mut().for_each(|c| *c = 1.0);
            self.set_costs(&c1);
            self.run()?;
            let infeasibility: f64 = (0..self.m)
                .filter(|&r| self.basis[r] >= first_art)
                .map(|r| self.beta[r])
                .sum();
            if infeasibility > 1e-7 {
                return Ok(infeasible(self.iterations));
            }
            for j in first_art..self.ncols {
                self.upper[j] = 0.0;
            }
            self.evict_artificials(first_art);
        }

        let mut c2 = vec![0.0; self.ncols];
        c2[..self.nv].copy_from_slice(&self.cost);
        self.set_costs(&c2);
        self.run()?;
        Ok(self.extract())
    }

    fn extract(&self) -> LpResult {
        let mut point: Vec<f64> = (0..self.nv).map(|j| self.nonbasic_value(j)).collect();
        for r in 0..self.m {
            if self.basis[r] < self.nv {
                point[self.basis[r]] = self.beta[r];
            }
        }
        // Snap values that sit on a bound up to round-off.
        for (k, v) in point.iter_mut().enumerate() {
            for b in [self.lower[k], self.upper[k]] {
                if b.is_finite() && (*v - b).abs() < EPS_FEAS {
                    *v = b;
                }
            }
        }
        let value = self.cost.iter().zip(&point).map(|(c, x)| c * x).sum();
        LpResult {
            status: LpStatus::Optimal,
            value,
            point,
            basis: self.basis.clone(),
            iterations: self.iterations,
        }
    }

    /// Re-solves after narrowing one variable's domain, starting from this
    /// (optimal) tableau and restoring primal feasibility with dual simplex.
    /// Returns `None` if the dual iterations stall, in which case the caller
    /// should solve from scratch.
    pub(crate) fn resolve_fixed(
        self,
        var: usize,
        dom: Domain,
    ) -> Result<Option<(LpResult, Option<Tableau>)>> {
        let mut tab = self;
        tab.iterations = 0;
        let (lo, up) = match dom {
            Domain::Free => (tab.lower[var], tab.upper[var]),
            Domain::Zero => (tab.lower[var], tab.upper[var].min(0.0)),
            Domain::One => (tab.lower[var].max(1.0), tab.upper[var]),
        };
        if lo > up {
            return Ok(Some((infeasible(0), None)));
        }
        let old = tab.nonbasic_value(var);
        tab.lower[var] = lo;
        tab.upper[var] = up;
        if tab.status[var] != Status::Basic {
            let new = if tab.status[var] == Status::Upper && up.is_finite() {
                up
            } else {
                tab.status[var] = Status::Lower;
                lo
            };
            let delta = new - old;
            if delta != 0.0 {
                for r in 0..tab.m {
                    let a = tab.t[r * tab.ncols + var];
                    tab.beta[r] -= a * delta;
                }
            }
        }
        match tab.run_dual() {
            None => return Ok(None),
            Some(false) => return Ok(Some((infeasible(tab.iterations), None))),
            Some(true) => {}
        }
        // Clean up any reduced-cost sign errors left by round-off.
        tab.run()?;
        let lp = tab.extract();
        Ok(Some((lp, Some(tab))))
    }

    /// Bounded dual simplex. `Some(false)` means infeasible, `None` means the
    /// iteration budget ran out.
    fn run_dual(&mut self) -> Option<bool> {
        let budget = 4 * (self.m + self.ncols);
        loop {
            if self.iterations >= budget {
                return None;
            }
            // Leaving row: largest bound violation.
            let mut leave: Option<(usize, f64)> = None;
            let mut worst = EPS_FEAS;
            for r in 0..self.m {
                let j = self.basis[r];
                let v = self.beta[r];
                let viol = if v < self.lower[j] {
                    self.lower[j] - v
                } else if v > self.upper[j] {
                    v - self.upper[j]
                } else {
                    0.0
                };
                if viol > worst {
                    worst = viol;
                    leave = Some((r, if v < self.lower[j] { self.lower[j] } else { self.upper[j] }));
                }
            }
            let Some((r, target)) = leave else {
                return Some(true);
            };
            self.iterations += 1;
            let below = self.beta[r] < target;
            let row = &self.t[r * self.ncols..(r + 1) * self.ncols];

            // Entering column: dual ratio test.
            let mut enter: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            let mut best_mag = 0.0;
            for j in 0..self.ncols {
                if self.status[j] == Status::Basic || self.upper[j] - self.lower[j] <= 0.0 {
                    continue;
                }
                let a = row[j];
                if a.abs() <= EPS_PIVOT {
                    continue;
                }
                // The basic value moves by -a per unit increase of x_j.
                let ok = match self.status[j] {
                    Status::Lower => (a < 0.0) == below,
                    Status::Upper => (a > 0.0) == below,
                    Status::Zero => true,
                    Status::Basic => false,
                };
                if !ok {
                    continue;
                }
                let ratio = (self.d[j] / a).abs();
                if ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && a.abs() > best_mag) {
                    best_ratio = ratio.min(best_ratio);
                    best_mag = a.abs();
                    enter = Some(j);
                }
            }
            let Some(q) = enter else {
                return Some(false);
            };

            let a = row[q];
            // Step in x_q that brings the leaving variable exactly to its bound.
            let step = (self.beta[r] - target) / a;
            let entering_value = self.nonbasic_value(q) + step;
            for i in 0..self.m {
                let ai = self.t[i * self.ncols + q];
                if ai != 0.0 {
                    self.beta[i] -= ai * step;
                }
            }
            let leaving = self.basis[r];
            self.pivot(r, q);
            self.beta[r] = entering_value;
            self.status[leaving] = if below { Status::Lower } else { Status::Upper };
        }
    }

    /// Pivots basic artificials (all at 0 after phase 1) out of the basis where possible.
    fn evict_artificials(&mut self, first_art: usize) {
        for r in 0..self.m {
            if self.basis[r] < first_art {
                continue;
            }
            let row = &self.t[r * self.ncols..(r + 1) * self.ncols];
            let q = (0..first_art)
                .filter(|&j| self.status[j] != Status::Basic)
                .max_by(|&a, &b| row[a].abs().total_cmp(&row[b].abs()));
            if let Some(q) = q {
                if row[q].abs() > 1e-7 {
                    let value = self.nonbasic_value(q);
                    let leaving = self.basis[r];
                    self.pivot(r, q);
                    self.beta[r] = value;
                    self.status[leaving] = Status::Lower;
                }
            }
        }
    }

    /// Runs primal simplex iterations on the current reduced costs until optimal.
    fn run(&mut self) -> Result<()> {
        let mut bland = false;
        let mut stalled = 0usize;
        loop {
            if self.iterations >= MAX_ITERATIONS {
                return Err(Error::Numerical(format!(
                    "simplex did not converge in {MAX_ITERATIONS} iterations"
                )));
            }
            let Some((q, dir)) = self.price(bland) else {
                return Ok(());
            };
            self.iterations += 1;

            // Ratio test.
            let mut theta = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, bool)> = None; // (row, leaves at upper)
            let mut leave_mag = 0.0;
            for r in 0..self.m {
                let g = dir * self.t[r * self.ncols + q];
                let j = self.basis[r];
                let (limit, at_upper) = if g > EPS_PIVOT {
                    if !self.lower[j].is_finite() {
                        continue;
                    }
                    (((self.beta[r] - self.lower[j]) / g).max(0.0), false)
                } else if g < -EPS_PIVOT {
                    if !self.upper[j].is_finite() {
                        continue;
                    }
                    (((self.upper[j] - self.beta[r]) / -g).max(0.0), true)
                } else {
                    continue;
                };
                let better = match leave {
                    _ if limit < theta - 1e-12 => true,
                    Some((lr, _)) if limit <= theta + 1e-12 => {
                        if bland {
                            j < self.basis[lr]
                        } else {
                            g.abs() > leave_mag
                        }
                    }
                    _ => false,
                };
                if better {
                    theta = limit.min(theta);
                    leave = Some((r, at_upper));
                    leave_mag = g.abs();
                }
            }
            if !theta.is_finite() {
                return Err(Error::Numerical("LP relaxation is unbounded".into()));
            }

            if theta < 1e-12 {
                stalled += 1;
                if stalled > STALL_LIMIT {
                    bland = true;
                }
            } else {
                stalled = 0;
            }

            let entering_value = self.nonbasic_value(q) + dir * theta;
            if theta != 0.0 {
                for r in 0..self.m {
                    let a = self.t[r * self.ncols + q];
                    if a != 0.0 {
                        self.beta[r] -= dir * theta * a;
                    }
                }
            }
            match leave {
                None => {
                    // Bound flip.
                    self.status[q] = if dir > 0.0 { Status::Upper } else { Status::Lower };
                }
                Some((r, at_upper)) => {
                    let leaving = self.basis[r];
                    self.pivot(r, q);
                    self.beta[r] = entering_value;
                    self.status[leaving] = if at_upper { Status::Upper } else { Status::Lower };
                }
            }
        }
    }

    /// Picks an entering column and its direction (+1 increase, -1 decrease).
    fn price(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.ncols {
            let dj = self.d[j];
            let dir = match self.status[j] {
                Status::Basic => continue,
                _ if self.upper[j] - self.lower[j] <= 0.0 => continue,
                Status::Lower if dj < -EPS_COST => 1.0,
                Status::Upper if dj > EPS_COST => -1.0,
                Status::Zero if dj.abs() > EPS_COST => -dj.signum(),
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            if dj.abs() > best_score {
                best_score = dj.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let nc = self.ncols;
        let p = self.t[r * nc + q];
        {
            let row = &mut self.t[r * nc..(r + 1) * nc];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[q] = 1.0;
        }
        let (before, rest) = self.t.split_at_mut(r * nc);
        let (prow, after) = rest.split_at_mut(nc);
        for other in before.chunks_exact_mut(nc).chain(after.chunks_exact_mut(nc)) {
            let f = other[q];
            if f != 0.0 {
                for (o, &pv) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * pv;
                }
                other[q] = 0.0;
            }
        }
        let f = self.d[q];
        if f != 0.0 {
            for (o, &pv) in self.d.iter_mut().zip(prow.iter()) {
                *o -= f * pv;
            }
            self.d[q] = 0.0;
        }
        self.status[q] = Status::Basic;
        self.basis[r] = q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Digraph;
    use crate::milp::{build_milp, build_milp_with, MilpOptions};

    fn k2_model(sym: bool) -> MilpModel {
        build_milp_with(
            &Digraph::complete(2).unwrap().laplacian(),
            MilpOptions { symmetry_break: sym },
        )
        .unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn k2_root_relaxation() {
        let m = k2_model(false);
        let lp = lp_relax(&m, &[]).unwrap();
        assert!(lp.is_optimal());
        assert!(close(lp.value, 0.0));
        for k in 1..=4 {
            assert!(close(lp.point[k], 0.5), "{:?}", lp.point);
        }
        assert!(m.is_feasible(&lp.point, 1e-9));
    }

    #[test]
    fn k2_fixed_branch() {
        let m = k2_model(false);
        let mut fix = vec![Domain::Free; m.num_vars()];
        fix[m.b1_var(1)] = Domain::One;
        let lp = lp_relax(&m, &fix).unwrap();
        assert!(lp.is_optimal());
        assert!(close(lp.value, 1.0));
        assert_eq!(m.pair_from_point(&lp.point).b1, vec![1, 0]);
        assert_eq!(m.pair_from_point(&lp.point).b2, vec![0, 1]);
    }

    #[test]
    fn empty_block_is_infeasible() {
        let m = build_milp(&Digraph::complete(4).unwrap().laplacian()).unwrap();
        let mut fix = vec![Domain::Free; m.num_vars()];
        for j in 1..=4 {
            fix[m.b1_var(j)] = Domain::Zero;
        }
        let lp = lp_relax(&m, &fix).unwrap();
        assert_eq!(lp.status, LpStatus::Infeasible);

        let mut fix = vec![Domain::Free; m.num_vars()];
        fix[m.b1_var(2)] = Domain::One;
        fix[m.b2_var(2)] = Domain::One;
        assert_eq!(lp_relax(&m, &fix).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn symmetry_row_is_respected() {
        let m = k2_model(true);
        let lp = lp_relax(&m, &[]).unwrap();
        assert!(lp.is_optimal());
        assert_eq!(lp.point[m.b2_var(1)], 0.0);
        // b2 = (0,1) forces b1 = (1,0) and t = 1.
        assert!(close(lp.value, 1.0));
    }

    #[test]
    fn generic_lp() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y in [0, 10]  -> (8/5, 6/5), value 14/5
        let rows = vec![
            (vec![(0, 1.0), (1, 2.0)], Sense::Le, 4.0),
            (vec![(0, 3.0), (1, 1.0)], Sense::Le, 6.0),
        ];
        let r = Tableau::new(&[-1.0, -1.0], &rows, &[0.0, 0.0], &[10.0, 10.0])
            .solve()
            .unwrap();
        assert!(close(r.value, -2.8));
        assert!(close(r.point[0], 1.6) && close(r.point[1], 1.2));

        // equality plus free variable: min x s.t. x - y = -3, y in [0, 2], x free -> x = -3
        let rows = vec![(vec![(0, 1.0), (1, -1.0)], Sense::Eq, -3.0)];
        let r = Tableau::new(
            &[1.0, 0.0],
            &rows,
            &[f64::NEG_INFINITY, 0.0],
            &[f64::INFINITY, 2.0],
        )
        .solve()
        .unwrap();
        assert!(close(r.value, -3.0), "{:?}", r.point);

        // infeasible: x >= 3 with x <= 1
        let rows = vec![(vec![(0, 1.0)], Sense::Ge, 3.0)];
        let r = Tableau::new(&[1.0], &rows, &[0.0], &[1.0]).solve().unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }
}
