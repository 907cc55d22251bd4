//! Dense two-phase simplex for feasibility of `{x : a_i . x <= b_i}`.
//!
//! The solver works on the dual of the slack maximization
//!
//! ```text
//!     max t   s.t.  a_i . x + t <= b_i        (x free, t free)
//! ```
//!
//! i.e. `min sum b_i y_i  s.t.  sum y_i a_i = 0, sum y_i = 1, y >= 0`, whose
//! tableau has only `dim + 1` rows however many constraints there are. The
//! optimal `t` is the largest uniform slack (a Chebyshev radius when rows are
//! unit normalized); the optimal `x` is read off the simplex multipliers.
//! A bounding box `|x_j| <= BOX` keeps the program bounded when the system is
//! feasible but unbounded.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::vector::Vector;

const BOX: f64 = 1e6;
const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 200_000;
/// Pivots without objective progress before switching to Bland's rule.
const STALL_LIMIT: usize = 64;
/// Reduced costs are recomputed from the tableau this often.
const REFRESH_INTERVAL: usize = 32;

/// A closed halfspace `{x : normal . x <= offset}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    /// `normal . x - offset`; positive means violated.
    pub fn violation(&self, x: &Vector) -> f64 {
        self.normal.dot(x) - self.offset
    }

    /// Same halfspace with a unit normal; `None` for a zero normal.
    pub fn normalized(&self) -> Option<Halfspace> {
        let n = self.normal.norm();
        (n > f64::MIN_POSITIVE).then(|| Halfspace {
            normal: &self.normal * (1.0 / n),
            offset: self.offset / n,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FeasibilityResult {
    pub status: Status,
    pub witness: Option<Vector>,
    /// Largest uniform slack over the unit-normalized constraints: the
    /// inradius of the feasible set when positive, minus the smallest uniform
    /// relaxation that makes the system feasible when negative.
    pub margin: f64,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }
}

/// Decides nonemptiness of `{x in R^dim : a_i . x <= b_i}`.
pub fn lp_feasible(constraints: &[Halfspace], dim: usize, eps: f64) -> Result<FeasibilityResult> {
    let mut rows = Vec::with_capacity(constraints.len());
    let mut trivial_margin = f64::INFINITY;
    for h in constraints {
        check_dim(dim, h.normal.dim())?;
        if !h.normal.is_finite() || !h.offset.is_finite() {
            return Err(Error::NonFinite);
        }
        match h.normalized() {
            Some(u) => rows.push(u),
            None => trivial_margin = trivial_margin.min(h.offset),
        }
    }
    if trivial_margin < -eps {
        return Ok(FeasibilityResult {
            status: Status::Infeasible,
            witness: None,
            margin: trivial_margin,
        });
    }
    let (_, x) = max_min_slack(&rows, dim)?;
    let margin = rows
        .iter()
        .map(|h| -h.violation(&x))
        .fold(trivial_margin.min(BOX), f64::min);
    let feasible = margin >= -eps;
    Ok(FeasibilityResult {
        status: if feasible {
            Status::Feasible
        } else {
            Status::Infeasible
        },
        witness: feasible.then_some(x),
        margin,
    })
}

/// Maximizes `min_i (b_i - a_i . x)` over `x` in the bounding box, with the rows
/// taken as given (no normalization). Returns the optimum and a maximizer.
pub fn max_min_slack(rows: &[Halfspace], dim: usize) -> Result<(f64, Vector)> {
    let mut cols: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .map(|h| {
            let mut a = h.normal.coords().to_vec();
            a.push(1.0);
            (a, h.offset)
        })
        .collect();
    for (n, b) in box_columns(dim) {
        let mut a = n;
        a.push(1.0);
        cols.push((a, b));
    }
    let mut rhs = vec![0.0; dim + 1];
    rhs[dim] = 1.0;
    let w = DualTableau::new(&cols, &rhs).solve()?;
    let t = w[dim];
    Ok((t, Vector::new(w[..dim].to_vec())))
}

/// Maximizes `objective . x` over `{x : a_i . x <= b_i}` intersected with the
/// bounding box. Returns `None` when the system is infeasible.
pub fn maximize(
    objective: &Vector,
    rows: &[Halfspace],
    dim: usize,
) -> Result<Option<(f64, Vector)>> {
    check_dim(dim, objective.dim())?;
    let mut cols: Vec<(Vec<f64>, f64)> = Vec::with_capacity(rows.len() + 2 * dim);
    for h in rows {
        check_dim(dim, h.normal.dim())?;
        if !h.normal.is_finite() || !h.offset.is_finite() {
            return Err(Error::NonFinite);
        }
        cols.push((h.normal.coords().to_vec(), h.offset));
    }
    cols.extend(box_columns(dim));
    match DualTableau::new(&cols, objective.coords()).solve() {
        Ok(x) => {
            let x = Vector::new(x);
            Ok(Some((objective.dot(&x), x)))
        }
        Err(Error::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn box_columns(dim: usize) -> Vec<(Vec<f64>, f64)> {
    (0..dim)
        .flat_map(|j| {
            let mut p = vec![0.0; dim];
            p[j] = 1.0;
            let mut n = vec![0.0; dim];
            n[j] = -1.0;
            [(p, BOX), (n, BOX)]
        })
        .collect()
}

/// Simplex tableau for `min sum cost_j y_j  s.t.  sum y_j col_j = rhs, y >= 0`.
struct DualTableau {
    /// rows x (structural + artificial + rhs)
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    costs: Vec<f64>,
    /// -1 for rows negated to make the right-hand side nonnegative
    signs: Vec<f64>,
    n_struct: usize,
    n_rows: usize,
}

impl DualTableau {
    fn new(cols: &[(Vec<f64>, f64)], rhs: &[f64]) -> Self {
        let n_rows = rhs.len();
        let n_struct = cols.len();
        let width = n_struct + n_rows + 1;
        let signs: Vec<f64> = rhs
            .iter()
            .map(|&b| if b < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let mut t = vec![vec![0.0; width]; n_rows];
        for (j, (a, _)) in cols.iter().enumerate() {
            for k in 0..n_rows {
                t[k][j] = signs[k] * a[k];
            }
        }
        for r in 0..n_rows {
            t[r][n_struct + r] = 1.0;
            t[r][width - 1] = signs[r] * rhs[r];
        }
        DualTableau {
            t,
            basis: (0..n_rows).map(|r| n_struct + r).collect(),
            costs: cols.iter().map(|c| c.1).collect(),
            signs,
            n_struct,
            n_rows,
        }
    }

    fn rhs(&self, r: usize) -> f64 {
        self.t[r][self.n_struct + self.n_rows]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of the first `n_cols` columns for column costs `cost`.
    fn reduced_costs(&self, cost: &dyn Fn(usize) -> f64, n_cols: usize) -> Vec<f64> {
        (0..n_cols)
            .map(|j| {
                let mut z = cost(j);
                for (r, &b) in self.basis.iter().enumerate() {
                    z -= cost(b) * self.t[r][j];
                }
                z
            })
            .collect()
    }

    /// Primal simplex over columns `0..n_enter`: Dantzig pricing, switching
    /// to Bland's rule after a run of pivots without progress.
    fn run(&mut self, cost: &dyn Fn(usize) -> f64, n_enter: usize, cost_tol: f64) -> Result<()> {
        let objective = |t: &DualTableau| -> f64 {
            t.basis
                .iter()
                .enumerate()
                .map(|(r, &b)| cost(b) * t.rhs(r))
                .sum()
        };
        let mut z = self.reduced_costs(cost, n_enter);
        let mut best = objective(self);
        let mut stalled = 0usize;
        for pivots in 0..MAX_PIVOTS {
            let entering = if stalled >= STALL_LIMIT {
                (0..n_enter).find(|&j| z[j] < -cost_tol)
            } else {
                (0..n_enter)
                    .filter(|&j| z[j] < -cost_tol)
                    .min_by(|&a, &b| z[a].total_cmp(&z[b]))
            };
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.n_rows {
                let a = self.t[r][c];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-14
                                || (ratio <= lratio + 1e-14 && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Infeasible("LP dual unbounded".into()));
            };
            self.pivot(r, c);
            if pivots % REFRESH_INTERVAL == REFRESH_INTERVAL - 1 {
                z = self.reduced_costs(cost, n_enter);
            } else {
                let zc = z[c];
                for (j, zj) in z.iter_mut().enumerate() {
                    *zj -= zc * self.t[r][j];
                }
            }
            let obj = objective(self);
            if obj < best - cost_tol {
                best = obj;
                stalled = 0;
            } else {
                stalled += 1;
            }
        }
        Err(Error::Degenerate("simplex pivot limit reached".into()))
    }

    fn solve(mut self) -> Result<Vec<f64>> {
        let ns = self.n_struct;
        let total = ns + self.n_rows;
        let scale = (0..self.n_rows).map(|r| self.rhs(r)).fold(1.0, f64::max);
        // phase 1: minimize the sum of artificials
        self.run(&|j| if j >= ns { 1.0 } else { 0.0 }, total, 1e-12 * scale)?;
        let infeas: f64 = (0..self.n_rows)
            .filter(|&r| self.basis[r] >= ns)
            .map(|r| self.rhs(r))
            .sum();
        if infeas > 1e-9 * scale {
            return Err(Error::Infeasible("dual phase 1 failed".into()));
        }
        // drive zero-level artificials out of the basis
        for r in 0..self.n_rows {
            if self.basis[r] >= ns {
                if let Some(c) = (0..ns).find(|&j| self.t[r][j].abs() > 1e-9) {
                    self.pivot(r, c);
                }
            }
        }
        // phase 2: artificials may not re-enter
        let costs = std::mem::take(&mut self.costs);
        let cost_scale = costs
            .iter()
            .map(|c| c.abs())
            .filter(|c| *c < BOX)
            .fold(1.0, f64::max);
        let cost = |j: usize| if j < ns { costs[j] } else { 0.0 };
        self.run(&cost, ns, COST_TOL * cost_scale)?;
        // simplex multipliers w = c_B^T B^{-1}; B^{-1} sits in the artificial block
        Ok((0..self.n_rows)
            .map(|k| {
                self.basis
                    .iter()
                    .enumerate()
                    .map(|(r, &b)| cost(b) * self.t[r][ns + k])
                    .sum::<f64>()
                    * self.signs[k]
            })
            .collect())
    }
}
