//! Dense tableau simplex for `max cᵀx` over a down-closed polytope.
//!
//! The box upper bounds are folded in as explicit rows, so the problem is
//! `max cᵀx s.t. [A; I] x <= [b; ū], x >= 0`. Since `b, ū >= 0` the all-slack
//! basis is feasible and no phase one is needed. Pivoting follows Bland's
//! rule, which cannot cycle and makes the output deterministic.

use crate::error::{check_dim, Error, Result};
use crate::model::{Point, PolytopeDomain};

const PIVOT_EPS: f64 = 1e-12;

/// An optimal vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub point: Point,
    pub objective: f64,
    /// Indices of the `n` tight constraints defining the vertex, numbered
    /// rows of `A` first (`0..m`), then `x_i >= 0` (`m..m+n`), then
    /// `x_i <= ū_i` (`m+n..m+2n`).
    pub basis: Vec<usize>,
}

struct Tableau {
    cols: usize,
    /// `rows` constraint rows followed by the objective row; the last
    /// column is the right-hand side.
    data: Vec<f64>,
    basic: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.data[r * (self.cols + 1) + self.cols]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.cols + 1;
        let inv = 1.0 / self.at(pr, pc);
        let (before, rest) = self.data.split_at_mut(pr * width);
        let (prow, after) = rest.split_at_mut(width);
        for v in prow.iter_mut() {
            *v *= inv;
        }
        prow[pc] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let factor = row[pc];
            if factor != 0.0 {
                for (v, p) in row.iter_mut().zip(prow.iter()) {
                    *v -= factor * p;
                }
                row[pc] = 0.0;
            }
        };
        before.chunks_mut(width).for_each(eliminate);
        after.chunks_mut(width).for_each(eliminate);
        self.basic[pr] = pc;
    }
}

/// Maximizes `cᵀv` over `p`, returning an optimal vertex.
pub fn linear_maximize(p: &PolytopeDomain, c: &[f64]) -> Result<LpSolution> {
    let n = p.dim();
    let m = p.n_rows();
    check_dim(n, c.len())?;
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("objective vector must be finite".into()));
    }
    let rows = m + n;
    let cols = n + rows;
    let width = cols + 1;
    let mut data = vec![0.0; (rows + 1) * width];
    for r in 0..m {
        for j in 0..n {
            data[r * width + j] = p.a()[(r, j)];
        }
        data[r * width + n + r] = 1.0;
        data[r * width + cols] = p.b()[r];
    }
    for j in 0..n {
        let r = m + j;
        data[r * width + j] = 1.0;
        data[r * width + n + r] = 1.0;
        data[r * width + cols] = p.upper()[j];
    }
    for j in 0..n {
        data[rows * width + j] = -c[j];
    }
    let mut tab = Tableau {
        cols,
        data,
        basic: (n..cols).collect(),
    };

    let scale = c.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let cost_eps = PIVOT_EPS * scale;
    let max_pivots = 50 * (rows + cols) + 10_000;
    let mut pivots = 0;
    loop {
        // Bland: lowest-index improving column
        let Some(pc) = (0..cols).find(|&j| tab.at(rows, j) < -cost_eps) else {
            break;
        };
        let mut best: Option<(usize, f64)> = None;
        for r in 0..rows {
            let a = tab.at(r, pc);
            if a > PIVOT_EPS {
                let ratio = tab.rhs(r).max(0.0) / a;
                let better = match best {
                    None => true,
                    Some((br, bratio)) => ratio < bratio || (ratio == bratio && tab.basic[r] < tab.basic[br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
        }
        // every column has a positive entry in its bound row, so the
        // ratio test always finds a row
        let (pr, _) = best.ok_or_else(|| Error::LpCycling {
            basis: tab.basic.clone(),
        })?;
        tab.pivot(pr, pc);
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::LpCycling {
                basis: tab.basic.clone(),
            });
        }
    }

    let mut x = vec![0.0; n];
    let mut is_basic = vec![false; cols];
    for r in 0..rows {
        let v = tab.basic[r];
        is_basic[v] = true;
        if v < n {
            x[v] = tab.rhs(r).clamp(0.0, p.upper()[v]);
        }
    }
    let objective = x.iter().zip(c).map(|(a, b)| a * b).sum();
    let mut basis: Vec<usize> = (0..cols)
        .filter(|&v| !is_basic[v])
        .map(|v| {
            if v < n {
                m + v
            } else if v - n < m {
                v - n
            } else {
                m + n + (v - n - m)
            }
        })
        .collect();
    basis.sort_unstable();
    Ok(LpSolution {
        point: Point::from(x),
        objective,
        basis,
    })
}
