use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{Point, PolytopeDomain};

pub const MAX_ENUM_DIM: usize = 10;
pub const MAX_ENUM_ROWS: usize = 10;

const VERTEX_TOL: f64 = 1e-9;

/// Constraint `index` as `(normal, rhs)` in the numbering used by
/// [`LpSolution::basis`](super::LpSolution::basis).
fn constraint(p: &PolytopeDomain, index: usize) -> (Vec<f64>, f64) {
    let n = p.dim();
    let m = p.n_rows();
    if index < m {
        ((0..n).map(|j| p.a()[(index, j)]).collect(), p.b()[index])
    } else if index < m + n {
        let mut e = vec![0.0; n];
        e[index - m] = 1.0;
        (e, 0.0)
    } else {
        let j = index - m - n;
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        (e, p.upper()[j])
    }
}

/// Every vertex of `p`, by brute force over all `n`-subsets of constraints.
///
/// Only for tiny polytopes: `n <= 10` and `m <= 10`.
pub fn enumerate_vertices(p: &PolytopeDomain) -> Result<Vec<Point>> {
    let n = p.dim();
    let m = p.n_rows();
    if n > MAX_ENUM_DIM || m > MAX_ENUM_ROWS {
        return Err(Error::GuardExceeded(format!(
            "vertex enumeration needs n <= {MAX_ENUM_DIM} and m <= {MAX_ENUM_ROWS}, got n = {n}, m = {m}"
        )));
    }
    let constraints: Vec<_> = (0..m + 2 * n).map(|i| constraint(p, i)).collect();
    let mut out: Vec<Point> = Vec::new();
    for subset in (0..constraints.len()).combinations(n) {
        let mat = DMatrix::from_fn(n, n, |r, c| constraints[subset[r]].0[c]);
        let rhs = DVector::from_fn(n, |r, _| constraints[subset[r]].1);
        let lu = mat.full_piv_lu();
        if !lu.is_invertible() {
            continue;
        }
        let Some(sol) = lu.solve(&rhs) else { continue };
        let x: Vec<f64> = sol.iter().copied().collect();
        if x.iter().any(|v| !v.is_finite()) || !p.contains(&x, VERTEX_TOL) {
            continue;
        }
        let dup = out
            .iter()
            .any(|v| v.iter().zip(&x).all(|(a, b)| (a - b).abs() <= VERTEX_TOL));
        if !dup {
            out.push(Point::from(x));
        }
    }
    Ok(out)
}
