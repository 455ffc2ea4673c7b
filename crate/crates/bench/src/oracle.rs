//! Exhaustive grid search, a lower bound on the true optimum used to check
//! approximation guarantees at desk scale.

use rayon::prelude::*;
use subcont_core::{Domain, Objective, Point};

pub const MAX_GRID_DIM: usize = 6;
pub const MAX_GRID_POINTS: u64 = 100_000_000;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("grid of {points_per_dim}^{dim} points exceeds the guard (n <= {MAX_GRID_DIM}, at most {MAX_GRID_POINTS} points)")]
    Guard { dim: usize, points_per_dim: usize },
    #[error("need at least one grid point per dimension")]
    EmptyGrid,
    #[error("no grid point is feasible")]
    NoFeasiblePoint,
    #[error(transparent)]
    Objective(#[from] subcont_core::Error),
}

fn grid_point(index: u64, ppd: usize, lower: &[f64], upper: &[f64], out: &mut [f64]) {
    let mut rest = index;
    for j in 0..out.len() {
        let k = (rest % ppd as u64) as usize;
        rest /= ppd as u64;
        out[j] = if ppd == 1 {
            lower[j]
        } else {
            lower[j] + (upper[j] - lower[j]) * k as f64 / (ppd - 1) as f64
        };
    }
}

/// Best point of the uniform grid over the bounding box of `domain`,
/// keeping only exactly feasible points. Ties go to the lowest grid index.
pub fn grid_brute_force(
    f: &dyn Objective,
    domain: &Domain,
    points_per_dim: usize,
) -> Result<(Point, f64), OracleError> {
    let n = domain.dim();
    if points_per_dim == 0 {
        return Err(OracleError::EmptyGrid);
    }
    let total = (points_per_dim as u64).checked_pow(n as u32);
    let total = match total {
        Some(t) if n <= MAX_GRID_DIM && t <= MAX_GRID_POINTS => t,
        _ => return Err(OracleError::Guard { dim: n, points_per_dim }),
    };
    let bbox = domain.bounding_box();
    let (lower, upper) = (bbox.lower(), bbox.upper());

    let best = (0..total)
        .into_par_iter()
        .try_fold(
            || (vec![0.0; n], None::<(f64, u64)>),
            |(mut x, best), i| {
                grid_point(i, points_per_dim, lower, upper, &mut x);
                if !domain.contains(&x, 0.0) {
                    return Ok((x, best));
                }
                let v = f.value(&x)?;
                let better = best.is_none_or(|(bv, bi)| v > bv || (v == bv && i < bi));
                Ok::<_, subcont_core::Error>((x, if better { Some((v, i)) } else { best }))
            },
        )
        .map(|r| r.map(|(_, best)| best))
        .try_reduce(
            || None,
            |a, b| {
                Ok(match (a, b) {
                    (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
                    (a, None) => a,
                    (None, b) => b,
                })
            },
        )?;
    let (value, index) = best.ok_or(OracleError::NoFeasiblePoint)?;
    let mut x = vec![0.0; n];
    grid_point(index, points_per_dim, lower, upper, &mut x);
    Ok((Point::from(x), value))
}
