//! Feasibility, linear maximization, projection and sampling over
//! down-closed polytopes `{x : 0 <= x <= ū, Ax <= b}`.

mod dykstra;
mod hit_and_run;
mod simplex;
mod vertices;

pub use dykstra::project_polytope;
pub use hit_and_run::{hit_and_run, hit_and_run_with, HitAndRunConfig};
pub use simplex::{linear_maximize, LpSolution};
pub use vertices::{enumerate_vertices, MAX_ENUM_DIM, MAX_ENUM_ROWS};

use crate::error::Result;
use crate::model::{Point, PolytopeDomain};

pub fn contains(p: &PolytopeDomain, x: &[f64], tol: f64) -> bool {
    p.contains(x, tol)
}

/// Pulls a nonnegative point into `p`: clamp to `ū`, then scale toward the
/// origin by the largest factor in `[0, 1]` that satisfies every row.
pub fn ratio_shrink(p: &PolytopeDomain, x: &[f64]) -> Point {
    let clamped: Vec<f64> = x.iter().zip(p.upper()).map(|(&v, &u)| v.clamp(0.0, u)).collect();
    let t = (0..p.n_rows()).fold(1.0f64, |t, r| {
        let ax = p.row_dot(r, &clamped);
        if ax > 0.0 {
            t.min(p.b()[r] / ax)
        } else {
            t
        }
    });
    Point::from(clamped.into_iter().map(|v| v * t).collect::<Vec<_>>())
}

/// A linear maximization oracle over a polytope.
pub trait LinearOracle: Send + Sync {
    fn maximize(&self, p: &PolytopeDomain, c: &[f64]) -> Result<LpSolution>;
}

/// The exact simplex oracle.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactOracle;

impl LinearOracle for ExactOracle {
    fn maximize(&self, p: &PolytopeDomain, c: &[f64]) -> Result<LpSolution> {
        linear_maximize(p, c)
    }
}

/// An oracle with multiplicative error: returns `α v*` for the exact
/// maximizer `v*`, which stays feasible by down-closedness and attains
/// `α` times the optimal value.
#[derive(Clone, Copy, Debug)]
pub struct ScaledOracle {
    pub alpha: f64,
}

impl LinearOracle for ScaledOracle {
    fn maximize(&self, p: &PolytopeDomain, c: &[f64]) -> Result<LpSolution> {
        let exact = linear_maximize(p, c)?;
        let point: Vec<f64> = exact.point.iter().map(|v| v * self.alpha).collect();
        Ok(LpSolution {
            point: Point::from(point),
            objective: exact.objective * self.alpha,
            basis: exact.basis,
        })
    }
}
