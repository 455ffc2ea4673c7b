use rand::seq::SliceRandom;

use crate::error::{check_dim, Error, Result};
use crate::model::{BoxDomain, Objective, Point, SolverTrace, TraceRecord};
use crate::rng;

use super::one_dim::{maximize_1d, OneDimMode, DEFAULT_1D_TOL};
use super::Aborted;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordinateOrder {
    Natural,
    /// Uniform permutation drawn from the seed.
    Random(u64),
    Explicit(Vec<usize>),
}

impl CoordinateOrder {
    pub fn resolve(&self, n: usize) -> Result<Vec<usize>> {
        match self {
            CoordinateOrder::Natural => Ok((0..n).collect()),
            CoordinateOrder::Random(seed) => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng::seeded(*seed));
                Ok(order)
            }
            CoordinateOrder::Explicit(order) => {
                let mut seen = vec![false; n];
                if order.len() != n || !order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true)) {
                    return Err(Error::InvalidInput(format!("{order:?} is not a permutation of 0..{n}")));
                }
                Ok(order.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DgConfig {
    pub order: CoordinateOrder,
    /// Declared additive error level of the 1-D solves.
    pub delta: f64,
    pub mode: OneDimMode,
    /// Bracket width for the search-based 1-D modes.
    pub tol: f64,
}

impl Default for DgConfig {
    fn default() -> Self {
        DgConfig {
            order: CoordinateOrder::Random(0),
            delta: 0.0,
            mode: OneDimMode::QuadraticClosedForm,
            tol: DEFAULT_1D_TOL,
        }
    }
}

impl DgConfig {
    pub fn natural(mode: OneDimMode) -> Self {
        DgConfig {
            order: CoordinateOrder::Natural,
            mode,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DgOutput {
    pub x: Point,
    pub trace_x: SolverTrace,
    pub trace_y: SolverTrace,
    /// Largest gap bound reported by a 1-D solve.
    pub max_gap: f64,
}

impl DgOutput {
    pub fn value(&self) -> f64 {
        self.trace_x.last().map_or(0.0, |r| r.objective)
    }
}

/// DoubleGreedy for non-monotone submodular maximization over a box.
///
/// `x` starts at the lower corner, `y` at the upper corner. For each
/// coordinate both are moved to the 1-D maximizer of whichever side gains
/// more (ties to `x`), so after `n` rounds they coincide.
pub fn double_greedy(f: &dyn Objective, domain: &BoxDomain, cfg: &DgConfig) -> Result<DgOutput, Aborted> {
    let mut trace_x = SolverTrace::new();
    let mut trace_y = SolverTrace::new();
    let abort = |error: Error, trace: &SolverTrace| Aborted {
        error,
        trace: trace.clone(),
    };
    let n = domain.dim();
    let setup = || -> Result<(Vec<usize>, f64, f64)> {
        check_dim(n, f.dim())?;
        if !(cfg.delta >= 0.0 && cfg.delta.is_finite()) {
            return Err(Error::InvalidInput(format!("delta = {} must be >= 0", cfg.delta)));
        }
        if !f.capabilities().submodular {
            return Err(Error::Precondition("objective must be declared submodular".into()));
        }
        let order = cfg.order.resolve(n)?;
        let lo = f.value(domain.lower())?;
        let hi = f.value(domain.upper())?;
        if lo + hi < 0.0 {
            return Err(Error::Precondition(format!("f(lower) + f(upper) = {} < 0", lo + hi)));
        }
        Ok((order, lo, hi))
    };
    let (order, mut fx, mut fy) = setup().map_err(|e| abort(e, &trace_x))?;

    let mut x = domain.lower().to_vec();
    let mut y = domain.upper().to_vec();
    let residual = |p: &[f64]| {
        p.iter()
            .zip(domain.lower().iter().zip(domain.upper()))
            .map(|(&v, (&l, &u))| (l - v).max(v - u).max(0.0))
            .fold(0.0, f64::max)
    };
    let record = |k: usize, value: f64, p: &[f64]| TraceRecord {
        iteration: k,
        t: if n == 0 { 1.0 } else { k as f64 / n as f64 },
        objective: value,
        feasibility_residual: residual(p),
    };
    trace_x.push(record(0, fx, &x));
    trace_y.push(record(0, fy, &y));
    let mut max_gap = 0.0f64;

    for (k, &e) in order.iter().enumerate() {
        let (lo, hi) = (domain.lower()[e], domain.upper()[e]);
        let a = maximize_1d(f, &x, e, lo, hi, cfg.mode, cfg.tol).map_err(|err| abort(err, &trace_x))?;
        let b = maximize_1d(f, &y, e, lo, hi, cfg.mode, cfg.tol).map_err(|err| abort(err, &trace_x))?;
        max_gap = max_gap.max(a.gap_bound).max(b.gap_bound);
        let gain_a = a.value - fx;
        let gain_b = b.value - fy;
        let z = if gain_a >= gain_b { a.z } else { b.z };
        x[e] = z;
        y[e] = z;
        fx = if z == a.z {
            a.value
        } else {
            f.value(&x).map_err(|err| abort(err, &trace_x))?
        };
        fy = if z == b.z {
            b.value
        } else {
            f.value(&y).map_err(|err| abort(err, &trace_x))?
        };
        trace_x.push(record(k + 1, fx, &x));
        trace_y.push(record(k + 1, fy, &y));
    }
    debug_assert_eq!(x, y);
    Ok(DgOutput {
        x: Point::from(x),
        trace_x,
        trace_y,
        max_gap,
    })
}
