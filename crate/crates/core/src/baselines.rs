//! Comparison methods: best-of-random over a hit-and-run chain, shrunk
//! uniform box samples, projected gradient ascent, and a one-pass
//! coordinate-wise greedy.

use rand::Rng as _;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{hit_and_run_with, project_polytope, ratio_shrink, HitAndRunConfig};
use crate::model::{BoxDomain, Domain, Objective, Point, PolytopeDomain, SolverTrace, TraceRecord};
use crate::rng;
use crate::solvers::{maximize_1d, CoordinateOrder, OneDimMode};

pub const PROJECTION_TOL: f64 = 1e-10;
pub const PROJECTION_MAX_ITER: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineOutput {
    pub x: Point,
    pub value: f64,
    pub trace: SolverTrace,
}

fn fraction(i: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        (i as f64 / total as f64).min(1.0)
    }
}

/// Keeps the best candidate; the trace is the running maximum.
fn best_of(
    f: &dyn Objective,
    domain: &Domain,
    candidates: impl IntoIterator<Item = Point>,
    total: usize,
) -> Result<BaselineOutput> {
    let mut trace = SolverTrace::new();
    let mut best: Option<(Point, f64)> = None;
    for (i, x) in candidates.into_iter().enumerate() {
        let v = f.value(&x)?;
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((x, v));
        }
        let (bx, bv) = best.as_ref().expect("just set");
        trace.push(TraceRecord {
            iteration: i + 1,
            t: fraction(i + 1, total),
            objective: *bv,
            feasibility_residual: domain.residual(bx),
        });
    }
    let (x, value) = best.ok_or_else(|| Error::InvalidInput("need at least one sample".into()))?;
    Ok(BaselineOutput { x, value, trace })
}

/// Best of `k_s` hit-and-run samples.
pub fn random_best_of(f: &dyn Objective, p: &PolytopeDomain, k_s: usize, seed: u64) -> Result<BaselineOutput> {
    check_dim(p.dim(), f.dim())?;
    let samples = hit_and_run_with(p, k_s, seed, HitAndRunConfig::default())?;
    best_of(f, &Domain::Polytope(p.clone()), samples, k_s)
}

/// Best of `k_s` uniform samples from `[0, ū]`, each pulled into `p` by
/// [`ratio_shrink`].
pub fn random_cube_baseline(f: &dyn Objective, p: &PolytopeDomain, k_s: usize, seed: u64) -> Result<BaselineOutput> {
    check_dim(p.dim(), f.dim())?;
    let mut rng = rng::seeded(seed);
    let samples: Vec<Point> = (0..k_s)
        .map(|_| {
            let raw: Vec<f64> = p.upper().iter().map(|&u| u * rng.random::<f64>()).collect();
            ratio_shrink(p, &raw)
        })
        .collect();
    best_of(f, &Domain::Polytope(p.clone()), samples, k_s)
}

fn project(domain: &Domain, x: &[f64]) -> Result<Vec<f64>> {
    match domain {
        Domain::Box(b) => {
            let mut y = x.to_vec();
            b.clamp(&mut y);
            Ok(y)
        }
        Domain::Polytope(p) => Ok(project_polytope(p, x, PROJECTION_TOL, PROJECTION_MAX_ITER)?.into_vec()),
    }
}

/// `x <- proj(x + step ∇f(x))` for `iters` steps from the origin (or the
/// projection of the origin onto a box not containing it).
pub fn proj_grad_ascent(f: &dyn Objective, domain: &Domain, step: f64, iters: usize) -> Result<BaselineOutput> {
    check_dim(domain.dim(), f.dim())?;
    if !f.capabilities().differentiable {
        return Err(Error::NoGradient);
    }
    if !(step >= 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!("step = {step} must be >= 0")));
    }
    let mut x = project(domain, &vec![0.0; domain.dim()])?;
    let mut value = f.value(&x)?;
    let mut trace = SolverTrace::new();
    trace.push(TraceRecord {
        iteration: 0,
        t: 0.0,
        objective: value,
        feasibility_residual: domain.residual(&x),
    });
    for k in 1..=iters {
        let g = f.gradient(&x)?;
        let moved: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + step * gi).collect();
        x = project(domain, &moved)?;
        value = f.value(&x)?;
        trace.push(TraceRecord {
            iteration: k,
            t: fraction(k, iters),
            objective: value,
            feasibility_residual: domain.residual(&x),
        });
    }
    Ok(BaselineOutput {
        x: Point::from(x),
        value,
        trace,
    })
}

/// One pass over the coordinates from the lower corner, moving each to its
/// 1-D maximizer when that strictly improves `f`.
pub fn single_greedy(
    f: &dyn Objective,
    domain: &BoxDomain,
    order: &CoordinateOrder,
    mode: OneDimMode,
    tol: f64,
) -> Result<BaselineOutput> {
    let n = domain.dim();
    check_dim(n, f.dim())?;
    let order = order.resolve(n)?;
    let mut x = domain.lower().to_vec();
    let mut value = f.value(&x)?;
    let mut trace = SolverTrace::new();
    let whole = Domain::Box(domain.clone());
    trace.push(TraceRecord {
        iteration: 0,
        t: 0.0,
        objective: value,
        feasibility_residual: whole.residual(&x),
    });
    for (k, &e) in order.iter().enumerate() {
        let r = maximize_1d(f, &x, e, domain.lower()[e], domain.upper()[e], mode, tol)?;
        if r.value > value {
            x[e] = r.z;
            value = r.value;
        }
        trace.push(TraceRecord {
            iteration: k + 1,
            t: fraction(k + 1, n),
            objective: value,
            feasibility_residual: whole.residual(&x),
        });
    }
    Ok(BaselineOutput {
        x: Point::from(x),
        value,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Capabilities, FnObjective};

    fn simplex2() -> PolytopeDomain {
        PolytopeDomain::from_rows(&[vec![1.0, 1.0]], vec![1.0], vec![1.0, 1.0]).unwrap()
    }

    fn sum2() -> FnObjective {
        FnObjective::new(2, |x| x[0] + x[1]).with_gradient(|_| vec![1.0, 1.0])
    }

    #[test]
    fn random_best_of_properties() {
        let p = simplex2();
        let f = sum2();
        let one = random_best_of(&f, &p, 1, 3).unwrap();
        assert_eq!(one.value, f.value(&one.x).unwrap());
        let many = random_best_of(&f, &p, 500, 3).unwrap();
        assert!(many.value <= 1.0 + 1e-12);
        assert!(many.trace.max_drop() == 0.0);
        assert_eq!(many, random_best_of(&f, &p, 500, 3).unwrap());
    }

    #[test]
    fn random_cube_properties() {
        let p = simplex2();
        let f = sum2();
        let out = random_cube_baseline(&f, &p, 200, 11).unwrap();
        assert!(p.contains(&out.x, 1e-9));
        assert_eq!(out, random_cube_baseline(&f, &p, 200, 11).unwrap());
        let single = random_cube_baseline(&f, &p, 1, 4).unwrap();
        let mut rng = rng::seeded(4);
        let raw: Vec<f64> = (0..2).map(|_| rng.random::<f64>()).collect();
        assert!(single.value <= f.value(&raw).unwrap() + 1e-15);
    }

    #[test]
    fn proj_grad_examples() {
        let p = Domain::Polytope(simplex2());
        let still = proj_grad_ascent(&sum2(), &p, 0.0, 5).unwrap();
        assert_eq!(still.x.as_slice(), &[0.0, 0.0]);

        let moving = proj_grad_ascent(&sum2(), &p, 0.3, 20).unwrap();
        assert!(moving.trace.records().iter().all(|r| r.feasibility_residual <= 1e-9));

        let bowl = FnObjective::new(2, |x| -(x[0] - 0.5).powi(2) - (x[1] - 0.5).powi(2))
            .with_gradient(|x| vec![-2.0 * (x[0] - 0.5), -2.0 * (x[1] - 0.5)]);
        let out = proj_grad_ascent(&bowl, &Domain::Box(BoxDomain::unit(2, 1.0).unwrap()), 0.1, 200).unwrap();
        assert!(out.x.iter().all(|v| (v - 0.5).abs() < 1e-3));
    }

    #[test]
    fn single_greedy_examples() {
        let unit = BoxDomain::unit(2, 1.0).unwrap();
        let modular = FnObjective::new(2, |x| 2.0 * x[0] - x[1]);
        let out = single_greedy(
            &modular,
            &unit,
            &CoordinateOrder::Natural,
            OneDimMode::QuadraticClosedForm,
            1e-9,
        )
        .unwrap();
        assert_eq!(out.x.as_slice(), &[1.0, 0.0]);

        let mono = FnObjective::new(2, |x| x[0] + x[0] * x[1] + x[1]).with_capabilities(Capabilities {
            monotone: true,
            ..Default::default()
        });
        let out = single_greedy(
            &mono,
            &unit,
            &CoordinateOrder::Natural,
            OneDimMode::QuadraticClosedForm,
            1e-9,
        )
        .unwrap();
        assert_eq!(out.x.as_slice(), &[1.0, 1.0]);

        let flat = FnObjective::new(2, |_| 3.0);
        let out = single_greedy(
            &flat,
            &unit,
            &CoordinateOrder::Random(1),
            OneDimMode::ConcaveSearch,
            1e-9,
        )
        .unwrap();
        assert_eq!(out.x.as_slice(), &[0.0, 0.0]);
    }
}
