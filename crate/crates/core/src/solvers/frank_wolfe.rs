use crate::error::{check_dim, Error, Result};
use crate::geometry::{ExactOracle, LinearOracle};
use crate::model::{Objective, Point, PolytopeDomain, SolverTrace, TraceRecord};

use super::Aborted;

/// Remaining `t` below which the next step is truncated to land on 1.
const STEP_SNAP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FwConfig {
    /// Constant step size in `(0, 1]`; `K = ceil(1 / gamma)` iterations.
    pub gamma: f64,
    /// Multiplicative error level of the linear oracle, in `(0, 1]`.
    pub alpha: f64,
    /// Additive error level of the linear oracle.
    pub delta: f64,
    /// Lipschitz constant of the derivative along feasible directions.
    pub lipschitz: Option<f64>,
}

impl FwConfig {
    /// Exact oracle with `K` equal steps.
    pub fn with_iterations(k: usize) -> Self {
        FwConfig {
            gamma: 1.0 / k.max(1) as f64,
            alpha: 1.0,
            delta: 0.0,
            lipschitz: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidInput(format!("gamma = {} not in (0, 1]", self.gamma)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidInput(format!("alpha = {} not in (0, 1]", self.alpha)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidInput(format!("delta = {} must be >= 0", self.delta)));
        }
        if self.lipschitz.is_some_and(|l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidInput("Lipschitz estimate must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FwOutput {
    pub x: Point,
    pub trace: SolverTrace,
    /// The step sizes actually taken; they sum to 1.
    pub steps: Vec<f64>,
}

impl FwOutput {
    pub fn value(&self) -> f64 {
        self.trace.last().map_or(0.0, |r| r.objective)
    }
}

/// Worst-case lower bound on `f(x^K)` for a run with the given steps:
/// `(1 - e^{-α}) f* - (L/2) Σ γ_k^2 - L δ / 2 + e^{-α} f(0)`.
pub fn fw_lower_bound(f_star: f64, f_zero: f64, alpha: f64, delta: f64, lipschitz: f64, steps: &[f64]) -> f64 {
    let sq: f64 = steps.iter().map(|g| g * g).sum();
    let decay = (-alpha).exp();
    (1.0 - decay) * f_star - 0.5 * lipschitz * sq - 0.5 * lipschitz * delta + decay * f_zero
}

/// Frank-Wolfe variant for monotone DR-submodular maximization over a
/// down-closed polytope, with the exact simplex oracle.
pub fn frank_wolfe_variant(f: &dyn Objective, p: &PolytopeDomain, cfg: &FwConfig) -> Result<FwOutput, Aborted> {
    frank_wolfe_with_oracle(f, p, cfg, &ExactOracle)
}

/// As [`frank_wolfe_variant`] with an injected linear oracle.
///
/// Starts from `0` and repeatedly adds `γ_k v^k`, where `v^k` maximizes
/// `⟨v, ∇f(x^k)⟩` over `p` and `γ_k = min(γ, 1 - t)`. Iterates stay in `p`
/// because each is a sub-convex combination of vertices.
pub fn frank_wolfe_with_oracle(
    f: &dyn Objective,
    p: &PolytopeDomain,
    cfg: &FwConfig,
    oracle: &dyn LinearOracle,
) -> Result<FwOutput, Aborted> {
    let mut trace = SolverTrace::new();
    let abort = |error: Error, trace: &SolverTrace| Aborted {
        error,
        trace: trace.clone(),
    };
    let pre = || -> Result<()> {
        cfg.validate()?;
        check_dim(p.dim(), f.dim())?;
        let caps = f.capabilities();
        if !(caps.monotone && caps.dr_submodular && caps.differentiable) {
            return Err(Error::Precondition(
                "objective must be declared monotone, DR-submodular and differentiable".into(),
            ));
        }
        Ok(())
    };
    pre().map_err(|e| abort(e, &trace))?;

    let n = p.dim();
    let mut x = vec![0.0; n];
    let mut t = 0.0f64;
    let mut steps = Vec::new();
    let value = f.value(&x).map_err(|e| abort(e, &trace))?;
    trace.push(TraceRecord {
        iteration: 0,
        t,
        objective: value,
        feasibility_residual: p.residual(&x),
    });
    while t < 1.0 {
        let grad = f.gradient(&x).map_err(|e| abort(e, &trace))?;
        if grad.len() != n || grad.iter().any(|g| !g.is_finite()) {
            return Err(abort(Error::NonFinite { point: x.clone() }, &trace));
        }
        let v = oracle.maximize(p, &grad).map_err(|e| abort(e, &trace))?;
        let gk = if t + cfg.gamma >= 1.0 - STEP_SNAP {
            1.0 - t
        } else {
            cfg.gamma
        };
        for (xi, vi) in x.iter_mut().zip(v.point.iter()) {
            *xi += gk * vi;
        }
        t = (t + gk).min(1.0);
        steps.push(gk);
        let value = f.value(&x).map_err(|e| abort(e, &trace))?;
        trace.push(TraceRecord {
            iteration: steps.len(),
            t,
            objective: value,
            feasibility_residual: p.residual(&x),
        });
    }
    Ok(FwOutput {
        x: Point::from(x),
        trace,
        steps,
    })
}
