//! Revenue maximization with continuous free-trial assignments.
//!
//! For an assignment `x` over users,
//!
//! ```text
//! f(x) = α Σ_{s: x_s = 0} sqrt(Σ_{t: x_t ≠ 0} x_t w_st)
//!      + β Σ_{t: x_t ≠ 0} w_tt x_t
//!      - γ Σ_{t: x_t ≠ 0} x_t
//! ```
//!
//! The function is submodular but discontinuous wherever a coordinate
//! reaches zero, so no gradient is exposed.

use std::collections::HashSet;

use rand::Rng as _;

use crate::error::{check_dim, Error, Result};
use crate::model::{Capabilities, Objective};
use crate::rng;

const BOX_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RevenueWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RevenueInstance {
    adj: Vec<Vec<(usize, f64)>>,
    self_activation: Vec<f64>,
    weights: RevenueWeights,
    upper: Vec<f64>,
    gamma_halvings: u32,
}

impl RevenueInstance {
    /// `edges` are undirected `(s, t, w_st)` with `s != t`. Fails unless
    /// `f(0) + f(upper) >= 0`.
    pub fn new(
        n: usize,
        edges: &[(usize, usize, f64)],
        self_activation: Vec<f64>,
        weights: RevenueWeights,
        upper: Vec<f64>,
    ) -> Result<Self> {
        let inst = Self::build(n, edges, self_activation, weights, upper)?;
        let (lo, hi) = inst.endpoint_sum();
        if lo + hi < 0.0 {
            return Err(Error::Precondition(format!("f(lower) + f(upper) = {} < 0", lo + hi)));
        }
        Ok(inst)
    }

    fn build(
        n: usize,
        edges: &[(usize, usize, f64)],
        self_activation: Vec<f64>,
        weights: RevenueWeights,
        upper: Vec<f64>,
    ) -> Result<Self> {
        check_dim(n, self_activation.len())?;
        check_dim(n, upper.len())?;
        let RevenueWeights { alpha, beta, gamma } = weights;
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !(nonneg(alpha) && nonneg(beta) && nonneg(gamma)) {
            return Err(Error::InvalidInput("alpha, beta, gamma must be nonnegative".into()));
        }
        if !self_activation.iter().all(|&w| nonneg(w)) || !upper.iter().all(|&u| nonneg(u)) {
            return Err(Error::InvalidInput(
                "self-activation rates and upper bounds must be nonnegative".into(),
            ));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(s, t, w) in edges {
            if s >= n || t >= n || s == t {
                return Err(Error::InvalidInput(format!("invalid edge ({s}, {t})")));
            }
            if !nonneg(w) {
                return Err(Error::InvalidInput(format!("edge ({s}, {t}) weight {w} is negative")));
            }
            if !seen.insert((s.min(t), s.max(t))) {
                return Err(Error::InvalidInput(format!("duplicate edge ({s}, {t})")));
            }
            adj[s].push((t, w));
            adj[t].push((s, w));
        }
        Ok(RevenueInstance {
            adj,
            self_activation,
            weights,
            upper,
            gamma_halvings: 0,
        })
    }

    /// Draws `w_st ~ U(0, 1)` on the given edges and `w_tt ~ U(0, 1)`, then
    /// halves `γ` until `f(0) + f(upper) >= 0`. The number of halvings is kept
    /// in [`gamma_halvings`](Self::gamma_halvings).
    pub fn generate(
        n: usize,
        edges: &[(usize, usize)],
        weights: RevenueWeights,
        upper: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        let weighted: Vec<_> = edges.iter().map(|&(s, t)| (s, t, rng.random::<f64>())).collect();
        let self_act = (0..n).map(|_| rng.random::<f64>()).collect();
        Self::with_gamma_adjustment(n, &weighted, self_act, weights, upper)
    }

    /// Like [`new`](Self::new) but halves `γ` instead of failing.
    pub fn with_gamma_adjustment(
        n: usize,
        edges: &[(usize, usize, f64)],
        self_activation: Vec<f64>,
        weights: RevenueWeights,
        upper: Vec<f64>,
    ) -> Result<Self> {
        let mut inst = Self::build(n, edges, self_activation, weights, upper)?;
        loop {
            let (lo, hi) = inst.endpoint_sum();
            if lo + hi >= 0.0 {
                return Ok(inst);
            }
            if inst.weights.gamma == 0.0 {
                return Err(Error::Precondition(format!(
                    "f(lower) + f(upper) = {} < 0 with gamma = 0",
                    lo + hi
                )));
            }
            inst.gamma_halvings += 1;
            inst.weights.gamma = if inst.gamma_halvings >= 1075 {
                0.0
            } else {
                inst.weights.gamma * 0.5
            };
        }
    }

    /// Random undirected graph: each of the `n (n-1) / 2` pairs is an edge
    /// with probability `density`.
    pub fn random_edges(n: usize, density: f64, seed: u64) -> Vec<(usize, usize)> {
        let mut rng = rng::seeded(seed);
        let mut out = Vec::new();
        for s in 0..n {
            for t in (s + 1)..n {
                if rng.random::<f64>() < density {
                    out.push((s, t));
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.adj.len()
    }

    pub fn weights(&self) -> RevenueWeights {
        self.weights
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn gamma_halvings(&self) -> u32 {
        self.gamma_halvings
    }

    fn endpoint_sum(&self) -> (f64, f64) {
        let zero = vec![0.0; self.dim()];
        (self.eval_unchecked(&zero), self.eval_unchecked(&self.upper))
    }

    fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let RevenueWeights { alpha, beta, gamma } = self.weights;
        let mut untouched = 0.0;
        let mut trial = 0.0;
        let mut loss = 0.0;
        for (s, neighbors) in self.adj.iter().enumerate() {
            if x[s] == 0.0 {
                let inflow: f64 = neighbors
                    .iter()
                    .filter(|&&(t, _)| x[t] != 0.0)
                    .map(|&(t, w)| x[t] * w)
                    .sum();
                untouched += inflow.sqrt();
            } else {
                trial += self.self_activation[s] * x[s];
                loss -= x[s];
            }
        }
        alpha * untouched + beta * trial + gamma * loss
    }

    pub fn revenue(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        for (i, (&v, &u)) in x.iter().zip(&self.upper).enumerate() {
            if !(v >= -BOX_TOL && v <= u + BOX_TOL) {
                return Err(Error::InvalidInput(format!("coordinate {i} = {v} outside [0, {u}]")));
            }
        }
        Ok(self.eval_unchecked(x))
    }
}

impl Objective for RevenueInstance {
    fn dim(&self) -> usize {
        self.adj.len()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.revenue(x)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            submodular: true,
            ..Default::default()
        }
    }
}
