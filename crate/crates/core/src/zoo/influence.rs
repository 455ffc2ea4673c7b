//! Budget allocation over a bipartite channel/customer graph.
//!
//! Customer `t` is activated with probability
//! `I_t(x) = 1 - ∏_{(s,t)} (1 - p_st)^{x_s}`; the objective is the expected
//! number of activated customers. With several advertisers the objective is
//! `Σ_i α_i Σ_t I_t(x^i)` over the stacked assignment `[x^1, ..., x^k]`.

use std::collections::HashSet;

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng as _;

use crate::error::{check_dim, Error, Result};
use crate::model::{Capabilities, Objective, PolytopeDomain};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteInfluenceInstance {
    n_channels: usize,
    n_customers: usize,
    edges: Vec<(usize, usize, f64)>,
    /// Per customer: `(channel, ln(1 - p))`.
    by_customer: Vec<Vec<(usize, f64)>>,
}

impl BipartiteInfluenceInstance {
    pub fn new(n_channels: usize, n_customers: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut by_customer = vec![Vec::new(); n_customers];
        for &(s, t, p) in &edges {
            if s >= n_channels || t >= n_customers {
                return Err(Error::InvalidInput(format!("edge ({s}, {t}) out of range")));
            }
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "edge ({s}, {t}) probability {p} not in (0, 1)"
                )));
            }
            if !seen.insert((s, t)) {
                return Err(Error::InvalidInput(format!("duplicate edge ({s}, {t})")));
            }
            by_customer[t].push((s, (-p).ln_1p()));
        }
        Ok(BipartiteInfluenceInstance {
            n_channels,
            n_customers,
            edges,
            by_customer,
        })
    }

    /// Each customer links to `degree` distinct channels with `p ~ U(0, p_max)`.
    pub fn random(n_channels: usize, n_customers: usize, degree: usize, p_max: f64, seed: u64) -> Result<Self> {
        if degree > n_channels || !(p_max > 0.0 && p_max < 1.0) {
            return Err(Error::InvalidInput(format!(
                "need degree <= channels and p_max in (0, 1), got {degree}, {p_max}"
            )));
        }
        let mut rng = rng::seeded(seed);
        let mut edges = Vec::with_capacity(n_customers * degree);
        for t in 0..n_customers {
            let mut chans = sample(&mut rng, n_channels, degree).into_vec();
            chans.sort_unstable();
            for s in chans {
                let p = loop {
                    let p = p_max * rng.random::<f64>();
                    if p > 0.0 {
                        break p;
                    }
                };
                edges.push((s, t, p));
            }
        }
        Self::new(n_channels, n_customers, edges)
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn n_customers(&self) -> usize {
        self.n_customers
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        check_dim(self.n_channels, x.len())?;
        if let Some(i) = x.iter().position(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidInput(format!("negative budget {} on channel {i}", x[i])));
        }
        Ok(())
    }

    /// Expected influence and its gradient; `x` indexes channels.
    pub fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_input(x)?;
        let mut value = 0.0;
        let mut grad = vec![0.0; self.n_channels];
        for adj in &self.by_customer {
            let inactive = adj.iter().map(|&(s, l)| x[s] * l).sum::<f64>().exp();
            value += 1.0 - inactive;
            for &(s, l) in adj {
                grad[s] -= l * inactive;
            }
        }
        Ok((value, grad))
    }

    fn value_only(&self, x: &[f64]) -> f64 {
        self.by_customer
            .iter()
            .map(|adj| 1.0 - adj.iter().map(|&(s, l)| x[s] * l).sum::<f64>().exp())
            .sum()
    }
}

impl Objective for BipartiteInfluenceInstance {
    fn dim(&self) -> usize {
        self.n_channels
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        Ok(self.value_only(x))
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.eval_grad(x).map(|(_, g)| g)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            monotone: true,
            dr_submodular: true,
            submodular: true,
            differentiable: true,
        }
    }
}

/// Several advertisers sharing one channel graph.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetAllocation {
    graph: BipartiteInfluenceInstance,
    weights: Vec<f64>,
}

impl BudgetAllocation {
    pub fn new(graph: BipartiteInfluenceInstance, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || !weights.iter().all(|w| w.is_finite() && *w >= 0.0) {
            return Err(Error::InvalidInput(
                "advertiser weights must be nonempty and nonnegative".into(),
            ));
        }
        Ok(BudgetAllocation { graph, weights })
    }

    pub fn graph(&self) -> &BipartiteInfluenceInstance {
        &self.graph
    }

    pub fn advertisers(&self) -> usize {
        self.weights.len()
    }

    fn blocks<'a>(&self, x: &'a [f64]) -> impl Iterator<Item = &'a [f64]> {
        x.chunks(self.graph.n_channels.max(1))
    }

    /// Down-closed polytope for this allocation: advertiser `i` spends at most
    /// `advertiser_budget[i]` in total, keyword `s` carries at most
    /// `volume[s]` across advertisers, and each entry is capped at `upper`.
    pub fn polytope(&self, advertiser_budget: &[f64], volume: &[f64], upper: f64) -> Result<PolytopeDomain> {
        let k = self.advertisers();
        let s = self.graph.n_channels;
        check_dim(k, advertiser_budget.len())?;
        check_dim(s, volume.len())?;
        let n = k * s;
        let mut a = DMatrix::zeros(k + s, n);
        for i in 0..k {
            for c in 0..s {
                a[(i, i * s + c)] = 1.0;
                a[(k + c, i * s + c)] = 1.0;
            }
        }
        let b = advertiser_budget.iter().chain(volume).copied().collect();
        PolytopeDomain::new(a, b, vec![upper; n])
    }
}

impl Objective for BudgetAllocation {
    fn dim(&self) -> usize {
        self.graph.n_channels * self.weights.len()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let mut total = 0.0;
        for (w, block) in self.weights.iter().zip(self.blocks(x)) {
            total += w * self.graph.value(block)?;
        }
        Ok(total)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let mut out = Vec::with_capacity(x.len());
        for (w, block) in self.weights.iter().zip(self.blocks(x)) {
            let (_, g) = self.graph.eval_grad(block)?;
            out.extend(g.into_iter().map(|v| w * v));
        }
        Ok(out)
    }

    fn capabilities(&self) -> Capabilities {
        self.graph.capabilities()
    }
}
