//! Multi-resolution summarization:
//! `f(x) = Σ_i Σ_j φ(x_j) s_ij - Σ_i Σ_j x_i x_j s_ij` with `φ = sqrt`.

use nalgebra::DMatrix;
use rand::Rng as _;

use crate::error::{check_dim, Error, Result};
use crate::model::{Capabilities, Objective};
use crate::rng;

/// Step of the one-sided difference quotient standing in for `φ'(0)`.
const PHI_SLOPE_STEP: f64 = 1e-8;

fn phi_slope(z: f64) -> f64 {
    if z > 0.0 {
        0.5 / z.sqrt()
    } else {
        PHI_SLOPE_STEP.sqrt() / PHI_SLOPE_STEP
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummarizationInstance {
    sim: DMatrix<f64>,
    col_sums: Vec<f64>,
}

impl SummarizationInstance {
    pub fn new(sim: DMatrix<f64>) -> Result<Self> {
        if !sim.is_square() {
            return Err(Error::InvalidInput("similarity matrix must be square".into()));
        }
        if !sim.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(Error::InvalidInput(
                "similarities must be finite and nonnegative".into(),
            ));
        }
        if sim != sim.transpose() {
            return Err(Error::InvalidInput("similarity matrix must be symmetric".into()));
        }
        let col_sums = sim.column_iter().map(|c| c.sum()).collect();
        Ok(SummarizationInstance { sim, col_sums })
    }

    /// Gaussian-kernel similarities between random points in the unit square.
    pub fn random(n: usize, bandwidth: f64, seed: u64) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
        let sim = DMatrix::from_fn(n, n, |i, j| {
            let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
            (-(dx * dx + dy * dy) / (bandwidth * bandwidth)).exp()
        });
        // exact symmetry regardless of rounding in the kernel
        let sim = DMatrix::from_fn(n, n, |i, j| if i <= j { sim[(i, j)] } else { sim[(j, i)] });
        Self::new(sim)
    }

    pub fn dim(&self) -> usize {
        self.col_sums.len()
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        if let Some(i) = x.iter().position(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidInput(format!("negative score {} at item {i}", x[i])));
        }
        Ok(())
    }

    pub fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_input(x)?;
        let n = self.dim();
        let mut sx = vec![0.0; n];
        for j in 0..n {
            if x[j] == 0.0 {
                continue;
            }
            let col = self.sim.column(j);
            for i in 0..n {
                sx[i] += col[i] * x[j];
            }
        }
        let mut value = 0.0;
        let mut grad = vec![0.0; n];
        for j in 0..n {
            value += x[j].sqrt() * self.col_sums[j] - x[j] * sx[j];
            grad[j] = phi_slope(x[j]) * self.col_sums[j] - 2.0 * sx[j];
        }
        Ok((value, grad))
    }
}

impl Objective for SummarizationInstance {
    fn dim(&self) -> usize {
        self.col_sums.len()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.eval_grad(x).map(|(v, _)| v)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.eval_grad(x).map(|(_, g)| g)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            monotone: false,
            dr_submodular: true,
            submodular: true,
            differentiable: true,
        }
    }
}
