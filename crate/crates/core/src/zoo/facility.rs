//! Continuous facility location: `f(x) = Σ_t max_s w_st (1 - e^{-x_s})`.

use nalgebra::DMatrix;
use rand::Rng as _;

use crate::error::{check_dim, Error, Result};
use crate::model::{Capabilities, Objective};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct FacilityInstance {
    /// Facilities × customers.
    weights: DMatrix<f64>,
}

impl FacilityInstance {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        if !weights.iter().all(|w| w.is_finite() && *w >= 0.0) {
            return Err(Error::InvalidInput(
                "facility weights must be finite and nonnegative".into(),
            ));
        }
        Ok(FacilityInstance { weights })
    }

    pub fn random(facilities: usize, customers: usize, seed: u64) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        Self::new(DMatrix::from_fn(facilities, customers, |_, _| rng.random::<f64>()))
    }

    pub fn facilities(&self) -> usize {
        self.weights.nrows()
    }

    pub fn facility_value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.facilities(), x.len())?;
        if let Some(i) = x.iter().position(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidInput(format!("negative scale {} at facility {i}", x[i])));
        }
        let response: Vec<f64> = x.iter().map(|&v| -(-v).exp_m1()).collect();
        Ok(self
            .weights
            .column_iter()
            .map(|col| col.iter().zip(&response).map(|(w, r)| w * r).fold(0.0, f64::max))
            .sum())
    }
}

impl Objective for FacilityInstance {
    fn dim(&self) -> usize {
        self.facilities()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.facility_value(x)
    }

    /// Monotone and submodular, but not coordinate-wise concave: along one
    /// coordinate the max against the other facilities has a convex kink.
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            monotone: true,
            submodular: true,
            ..Default::default()
        }
    }
}
