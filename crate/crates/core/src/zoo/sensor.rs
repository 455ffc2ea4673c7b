//! Sensor energy management: expected detection time saved.
//!
//! Sensor `e` with energy `x_e` detects each event independently with
//! probability `q_e = 1 - (1 - p)^{x_e}`. For an event the earliest detecting
//! sensor wins; the saving is `t_inf - t(e, v)`, or zero if nobody detects.
//! The objective averages the expected saving uniformly over events.

use nalgebra::DMatrix;
use rand::Rng as _;

use crate::error::{check_dim, Error, Result};
use crate::model::{Capabilities, Objective};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct SensorInstance {
    /// Locations × events.
    times: DMatrix<f64>,
    p: f64,
    t_inf: f64,
    ln_miss: f64,
    /// Per event, locations ordered by detection time (stable in index).
    order: Vec<Vec<usize>>,
}

impl SensorInstance {
    /// `t_inf` is the largest detection time.
    pub fn new(times: DMatrix<f64>, p: f64) -> Result<Self> {
        let t_inf = times.iter().copied().fold(0.0, f64::max);
        Self::with_horizon(times, p, t_inf)
    }

    /// Explicit horizon `t_inf`, which must dominate every detection time.
    pub fn with_horizon(times: DMatrix<f64>, p: f64, t_inf: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidInput(format!("unit probability {p} not in (0, 1)")));
        }
        if times.is_empty() {
            return Err(Error::InvalidInput("need at least one location and one event".into()));
        }
        if !times.iter().all(|t| t.is_finite() && *t >= 0.0) {
            return Err(Error::InvalidInput(
                "detection times must be finite and nonnegative".into(),
            ));
        }
        if !times.iter().all(|&t| t <= t_inf) || !t_inf.is_finite() {
            return Err(Error::InvalidInput(format!("horizon {t_inf} below a detection time")));
        }
        let order = (0..times.ncols())
            .map(|v| {
                let mut idx: Vec<usize> = (0..times.nrows()).collect();
                idx.sort_by(|&a, &b| times[(a, v)].total_cmp(&times[(b, v)]));
                idx
            })
            .collect();
        Ok(SensorInstance {
            times,
            p,
            t_inf,
            ln_miss: (-p).ln_1p(),
            order,
        })
    }

    /// Detection times i.i.d. `U(0, t_max)`.
    pub fn random(locations: usize, events: usize, p: f64, t_max: f64, seed: u64) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        let times = DMatrix::from_fn(locations, events, |_, _| t_max * rng.random::<f64>());
        Self::new(times, p)
    }

    pub fn locations(&self) -> usize {
        self.times.nrows()
    }

    pub fn events(&self) -> usize {
        self.times.ncols()
    }

    pub fn t_inf(&self) -> f64 {
        self.t_inf
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        check_dim(self.locations(), x.len())?;
        if let Some(i) = x.iter().position(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidInput(format!("negative energy {} at location {i}", x[i])));
        }
        Ok(())
    }

    /// Value and gradient.
    ///
    /// Per event, with sensors sorted by time and savings `a_i`, the tail
    /// value `S_i = a_i q_i + (1 - q_i) S_{i+1}` gives the expectation `S_0`
    /// and `∂S_0/∂q_k = P_k (a_k - S_{k+1})` where `P_k = ∏_{j<k} (1 - q_j)`.
    pub fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_input(x)?;
        let n = self.locations();
        let miss: Vec<f64> = x.iter().map(|&xe| (xe * self.ln_miss).exp()).collect();
        let mut value = 0.0;
        let mut grad = vec![0.0; n];
        let mut tail = vec![0.0; n + 1];
        for (v, order) in self.order.iter().enumerate() {
            for pos in (0..n).rev() {
                let e = order[pos];
                let a = self.t_inf - self.times[(e, v)];
                let q = 1.0 - miss[e];
                tail[pos] = a * q + miss[e] * tail[pos + 1];
            }
            value += tail[0];
            let mut prefix = 1.0;
            for pos in 0..n {
                let e = order[pos];
                let a = self.t_inf - self.times[(e, v)];
                // dq/dx = -ln(1-p) (1-p)^x
                grad[e] += prefix * (a - tail[pos + 1]) * (-self.ln_miss) * miss[e];
                prefix *= miss[e];
            }
        }
        let scale = 1.0 / self.events() as f64;
        grad.iter_mut().for_each(|g| *g *= scale);
        Ok((value * scale, grad))
    }
}

impl Objective for SensorInstance {
    fn dim(&self) -> usize {
        self.locations()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.eval_grad(x).map(|(v, _)| v)
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_energy_saves_nothing() {
        let inst = SensorInstance::random(4, 3, 0.3, 5.0, 1).unwrap();
        assert_eq!(inst.value(&[0.0; 4]).unwrap(), 0.0);
    }

    #[test]
    fn single_sensor_single_event() {
        // t = 1, t_inf = 2 needs a second location with time 2
        let times = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
        let inst = SensorInstance::new(times, 0.5).unwrap();
        assert_eq!(inst.t_inf(), 2.0);
        let v = inst.value(&[1.0, 0.0]).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_sensor_explicit_horizon() {
        let inst = SensorInstance::with_horizon(DMatrix::from_element(1, 1, 1.0), 0.5, 2.0).unwrap();
        assert!((inst.value(&[1.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(SensorInstance::with_horizon(DMatrix::from_element(1, 1, 3.0), 0.5, 2.0).is_err());
    }

    #[test]
    fn two_sensors_expectation() {
        // sensor 0 at t=0, sensor 1 at t=1, t_inf=2 (dummy location), p=0.5, x=(1,1):
        // 0.5*2 + 0.5*0.5*1 = 1.25
        let times = DMatrix::from_row_slice(3, 1, &[0.0, 1.0, 2.0]);
        let inst = SensorInstance::new(times, 0.5).unwrap();
        let v = inst.value(&[1.0, 1.0, 0.0]).unwrap();
        assert!((v - 1.25).abs() < 1e-15);
    }

    #[test]
    fn monotone_along_coordinates() {
        let inst = SensorInstance::random(5, 4, 0.2, 3.0, 9).unwrap();
        let mut x = vec![0.5; 5];
        let mut prev = inst.value(&x).unwrap();
        for step in 0..20 {
            x[step % 5] += 0.3;
            let cur = inst.value(&x).unwrap();
            assert!(cur >= prev - 1e-15);
            prev = cur;
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(SensorInstance::new(DMatrix::from_element(1, 1, 1.0), 1.0).is_err());
        assert!(SensorInstance::new(DMatrix::from_element(1, 1, -1.0), 0.5).is_err());
        let inst = SensorInstance::random(2, 2, 0.5, 1.0, 0).unwrap();
        assert!(inst.value(&[-1.0, 0.0]).is_err());
    }
}
