use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::{Point, PolytopeDomain};
use crate::rng;

const MAX_DIRECTION_RETRIES: usize = 100;
const MIN_CHORD: f64 = 1e-14;

/// Sampler parameters. `None` picks `50 n` burn-in steps and `n` thinning steps.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HitAndRunConfig {
    pub burn_in: Option<usize>,
    pub thinning: Option<usize>,
}

/// Coordinates that can leave zero: positive upper bound and no zero-rhs
/// row touching them.
fn free_coordinates(p: &PolytopeDomain) -> Vec<usize> {
    (0..p.dim())
        .filter(|&j| p.upper()[j] > 0.0 && (0..p.n_rows()).all(|r| p.b()[r] > 0.0 || p.a()[(r, j)] == 0.0))
        .collect()
}

/// Rows of `A` restricted to the free coordinates, stored densely.
struct Chain<'a> {
    p: &'a PolytopeDomain,
    free: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl Chain<'_> {
    fn row_products(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(&self.free).map(|(a, &j)| a * x[j]).sum())
            .collect()
    }

    /// Feasible step interval `[lo, hi]` from `x` along `d` (indexed like
    /// `free`), together with `A d`.
    fn chord(&self, x: &[f64], ax: &[f64], d: &[f64], ad: &mut [f64]) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (&j, &dj) in self.free.iter().zip(d) {
            let u = self.p.upper()[j];
            if dj > 0.0 {
                hi = hi.min((u - x[j]) / dj);
                lo = lo.max(-x[j] / dj);
            } else if dj < 0.0 {
                hi = hi.min(-x[j] / dj);
                lo = lo.max((u - x[j]) / dj);
            }
        }
        for (r, row) in self.rows.iter().enumerate() {
            let v: f64 = row.iter().zip(d).map(|(a, b)| a * b).sum();
            ad[r] = v;
            let slack = (self.p.b()[r] - ax[r]).max(0.0);
            if v > 0.0 {
                hi = hi.min(slack / v);
            } else if v < 0.0 {
                lo = lo.max(slack / v);
            }
        }
        (lo.min(0.0), hi.max(0.0))
    }
}

/// `k` points from a hit-and-run chain over `p`, seeded and deterministic.
///
/// The chain starts at the origin and first moves to the midpoint of the
/// chord along the all-ones direction (restricted to coordinates that are
/// not pinned at zero), which lies in the relative interior.
pub fn hit_and_run_with(p: &PolytopeDomain, k: usize, seed: u64, cfg: HitAndRunConfig) -> Result<Vec<Point>> {
    if k == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let n = p.dim();
    let free = free_coordinates(p);
    let mut x = vec![0.0; n];
    if free.is_empty() {
        return Ok(vec![Point::from(x); k]);
    }
    let burn_in = cfg.burn_in.unwrap_or(50 * n);
    let thinning = cfg.thinning.unwrap_or(n).max(1);
    let rows: Vec<Vec<f64>> = (0..p.n_rows())
        .map(|r| free.iter().map(|&j| p.a()[(r, j)]).collect())
        .collect();
    let chain = Chain { p, free, rows };
    let k_free = chain.free.len();

    let mut d = vec![1.0; k_free];
    let mut ad = vec![0.0; p.n_rows()];
    let (_, hi) = chain.chord(&x, &chain.row_products(&x), &d, &mut ad);
    for &j in &chain.free {
        x[j] = 0.5 * hi;
    }

    let mut rng = rng::seeded(seed);
    let mut out = Vec::with_capacity(k);
    let total = burn_in + thinning * k;
    let mut ax = chain.row_products(&x);
    for step in 1..=total {
        if step % k_free.max(16) == 0 {
            // refresh to stop drift in the incremental products
            ax = chain.row_products(&x);
        }
        let mut retries = 0;
        let (lo, hi) = loop {
            for dj in d.iter_mut() {
                *dj = StandardNormal.sample(&mut rng);
            }
            let (lo, hi) = chain.chord(&x, &ax, &d, &mut ad);
            if hi - lo > MIN_CHORD {
                break (lo, hi);
            }
            retries += 1;
            if retries >= MAX_DIRECTION_RETRIES {
                return Err(Error::DegenerateChord { retries });
            }
        };
        let lambda = rng.random_range(lo..=hi);
        for (&j, &dj) in chain.free.iter().zip(&d) {
            x[j] = (x[j] + lambda * dj).clamp(0.0, p.upper()[j]);
        }
        for (a, v) in ax.iter_mut().zip(&ad) {
            *a += lambda * v;
        }
        if step > burn_in && (step - burn_in) % thinning == 0 {
            out.push(Point::from(x.clone()));
        }
    }
    Ok(out)
}

/// [`hit_and_run_with`] with an explicit burn-in and the default thinning.
pub fn hit_and_run(p: &PolytopeDomain, k: usize, seed: u64, burn_in: usize) -> Result<Vec<Point>> {
    hit_and_run_with(
        p,
        k,
        seed,
        HitAndRunConfig {
            burn_in: Some(burn_in),
            thinning: None,
        },
    )
}
