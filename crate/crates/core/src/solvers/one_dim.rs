//! Maximizers for the restriction `z -> f(x with x_j = z)` on `[lo, hi]`.

use crate::error::{Error, Result};
use crate::model::Objective;

/// Left end of the smooth piece in revenue mode.
pub const REVENUE_EPS: f64 = 1e-10;
pub const DEFAULT_1D_TOL: f64 = 1e-9;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneDimMode {
    /// Exact argmax of a coordinate-wise quadratic.
    QuadraticClosedForm,
    /// Golden-section search, valid for concave restrictions.
    ConcaveSearch,
    /// Golden-section search on `(ε, hi]` compared against the exact value at 0.
    RevenueDiscontinuous,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneDimResult {
    pub z: f64,
    /// `f` evaluated at the returned point.
    pub value: f64,
    /// Upper bound on how far `value` may fall short of the 1-D maximum.
    pub gap_bound: f64,
}

/// Argmax of `a z^2 + b z` over `[lo, hi]` and its value. Ties go to the
/// lower candidate.
pub fn quadratic_argmax(a: f64, b: f64, lo: f64, hi: f64) -> (f64, f64) {
    let q = |z: f64| a * z * z + b * z;
    let mut best = (lo, q(lo));
    let mut consider = |z: f64| {
        let v = q(z);
        if v > best.1 {
            best = (z, v);
        }
    };
    if a < 0.0 {
        let stationary = -b / (2.0 * a);
        if stationary > lo && stationary < hi {
            consider(stationary);
        }
    }
    consider(hi);
    best
}

struct Restriction<'a> {
    f: &'a dyn Objective,
    point: Vec<f64>,
    j: usize,
}

impl Restriction<'_> {
    fn eval(&mut self, z: f64) -> Result<f64> {
        self.point[self.j] = z;
        let v = self.f.value(&self.point).map_err(|e| Error::OneDim {
            coordinate: self.j,
            reason: format!("evaluation at z = {z} failed: {e}"),
        })?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::OneDim {
                coordinate: self.j,
                reason: format!("non-finite value at z = {z}"),
            })
        }
    }
}

fn golden_section(g: &mut Restriction<'_>, lo: f64, hi: f64, tol: f64) -> Result<OneDimResult> {
    let (mut l, mut r) = (lo, hi);
    let (mut gl, mut gr) = (g.eval(l)?, g.eval(r)?);
    let mut c1 = r - INV_PHI * (r - l);
    let mut c2 = l + INV_PHI * (r - l);
    let (mut g1, mut g2) = (g.eval(c1)?, g.eval(c2)?);
    // the maximum of a concave restriction stays inside [l, r]
    while r - l > tol {
        if g1 >= g2 {
            (r, gr) = (c2, g2);
            (c2, g2) = (c1, g1);
            c1 = r - INV_PHI * (r - l);
            g1 = g.eval(c1)?;
        } else {
            (l, gl) = (c1, g1);
            (c1, g1) = (c2, g2);
            c2 = l + INV_PHI * (r - l);
            g2 = g.eval(c2)?;
        }
        if !(c1 < c2) {
            break;
        }
    }
    let samples = [(l, gl), (c1, g1), (c2, g2), (r, gr)];
    let (z, value) = samples
        .iter()
        .copied()
        .fold((l, gl), |best, s| if s.1 > best.1 { s } else { best });
    // concavity: on each gap the function lies below the neighbouring
    // secants, so it exceeds the samples by at most slope * width
    let slope = samples
        .windows(2)
        .filter(|w| w[1].0 > w[0].0)
        .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
        .fold(0.0, f64::max);
    Ok(OneDimResult {
        z,
        value,
        gap_bound: slope * (r - l),
    })
}

/// Maximizes `f` along coordinate `j` from `x` over `[lo, hi]`.
pub fn maximize_1d(
    f: &dyn Objective,
    x: &[f64],
    j: usize,
    lo: f64,
    hi: f64,
    mode: OneDimMode,
    tol: f64,
) -> Result<OneDimResult> {
    if j >= x.len() || x.len() != f.dim() {
        return Err(Error::OneDim {
            coordinate: j,
            reason: format!("coordinate out of range for dimension {}", x.len()),
        });
    }
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::OneDim {
            coordinate: j,
            reason: format!("invalid interval [{lo}, {hi}]"),
        });
    }
    let mut g = Restriction {
        f,
        point: x.to_vec(),
        j,
    };
    match mode {
        OneDimMode::QuadraticClosedForm => {
            let (a, b) = match f.coordinate_quadratic(x, j) {
                Some(ab) => ab,
                None => fit_quadratic(&mut g, lo, hi)?,
            };
            let (z, _) = quadratic_argmax(a, b, lo, hi);
            Ok(OneDimResult {
                z,
                value: g.eval(z)?,
                gap_bound: 0.0,
            })
        }
        OneDimMode::ConcaveSearch => golden_section(&mut g, lo, hi, tol),
        OneDimMode::RevenueDiscontinuous => {
            let start = lo.max(REVENUE_EPS);
            let interior = if start < hi {
                Some(golden_section(&mut g, start, hi, tol)?)
            } else if hi > 0.0 {
                Some(OneDimResult {
                    z: hi,
                    value: g.eval(hi)?,
                    gap_bound: 0.0,
                })
            } else {
                None
            };
            let at_zero = if lo <= 0.0 {
                Some(OneDimResult {
                    z: 0.0,
                    value: g.eval(0.0)?,
                    gap_bound: 0.0,
                })
            } else {
                None
            };
            match (interior, at_zero) {
                (Some(i), Some(z)) => Ok(if i.value >= z.value { i } else { z }),
                (Some(r), None) | (None, Some(r)) => Ok(r),
                (None, None) => unreachable!("lo <= hi rules out an empty interval"),
            }
        }
    }
}

/// Coefficients of the parabola through three points of the restriction.
fn fit_quadratic(g: &mut Restriction<'_>, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if hi == lo {
        return Ok((0.0, 0.0));
    }
    let mid = 0.5 * (lo + hi);
    let (f0, f1, f2) = (g.eval(lo)?, g.eval(mid)?, g.eval(hi)?);
    let h = mid - lo;
    let a = (f2 - 2.0 * f1 + f0) / (2.0 * h * h);
    let b = (f1 - f0) / h - a * (lo + mid);
    Ok((a, b))
}
