//! Shared domain types: points, feasible regions, the objective contract and
//! solver traces, plus the lattice operations and the finite-difference
//! gradient used throughout the crate.

use std::fmt;
use std::ops::Deref;

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};

/// A decision vector. All entries are finite.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCoordinate {
                coordinate: i,
                value: entries[i],
            });
        }
        Ok(Point(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Point(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        debug_assert!(v.iter().all(|x| x.is_finite()), "non-finite point {v:?}");
        Point(v)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Axis-aligned box `[lower, upper]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::InvalidInput(format!("box bound {i} is not finite")));
            }
            if l > u {
                return Err(Error::InvalidInput(format!(
                    "box lower bound {l} exceeds upper bound {u} at coordinate {i}"
                )));
            }
        }
        Ok(BoxDomain { lower, upper })
    }

    /// The box `[0, upper]^n`.
    pub fn unit(n: usize, upper: f64) -> Result<Self> {
        Self::new(vec![0.0; n], vec![upper; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&l, &u))| v >= l - tol && v <= u + tol)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for ((v, &l), &u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(l, u);
        }
    }
}

/// Down-closed polytope `{x : 0 <= x <= upper, A x <= b}` with nonnegative
/// `A`, `b` and `upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeDomain {
    a: DMatrix<f64>,
    b: Vec<f64>,
    upper: Vec<f64>,
}

impl PolytopeDomain {
    pub fn new(a: DMatrix<f64>, b: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(a.nrows(), b.len())?;
        check_dim(a.ncols(), upper.len())?;
        let nonneg = |v: &f64| v.is_finite() && *v >= 0.0;
        if !a.iter().all(nonneg) {
            return Err(Error::InvalidInput(
                "constraint matrix must be finite and nonnegative".into(),
            ));
        }
        if !b.iter().all(nonneg) {
            return Err(Error::InvalidInput(
                "right-hand side must be finite and nonnegative".into(),
            ));
        }
        if !upper.iter().all(nonneg) {
            return Err(Error::InvalidInput(
                "upper bounds must be finite and nonnegative".into(),
            ));
        }
        Ok(PolytopeDomain { a, b, upper })
    }

    /// Builds from row slices, convenient for small hand-written instances.
    pub fn from_rows(rows: &[Vec<f64>], b: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = upper.len();
        for r in rows {
            check_dim(n, r.len())?;
        }
        let a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
        Self::new(a, b, upper)
    }

    /// The box `[0, upper]` with no extra rows.
    pub fn from_box(upper: Vec<f64>) -> Result<Self> {
        let a = DMatrix::zeros(0, upper.len());
        Self::new(a, Vec::new(), upper)
    }

    pub fn dim(&self) -> usize {
        self.upper.len()
    }

    pub fn n_rows(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Same constraint matrix and box, new right-hand side.
    pub fn with_rhs(&self, b: Vec<f64>) -> Result<Self> {
        Self::new(self.a.clone(), b, self.upper.clone())
    }

    pub fn bounding_box(&self) -> BoxDomain {
        BoxDomain {
            lower: vec![0.0; self.dim()],
            upper: self.upper.clone(),
        }
    }

    pub fn row_dot(&self, row: usize, x: &[f64]) -> f64 {
        (0..self.dim()).map(|j| self.a[(row, j)] * x[j]).sum()
    }

    /// Largest constraint violation of `x` (zero when feasible).
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (&v, &u) in x.iter().zip(&self.upper) {
            worst = worst.max(-v).max(v - u);
        }
        for r in 0..self.n_rows() {
            worst = worst.max(self.row_dot(r, x) - self.b[r]);
        }
        // `+ 0.0` turns a -0 from `max(-0.0)` into +0
        worst + 0.0
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim() && self.residual(x) <= tol
    }
}

/// Feasible region accepted by methods that work on either kind of set.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Box(BoxDomain),
    Polytope(PolytopeDomain),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Box(b) => b.dim(),
            Domain::Polytope(p) => p.dim(),
        }
    }

    pub fn bounding_box(&self) -> BoxDomain {
        match self {
            Domain::Box(b) => b.clone(),
            Domain::Polytope(p) => p.bounding_box(),
        }
    }

    pub fn residual(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Box(b) => {
                x.iter()
                    .zip(b.lower().iter().zip(b.upper()))
                    .map(|(&v, (&l, &u))| (l - v).max(v - u))
                    .fold(0.0, f64::max)
                    + 0.0
            }
            Domain::Polytope(p) => p.residual(x),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim() && self.residual(x) <= tol
    }
}

/// Structural hypotheses an objective declares about itself.
///
/// Declarations are claims; the property suite is what checks them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Capabilities {
    pub monotone: bool,
    pub dr_submodular: bool,
    pub submodular: bool,
    pub differentiable: bool,
}

/// Uniform contract for the functions being maximized.
///
/// Implementations must be deterministic, and must implement [`gradient`]
/// exactly when [`Capabilities::differentiable`] is set.
///
/// [`gradient`]: Objective::gradient
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> Result<f64>;

    fn gradient(&self, _x: &[f64]) -> Result<Vec<f64>> {
        Err(Error::NoGradient)
    }

    fn capabilities(&self) -> Capabilities;

    /// Coefficients `(a, b)` such that `z -> value(x with x_j = z)` equals
    /// `a z^2 + b z + const`, for objectives that are quadratic along each
    /// coordinate.
    fn coordinate_quadratic(&self, _x: &[f64], _j: usize) -> Option<(f64, f64)> {
        None
    }
}

type ValueFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Objective built from closures. Handy for tests and ad hoc functions.
pub struct FnObjective {
    dim: usize,
    value: Box<ValueFn>,
    gradient: Option<Box<GradFn>>,
    caps: Capabilities,
}

impl FnObjective {
    pub fn new(dim: usize, value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        FnObjective {
            dim,
            value: Box::new(value),
            gradient: None,
            caps: Capabilities::default(),
        }
    }

    pub fn with_gradient(mut self, gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Box::new(gradient));
        self.caps.differentiable = true;
        self
    }

    /// Sets the declared flags. `differentiable` is always derived from
    /// whether a gradient closure was supplied.
    pub fn with_capabilities(mut self, caps: Capabilities) -> Self {
        self.caps = Capabilities {
            differentiable: self.gradient.is_some(),
            ..caps
        };
        self
    }
}

impl fmt::Debug for FnObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnObjective")
            .field("dim", &self.dim)
            .field("caps", &self.caps)
            .finish()
    }
}

impl Objective for FnObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        let v = (self.value)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { point: x.to_vec() })
        }
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        match &self.gradient {
            Some(g) => Ok(g(x)),
            None => Err(Error::NoGradient),
        }
    }

    fn capabilities(&self) -> Capabilities {
        self.caps
    }
}

/// One row of a solver trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    /// Cumulative step in `[0, 1]`.
    pub t: f64,
    pub objective: f64,
    pub feasibility_residual: f64,
}

/// Per-iteration log of a solver run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolverTrace {
    records: Vec<TraceRecord>,
}

impl SolverTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: TraceRecord) {
        debug_assert!(
            self.records
                .last()
                .is_none_or(|p| p.iteration < record.iteration && p.t <= record.t),
            "trace invariant broken by {record:?}"
        );
        debug_assert!(record.t <= 1.0 && record.feasibility_residual >= 0.0);
        self.records.push(record);
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.objective)
    }

    /// Iterations strictly increasing, `t` non-decreasing within `[0, 1]`,
    /// residuals nonnegative.
    pub fn is_well_formed(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[0].iteration < w[1].iteration && w[0].t <= w[1].t)
            && self
                .records
                .iter()
                .all(|r| (0.0..=1.0).contains(&r.t) && r.feasibility_residual >= 0.0)
    }

    /// Largest decrease between consecutive objective values (0 when the
    /// trace never goes down).
    pub fn max_drop(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| w[0].objective - w[1].objective)
            .fold(0.0, f64::max)
    }
}

/// Coordinate-wise `(max, min)` of two points.
pub fn lattice_ops(x: &[f64], y: &[f64]) -> Result<(Point, Point)> {
    check_dim(x.len(), y.len())?;
    let join = x.iter().zip(y).map(|(a, b)| a.max(*b)).collect();
    let meet = x.iter().zip(y).map(|(a, b)| a.min(*b)).collect();
    Ok((Point(join), Point(meet)))
}

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Central-difference gradient. `x ± h e_i` must lie where `f` is defined.
pub fn finite_diff_gradient(f: &dyn Objective, x: &[f64], h: f64) -> Result<Point> {
    check_dim(f.dim(), x.len())?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("step {h} must be positive")));
    }
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let xi = probe[i];
        probe[i] = xi + h;
        let plus = f.value(&probe);
        probe[i] = xi - h;
        let minus = f.value(&probe);
        probe[i] = xi;
        let (plus, minus) = match (plus, minus) {
            (Ok(p), Ok(m)) if p.is_finite() && m.is_finite() => (p, m),
            (p, m) => {
                let value = p.ok().filter(|v| !v.is_finite()).or(m.ok()).unwrap_or(f64::NAN);
                return Err(Error::NonFiniteCoordinate { coordinate: i, value });
            }
        };
        grad.push((plus - minus) / (2.0 * h));
    }
    Ok(Point(grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_examples() {
        let (j, m) = lattice_ops(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(j.as_slice(), &[1.0, 1.0]);
        assert_eq!(m.as_slice(), &[0.0, 0.0]);

        let (j, m) = lattice_ops(&[0.3, 0.7], &[0.3, 0.7]).unwrap();
        assert_eq!(j, m);
        assert_eq!(j.as_slice(), &[0.3, 0.7]);

        let (j, m) = lattice_ops(&[2.0, -1.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(j.as_slice(), &[2.0, 0.0, 0.0]);
        assert_eq!(m.as_slice(), &[1.0, -1.0, 0.0]);
    }

    #[test]
    fn lattice_rejects_mismatch() {
        assert_eq!(
            lattice_ops(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn fd_linear_bilinear_constant() {
        let lin = FnObjective::new(2, |x| x[0] + x[1]);
        let g = finite_diff_gradient(&lin, &[0.37, -4.2], 1e-5).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-8 && (g[1] - 1.0).abs() < 1e-8);

        let bil = FnObjective::new(2, |x| x[0] * x[1]);
        let g = finite_diff_gradient(&bil, &[2.0, 3.0], 1e-5).unwrap();
        assert!((g[0] - 3.0).abs() < 1e-6 && (g[1] - 2.0).abs() < 1e-6);

        let c = FnObjective::new(3, |_| 7.5);
        let g = finite_diff_gradient(&c, &[0.1, 0.2, 0.3], 1e-5).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fd_reports_offending_coordinate() {
        let f = FnObjective::new(2, |x| if x[1] > 1.0 { f64::INFINITY } else { x[0] });
        match finite_diff_gradient(&f, &[0.5, 1.0], 1e-3) {
            Err(Error::NonFiniteCoordinate { coordinate, .. }) => assert_eq!(coordinate, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn point_rejects_nan() {
        assert!(Point::new(vec![0.0, f64::NAN]).is_err());
        assert!(Point::new(vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn box_validation() {
        assert!(BoxDomain::new(vec![1.0], vec![0.0]).is_err());
        assert!(BoxDomain::new(vec![0.0], vec![f64::INFINITY]).is_err());
        let b = BoxDomain::unit(2, 1.0).unwrap();
        assert!(b.contains(&[0.0, 1.0], 0.0));
        assert!(!b.contains(&[0.0, 1.1], 1e-9));
    }

    #[test]
    fn polytope_validation_and_residual() {
        assert!(PolytopeDomain::from_rows(&[vec![1.0, -1.0]], vec![1.0], vec![1.0, 1.0]).is_err());
        assert!(PolytopeDomain::from_rows(&[vec![1.0, 1.0]], vec![-1.0], vec![1.0, 1.0]).is_err());
        let p = PolytopeDomain::from_rows(&[vec![1.0, 1.0]], vec![1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(p.residual(&[0.0, 0.0]), 0.0);
        assert_eq!(p.residual(&[1.0, 1.0]), 1.0);
        assert_eq!(p.residual(&[-0.5, 0.0]), 0.5);
    }

    #[test]
    fn fn_objective_flags_follow_gradient() {
        let caps = Capabilities {
            monotone: true,
            differentiable: true,
            ..Default::default()
        };
        let f = FnObjective::new(1, |x| x[0]).with_capabilities(caps);
        assert!(!f.capabilities().differentiable);
        assert_eq!(f.gradient(&[0.0]), Err(Error::NoGradient));
        let g = FnObjective::new(1, |x| x[0])
            .with_gradient(|_| vec![1.0])
            .with_capabilities(caps);
        assert!(g.capabilities().differentiable);
        assert!(g.capabilities().monotone);
    }

    #[test]
    fn trace_well_formed() {
        let mut t = SolverTrace::new();
        for k in 0..4 {
            t.push(TraceRecord {
                iteration: k,
                t: k as f64 / 3.0,
                objective: k as f64,
                feasibility_residual: 0.0,
            });
        }
        assert!(t.is_well_formed());
        assert_eq!(t.max_drop(), 0.0);
    }
}
