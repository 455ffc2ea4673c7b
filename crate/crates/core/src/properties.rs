//! Sampled certificates of the lattice characterizations of submodularity.
//!
//! Every check draws random inputs, evaluates one inequality per trial and
//! records the largest violation (`rhs - lhs`, positive when the inequality
//! fails). A `Pass` verdict means no violation above the tolerance was found
//! in the given number of trials; it is evidence, not a proof.
//!
//! Random pairs tie each coordinate with probability 1/2. Marginals stay
//! uniform on the box, while sparse positive interactions are no longer
//! masked by the other coordinates.

use nalgebra::DMatrix;
use rand::Rng as _;

use crate::error::{check_dim, Error, Result};
use crate::model::{finite_diff_gradient, BoxDomain, Objective, Point};
use crate::rng::{self, Rng};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Inputs of the worst violating trial.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub points: Vec<(&'static str, Point)>,
    pub coordinate: Option<usize>,
    pub steps: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub verdict: Verdict,
    pub trials: usize,
    pub worst_violation: f64,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckConfig {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl CheckConfig {
    pub fn new(trials: usize, tol: f64, seed: u64) -> Self {
        CheckConfig { trials, tol, seed }
    }
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            trials: 200,
            tol: DEFAULT_TOL,
            seed: 0,
        }
    }
}

struct Tracker {
    tol: f64,
    trials: usize,
    worst: f64,
    witness: Option<Witness>,
}

impl Tracker {
    fn new(tol: f64) -> Self {
        Tracker {
            tol,
            trials: 0,
            worst: f64::NEG_INFINITY,
            witness: None,
        }
    }

    fn record(&mut self, violation: f64, witness: impl FnOnce() -> Witness) {
        self.trials += 1;
        if violation > self.worst {
            self.worst = violation;
            if violation > self.tol {
                self.witness = Some(witness());
            }
        }
    }

    fn finish(self) -> PropertyReport {
        let fail = self.worst > self.tol;
        PropertyReport {
            verdict: if fail { Verdict::Fail } else { Verdict::Pass },
            trials: self.trials,
            worst_violation: if self.trials == 0 { 0.0 } else { self.worst },
            witness: if fail { self.witness } else { None },
        }
    }
}

fn eval(f: &dyn Objective, x: &[f64], context: &[&[f64]]) -> Result<f64> {
    f.value(x).map_err(|e| Error::Evaluation {
        points: context.iter().map(|p| p.to_vec()).collect(),
        reason: e.to_string(),
    })
}

fn validate(f: &dyn Objective, domain: &BoxDomain, trials: usize) -> Result<()> {
    check_dim(f.dim(), domain.dim())?;
    if trials == 0 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    Ok(())
}

fn uniform_in(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        lo + (hi - lo) * rng.random::<f64>()
    } else {
        lo
    }
}

fn uniform_point(rng: &mut Rng, domain: &BoxDomain) -> Vec<f64> {
    domain
        .lower()
        .iter()
        .zip(domain.upper())
        .map(|(&l, &u)| uniform_in(rng, l, u))
        .collect()
}

/// Two uniform points; each coordinate of the second is tied to the first
/// with probability 1/2.
fn tied_pair(rng: &mut Rng, domain: &BoxDomain) -> (Vec<f64>, Vec<f64>) {
    let x = uniform_point(rng, domain);
    let mut y = uniform_point(rng, domain);
    for (yi, &xi) in y.iter_mut().zip(&x) {
        if rng.random::<bool>() {
            *yi = xi;
        }
    }
    (x, y)
}

/// Ordered pair `a <= b` as the meet and join of a tied pair.
fn ordered_pair(rng: &mut Rng, domain: &BoxDomain) -> (Vec<f64>, Vec<f64>) {
    let (x, y) = tied_pair(rng, domain);
    let a = x.iter().zip(&y).map(|(p, q)| p.min(*q)).collect();
    let b = x.iter().zip(&y).map(|(p, q)| p.max(*q)).collect();
    (a, b)
}

fn shifted(x: &[f64], i: usize, k: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[i] += k;
    y
}

fn pt(v: &[f64]) -> Point {
    Point::from(v.to_vec())
}

/// `f(x) + f(y) >= f(x ∨ y) + f(x ∧ y)`.
pub fn check_submodular(f: &dyn Objective, domain: &BoxDomain, cfg: CheckConfig) -> Result<PropertyReport> {
    validate(f, domain, cfg.trials)?;
    let mut tracker = Tracker::new(cfg.tol);
    for trial in 0..cfg.trials {
        let mut rng = rng::stream(cfg.seed, trial as u64);
        let (x, y) = tied_pair(&mut rng, domain);
        let join: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p.max(*q)).collect();
        let meet: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p.min(*q)).collect();
        let ctx: [&[f64]; 2] = [&x, &y];
        let lhs = eval(f, &x, &ctx)? + eval(f, &y, &ctx)?;
        let rhs = eval(f, &join, &ctx)? + eval(f, &meet, &ctx)?;
        tracker.record(rhs - lhs, || Witness {
            points: vec![("x", pt(&x)), ("y", pt(&y))],
            coordinate: None,
            steps: vec![],
        });
    }
    Ok(tracker.finish())
}

/// Weak diminishing returns: for `a <= b` with `a_i = b_i`,
/// `f(a + k e_i) - f(a) >= f(b + k e_i) - f(b)`.
pub fn check_weak_dr(f: &dyn Objective, domain: &BoxDomain, cfg: CheckConfig) -> Result<PropertyReport> {
    validate(f, domain, cfg.trials)?;
    let n = domain.dim();
    let mut tracker = Tracker::new(cfg.tol);
    for trial in 0..cfg.trials {
        let mut rng = rng::stream(cfg.seed, trial as u64);
        let (mut a, mut b) = ordered_pair(&mut rng, domain);
        let i = rng.random_range(0..n);
        let (lo, hi) = (domain.lower()[i], domain.upper()[i]);
        let common = uniform_in(&mut rng, lo, hi);
        a[i] = common;
        b[i] = common;
        let k = uniform_in(&mut rng, 0.0, hi - common);
        let (ak, bk) = (shifted(&a, i, k), shifted(&b, i, k));
        let ctx: [&[f64]; 2] = [&a, &b];
        let gain_a = eval(f, &ak, &ctx)? - eval(f, &a, &ctx)?;
        let gain_b = eval(f, &bk, &ctx)? - eval(f, &b, &ctx)?;
        tracker.record(gain_b - gain_a, || Witness {
            points: vec![("a", pt(&a)), ("b", pt(&b))],
            coordinate: Some(i),
            steps: vec![k],
        });
    }
    Ok(tracker.finish())
}

/// Diminishing returns: for `a <= b`, any coordinate `i` and `k > 0`,
/// `f(a + k e_i) - f(a) >= f(b + k e_i) - f(b)`.
pub fn check_dr(f: &dyn Objective, domain: &BoxDomain, cfg: CheckConfig) -> Result<PropertyReport> {
    validate(f, domain, cfg.trials)?;
    let n = domain.dim();
    let mut tracker = Tracker::new(cfg.tol);
    for trial in 0..cfg.trials {
        let mut rng = rng::stream(cfg.seed, trial as u64);
        let (a, b) = ordered_pair(&mut rng, domain);
        let i = rng.random_range(0..n);
        let k = uniform_in(&mut rng, 0.0, domain.upper()[i] - b[i]);
        let (ak, bk) = (shifted(&a, i, k), shifted(&b, i, k));
        let ctx: [&[f64]; 2] = [&a, &b];
        let gain_a = eval(f, &ak, &ctx)? - eval(f, &a, &ctx)?;
        let gain_b = eval(f, &bk, &ctx)? - eval(f, &b, &ctx)?;
        tracker.record(gain_b - gain_a, || Witness {
            points: vec![("a", pt(&a)), ("b", pt(&b))],
            coordinate: Some(i),
            steps: vec![k],
        });
    }
    Ok(tracker.finish())
}

/// Concavity along each coordinate:
/// `f(x + k e_i) - f(x) >= f(x + (k + l) e_i) - f(x + l e_i)`.
pub fn check_coordinatewise_concave(f: &dyn Objective, domain: &BoxDomain, cfg: CheckConfig) -> Result<PropertyReport> {
    validate(f, domain, cfg.trials)?;
    let n = domain.dim();
    let mut tracker = Tracker::new(cfg.tol);
    for trial in 0..cfg.trials {
        let mut rng = rng::stream(cfg.seed, trial as u64);
        let mut x = uniform_point(&mut rng, domain);
        let i = rng.random_range(0..n);
        let (lo, hi) = (domain.lower()[i], domain.upper()[i]);
        let (u, w) = (uniform_in(&mut rng, lo, hi), uniform_in(&mut rng, lo, hi));
        x[i] = u.min(w);
        let total = (u.max(w) - x[i]).max(0.0);
        let k = total * rng.random::<f64>();
        let l = total - k;
        let ctx: [&[f64]; 1] = [&x];
        let near = eval(f, &shifted(&x, i, k), &ctx)? - eval(f, &x, &ctx)?;
        let far = eval(f, &shifted(&x, i, k + l), &ctx)? - eval(f, &shifted(&x, i, l), &ctx)?;
        tracker.record(far - near, || Witness {
            points: vec![("x", pt(&x))],
            coordinate: Some(i),
            steps: vec![k, l],
        });
    }
    Ok(tracker.finish())
}

/// `f(b) >= f(a)` for `a <= b`.
pub fn check_monotone(f: &dyn Objective, domain: &BoxDomain, cfg: CheckConfig) -> Result<PropertyReport> {
    validate(f, domain, cfg.trials)?;
    let mut tracker = Tracker::new(cfg.tol);
    for trial in 0..cfg.trials {
        let mut rng = rng::stream(cfg.seed, trial as u64);
        let (a, b) = ordered_pair(&mut rng, domain);
        let ctx: [&[f64]; 2] = [&a, &b];
        let drop = eval(f, &a, &ctx)? - eval(f, &b, &ctx)?;
        tracker.record(drop, || Witness {
            points: vec![("a", pt(&a)), ("b", pt(&b))],
            coordinate: None,
            steps: vec![],
        });
    }
    Ok(tracker.finish())
}

/// Midpoint concavity of `g(ξ) = f(x + ξ v)` over all pairs of a uniform
/// grid on `[0, 1]`. `v` must be nonnegative.
pub fn check_directional_concave(
    f: &dyn Objective,
    x: &[f64],
    v: &[f64],
    gridpoints: usize,
    tol: f64,
) -> Result<PropertyReport> {
    check_dim(f.dim(), x.len())?;
    check_dim(f.dim(), v.len())?;
    if v.iter().any(|&d| !(d >= 0.0)) {
        return Err(Error::InvalidInput("direction must be nonnegative".into()));
    }
    if gridpoints < 2 {
        return Err(Error::InvalidInput("need at least two grid points".into()));
    }
    let along = |xi: f64| -> Vec<f64> { x.iter().zip(v).map(|(a, d)| a + xi * d).collect() };
    let ctx: [&[f64]; 2] = [x, v];
    let step = 1.0 / (gridpoints - 1) as f64;
    let grid: Vec<f64> = (0..gridpoints)
        .map(|k| eval(f, &along(k as f64 * step), &ctx))
        .collect::<Result<_>>()?;
    let mut tracker = Tracker::new(tol);
    for k1 in 0..gridpoints {
        for k2 in (k1 + 1)..gridpoints {
            let mid = if (k1 + k2) % 2 == 0 {
                grid[(k1 + k2) / 2]
            } else {
                eval(f, &along((k1 + k2) as f64 * 0.5 * step), &ctx)?
            };
            let violation = 0.5 * (grid[k1] + grid[k2]) - mid;
            tracker.record(violation, || Witness {
                points: vec![("x", pt(x)), ("v", pt(v))],
                coordinate: None,
                steps: vec![k1 as f64 * step, k2 as f64 * step],
            });
        }
    }
    Ok(tracker.finish())
}

/// Central-difference mixed partials `∂²f/∂x_i∂x_j` for `i != j` (the
/// diagonal is left at zero).
pub fn mixed_partials(f: &dyn Objective, x: &[f64], h: f64) -> Result<DMatrix<f64>> {
    check_dim(f.dim(), x.len())?;
    let n = x.len();
    let mut out = DMatrix::zeros(n, n);
    let mut probe = x.to_vec();
    let at = |probe: &mut Vec<f64>, i: usize, si: f64, j: usize, sj: f64| -> Result<f64> {
        probe[i] = x[i] + si * h;
        probe[j] = x[j] + sj * h;
        let v = eval(f, probe, &[x]);
        probe[i] = x[i];
        probe[j] = x[j];
        v
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let pp = at(&mut probe, i, 1.0, j, 1.0)?;
            let pm = at(&mut probe, i, 1.0, j, -1.0)?;
            let mp = at(&mut probe, i, -1.0, j, 1.0)?;
            let mm = at(&mut probe, i, -1.0, j, -1.0)?;
            let d = (pp - pm - mp + mm) / (4.0 * h * h);
            out[(i, j)] = d;
            out[(j, i)] = d;
        }
    }
    Ok(out)
}

/// Second-order submodularity test at `x`: every off-diagonal mixed partial
/// is at most `tol`. The stencil `x ± h` must fit inside `domain`.
pub fn check_hessian_offdiag(
    f: &dyn Objective,
    domain: &BoxDomain,
    x: &[f64],
    h: f64,
    tol: f64,
) -> Result<PropertyReport> {
    check_dim(domain.dim(), x.len())?;
    let fits = x
        .iter()
        .zip(domain.lower().iter().zip(domain.upper()))
        .all(|(&v, (&l, &u))| v - h >= l && v + h <= u);
    if !fits {
        return Err(Error::InvalidInput(format!(
            "point too close to the boundary for stencil width {h}"
        )));
    }
    let partials = mixed_partials(f, x, h)?;
    let mut tracker = Tracker::new(tol);
    let n = x.len();
    for i in 0..n {
        for j in (i + 1)..n {
            tracker.record(partials[(i, j)], || Witness {
                points: vec![("x", pt(x))],
                coordinate: Some(i),
                steps: vec![j as f64, partials[(i, j)]],
            });
        }
    }
    if tracker.trials == 0 {
        tracker.worst = 0.0;
    }
    Ok(tracker.finish())
}

/// Compares the declared gradient with central differences. The error per
/// coordinate is `|g - fd| / max(|g|, |fd|, 1)`.
pub fn check_gradient(f: &dyn Objective, x: &[f64], h: f64, rel_tol: f64) -> Result<PropertyReport> {
    if !f.capabilities().differentiable {
        return Err(Error::InvalidInput("objective declares no gradient".into()));
    }
    let declared = f.gradient(x)?;
    check_dim(x.len(), declared.len())?;
    let numeric = finite_diff_gradient(f, x, h)?;
    let mut tracker = Tracker::new(rel_tol);
    for (i, (&g, &d)) in declared.iter().zip(numeric.iter()).enumerate() {
        let err = (g - d).abs() / g.abs().max(d.abs()).max(1.0);
        tracker.record(err, || Witness {
            points: vec![("x", pt(x))],
            coordinate: Some(i),
            steps: vec![g, d],
        });
    }
    Ok(tracker.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Capabilities, FnObjective};

    fn unit2() -> BoxDomain {
        BoxDomain::unit(2, 1.0).unwrap()
    }

    fn cfg() -> CheckConfig {
        CheckConfig::new(200, DEFAULT_TOL, 3)
    }

    fn bilinear() -> FnObjective {
        FnObjective::new(2, |x| x[0] * x[1])
    }

    fn neg_bilinear() -> FnObjective {
        FnObjective::new(2, |x| -x[0] * x[1])
    }

    #[test]
    fn submodular_examples() {
        let r = check_submodular(&neg_bilinear(), &unit2(), cfg()).unwrap();
        assert!(r.passed() && r.witness.is_none());
        assert_eq!(r.trials, 200);

        let r = check_submodular(&bilinear(), &unit2(), cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.witness.unwrap();
        let (x, y) = (&w.points[0].1, &w.points[1].1);
        let f = bilinear();
        let (j, m) = crate::model::lattice_ops(x, y).unwrap();
        assert!(f.value(x).unwrap() + f.value(y).unwrap() < f.value(&j).unwrap() + f.value(&m).unwrap());

        // the four lattice points of the hand example
        let lhs = f.value(&[1.0, 0.0]).unwrap() + f.value(&[0.0, 1.0]).unwrap();
        let rhs = f.value(&[1.0, 1.0]).unwrap() + f.value(&[0.0, 0.0]).unwrap();
        assert!(lhs < rhs);

        let sep = FnObjective::new(2, |x| x[0].sin() + (3.0 * x[1]).exp());
        let r = check_submodular(&sep, &unit2(), cfg()).unwrap();
        assert!(r.passed());
        assert!(r.worst_violation.abs() < 1e-12);
    }

    #[test]
    fn weak_dr_examples() {
        let r = check_weak_dr(&bilinear(), &unit2(), cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.as_ref().unwrap().coordinate.is_some());

        let modular = FnObjective::new(2, |x| 3.0 * x[0] - 2.0 * x[1]);
        let r = check_weak_dr(&modular, &unit2(), cfg()).unwrap();
        assert!(r.passed());
        assert!(r.worst_violation.abs() < 1e-12);

        assert!(check_weak_dr(&neg_bilinear(), &unit2(), cfg()).unwrap().passed());
    }

    #[test]
    fn bilinear_hand_witness() {
        // a=(0,0), b=(0,1), i=0, k=1: 0 >= 1 fails
        let f = bilinear();
        let gain_a = f.value(&[1.0, 0.0]).unwrap() - f.value(&[0.0, 0.0]).unwrap();
        let gain_b = f.value(&[1.0, 1.0]).unwrap() - f.value(&[0.0, 1.0]).unwrap();
        assert!(gain_a < gain_b);
    }

    #[test]
    fn dr_examples() {
        let q = FnObjective::new(2, |x| -0.5 * (x[0] * x[0] + x[1] * x[1]));
        assert!(check_dr(&q, &unit2(), cfg()).unwrap().passed());

        let sq = FnObjective::new(1, |x| x[0] * x[0]);
        let b1 = BoxDomain::unit(1, 1.0).unwrap();
        let r = check_dr(&sq, &b1, cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        // a=0, b=0.5, k=0.5: gain 0.25 at a against 0.75 at b
        let gain_a = sq.value(&[0.5]).unwrap() - sq.value(&[0.0]).unwrap();
        let gain_b = sq.value(&[1.0]).unwrap() - sq.value(&[0.5]).unwrap();
        assert_eq!((gain_a, gain_b), (0.25, 0.75));

        let modular = FnObjective::new(2, |x| x[0] + 4.0 * x[1]);
        assert!(check_dr(&modular, &unit2(), cfg()).unwrap().passed());
    }

    #[test]
    fn coordinatewise_concave_examples() {
        let b1 = BoxDomain::unit(1, 1.0).unwrap();
        let root = FnObjective::new(1, |x| (x[0] + 0.01).sqrt());
        assert!(check_coordinatewise_concave(&root, &b1, cfg()).unwrap().passed());
        let sq = FnObjective::new(1, |x| x[0] * x[0]);
        assert_eq!(
            check_coordinatewise_concave(&sq, &b1, cfg()).unwrap().verdict,
            Verdict::Fail
        );
        let lin = FnObjective::new(2, |x| x[0] - x[1]);
        let r = check_coordinatewise_concave(&lin, &unit2(), cfg()).unwrap();
        assert!(r.passed() && r.worst_violation.abs() < 1e-12);
    }

    #[test]
    fn monotone_examples() {
        let inc = FnObjective::new(2, |x| x[0] + 2.0 * x[1]);
        assert!(check_monotone(&inc, &unit2(), cfg()).unwrap().passed());
        let dec = FnObjective::new(2, |x| -x[0]);
        let r = check_monotone(&dec, &unit2(), cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.is_some());
    }

    #[test]
    fn directional_examples() {
        let q = FnObjective::new(2, |x| -(x[0] * x[0]) - x[0] * x[1] - 2.0 * x[1] * x[1]);
        let r = check_directional_concave(&q, &[0.1, 0.2], &[0.5, 0.7], 11, DEFAULT_TOL).unwrap();
        assert!(r.passed());
        assert_eq!(r.trials, 55);

        let sq = FnObjective::new(1, |x| x[0] * x[0]);
        let r = check_directional_concave(&sq, &[0.0], &[1.0], 11, DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);

        let lin = FnObjective::new(2, |x| x[0] + x[1]);
        let r = check_directional_concave(&lin, &[0.0, 0.0], &[1.0, 1.0], 5, DEFAULT_TOL).unwrap();
        assert!(r.passed() && r.worst_violation.abs() < 1e-15);

        assert!(check_directional_concave(&lin, &[0.0, 0.0], &[1.0, -1.0], 5, DEFAULT_TOL).is_err());
    }

    #[test]
    fn hessian_examples() {
        let h = [[-1.0, -2.5, 0.5], [-2.5, 3.0, -0.25], [0.5, -0.25, 0.0]];
        let quad = FnObjective::new(3, move |x| {
            let mut v = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    v += 0.5 * h[i][j] * x[i] * x[j];
                }
            }
            v
        });
        let m = mixed_partials(&quad, &[0.5, 0.5, 0.5], 1e-3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((m[(i, j)] - h[i][j]).abs() < 1e-4);
                }
            }
        }
        let bx = BoxDomain::unit(3, 1.0).unwrap();
        let r = check_hessian_offdiag(&quad, &bx, &[0.5, 0.5, 0.5], 1e-3, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);

        let r = check_hessian_offdiag(&bilinear(), &unit2(), &[0.5, 0.5], 1e-3, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!((r.worst_violation - 1.0).abs() < 1e-6);

        let sep = FnObjective::new(2, |x| x[0].exp() + x[1].cos());
        let r = check_hessian_offdiag(&sep, &unit2(), &[0.5, 0.5], 1e-3, 1e-6).unwrap();
        assert!(r.passed() && r.worst_violation.abs() < 1e-6);

        assert!(check_hessian_offdiag(&sep, &unit2(), &[0.0, 0.5], 1e-3, 1e-6).is_err());
    }

    #[test]
    fn gradient_examples() {
        let quad = FnObjective::new(2, |x| -x[0] * x[0] - x[0] * x[1] + 3.0 * x[1])
            .with_gradient(|x| vec![-2.0 * x[0] - x[1], -x[0] + 3.0]);
        assert!(check_gradient(&quad, &[0.3, 0.6], 1e-5, 1e-5).unwrap().passed());

        let broken = FnObjective::new(2, |x| -x[0] * x[0] - x[0] * x[1] + 3.0 * x[1])
            .with_gradient(|x| vec![-2.0 * x[0] - x[1], -x[0] + 3.0 + 1.0]);
        let r = check_gradient(&broken, &[0.3, 0.6], 1e-5, 1e-5).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness.unwrap().coordinate, Some(1));

        let lin = FnObjective::new(2, |x| 2.0 * x[0] - x[1]).with_gradient(|_| vec![2.0, -1.0]);
        let r = check_gradient(&lin, &[0.25, 0.5], 1e-5, 1e-5).unwrap();
        assert!(r.passed() && r.worst_violation < 1e-10);

        let nograd = FnObjective::new(1, |x| x[0]).with_capabilities(Capabilities::default());
        assert!(matches!(
            check_gradient(&nograd, &[0.0], 1e-5, 1e-5),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn evaluation_failure_carries_inputs() {
        let bad = FnObjective::new(1, |x| if x[0] > 0.5 { f64::NAN } else { x[0] });
        let b1 = BoxDomain::unit(1, 1.0).unwrap();
        match check_monotone(&bad, &b1, cfg()) {
            Err(Error::Evaluation { points, .. }) => assert_eq!(points.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let f = FnObjective::new(3, |x| -x[0] * x[1] + 0.2 * x[1] * x[2] - x[2] * x[2]);
        let bx = BoxDomain::unit(3, 2.0).unwrap();
        let c = CheckConfig::new(300, DEFAULT_TOL, 42);
        assert_eq!(check_weak_dr(&f, &bx, c).unwrap(), check_weak_dr(&f, &bx, c).unwrap());
        assert_eq!(check_dr(&f, &bx, c).unwrap(), check_dr(&f, &bx, c).unwrap());
    }

    #[test]
    fn rejects_zero_trials() {
        assert!(check_submodular(&bilinear(), &unit2(), CheckConfig::new(0, 1e-9, 0)).is_err());
    }
}
