//! Quadratic objectives `½ xᵀHx + hᵀx + c` and the random NQP generators.

use nalgebra::DMatrix;
use rand::Rng as _;

use crate::error::{check_dim, Error, Result};
use crate::linalg::positive_eigenvalue_count;
use crate::model::{BoxDomain, Capabilities, Objective, PolytopeDomain};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticInstance {
    hess: DMatrix<f64>,
    lin: Vec<f64>,
    c: f64,
    monotone: bool,
}

impl QuadraticInstance {
    /// `hess` must be square and symmetric. The monotone flag starts unset;
    /// it depends on the domain, so only a generator that knows the domain
    /// may declare it.
    pub fn new(hess: DMatrix<f64>, lin: Vec<f64>, c: f64) -> Result<Self> {
        let n = lin.len();
        check_dim(n, hess.nrows())?;
        check_dim(n, hess.ncols())?;
        if !hess.iter().chain(&lin).all(|v| v.is_finite()) || !c.is_finite() {
            return Err(Error::InvalidInput("quadratic coefficients must be finite".into()));
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (hess[(i, j)], hess[(j, i)]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "Hessian not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(QuadraticInstance {
            hess,
            lin,
            c,
            monotone: false,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], lin: Vec<f64>, c: f64) -> Result<Self> {
        let n = lin.len();
        for r in rows {
            check_dim(n, r.len())?;
        }
        check_dim(n, rows.len())?;
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]), lin, c)
    }

    pub fn with_monotone(mut self, monotone: bool) -> Self {
        self.monotone = monotone;
        self
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.hess
    }

    pub fn linear(&self) -> &[f64] {
        &self.lin
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.lin.len()
    }

    /// Submodular iff every off-diagonal Hessian entry is non-positive.
    pub fn is_submodular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.hess[(i, j)] <= 0.0))
    }

    /// DR-submodular iff every Hessian entry is non-positive.
    pub fn is_dr_submodular(&self) -> bool {
        self.hess.iter().all(|&v| v <= 0.0)
    }

    fn hx(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            let col = self.hess.column(j);
            for i in 0..n {
                out[i] += col[i] * xj;
            }
        }
        out
    }

    /// Value `½xᵀHx + hᵀx + c` and gradient `Hx + h`.
    pub fn eval_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        check_dim(self.dim(), x.len())?;
        let mut g = self.hx(x);
        let mut v = self.c;
        for i in 0..x.len() {
            v += x[i] * (0.5 * g[i] + self.lin[i]);
            g[i] += self.lin[i];
        }
        Ok((v, g))
    }
}

impl Objective for QuadraticInstance {
    fn dim(&self) -> usize {
        self.lin.len()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let n = self.dim();
        let mut v = self.c;
        for j in 0..n {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            let col = self.hess.column(j);
            let mut s = 0.0;
            for i in 0..n {
                s += col[i] * x[i];
            }
            v += xj * (0.5 * s + self.lin[j]);
        }
        Ok(v)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.eval_grad(x).map(|(_, g)| g)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            monotone: self.monotone,
            dr_submodular: self.is_dr_submodular(),
            submodular: self.is_submodular(),
            differentiable: true,
        }
    }

    fn coordinate_quadratic(&self, x: &[f64], j: usize) -> Option<(f64, f64)> {
        let hjj = self.hess[(j, j)];
        let col = self.hess.column(j);
        let cross: f64 = (0..self.dim()).filter(|&i| i != j).map(|i| col[i] * x[i]).sum();
        Some((0.5 * hjj, cross + self.lin[j]))
    }
}

/// Monotone DR-submodular NQP on a random down-closed polytope.
///
/// `H` has i.i.d. entries in `[-100, 0]` (then symmetrized), `A` entries in
/// `[0, 1]`, `b = 1`, `ū = 1`, `h = -Hᵀū` and `c = 0`.
pub fn gen_monotone_nqp(n: usize, m: usize, seed: u64) -> Result<(QuadraticInstance, PolytopeDomain)> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("n and m must be at least 1".into()));
    }
    let mut rng = rng::seeded(seed);
    let raw = DMatrix::from_fn(n, n, |_, _| -100.0 * rng.random::<f64>());
    let hess = (&raw + raw.transpose()) * 0.5;
    let a = DMatrix::from_fn(m, n, |_, _| rng.random::<f64>());
    let upper = vec![1.0; n];
    let lin: Vec<f64> = (0..n)
        .map(|j| -(0..n).map(|i| hess[(i, j)] * upper[i]).sum::<f64>())
        .collect();
    let inst = QuadraticInstance::new(hess, lin, 0.0)?.with_monotone(true);
    let poly = PolytopeDomain::new(a, vec![1.0; m], upper)?;
    Ok((inst, poly))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonmonotoneNqpParams {
    pub n: usize,
    /// Common upper bound `ū_i` of the box `[0, ū]`.
    pub upper: f64,
    /// Probability that an off-diagonal pair is nonzero.
    pub density: f64,
}

impl NonmonotoneNqpParams {
    pub fn new(n: usize) -> Self {
        NonmonotoneNqpParams {
            n,
            upper: 1.0,
            density: 1.0,
        }
    }
}

const MAX_DIAGONAL_DRAWS: u64 = 10_000;

/// Non-monotone submodular NQP on the box `[0, 1]^n`.
pub fn gen_nonmonotone_nqp(n: usize, seed: u64) -> Result<(QuadraticInstance, BoxDomain)> {
    gen_nonmonotone_nqp_with(NonmonotoneNqpParams::new(n), seed)
}

/// Off-diagonals i.i.d. in `[-10, 0]` (kept with probability `density`),
/// diagonal i.i.d. in `[-10, 10]` redrawn until roughly half of the
/// eigenvalues are positive, `h = -0.2 Hᵀū`, and the smallest `c >= 0` with
/// `f(0) + f(ū) >= 0`.
pub fn gen_nonmonotone_nqp_with(params: NonmonotoneNqpParams, seed: u64) -> Result<(QuadraticInstance, BoxDomain)> {
    let NonmonotoneNqpParams { n, upper, density } = params;
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if !(upper > 0.0 && upper.is_finite()) || !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidInput(format!(
            "need upper > 0 and density in [0, 1], got {upper} and {density}"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let keep = rng.random::<f64>() < density;
            let v = -10.0 * rng.random::<f64>();
            if keep {
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
    }

    let (lo_ok, hi_ok) = positive_count_window(n);
    let mut best: Option<(usize, Vec<f64>)> = None;
    for attempt in 0..MAX_DIAGONAL_DRAWS {
        let mut drng = rng::stream(seed, attempt + 1);
        let diag: Vec<f64> = (0..n).map(|_| drng.random_range(-10.0..=10.0)).collect();
        for (i, &d) in diag.iter().enumerate() {
            hess[(i, i)] = d;
        }
        let pos = positive_eigenvalue_count(&hess);
        if (lo_ok..=hi_ok).contains(&pos) {
            best = None;
            break;
        }
        let dist = (2 * pos).abs_diff(n);
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, diag));
        }
    }
    if let Some((_, diag)) = best {
        for (i, &d) in diag.iter().enumerate() {
            hess[(i, i)] = d;
        }
    }

    let ubar = vec![upper; n];
    let lin: Vec<f64> = (0..n)
        .map(|j| -0.2 * (0..n).map(|i| hess[(i, j)] * ubar[i]).sum::<f64>())
        .collect();
    let inst = QuadraticInstance::new(hess, lin, 0.0)?;
    let at_upper = inst.value(&ubar)?;
    let mut inst = QuadraticInstance {
        c: (-0.5 * at_upper).max(0.0),
        ..inst
    };
    // rounding can leave f(0) + f(ū) a few ulps below zero
    while inst.value(&vec![0.0; n])? + inst.value(&ubar)? < 0.0 {
        inst.c = inst.c.next_up();
    }
    Ok((inst, BoxDomain::new(vec![0.0; n], ubar)?))
}

/// Accepted range for the number of positive eigenvalues: 40% to 60% of `n`,
/// widened to `{⌊n/2⌋, ⌈n/2⌉}` when that window holds no integer.
pub(crate) fn positive_count_window(n: usize) -> (usize, usize) {
    let lo = (2 * n).div_ceil(5);
    let hi = (3 * n) / 5;
    if lo <= hi {
        (lo, hi)
    } else {
        (n / 2, n.div_ceil(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let q = QuadraticInstance::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]], vec![1.0, 1.0], 0.0).unwrap();
        let (v, g) = q.eval_grad(&[1.0, 1.0]).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(g, vec![0.0, 0.0]);

        let q = QuadraticInstance::from_rows(&[vec![-2.0, 0.0], vec![0.0, -2.0]], vec![0.0, 0.0], 0.0).unwrap();
        let (v, g) = q.eval_grad(&[1.0, 1.0]).unwrap();
        assert_eq!(v, -2.0);
        assert_eq!(g, vec![-2.0, -2.0]);
    }

    #[test]
    fn zero_input_gives_constant_and_linear_term() {
        let q = QuadraticInstance::from_rows(&[vec![3.0, -1.0], vec![-1.0, 5.0]], vec![0.25, -7.0], 4.5).unwrap();
        let (v, g) = q.eval_grad(&[0.0, 0.0]).unwrap();
        assert_eq!(v, 4.5);
        assert_eq!(g, vec![0.25, -7.0]);
        assert_eq!(q.value(&[0.0, 0.0]).unwrap(), 4.5);
    }

    #[test]
    fn value_matches_eval_grad() {
        let (q, _) = gen_nonmonotone_nqp(6, 11).unwrap();
        let x = [0.1, 0.9, 0.3, 0.0, 0.5, 1.0];
        let (v, _) = q.eval_grad(&x).unwrap();
        assert!((q.value(&x).unwrap() - v).abs() < 1e-12 * v.abs().max(1.0));
    }

    #[test]
    fn rejects_asymmetric_and_mismatched() {
        assert!(QuadraticInstance::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]], vec![0.0; 2], 0.0).is_err());
        assert!(QuadraticInstance::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]], vec![0.0; 3], 0.0).is_err());
        let q = QuadraticInstance::from_rows(&[vec![0.0]], vec![0.0], 0.0).unwrap();
        assert!(q.value(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn flags_follow_signs() {
        let q = QuadraticInstance::from_rows(&[vec![1.0, -1.0], vec![-1.0, 0.0]], vec![0.0; 2], 0.0).unwrap();
        let caps = q.capabilities();
        assert!(caps.submodular && !caps.dr_submodular && !caps.monotone && caps.differentiable);
    }

    #[test]
    fn monotone_generator_small() {
        let (q, p) = gen_monotone_nqp(2, 1, 7).unwrap();
        let h = q.hessian();
        assert!(h[(0, 1)] <= 0.0 && h[(1, 0)] <= 0.0);
        let g0 = q.gradient(&[0.0, 0.0]).unwrap();
        assert_eq!(g0, q.linear());
        assert!(g0.iter().all(|&v| v >= 0.0));
        let caps = q.capabilities();
        assert!(caps.monotone && caps.dr_submodular && caps.submodular);
        assert_eq!(p.b(), &[1.0]);
        assert_eq!(p.upper(), &[1.0, 1.0]);
        assert_eq!(q.constant(), 0.0);
    }

    #[test]
    fn monotone_generator_deterministic() {
        let a = gen_monotone_nqp(100, 50, 1).unwrap();
        let b = gen_monotone_nqp(100, 50, 1).unwrap();
        assert_eq!(a, b);
        let c = gen_monotone_nqp(100, 50, 2).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn nonmonotone_generator_contract() {
        for seed in 0..20 {
            for n in [1, 3, 4, 10, 60] {
                let (q, bx) = gen_nonmonotone_nqp(n, seed).unwrap();
                let f0 = q.value(&vec![0.0; n]).unwrap();
                let fu = q.value(bx.upper()).unwrap();
                assert!(f0 + fu >= 0.0, "seed {seed} n {n}: {f0} + {fu}");
                assert!(q.is_submodular());
                let pos = positive_eigenvalue_count(q.hessian());
                let (lo, hi) = positive_count_window(n);
                assert!((lo..=hi).contains(&pos), "n {n} pos {pos}");
            }
        }
    }

    #[test]
    fn nonmonotone_linear_term() {
        let params = NonmonotoneNqpParams {
            n: 5,
            upper: 2.0,
            density: 0.5,
        };
        let (q, bx) = gen_nonmonotone_nqp_with(params, 3).unwrap();
        assert_eq!(bx.upper(), &[2.0; 5]);
        let h = q.hessian();
        for j in 0..5 {
            let expect = -0.2 * (0..5).map(|i| h[(i, j)] * 2.0).sum::<f64>();
            assert!((q.linear()[j] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn window_cases() {
        assert_eq!(positive_count_window(4), (2, 2));
        assert_eq!(positive_count_window(10), (4, 6));
        assert_eq!(positive_count_window(1), (0, 1));
        assert_eq!(positive_count_window(3), (1, 2));
    }

    #[test]
    fn coordinate_quadratic_is_exact() {
        let (q, _) = gen_nonmonotone_nqp(4, 5).unwrap();
        let x = [0.2, 0.4, 0.6, 0.8];
        let (a, b) = q.coordinate_quadratic(&x, 2).unwrap();
        let base = {
            let mut y = x;
            y[2] = 0.0;
            q.value(&y).unwrap()
        };
        for z in [0.0, 0.3, 1.0] {
            let mut y = x;
            y[2] = z;
            assert!((q.value(&y).unwrap() - (base + a * z * z + b * z)).abs() < 1e-10);
        }
    }
}
