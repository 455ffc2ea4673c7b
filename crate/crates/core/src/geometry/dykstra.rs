use crate::error::{check_dim, Error, Result};
use crate::model::{Point, PolytopeDomain};

/// Euclidean projection of `x` onto `p` by Dykstra's method over the box and
/// each halfspace row.
///
/// Stops once a full cycle changes neither the iterate nor any correction
/// vector by more than `tol / 100` and the result is feasible within `tol`.
pub fn project_polytope(p: &PolytopeDomain, x: &[f64], tol: f64, max_iter: usize) -> Result<Point> {
    let n = p.dim();
    let m = p.n_rows();
    check_dim(n, x.len())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("projection target must be finite".into()));
    }
    let rows: Vec<(Vec<f64>, f64, f64)> = (0..m)
        .map(|r| {
            let a: Vec<f64> = (0..n).map(|j| p.a()[(r, j)]).collect();
            let norm2 = a.iter().map(|v| v * v).sum();
            (a, p.b()[r], norm2)
        })
        .collect();

    let mut cur = x.to_vec();
    // one correction vector per set: box first, then each row
    let mut corr = vec![vec![0.0; n]; m + 1];
    let mut y = vec![0.0; n];
    let mut residual = p.residual(&cur);
    for _ in 0..max_iter.max(1) {
        let start = cur.clone();
        let mut corr_change = 0.0f64;

        for j in 0..n {
            y[j] = cur[j] + corr[0][j];
            cur[j] = y[j].clamp(0.0, p.upper()[j]);
            let c = y[j] - cur[j];
            corr_change = corr_change.max((c - corr[0][j]).abs());
            corr[0][j] = c;
        }
        for (r, (a, b, norm2)) in rows.iter().enumerate() {
            for j in 0..n {
                y[j] = cur[j] + corr[r + 1][j];
            }
            let excess = a.iter().zip(&y).map(|(ai, yi)| ai * yi).sum::<f64>() - b;
            let scale = if excess > 0.0 && *norm2 > 0.0 {
                excess / norm2
            } else {
                0.0
            };
            for j in 0..n {
                cur[j] = y[j] - scale * a[j];
                let c = y[j] - cur[j];
                corr_change = corr_change.max((c - corr[r + 1][j]).abs());
                corr[r + 1][j] = c;
            }
        }

        let moved = start.iter().zip(&cur).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        residual = p.residual(&cur);
        if moved.max(corr_change) <= tol * 1e-2 && residual <= tol {
            return Ok(Point::from(cur));
        }
    }
    Err(Error::ProjectionNotConverged { residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_row(b: f64) -> PolytopeDomain {
        PolytopeDomain::from_rows(&[vec![1.0, 1.0]], vec![b], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn box_clamp_when_row_slack() {
        let q = project_polytope(&unit_row(2.0), &[2.0, 0.0], 1e-10, 10_000).unwrap();
        assert!((q[0] - 1.0).abs() <= 1e-10 && q[1].abs() <= 1e-10);
    }

    #[test]
    fn symmetric_halfspace() {
        let q = project_polytope(&unit_row(1.0), &[1.0, 1.0], 1e-10, 10_000).unwrap();
        assert!((q[0] - 0.5).abs() <= 1e-10 && (q[1] - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn feasible_fixed() {
        let x = [0.2, 0.3];
        let q = project_polytope(&unit_row(1.0), &x, 1e-12, 100).unwrap();
        assert_eq!(q.as_slice(), &x);
    }

    #[test]
    fn reports_non_convergence() {
        // two nearly parallel rows slow Dykstra down
        let p = PolytopeDomain::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.001]], vec![1.0, 1.0], vec![5.0, 5.0]).unwrap();
        let err = project_polytope(&p, &[5.0, 0.0], 1e-14, 2).unwrap_err();
        assert!(matches!(err, Error::ProjectionNotConverged { .. }));
    }
}
