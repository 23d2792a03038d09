use crate::error::{Error, Result};
use crate::tolerance::{FD_STEP, NEWTON_MAX_HALVINGS, NEWTON_MAX_ITER, RESIDUAL_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    pub fd_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: RESIDUAL_TOL,
            max_iter: NEWTON_MAX_ITER,
            max_halvings: NEWTON_MAX_HALVINGS,
            fd_step: FD_STEP,
        }
    }
}

impl NewtonOptions {
    pub fn with_tol(tol: f64) -> Self {
        NewtonOptions { tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub x: Vec<f64>,
    pub residual: Vec<f64>,
    pub iterations: usize,
    pub halvings: usize,
}

impl NewtonReport {
    pub fn residual_norm(&self) -> f64 {
        inf_norm(&self.residual)
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Central-difference Jacobian; falls back to a one-sided difference when one
/// of the probes leaves the domain of `f`.
pub fn fd_jacobian<F>(f: &mut F, x: &[f64], fx: &[f64], fd_step: f64) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let n = x.len();
    let mut jac = vec![vec![0.0; n]; fx.len()];
    let mut probe = x.to_vec();
    for j in 0..n {
        let h = fd_step * x[j].abs().max(1.0);
        probe[j] = x[j] + h;
        let plus = f(&probe);
        probe[j] = x[j] - h;
        let minus = f(&probe);
        probe[j] = x[j];
        let column: Vec<f64> = match (plus, minus) {
            (Ok(p), Ok(m)) => p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect(),
            (Ok(p), Err(_)) => p.iter().zip(fx).map(|(a, b)| (a - b) / h).collect(),
            (Err(_), Ok(m)) => fx.iter().zip(&m).map(|(a, b)| (a - b) / h).collect(),
            (Err(e), Err(_)) => return Err(e),
        };
        for (i, v) in column.into_iter().enumerate() {
            jac[i][j] = v;
        }
    }
    Ok(jac)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Damped Newton iteration with a finite-difference Jacobian.
///
/// A step is halved until the residual norm decreases and the trial point
/// stays inside the domain of `f` (errors from `f` count as leaving it).
pub fn newton_solve<F>(mut f: F, guess: &[f64], opts: &NewtonOptions) -> Result<NewtonReport>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut x = guess.to_vec();
    let mut fx = f(&x)?;
    let mut norm = inf_norm(&fx);
    let mut halvings = 0;
    for iter in 0..opts.max_iter {
        if norm < opts.tol {
            return Ok(NewtonReport { x, residual: fx, iterations: iter, halvings });
        }
        let jac = fd_jacobian(&mut f, &x, &fx, opts.fd_step)?;
        let rhs: Vec<f64> = fx.iter().map(|v| -v).collect();
        let dx = solve_linear(jac, rhs).ok_or(Error::NoConvergence { iterations: iter, residual: norm })?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + lambda * d).collect();
            if let Ok(ft) = f(&trial) {
                let nt = inf_norm(&ft);
                if nt.is_finite() && nt < norm {
                    x = trial;
                    fx = ft;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
            halvings += 1;
        }
        if !accepted {
            return Err(Error::NoConvergence { iterations: iter, residual: norm });
        }
    }
    if norm < opts.tol {
        Ok(NewtonReport { x, residual: fx, iterations: opts.max_iter, halvings })
    } else {
        Err(Error::NoConvergence { iterations: opts.max_iter, residual: norm })
    }
}

/// Bisection on a sign change, used where a bracket is known in advance.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidArgument(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol * (1.0 + mid.abs()) || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_in_one_step() {
        let a = 2.75;
        let r = newton_solve(|x| Ok(vec![x[0] - a]), &[a + 0.3], &NewtonOptions::default()).unwrap();
        assert!((r.x[0] - a).abs() < 1e-14);
        // one exact step, plus at most one more to clean up finite-difference noise
        assert!(r.iterations <= 2);
    }

    #[test]
    fn two_dimensional_system() {
        // circle meets line
        let f = |x: &[f64]| Ok(vec![x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1]]);
        let r = newton_solve(f, &[1.0, 2.0], &NewtonOptions::default()).unwrap();
        let s = 2f64.sqrt();
        assert!((r.x[0] - s).abs() < 1e-12 && (r.x[1] - s).abs() < 1e-12);
    }

    #[test]
    fn damping_respects_domain() {
        // ln x - 1 with a first step that would land at negative x
        let f = |x: &[f64]| {
            if x[0] <= 0.0 {
                Err(Error::ConstraintViolation("x must be positive".into()))
            } else {
                Ok(vec![x[0].ln() + 3.0])
            }
        };
        let r = newton_solve(f, &[5.0], &NewtonOptions::default()).unwrap();
        assert!((r.x[0] - (-3f64).exp()).abs() < 1e-12);
        assert!(r.halvings > 0);
    }

    #[test]
    fn reports_failure() {
        let f = |x: &[f64]| Ok(vec![x[0] * x[0] + 1.0]);
        assert!(matches!(
            newton_solve(f, &[0.5], &NewtonOptions::default()),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn bisection_bracket() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, 0.0, 1.0, 1e-12).is_err());
    }
}
