use crate::error::{Error, Result};
use crate::numerics::dense::{dense_solve, Mat};

/// Newton iteration settings. The defaults follow the stage-solver contract:
/// relative tolerance 1e-12, absolute 1e-14, at most 50 iterations, no line
/// search.
#[derive(Debug, Clone, Copy)]
pub struct NewtonCfg {
    pub tol_rel: f64,
    pub tol_abs: f64,
    pub max_iter: u32,
}

impl Default for NewtonCfg {
    fn default() -> Self {
        NewtonCfg { tol_rel: 1e-12, tol_abs: 1e-14, max_iter: 50 }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solve `residual(x) = 0` by Newton's method with a forward-difference
/// Jacobian (step sqrt(machine eps) scaled by the component magnitude).
///
/// Returns the root and the number of iterations taken. Convergence is
/// `||residual(x)|| <= max(tol_abs, tol_rel * ||x||)`.
pub fn newton_solve<F>(mut residual: F, x0: &[f64], cfg: &NewtonCfg) -> Result<(Vec<f64>, u32)>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut res = vec![0.0; n];
    let mut res_pert = vec![0.0; n];
    let sqrt_eps = f64::EPSILON.sqrt();

    residual(&x, &mut res);
    let mut rnorm = norm2(&res);
    for iter in 0..cfg.max_iter {
        if !rnorm.is_finite() {
            return Err(Error::MaxIterExceeded { max_iter: iter, residual: rnorm });
        }
        if rnorm <= cfg.tol_abs.max(cfg.tol_rel * norm2(&x)) {
            return Ok((x, iter));
        }
        // finite-difference Jacobian, column by column
        let mut jac = Mat::zeros(n, n);
        for j in 0..n {
            let step = sqrt_eps * (1.0 + x[j].abs());
            let saved = x[j];
            x[j] = saved + step;
            residual(&x, &mut res_pert);
            x[j] = saved;
            for i in 0..n {
                jac[(i, j)] = (res_pert[i] - res[i]) / step;
            }
        }
        let neg_res: Vec<f64> = res.iter().map(|r| -r).collect();
        let dx = dense_solve(jac, neg_res)?;
        for i in 0..n {
            x[i] += dx[i];
        }
        residual(&x, &mut res);
        rnorm = norm2(&res);
    }
    if rnorm <= cfg.tol_abs.max(cfg.tol_rel * norm2(&x)) {
        return Ok((x, cfg.max_iter));
    }
    Err(Error::MaxIterExceeded { max_iter: cfg.max_iter, residual: rnorm })
}
