use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::problems::NonlinearPartitionProblem;

const MAX_EIG_DIM: usize = 512;

/// Local Dahlquist reduction of a nonlinearly partitioned system: the
/// eigenvalues of the finite-difference Jacobians dF/du and dF/dv at (y, y).
///
/// The reduction to decoupled scalar (z1, z2) pairs is exact only when the
/// two Jacobians are simultaneously diagonalizable; otherwise the spectra are
/// a heuristic guide to the stiffness of each argument.
pub fn local_dahlquist(
    problem: &dyn NonlinearPartitionProblem,
    y: &[f64],
    fd_step: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let n = problem.dim();
    if n > MAX_EIG_DIM {
        return Err(Error::DimensionTooLarge(n, MAX_EIG_DIM));
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!("state {} vs dim {n}", y.len())));
    }
    let mut base = vec![0.0; n];
    problem.eval_f(y, y, &mut base);
    let mut j1 = vec![0.0; n * n]; // row-major
    let mut j2 = vec![0.0; n * n];
    let mut pert = y.to_vec();
    let mut out = vec![0.0; n];
    for col in 0..n {
        let step = fd_step * (1.0 + y[col].abs());
        pert[col] = y[col] + step;
        problem.eval_f(&pert, y, &mut out);
        for row in 0..n {
            j1[row * n + col] = (out[row] - base[row]) / step;
        }
        problem.eval_f(y, &pert, &mut out);
        for row in 0..n {
            j2[row * n + col] = (out[row] - base[row]) / step;
        }
        pert[col] = y[col];
    }
    let eig = |data: &[f64]| -> Vec<Complex64> {
        let m = nalgebra::DMatrix::from_row_slice(n, n, data);
        m.complex_eigenvalues().iter().copied().collect()
    };
    Ok((eig(&j1), eig(&j2)))
}
