//! Shared numerical kernels: dense and banded LU, complex determinants,
//! Newton iteration, and the log-log slope fit used by convergence studies.
//!
//! Everything here is hand-rolled and deterministic; sizes are small (method
//! tableaux have at most a handful of stages, the Burgers grids are banded).

mod banded;
mod dense;
mod fit;
mod newton;

pub use banded::{banded_solve, tridiagonal, BandedLu, BandedMatrix};
pub use dense::{complex_det, complex_solve, dense_solve, DenseComplexMatrix, Mat};
pub use fit::fit_loglog_slope;
pub use newton::{newton_solve, NewtonCfg};
