//! Nonlinearly partitioned Runge-Kutta (NPRK) time integrators.
//!
//! NPRK methods solve initial value problems written as y' = F(y, y), where
//! the two arguments of F may be treated with different degrees of
//! implicitness. The crate provides:
//!
//! * the method catalog (IMEX and IMIM methods of orders 1-3) and the
//!   structural transformations between tensor, sequential, and PRK forms
//!   ([`tableau`]),
//! * order-condition verification and third-order residuals ([`order`]),
//! * two-parameter linear stability analysis: R(z1, z2), stiff limits,
//!   the coupled stiff-z2 diagnostics beta_inf and gamma, and region slices
//!   ([`stability`]),
//! * time-stepping drivers and convergence studies ([`integrator`]),
//! * ready-made problems: the partitioned Dahlquist equation and viscous
//!   Burgers in two nonlinear partitions ([`problems`]).
//!
//! Each major capability has a runnable demonstration under `examples/`; the
//! thin `nprk` binary exposes the same functionality as subcommands.

pub mod error;
pub mod integrator;
pub mod numerics;
pub mod order;
pub mod problems;
pub mod stability;
pub mod tableau;

pub use error::{Error, Result};
