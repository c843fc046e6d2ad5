//! Two-parameter linear stability analysis on the partitioned Dahlquist
//! equation y' = lambda1 y + lambda2 y: the stability function R(z1, z2) of
//! the underlying ARK method, its stiff limits, the coupled stiff-z2
//! diagnostics beta_inf(eps) and gamma(theta), region slices, and the local
//! Dahlquist linearization of nonlinear problems.

mod local;
mod model;
mod slices;

pub use local::local_dahlquist;
pub use model::{
    beta_infinity, coupled_stiff_z2_stable, gamma_series, is_a_stable_in_limit,
    is_l_stable_in_limit, stability_value, stability_value_poly, stiff_limit, stiff_limit_form,
    CosineSeries, EpsPolynomial, StabilityModel, StiffLimit, StiffVariable,
};
pub use slices::{region_slice, wedge_slice, GridSpec, RegionSlice, SliceKind};
