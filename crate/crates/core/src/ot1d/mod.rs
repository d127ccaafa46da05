//! One-dimensional optimal transport.
//!
//! A [`Measure1D`] is either a finite weighted point set or a density sampled
//! on a grid of nodes. Grid densities are read as piecewise uniform per cell
//! with trapezoidal cell masses, so the CDF is piecewise linear and the
//! quantile function inverts it exactly.
//!
//! Wasserstein distances are computed by sweeping the merged breakpoints of
//! the two quantile functions. On each merged piece both quantiles are
//! affine in the level r, so the integral of |F_μ⁻¹ − F_ν⁻¹|^p is evaluated
//! in closed form and the result is exact for every combination of discrete
//! and grid measures.

mod cdt;
mod circle;
mod measure;
mod wasserstein;

pub use cdt::{barycenter_1d, barycenter_density, cdt, cdt_inverse, CdtProfile};
pub use circle::{circle_transport, wasserstein_circle, CircleMeasure, CirclePlan};
pub use measure::Measure1D;
pub use wasserstein::{sorted_matching_pow, wasserstein_1d, wasserstein_1d_pow};

pub(crate) use circle::{circle_cost_pow, CircleSolver};
pub(crate) use wasserstein::{check_p, pow};
