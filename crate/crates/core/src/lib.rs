//! Sliced optimal transport on spheres and the rotation group SO(3).
//!
//! The crate is organized bottom-up:
//!
//! - [`manifold`]: points, tangent vectors, exponential maps and sampling on
//!   S^{d-1} and SO(3).
//! - [`ot1d`]: optimal transport on an interval and on the circle, the
//!   cumulative distribution transform and 1D barycenters.
//! - [`slicing`]: weighted point clouds and the slicing maps that push them
//!   to one dimension.
//! - [`harmonics`]: Legendre polynomials, spherical harmonics, Wigner
//!   functions and the singular value decompositions of the slice and Radon
//!   transforms.
//! - [`distances`]: Monte Carlo sliced Wasserstein estimators.
//! - [`barycenters`]: free-support, fixed-support and Radon barycenters.
//! - [`datasets`], [`io`], [`experiment`], [`bench`], [`plot_job`]:
//!   experiment inputs, file schemas, run reports, the timing harness and
//!   figure jobs behind the command-line tools.

pub mod barycenters;
pub mod bench;
pub mod datasets;
pub mod distances;
mod error;
pub mod experiment;
pub mod harmonics;
pub mod io;
pub mod manifold;
pub mod ot1d;
pub mod par;
pub mod plot_job;
pub mod rng;
pub mod slicing;

pub use error::{Error, Result};
