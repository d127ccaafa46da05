//! Special functions and band-limited transforms on S² and SO(3).
//!
//! Conventions:
//!
//! - Spherical harmonics are the orthonormal complex basis
//!   Y_n^k(Φ(φ, θ)) = P̄_n^k(cos θ) e^{ikφ} with the Condon–Shortley phase, so
//!   Y_n^{−k} = (−1)^k conj(Y_n^k) and real functions have coefficients with
//!   c_{n,−k} = (−1)^k conj(c_{n,k}).
//! - Wigner functions are D_n^{k,j}(R_z(α)R_y(β)R_z(γ)) = e^{−ikα} d_n^{k,j}(cos β) e^{−ijγ}
//!   and D̃ = √((2n+1)/(8π²)) D is orthonormal for the unnormalized Haar
//!   measure of total mass 8π².
//! - Quadratures are products of Gauss–Legendre rules in cos θ (or cos β)
//!   with uniform rules in the azimuthal angles. Coefficients are computed by
//!   direct summation, O(D⁴) for a degree-D transform on S².

mod legendre;
mod quadrature;
mod so3;
mod sph;
mod svd;
mod wigner;

pub use legendre::{harmonic_dim, legendre, legendre_normalized, legendre_normalized_table, sphere_surface};
pub use quadrature::{gauss_legendre, SphereGrid, TGrid};
pub use so3::{
    so3_forward, so3_radon_eigenvalue, so3_radon_forward_svd, so3_svd_singular_value, So3Coeffs, So3Grid,
};
pub use sph::{sht_forward, sht_inverse, sph_harmonic, SphereCoeffs};
pub use svd::{degree_fields, slice_svd_forward, slice_svd_forward_grid, slice_svd_pinv, slice_svd_singular_value};
pub use wigner::{wigner_D, wigner_D_normalized, wigner_d};


