//! Numerics for the Faddeev quantum dilogarithm, the classical dilogarithm,
//! the Bloch–Wigner function and octahedron volumes.

mod dilog;
mod faddeev;
mod fourier;
mod quad;

pub use dilog::{bloch_wigner, five_term_gap, li2, octahedron_volume, tet_shape, OctahedronVolume};
pub use faddeev::{
    classical_limit_check, faddeev_log_phi, faddeev_phi, faddeev_phi_integral, grid, inversion_check, log_theta,
    shift_check, theta, ClassicalLimitReport, DilogParams, IdentityCheck, LimitPoint, PHI_ZERO_SIGN,
};
pub use fourier::{
    fourier_closed_forms, fourier_integral, fourier_transform_check, r_infinite_element, r_infinite_quadrature,
    ContourIntegral, FourierReport, RInfiniteParams,
};
