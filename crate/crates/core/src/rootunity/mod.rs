//! Root-of-unity representations: clock and shift matrices, the cyclic
//! dilogarithm family d, w, λ, the generic-κ R-matrix and its δ → 0 limit,
//! and the Kashaev matrix R^K.

mod fourier;
mod functions;
mod matrices;

pub use fourier::{
    fourier_w_check, fourier_w_gap, omega_identity_gap, sample_admissible, structural_gap, w_inverse_gap,
    FourierWReport, IdentityFamily,
};
pub use functions::{
    d_fn, delta_fn, lambda_at_one, lambda_fn, limit_qy_check, principal_pow, w_fn, w_multival, QyForm,
    QyLimitReport, QyPoint,
};
pub use matrices::{
    bracket, build_r_matrix, build_r_matrix_w, build_rk, build_rk_with_phase, build_y_rep, clock_shift,
    delta_limit_study, gauge_compare, matrix_pairs, pochhammer_identity_deviation, theta_indicator,
    verify_braid_matrix, BraidMatrixReport, BranchPolicy, DeltaLimitReport, DeltaPoint, GaugeReport, KappaParams,
    YRep,
};
