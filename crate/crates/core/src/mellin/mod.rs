//! Special functions and the inverse-Mellin kernels.

pub mod bessel;
pub mod gamma;
pub mod kernel;
pub mod residue;

pub use bessel::{bessel_k0, k0_log_bracket};
pub use gamma::{digamma, gamma_complex, gamma_real, log_gamma_complex, EULER_GAMMA};
pub use kernel::{
    ln_z_tilde, saddle_abscissa, z_asymptotic_check, z_closed_form, z_line_integral,
    z_tilde_closed_form, AsymptoticReport, AsymptoticRow, KernelEvaluator, KernelMethod,
    KernelSpec, KernelValue, LineIntegral,
};
pub use residue::{
    c_constants_numeric, c_constants_series, residue_at_zero, residue_calibrate,
    residue_calibrate_with, MatchedPower, ResidueConstants,
};
