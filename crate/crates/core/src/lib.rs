//! Dedekind zeta data for `Q` and quadratic fields, the inverse-Mellin kernels
//! `Z_{r1,r2}`, and numerical checks of the modular relation between
//! `b_n`-weighted kernel sums and the non-trivial zeros of `ζ_K`, together
//! with the Riesz-type function `P_{r1,r2}(y)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coefficients;
pub mod error;
pub mod field;
pub mod lfunction;
pub mod mellin;
pub mod modular;
pub mod numeric;
pub mod report;
pub mod riesz;
pub mod summation;

pub use coefficients::CoefficientTable;
pub use error::{Error, Result};
pub use field::{class_number_data, make_field, parse_field, FieldDescriptor, FieldInvariants, FieldSummary};
pub use num_complex::Complex64;
pub use summation::Precision;
