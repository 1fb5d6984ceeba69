//! `ζ`, `L(s, χ)`, `ζ_K`, `Λ_K` and their critical-line zeros.

pub mod expansion;
pub mod zeros;
pub mod zeta;

pub use expansion::{expansion_data, ExpansionData};
pub use zeros::{
    argument_principle_count, find_zeros, rotated, zeta_k_prime_at, Factor, ZeroList, ZeroRecord, ZeroScanOptions,
    ZetaKPrime,
};
pub use zeta::{completed_lambda, dedekind_eval, hurwitz_zeta, l_eval, zeta_eval};
