//! Local data of `ζ_K` at `s = 0` and `s = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{class_number_data, FieldDescriptor, FieldSummary, L1_DEFAULT_BUDGET};
use crate::lfunction::zeta::dedekind_unchecked;
use crate::numeric::{cauchy_taylor, richardson_limit};

/// Largest accepted extrapolation residual.
pub const EXPANSION_TOL: f64 = 1e-6;

/// Radius of the sampling ring for the Taylor and Laurent arrays.
pub const RING_RADIUS: f64 = 0.25;

/// Number of samples on the ring.
pub const RING_POINTS: usize = 64;

/// Extra orders stored beyond `r`, enough for the Leibniz expansions.
const EXTRA_ORDERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionData {
    pub field: FieldSummary,
    pub r: u32,
    /// `lim_{s→0} ζ_K(s) / s^r`: `ζ_K(0)` when `r = 0`, `ζ_K'(0)` when `r = 1`.
    #[serde(rename = "zeta_K_prime_at_0")]
    pub leading_at_0: f64,
    pub leading_at_0_err: f64,
    /// `lim_{s→1} (s - 1) ζ_K(s)`.
    pub residue_at_1: f64,
    pub residue_at_1_err: f64,
    /// Taylor coefficients of `ζ_K` at `0`, orders `0..=r + 4`.
    pub taylor_at_0: Vec<f64>,
    /// Taylor coefficients of `(s - 1) ζ_K(s)` at `1`, orders `0..=r + 4`.
    pub laurent_at_1: Vec<f64>,
    /// `-hR / w` from the class number formula (quadratic fields).
    pub class_number_leading: Option<f64>,
    /// Relative gap between `leading_at_0` and `class_number_leading`.
    pub class_number_gap: Option<f64>,
}

impl ExpansionData {
    /// Taylor coefficients of `ζ_K(s) / s^r` at `0`.
    pub fn reduced_taylor_at_0(&self) -> &[f64] {
        &self.taylor_at_0[self.r as usize..]
    }
}

pub fn expansion_data(field: &FieldDescriptor) -> Result<ExpansionData> {
    let r = field.r();
    let zk = |s: f64| dedekind_unchecked(Complex64::new(s, 0.0), field).re;

    let rp = r as i32;
    let (leading_at_0, leading_at_0_err) = richardson_limit(
        |h| 0.5 * (zk(h) / h.powi(rp) + zk(-h) / (-h).powi(rp)),
        1e-2,
        6,
    );
    let (residue_at_1, residue_at_1_err) = richardson_limit(|h| 0.5 * h * (zk(1.0 + h) - zk(1.0 - h)), 1e-2, 6);
    for (what, v, err) in [
        ("zeta_K(s)/s^r at 0", leading_at_0, leading_at_0_err),
        ("(s-1) zeta_K(s) at 1", residue_at_1, residue_at_1_err),
    ] {
        if !(err <= EXPANSION_TOL * v.abs().max(1.0)) {
            return Err(Error::Extrapolation {
                what,
                residual: err,
                tolerance: EXPANSION_TOL,
            });
        }
    }

    let max_order = r as usize + EXTRA_ORDERS;
    let one = Complex64::new(1.0, 0.0);
    let taylor_at_0 = cauchy_taylor(
        |s| dedekind_unchecked(s, field),
        Complex64::new(0.0, 0.0),
        RING_RADIUS,
        RING_POINTS,
        max_order,
    )
    .into_iter()
    .map(|c| c.re)
    .collect();
    let laurent_at_1 = cauchy_taylor(|s| (s - one) * dedekind_unchecked(s, field), one, RING_RADIUS, RING_POINTS, max_order)
        .into_iter()
        .map(|c| c.re)
        .collect();

    let (summary, class_number_leading, class_number_gap) = if field.is_rational() {
        (FieldSummary::new(field, None), None, None)
    } else {
        let inv = class_number_data(field, L1_DEFAULT_BUDGET)?;
        let expect = -inv.h_r / field.w() as f64;
        let gap = (leading_at_0 - expect).abs() / expect.abs();
        if gap > EXPANSION_TOL {
            return Err(Error::RouteDisagreement {
                what: "zeta_K leading coefficient at 0 vs -hR/w",
                a: leading_at_0,
                b: expect,
                gap,
                tolerance: EXPANSION_TOL,
            });
        }
        (FieldSummary::new(field, Some(&inv)), Some(expect), Some(gap))
    };

    Ok(ExpansionData {
        field: summary,
        r,
        leading_at_0,
        leading_at_0_err,
        residue_at_1,
        residue_at_1_err,
        taylor_at_0,
        laurent_at_1,
        class_number_leading,
        class_number_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::lfunction::zeta::l_eval;
    use std::f64::consts::PI;

    #[test]
    fn rationals() {
        let e = expansion_data(&make_field(None).unwrap()).unwrap();
        assert!((e.leading_at_0 + 0.5).abs() < 1e-12);
        assert!((e.residue_at_1 - 1.0).abs() < 1e-8);
        // ζ'(0) = -ln(2π)/2
        assert!((e.taylor_at_0[1] + 0.5 * (2.0 * PI).ln()).abs() < 1e-10);
        // (s-1)ζ(s) = 1 + γ (s-1) + ...
        assert!((e.laurent_at_1[1] - crate::mellin::EULER_GAMMA).abs() < 1e-10);
    }

    #[test]
    fn gaussian_residue_is_l1() {
        let e = expansion_data(&make_field(Some(-1)).unwrap()).unwrap();
        assert!((e.residue_at_1 - PI / 4.0).abs() < 1e-10);
        // ζ_K(0) = -h/w = -1/4
        assert!((e.leading_at_0 + 0.25).abs() < 1e-10);
    }

    #[test]
    fn real_quadratic_derivative_at_zero() {
        let k = make_field(Some(5)).unwrap();
        let e = expansion_data(&k).unwrap();
        // hR = log((1 + √5)/2)
        let hr = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((e.leading_at_0 + hr / 2.0).abs() < 1e-6 * hr);
        assert!(e.class_number_gap.unwrap() < 1e-6);
        let l1 = l_eval(Complex64::new(1.0, 0.0), &k).unwrap().re;
        assert!((e.residue_at_1 - l1).abs() < 1e-10);
        assert!(e.taylor_at_0[0].abs() < 1e-10);
        assert!((e.reduced_taylor_at_0()[0] - e.leading_at_0).abs() < 1e-8);
    }
}
