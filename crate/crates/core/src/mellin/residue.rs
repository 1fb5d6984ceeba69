//! The residue of `Γ^{r1}(s/2) Γ^{r2}(s) x^{-s}` at `s = 0` and the constants
//! `C_i = X^{(i)}(0)` of `X(s) = Γ^{r1}(s/2 + 1) Γ^{r2}(s + 1)`.
//!
//! Since `Γ(s/2) = (2/s) Γ(s/2 + 1)`, the residue is
//! `(λ / r!) Σ_i C_i C(r, i) (-ln x)^{r-i}` with `λ = 2^{r1}` expected. The
//! leading factor is nevertheless measured against the contour difference
//! `Z̃ - Z`, and the matching power of two is recorded.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfunction::zeta::zeta_unchecked;
use crate::mellin::gamma::{gamma_real, EULER_GAMMA};
use crate::mellin::kernel::{z_line_integral, KernelSpec};
use crate::numeric::{binomial, factorial, richardson_derivative};

/// Required agreement of the two `C_i` routes and of the calibrated residue.
pub const RESIDUE_TOL: f64 = 1e-8;

/// Sample points of the `Z̃ - Z` oracle.
pub const CALIBRATION_POINTS: [f64; 3] = [0.5, 1.0, 2.0];

/// Which printed leading constant the measured one agrees with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchedPower {
    #[serde(rename = "2^r1")]
    TwoPowR1,
    #[serde(rename = "2^r2")]
    TwoPowR2,
    /// `r1 = r2`: the two printed forms coincide.
    #[serde(rename = "2^r1=2^r2")]
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueConstants {
    pub r1: u32,
    pub r2: u32,
    /// `C_0..=C_r` (numerical differentiation route).
    pub c: Vec<f64>,
    /// `C_0..=C_r` from the exponentiated log-gamma series.
    pub c_series: Vec<f64>,
    /// Largest gap between the two routes.
    pub route_gap: f64,
    /// The exact power of two adopted as leading factor.
    pub leading_power_coeff: f64,
    /// Least-squares factor fitted to the contour-difference oracle.
    pub fitted_coeff: f64,
    pub matched_power: MatchedPower,
    /// Largest `|residue - (Z̃ - Z)|` over the calibration points.
    pub calibration_residual: f64,
}

impl ResidueConstants {
    pub fn r(&self) -> u32 {
        self.r1 + self.r2 - 1
    }

    /// `(1/r!) Σ_i C_i C(r, i) (-ln x)^{r-i}` without the leading factor.
    pub fn polynomial(&self, x: f64) -> f64 {
        residue_polynomial(&self.c, x)
    }
}

fn residue_polynomial(c: &[f64], x: f64) -> f64 {
    let r = c.len() - 1;
    let l = -x.ln();
    let mut acc = 0.0;
    for (i, ci) in c.iter().enumerate() {
        acc += ci * binomial(r, i) * l.powi((r - i) as i32);
    }
    acc / factorial(r)
}

/// `Res_{s=0} Γ^{r1}(s/2) Γ^{r2}(s) x^{-s}` with calibrated constants.
pub fn residue_at_zero(consts: &ResidueConstants, x: f64) -> f64 {
    consts.leading_power_coeff * consts.polynomial(x)
}

/// `C_i` for `i = 0..=order` from `ln Γ(1 + z) = -γ z + Σ_{k≥2} (-1)^k ζ(k) z^k / k`
/// (equivalently the polygamma values `ψ^{(k-1)}(1)`), exponentiated as a power series.
pub fn c_constants_series(r1: u32, r2: u32, order: usize) -> Vec<f64> {
    let (a, b) = (r1 as f64, r2 as f64);
    let mut log_coeffs = vec![0.0; order + 1];
    if order >= 1 {
        log_coeffs[1] = -EULER_GAMMA * (a / 2.0 + b);
    }
    for (k, lc) in log_coeffs.iter_mut().enumerate().skip(2) {
        let zk = zeta_unchecked(Complex64::new(k as f64, 0.0)).re;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *lc = sign * zk / k as f64 * (a / 2f64.powi(k as i32) + b);
    }
    let mut e = vec![0.0; order + 1];
    e[0] = 1.0;
    for n in 1..=order {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += k as f64 * log_coeffs[k] * e[n - k];
        }
        e[n] = acc / n as f64;
    }
    e.iter().enumerate().map(|(i, v)| v * factorial(i)).collect()
}

/// `C_i` by central differences of `X(s)` with Richardson extrapolation
/// (step `1e-2` halved six times).
pub fn c_constants_numeric(r1: u32, r2: u32, order: usize) -> Vec<f64> {
    let x = |s: Complex64| {
        let s = s.re;
        let mut v = 1.0;
        if r1 > 0 {
            v *= gamma_real(s / 2.0 + 1.0).unwrap_or(f64::NAN).powi(r1 as i32);
        }
        if r2 > 0 {
            v *= gamma_real(s + 1.0).unwrap_or(f64::NAN).powi(r2 as i32);
        }
        Complex64::new(v, 0.0)
    };
    (0..=order)
        .map(|i| {
            if i == 0 {
                x(Complex64::new(0.0, 0.0)).re
            } else {
                richardson_derivative(x, Complex64::new(0.0, 0.0), i, 1e-2, 6).value.re
            }
        })
        .collect()
}

/// Build the constants and measure the leading factor with the default
/// kernel contours.
pub fn residue_calibrate(r1: u32, r2: u32) -> Result<ResidueConstants> {
    residue_calibrate_with(&KernelSpec::new(r1, r2)?)
}

pub fn residue_calibrate_with(spec: &KernelSpec) -> Result<ResidueConstants> {
    spec.validate()?;
    let (r1, r2) = (spec.r1, spec.r2);
    let r = spec.r() as usize;
    let c = c_constants_numeric(r1, r2, r);
    let c_series = c_constants_series(r1, r2, r);
    let mut route_gap: f64 = 0.0;
    for (i, (a, b)) in c.iter().zip(&c_series).enumerate() {
        let gap = (a - b).abs() / b.abs().max(1.0);
        route_gap = route_gap.max(gap);
        if gap > RESIDUE_TOL {
            log::debug!("C_{i}: {a} vs {b}");
            return Err(Error::RouteDisagreement {
                what: "residue constants C_i",
                a: *a,
                b: *b,
                gap,
                tolerance: RESIDUE_TOL,
            });
        }
    }

    let mut num = 0.0;
    let mut den = 0.0;
    let mut samples = Vec::with_capacity(CALIBRATION_POINTS.len());
    for &x in &CALIBRATION_POINTS {
        let zt = z_line_integral(spec, x, spec.d)?.value;
        let z = z_line_integral(spec, x, spec.c)?.value;
        let oracle = zt - z;
        let p = residue_polynomial(&c_series, x);
        num += oracle * p;
        den += p * p;
        samples.push((oracle, p));
    }
    if den == 0.0 {
        return Err(Error::DegenerateFit("residue polynomial vanishes on the calibration grid".into()));
    }
    let fitted = num / den;
    let p1 = 2f64.powi(r1 as i32);
    let p2 = 2f64.powi(r2 as i32);
    let (leading, matched) = if r1 == r2 && (fitted - p1).abs() < 1e-6 * p1 {
        (p1, MatchedPower::Both)
    } else if (fitted - p1).abs() < 1e-6 * p1 {
        (p1, MatchedPower::TwoPowR1)
    } else if (fitted - p2).abs() < 1e-6 * p2 {
        (p2, MatchedPower::TwoPowR2)
    } else {
        return Err(Error::Extrapolation {
            what: "residue leading factor (neither 2^r1 nor 2^r2)",
            residual: (fitted - p1).abs().min((fitted - p2).abs()),
            tolerance: 1e-6,
        });
    };
    let calibration_residual = samples
        .iter()
        .map(|(o, p)| (o - leading * p).abs())
        .fold(0.0, f64::max);
    if calibration_residual > RESIDUE_TOL {
        return Err(Error::Extrapolation {
            what: "residue at zero against Z~ - Z",
            residual: calibration_residual,
            tolerance: RESIDUE_TOL,
        });
    }
    Ok(ResidueConstants {
        r1,
        r2,
        c,
        c_series,
        route_gap,
        leading_power_coeff: leading,
        fitted_coeff: fitted,
        matched_power: matched,
        calibration_residual,
    })
}
