//! The inverse-Mellin kernels
//! `Z_{r1,r2}(x) = (1/2πi) ∫_{(c)} Γ^{r1}(s/2) Γ^{r2}(s) x^{-s} ds` with
//! `-1/2 < c < 0`, and `Z̃` on a line with positive abscissa.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mellin::bessel::{bessel_k0, k0_log_bracket};
use crate::mellin::gamma::{digamma, log_gamma_unchecked};
use crate::summation::compensated_sum;

/// Integrand magnitude, relative to its peak at `t = 0`, at which the
/// vertical-line quadrature is truncated.
pub const TRUNCATION_RATIO: f64 = 1e-17;

/// Error estimates above this are logged.
pub const ERR_WARN: f64 = 1e-8;

/// Minimum distance between the contour and a pole of the gamma product.
pub const POLE_GUARD: f64 = 1e-6;

/// Parameters of a kernel and of its contour quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub r1: u32,
    pub r2: u32,
    /// Abscissa for `Z`, in `(-1/2, 0)`.
    pub c: f64,
    /// Abscissa for `Z̃`, positive.
    pub d: f64,
    /// Truncation height; `None` picks it from the integrand decay.
    pub t_max: Option<f64>,
    pub quad_step: f64,
}

impl KernelSpec {
    pub fn new(r1: u32, r2: u32) -> Result<Self> {
        let spec = KernelSpec {
            r1,
            r2,
            c: -0.25,
            d: 0.5,
            t_max: None,
            quad_step: 1e-2,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_c(mut self, c: f64) -> Result<Self> {
        self.c = c;
        self.validate()?;
        Ok(self)
    }

    pub fn with_d(mut self, d: f64) -> Result<Self> {
        self.d = d;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r1 + self.r2 == 0 {
            return Err(Error::invalid("kernel needs r1 + r2 >= 1"));
        }
        if !(self.c > -0.5 && self.c < 0.0) {
            return Err(Error::invalid(format!("abscissa c = {} must lie in (-1/2, 0)", self.c)));
        }
        if !(self.d > 0.0) {
            return Err(Error::invalid(format!("abscissa d = {} must be positive", self.d)));
        }
        if !(self.quad_step > 0.0) {
            return Err(Error::invalid("quad_step must be positive"));
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0) {
                return Err(Error::invalid("t_max must be positive"));
            }
        }
        Ok(())
    }

    /// Degree `n = r1 + 2 r2`.
    pub fn degree(&self) -> u32 {
        self.r1 + 2 * self.r2
    }

    /// `r = r1 + r2 - 1`.
    pub fn r(&self) -> u32 {
        self.r1 + self.r2 - 1
    }

    pub fn has_closed_form(&self) -> bool {
        matches!((self.r1, self.r2), (1, 0) | (0, 1) | (2, 0))
    }
}

/// How a kernel value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    ClosedForm,
    LineIntegral,
}

/// A kernel value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub err_est: f64,
    pub method: KernelMethod,
}

/// Result of a vertical-line quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineIntegral {
    pub value: f64,
    /// `|T_h - T_{2h}|` plus the truncated tail.
    pub err_est: f64,
    /// Imaginary part of the symmetric sum; zero up to rounding.
    pub imag_residual: f64,
    pub abscissa: f64,
    pub t_max: f64,
    pub nodes: usize,
}

/// `Z_{r1,r2}(x)` in closed form for the three quadratic-field signatures.
pub fn z_closed_form(r1: u32, r2: u32, x: f64) -> Option<f64> {
    if !(x > 0.0) {
        return None;
    }
    match (r1, r2) {
        (1, 0) => Some(2.0 * (-x * x).exp_m1()),
        (0, 1) => Some((-x).exp_m1()),
        (2, 0) => k0_log_bracket(x).ok().map(|v| 4.0 * v),
        _ => None,
    }
}

/// `Z̃_{r1,r2}(x)` in closed form for the three quadratic-field signatures.
pub fn z_tilde_closed_form(r1: u32, r2: u32, x: f64) -> Option<f64> {
    if !(x > 0.0) {
        return None;
    }
    match (r1, r2) {
        (1, 0) => Some(2.0 * (-x * x).exp()),
        (0, 1) => Some((-x).exp()),
        (2, 0) => bessel_k0(2.0 * x).ok().map(|v| 4.0 * v),
        _ => None,
    }
}

fn nearest_pole(r2: u32, a: f64) -> f64 {
    if a >= 0.0 {
        0.0
    } else if r2 > 0 {
        a.round().min(0.0)
    } else {
        (2.0 * (a / 2.0).round()).min(0.0)
    }
}

fn check_abscissa(r2: u32, a: f64) -> Result<()> {
    let pole = nearest_pole(r2, a);
    let distance = (a - pole).abs();
    if distance < POLE_GUARD {
        return Err(Error::AbscissaNearPole {
            abscissa: a,
            pole,
            distance,
        });
    }
    Ok(())
}

#[inline]
fn log_integrand(r1: u32, r2: u32, s: Complex64, ln_x: f64) -> Complex64 {
    let mut acc = -s * ln_x;
    if r1 > 0 {
        acc += log_gamma_unchecked(s * 0.5) * r1 as f64;
    }
    if r2 > 0 {
        acc += log_gamma_unchecked(s) * r2 as f64;
    }
    acc
}

/// Height beyond which the integrand is below `TRUNCATION_RATIO` times its
/// value at `t = 0` (where `|Γ(a + it)|` peaks).
fn auto_t_max(r1: u32, r2: u32, a: f64, ln_x: f64) -> f64 {
    let peak = log_integrand(r1, r2, Complex64::new(a, 0.0), ln_x).re;
    let cut = TRUNCATION_RATIO.ln();
    let mut t = 1.0;
    loop {
        let v = log_integrand(r1, r2, Complex64::new(a, t), ln_x).re - peak;
        if v < cut || t > 1e6 {
            return t;
        }
        t *= 1.25;
    }
}

/// Trapezoid sums scaled by `exp(-peak)`; returns `(T_h, T_2h, imag, peak, t_max, nodes)`.
fn scaled_trapezoid(
    r1: u32,
    r2: u32,
    x: f64,
    a: f64,
    h: f64,
    t_max: Option<f64>,
) -> (f64, f64, f64, f64, f64, usize) {
    let ln_x = x.ln();
    let peak = log_integrand(r1, r2, Complex64::new(a, 0.0), ln_x).re;
    let t_max = t_max.unwrap_or_else(|| auto_t_max(r1, r2, a, ln_x));
    let k_max = (t_max / h).ceil() as i64;
    let values: Vec<Complex64> = (-k_max..=k_max)
        .into_par_iter()
        .map(|k| (log_integrand(r1, r2, Complex64::new(a, k as f64 * h), ln_x) - peak).exp())
        .collect();
    let fine = compensated_sum(values.iter().map(|v| v.re)) * h / (2.0 * std::f64::consts::PI);
    let coarse = compensated_sum(
        values
            .iter()
            .enumerate()
            .filter(|(i, _)| (*i as i64 - k_max) % 2 == 0)
            .map(|(_, v)| v.re),
    ) * 2.0
        * h
        / (2.0 * std::f64::consts::PI);
    let imag = compensated_sum(values.iter().map(|v| v.im)) * h / (2.0 * std::f64::consts::PI);
    (fine, coarse, imag, peak, t_max, values.len())
}

/// `(1/2πi) ∫_{(abscissa)} Γ^{r1}(s/2) Γ^{r2}(s) x^{-s} ds` by the trapezoid
/// rule on the vertical line, using `spec.quad_step` and `spec.t_max`.
pub fn z_line_integral(spec: &KernelSpec, x: f64, abscissa: f64) -> Result<LineIntegral> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "z_line_integral",
            value: x,
            reason: "x must be positive and finite",
        });
    }
    if spec.r1 + spec.r2 == 0 {
        return Err(Error::invalid("kernel needs r1 + r2 >= 1"));
    }
    check_abscissa(spec.r2, abscissa)?;
    let (fine, coarse, imag, peak, t_max, nodes) =
        scaled_trapezoid(spec.r1, spec.r2, x, abscissa, spec.quad_step, spec.t_max);
    let scale = peak.exp();
    let err_est = ((fine - coarse).abs() + TRUNCATION_RATIO) * scale + f64::EPSILON * (fine * scale).abs();
    if err_est > ERR_WARN {
        log::warn!(
            "kernel ({}, {}) at x = {x}, abscissa {abscissa}: error estimate {err_est:e}",
            spec.r1,
            spec.r2
        );
    }
    Ok(LineIntegral {
        value: fine * scale,
        err_est,
        imag_residual: imag * scale,
        abscissa,
        t_max,
        nodes,
    })
}

/// `ln Z̃(x)` on the saddle-point line, for values far below `f64` range.
/// Returns `(ln Z̃, relative error estimate)`.
pub fn ln_z_tilde(spec: &KernelSpec, x: f64) -> Result<(f64, f64)> {
    let a = saddle_abscissa(spec.r1, spec.r2, x).max(spec.d);
    let (fine, coarse, _, peak, _, _) = scaled_trapezoid(spec.r1, spec.r2, x, a, spec.quad_step, None);
    if !(fine > 0.0) {
        return Err(Error::NotConverged {
            what: "saddle-point kernel quadrature",
            iterations: 1,
            estimate: fine,
        });
    }
    Ok((peak + fine.ln(), (fine - coarse).abs() / fine))
}

/// Real `a > 0` minimising `Γ^{r1}(a/2) Γ^{r2}(a) x^{-a}`: the root of
/// `(r1/2) ψ(a/2) + r2 ψ(a) = ln x`.
pub fn saddle_abscissa(r1: u32, r2: u32, x: f64) -> f64 {
    let g = |a: f64| 0.5 * r1 as f64 * digamma(0.5 * a) + r2 as f64 * digamma(a) - x.ln();
    let (mut lo, mut hi) = (1e-3, 1e7);
    if g(lo) > 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi / lo < 1.0 + 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Row of [`z_asymptotic_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub x: f64,
    pub ln_z_tilde: f64,
    pub ln_bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub r1: u32,
    pub r2: u32,
    pub rows: Vec<AsymptoticRow>,
    /// Slope of `ln ratio` against `ln x` over the top decade.
    pub top_decade_slope: f64,
    pub max_ratio: f64,
    pub pass: bool,
}

/// Largest log-log slope of the ratio over the top decade still counted as
/// bounded.
pub const ASYMPTOTIC_SLOPE_TOL: f64 = 0.05;

/// Ratio of `Z̃(x)` to `x^{-r/n} exp(-n (x / 2^{r2})^{2/n})` on `x_grid`.
pub fn z_asymptotic_check(spec: &KernelSpec, x_grid: &[f64]) -> Result<AsymptoticReport> {
    if x_grid.is_empty() || x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("x_grid must be non-empty and increasing"));
    }
    let x_max = *x_grid.last().unwrap();
    if x_max < 20.0 {
        return Err(Error::invalid("x_grid must reach at least 20"));
    }
    let n = spec.degree() as f64;
    let r = spec.r() as f64;
    let rows = x_grid
        .iter()
        .map(|&x| {
            let (lz, _) = ln_z_tilde(spec, x)?;
            let ln_bound = -(r / n) * x.ln() - n * (x / 2f64.powi(spec.r2 as i32)).powf(2.0 / n);
            Ok(AsymptoticRow {
                x,
                ln_z_tilde: lz,
                ln_bound,
                ratio: (lz - ln_bound).exp(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let top: Vec<&AsymptoticRow> = rows.iter().filter(|row| row.x >= x_max / 10.0).collect();
    let xs: Vec<f64> = top.iter().map(|row| row.x.ln()).collect();
    let ys: Vec<f64> = top.iter().map(|row| row.ratio.ln()).collect();
    let slope = crate::numeric::fit_line(&xs, &ys).map(|f| f.slope).unwrap_or(0.0);
    let max_ratio = rows.iter().map(|row| row.ratio).fold(0.0, f64::max);
    let pass = max_ratio.is_finite() && slope <= ASYMPTOTIC_SLOPE_TOL;
    Ok(AsymptoticReport {
        r1: spec.r1,
        r2: spec.r2,
        rows,
        top_decade_slope: slope,
        max_ratio,
        pass,
    })
}

/// Evaluator for `Z` and `Z̃`, preferring closed forms when available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEvaluator {
    pub spec: KernelSpec,
    pub use_closed_form: bool,
}

impl KernelEvaluator {
    pub fn new(spec: KernelSpec) -> Self {
        KernelEvaluator {
            use_closed_form: spec.has_closed_form(),
            spec,
        }
    }

    /// Always integrate on the contour, even when a closed form exists.
    pub fn line_integral_only(spec: KernelSpec) -> Self {
        KernelEvaluator {
            spec,
            use_closed_form: false,
        }
    }

    pub fn z(&self, x: f64) -> Result<KernelValue> {
        if self.use_closed_form {
            if let Some(v) = z_closed_form(self.spec.r1, self.spec.r2, x) {
                return Ok(KernelValue {
                    value: v,
                    err_est: 4.0 * f64::EPSILON * v.abs().max(f64::MIN_POSITIVE),
                    method: KernelMethod::ClosedForm,
                });
            }
        }
        let li = z_line_integral(&self.spec, x, self.spec.c)?;
        Ok(KernelValue {
            value: li.value,
            err_est: li.err_est,
            method: KernelMethod::LineIntegral,
        })
    }

    pub fn z_tilde(&self, x: f64) -> Result<KernelValue> {
        if self.use_closed_form {
            if let Some(v) = z_tilde_closed_form(self.spec.r1, self.spec.r2, x) {
                return Ok(KernelValue {
                    value: v,
                    err_est: 4.0 * f64::EPSILON * v.abs(),
                    method: KernelMethod::ClosedForm,
                });
            }
        }
        let li = z_line_integral(&self.spec, x, self.spec.d)?;
        Ok(KernelValue {
            value: li.value,
            err_est: li.err_est,
            method: KernelMethod::LineIntegral,
        })
    }

    /// Plain closed-form `Z`, or `None`; for tight summation loops.
    #[inline]
    pub fn z_fast(&self, x: f64) -> Option<f64> {
        if self.use_closed_form {
            z_closed_form(self.spec.r1, self.spec.r2, x)
        } else {
            None
        }
    }

    /// Exponent `κ` of the small-`x` behaviour `Z(x) = O(x^κ)`: the first pole
    /// left of the contour sits at `-1` when `r2 > 0`, otherwise at `-2`.
    pub fn small_x_exponent(&self) -> f64 {
        if self.spec.r2 > 0 {
            1.0
        } else {
            2.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::gamma::EULER_GAMMA;

    #[test]
    fn spec_validation() {
        assert!(KernelSpec::new(0, 0).is_err());
        assert!(KernelSpec::new(1, 0).unwrap().with_c(-0.5).is_err());
        assert!(KernelSpec::new(1, 0).unwrap().with_c(0.1).is_err());
        assert!(KernelSpec::new(1, 0).unwrap().with_d(-0.1).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(z_closed_form(1, 0, 1.0).unwrap(), 2.0 * ((-1f64).exp() - 1.0));
        assert!(z_closed_form(0, 1, 1e-12).unwrap().abs() < 1e-11);
        let k = bessel_k0(1.0).unwrap();
        assert!((z_closed_form(2, 0, 0.5).unwrap() - 4.0 * (k + EULER_GAMMA + 0.5f64.ln())).abs() < 1e-14);
        assert!(z_closed_form(1, 1, 1.0).is_none());
        assert!(z_closed_form(1, 0, 0.0).is_none());
    }

    #[test]
    fn line_integral_matches_closed_forms() {
        for (r1, r2) in [(1, 0), (0, 1), (2, 0)] {
            let spec = KernelSpec::new(r1, r2).unwrap();
            for x in [0.5, 1.0, 2.0] {
                let li = z_line_integral(&spec, x, -0.25).unwrap();
                let cf = z_closed_form(r1, r2, x).unwrap();
                assert!((li.value - cf).abs() < 1e-10, "({r1},{r2}) x={x}: {} vs {cf}", li.value);
                assert!(li.imag_residual.abs() < 1e-10);
                let lt = z_line_integral(&spec, x, 0.5).unwrap();
                assert!((lt.value - z_tilde_closed_form(r1, r2, x).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn laplace_oracle_for_exponential() {
        // Γ(s) is the Mellin transform of e^{-t}.
        let spec = KernelSpec::new(0, 1).unwrap();
        let v = z_line_integral(&spec, 2.0, 0.5).unwrap().value;
        assert!((v - (-2f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn abscissa_near_pole_is_rejected() {
        let spec = KernelSpec::new(0, 1).unwrap();
        assert!(matches!(
            z_line_integral(&spec, 1.0, -1.0 + 1e-8),
            Err(Error::AbscissaNearPole { .. })
        ));
        let spec = KernelSpec::new(1, 0).unwrap();
        // Γ(s/2) has no pole at -1.
        assert!(z_line_integral(&spec, 1.0, -1.0).is_ok());
        assert!(z_line_integral(&spec, 1.0, 1e-9).is_err());
    }

    #[test]
    fn saddle_log_value_matches_closed_form() {
        let spec = KernelSpec::new(1, 0).unwrap();
        let (lz, rel) = ln_z_tilde(&spec, 30.0).unwrap();
        assert!((lz - (2f64.ln() - 900.0)).abs() < 1e-9, "{lz}");
        assert!(rel < 1e-10);
        let spec = KernelSpec::new(2, 0).unwrap();
        let (lz, _) = ln_z_tilde(&spec, 5.0).unwrap();
        assert!((lz - (4.0 * bessel_k0(10.0).unwrap()).ln()).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_ratios() {
        let grid = crate::numeric::log_grid(1.0, 50.0, 12);
        let r = z_asymptotic_check(&KernelSpec::new(1, 0).unwrap(), &grid).unwrap();
        assert!(r.pass);
        for row in &r.rows {
            assert!((row.ratio - 2.0).abs() < 1e-8);
        }
        let r = z_asymptotic_check(&KernelSpec::new(0, 1).unwrap(), &grid).unwrap();
        assert!(r.pass && (r.max_ratio - 1.0).abs() < 1e-8);
        let r = z_asymptotic_check(&KernelSpec::new(2, 0).unwrap(), &grid).unwrap();
        assert!(r.pass && r.max_ratio < 2.0 * std::f64::consts::PI.sqrt());
        assert!(z_asymptotic_check(&KernelSpec::new(2, 0).unwrap(), &[1.0, 2.0]).is_err());
    }
}
