//! The Riesz-type function `P(y) = Σ b_n/n Z(√y/n)`, its main term for
//! `r ≥ 1`, envelope decay fits, and the Mellin transform
//! `∫_0^∞ y^{-s-1} P(y) dy = 2 Γ^{r1}(-s) Γ^{r2}(-2s) / ζ_K(2s + 1)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientTable;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldSummary};
use crate::lfunction::zeta::dedekind_unchecked;
use crate::mellin::gamma::{log_gamma_unchecked, EULER_GAMMA};
use crate::mellin::kernel::{KernelEvaluator, KernelSpec};
use crate::mellin::residue::{residue_at_zero, residue_calibrate, ResidueConstants};
use crate::numeric::{fit_line, log_grid, richardson_derivative_real};
use crate::summation::{ordered_par_sum, Accumulator, Precision};

/// Terms used per unit of `√y` when evaluating `P(y)`.
pub const TERMS_PER_ROOT_Y: f64 = 50.0;

/// Smallest coefficient bound accepted by [`p_eval`], per unit of `√y`.
pub const MIN_TERMS_PER_ROOT_Y: f64 = 10.0;

/// Envelope slope at or below which decay is called consistent with `y^{-1/4}`.
pub const DECAY_BENCHMARK: f64 = -0.15;

/// Acceptance threshold of the Mellin identity.
pub const MELLIN_TOL: f64 = 1e-3;

fn zk_real(field: &FieldDescriptor, s: f64) -> f64 {
    dedekind_unchecked(Complex64::new(s, 0.0), field).re
}

/// `Σ_{n ≤ N} b_n g(n)` in fixed order.
fn b_sum<G: Fn(f64) -> f64 + Sync>(table: &CoefficientTable, n: usize, precision: Precision, g: G) -> f64 {
    ordered_par_sum(1..n + 1, precision, |k| {
        let b = table.b(k);
        if b == 0 {
            0.0
        } else {
            b as f64 * g(k as f64)
        }
    })
}

/// Leading small-`x` behaviour of the closed-form kernels, used both for
/// the tail `n > N` of `P` and for the integral of `P` near `y = 0`.
#[derive(Debug, Clone, Copy)]
enum SmallX {
    /// `Z = -2x² + x⁴ - ...`
    Gauss,
    /// `Z = -x + x²/2 - ...`
    Exponential,
    /// `Z = 4x²(1 - γ - ln x) + O(x⁴ ln x)`
    Bessel,
    Generic,
}

impl SmallX {
    fn of(field: &FieldDescriptor) -> Self {
        match (field.r1(), field.r2()) {
            (1, 0) => SmallX::Gauss,
            (0, 1) => SmallX::Exponential,
            (2, 0) => SmallX::Bessel,
            _ => SmallX::Generic,
        }
    }
}

/// `Σ_n b_n ln n / n^s = ζ_K'(s) / ζ_K(s)²`.
fn log_weighted_inverse(field: &FieldDescriptor, s: f64) -> f64 {
    let (d, _) = richardson_derivative_real(|x| zk_real(field, x), s, 1, 1e-2, 6);
    d / zk_real(field, s).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PValue {
    pub y: f64,
    /// `partial + tail`.
    pub value: f64,
    /// `Σ_{n ≤ N} b_n/n Z(√y/n)`.
    pub partial: f64,
    /// Leading-order value of the terms `n > N`, from the complete series
    /// `Σ b_n n^{-k} = 1/ζ_K(k)`.
    pub tail: f64,
    pub tail_err: f64,
    pub n_used: usize,
}

/// `P(y)` with `N = min(table bound, max(50√y, 1000))` terms.
pub fn p_eval(field: &FieldDescriptor, y: f64, table: &CoefficientTable, kernel: &KernelEvaluator, precision: Precision) -> Result<PValue> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::invalid(format!("y must be positive, got {y}")));
    }
    let root = y.sqrt();
    if (table.n_max() as f64) < MIN_TERMS_PER_ROOT_Y * root {
        return Err(Error::invalid(format!(
            "coefficient bound {} below {}·sqrt(y) = {:.0} at y = {y}",
            table.n_max(),
            MIN_TERMS_PER_ROOT_Y,
            MIN_TERMS_PER_ROOT_Y * root
        )));
    }
    let n = table.n_max().min((TERMS_PER_ROOT_Y * root).ceil().max(1000.0) as usize);
    p_eval_terms(field, y, table, kernel, precision, n)
}

/// `P(y)` summed over exactly `n` coefficients plus the analytic tail.
pub fn p_eval_terms(
    field: &FieldDescriptor,
    y: f64,
    table: &CoefficientTable,
    kernel: &KernelEvaluator,
    precision: Precision,
    n: usize,
) -> Result<PValue> {
    let n = n.min(table.n_max());
    let root = y.sqrt();
    let partial = if kernel.z_fast(1.0).is_some() {
        b_sum(table, n, precision, |k| kernel.z_fast(root / k).unwrap_or(0.0) / k)
    } else {
        let terms: Vec<f64> = (1..=n)
            .into_par_iter()
            .map(|k| {
                let b = table.b(k);
                if b == 0 {
                    Ok(0.0)
                } else {
                    Ok(b as f64 / k as f64 * kernel.z(root / k as f64)?.value)
                }
            })
            .collect::<Result<_>>()?;
        let mut acc = Accumulator::new(precision);
        terms.into_iter().for_each(|t| acc.add(t));
        acc.value()
    };
    let tail_sum = |k: i32| 1.0 / zk_real(field, k as f64) - b_sum(table, n, precision, |m| m.powi(-k));
    let nf = n as f64;
    let (tail, tail_err) = if !kernel.use_closed_form {
        (0.0, kernel.z(root / nf)?.value.abs() * nf.ln().max(1.0) / kernel.small_x_exponent())
    } else {
        match SmallX::of(field) {
            // The next order, y² Σ_{n>N} b_n/n⁵, is below the rounding of
            // 1/ζ_K(5) - Σ_{n≤N} b_n/n⁵ once multiplied by y², so it is only estimated.
            SmallX::Gauss => (-2.0 * y * tail_sum(3), y * y / nf.powi(4)),
            SmallX::Exponential => {
                let second = 0.5 * y * tail_sum(3);
                (-root * tail_sum(2) + second, second.abs())
            }
            SmallX::Bessel => {
                let log_tail = log_weighted_inverse(field, 3.0) - b_sum(table, n, precision, |m| m.ln() / (m * m * m));
                let t = 4.0 * y * ((1.0 - EULER_GAMMA - 0.5 * y.ln()) * tail_sum(3) + log_tail);
                (t, t.abs() * y / (nf * nf) * nf.ln())
            }
            SmallX::Generic => (0.0, kernel.z(root / nf)?.value.abs() * nf.ln().max(1.0) / kernel.small_x_exponent()),
        }
    };
    Ok(PValue {
        y,
        value: partial + tail,
        partial,
        tail,
        tail_err,
        n_used: n,
    })
}

/// Main term `-Σ_{n < [y^{1/2-ε}]} (b_n/n) Res_{s=0}(G(s) (√y/n)^{-s})` with
/// the calibrated leading constant; zero when `r = 0`.
pub fn main_term(field: &FieldDescriptor, y: f64, eps: f64, consts: &ResidueConstants, table: &CoefficientTable) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(format!("eps must lie in (0, 1/2), got {eps}")));
    }
    if field.r() == 0 {
        return Ok(0.0);
    }
    let cutoff = (y.powf(0.5 - eps).floor() as usize).saturating_sub(1);
    if cutoff > table.n_max() {
        return Err(Error::invalid(format!("main term needs {cutoff} coefficients, table has {}", table.n_max())));
    }
    let root = y.sqrt();
    let mut acc = Accumulator::new(Precision::Standard);
    for k in 1..=cutoff {
        let b = table.b(k);
        if b != 0 {
            acc.add(b as f64 / k as f64 * residue_at_zero(consts, root / k as f64));
        }
    }
    Ok(-acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    /// `slope ± 2 stderr`.
    pub band: (f64, f64),
    pub rms_residual: f64,
    pub points: usize,
    pub y_lo: f64,
    pub y_hi: f64,
    /// `slope ≤ -0.15`; informational.
    pub consistent_with_benchmark: bool,
}

/// Least-squares slope of `log env(y)` against `log y` on `[y_lo, y_hi]`.
/// The envelope is sampled at the local maxima of `|v|`, one per
/// oscillation; with fewer than three of those it falls back to the running
/// maximum from the right, `max_{j ≥ i} |v_j|`.
pub fn envelope_fit(ys: &[f64], values: &[f64], y_lo: f64, y_hi: f64) -> Result<DecayFit> {
    if ys.len() != values.len() {
        return Err(Error::invalid("grid and values differ in length"));
    }
    let idx: Vec<usize> = (0..ys.len()).filter(|&i| ys[i] >= y_lo && ys[i] <= y_hi).collect();
    if idx.len() < 3 {
        return Err(Error::DegenerateFit(format!("only {} points in [{y_lo}, {y_hi}]", idx.len())));
    }
    let nonzero = idx.iter().filter(|&&i| values[i] != 0.0 && values[i].is_finite()).count();
    if (nonzero as f64) < 0.8 * idx.len() as f64 {
        return Err(Error::DegenerateFit(format!("{nonzero} of {} values are nonzero", idx.len())));
    }
    let a: Vec<f64> = idx.iter().map(|&i| values[i].abs()).collect();
    let peaks: Vec<usize> = (1..a.len() - 1)
        .filter(|&j| a[j] > 0.0 && a[j] >= a[j - 1] && a[j] >= a[j + 1])
        .collect();
    let points: Vec<(f64, f64)> = if peaks.len() >= 3 {
        peaks.iter().map(|&j| (ys[idx[j]], a[j])).collect()
    } else {
        let mut env = vec![0.0; a.len()];
        let mut running: f64 = 0.0;
        for j in (0..a.len()).rev() {
            running = running.max(a[j]);
            env[j] = running;
        }
        idx.iter().zip(env).filter(|(_, e)| *e > 0.0).map(|(&i, e)| (ys[i], e)).collect()
    };
    let (xs, ls): (Vec<f64>, Vec<f64>) = points.iter().map(|(y, e)| (y.ln(), e.ln())).unzip();
    let fit = fit_line(&xs, &ls).ok_or_else(|| Error::DegenerateFit("envelope fit failed".into()))?;
    Ok(DecayFit {
        slope: fit.slope,
        intercept: fit.intercept,
        slope_stderr: fit.slope_stderr,
        band: (fit.slope - 2.0 * fit.slope_stderr, fit.slope + 2.0 * fit.slope_stderr),
        rms_residual: fit.rms_residual,
        points: xs.len(),
        y_lo,
        y_hi,
        consistent_with_benchmark: fit.slope <= DECAY_BENCHMARK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszOptions {
    pub precision: Precision,
    /// Coefficient bound; defaults to `50 √y_max`.
    pub n_max: Option<usize>,
}

impl Default for RieszOptions {
    fn default() -> Self {
        RieszOptions {
            precision: Precision::Standard,
            n_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieszScan {
    pub field: FieldSummary,
    pub y_grid: Vec<f64>,
    #[serde(rename = "P_values")]
    pub p_values: Vec<f64>,
    #[serde(rename = "P_tail_err")]
    pub p_tail_err: Vec<f64>,
    pub main_term: Vec<f64>,
    pub corrected: Vec<f64>,
    pub eps: f64,
    #[serde(rename = "N_used")]
    pub n_used: Vec<usize>,
    pub residue_constants: ResidueConstants,
    /// Envelope fit of `|P|` over the top two decades.
    pub p_fit: Option<DecayFit>,
    /// Envelope fit of `|P - main|` over the top two decades.
    pub fitted_exponent: Option<DecayFit>,
}

impl RieszScan {
    /// CSV with columns `y, P, main, corrected`.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["y", "P", "main", "corrected"])?;
        for i in 0..self.y_grid.len() {
            w.write_record([
                format!("{:e}", self.y_grid[i]),
                format!("{:e}", self.p_values[i]),
                format!("{:e}", self.main_term[i]),
                format!("{:e}", self.corrected[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fit over `[y_max / 100, y_max]`.
pub fn decay_fit(scan: &RieszScan) -> Result<DecayFit> {
    let y_max = *scan.y_grid.last().ok_or_else(|| Error::DegenerateFit("empty scan".into()))?;
    envelope_fit(&scan.y_grid, &scan.corrected, y_max / 100.0, y_max)
}

/// Evaluate `P`, the main term and their difference on a log-spaced grid.
pub fn riesz_scan(field: &FieldDescriptor, y_min: f64, y_max: f64, points: usize, eps: f64, options: &RieszOptions) -> Result<RieszScan> {
    if !(y_min > 0.0) || !(y_max > y_min) || points < 2 {
        return Err(Error::invalid("riesz scan needs 0 < y_min < y_max and at least 2 points"));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(format!("eps must lie in (0, 1/2), got {eps}")));
    }
    let n_max = options
        .n_max
        .unwrap_or_else(|| (TERMS_PER_ROOT_Y * y_max.sqrt()).ceil().max(1000.0) as usize);
    if (n_max as f64) < MIN_TERMS_PER_ROOT_Y * y_max.sqrt() {
        return Err(Error::invalid(format!(
            "coefficient bound {n_max} below {MIN_TERMS_PER_ROOT_Y}·sqrt(y_max) = {:.0}",
            MIN_TERMS_PER_ROOT_Y * y_max.sqrt()
        )));
    }
    let table = CoefficientTable::build(field, n_max, options.precision)?;
    let kernel = KernelEvaluator::new(KernelSpec::new(field.r1(), field.r2())?);
    let consts = residue_calibrate(field.r1(), field.r2())?;
    let y_grid = log_grid(y_min, y_max, points);
    let mut p_values = Vec::with_capacity(points);
    let mut p_tail_err = Vec::with_capacity(points);
    let mut n_used = Vec::with_capacity(points);
    let mut main = Vec::with_capacity(points);
    for &y in &y_grid {
        let p = p_eval(field, y, &table, &kernel, options.precision)?;
        if !p.value.is_finite() {
            return Err(Error::invalid(format!("P({y}) is not finite")));
        }
        p_values.push(p.value);
        p_tail_err.push(p.tail_err);
        n_used.push(p.n_used);
        main.push(main_term(field, y, eps, &consts, &table)?);
    }
    let corrected: Vec<f64> = p_values.iter().zip(&main).map(|(p, m)| p - m).collect();
    let span = (y_max / 100.0).max(y_min);
    let p_fit = envelope_fit(&y_grid, &p_values, span, y_max).ok();
    let fitted_exponent = envelope_fit(&y_grid, &corrected, span, y_max).ok();
    Ok(RieszScan {
        field: FieldSummary::new(field, None),
        y_grid,
        p_values,
        p_tail_err,
        main_term: main,
        corrected,
        eps,
        n_used,
        residue_constants: consts,
        p_fit,
        fitted_exponent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinOptions {
    /// Integration range in `u = ln y`.
    pub u_min: f64,
    pub u_max: f64,
    pub step: f64,
    pub precision: Precision,
}

impl Default for MellinOptions {
    fn default() -> Self {
        MellinOptions {
            u_min: (1e-4f64).ln(),
            u_max: (1e8f64).ln(),
            step: 0.02,
            precision: Precision::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinReport {
    pub field: FieldSummary,
    pub s: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relative_discrepancy: f64,
    /// Simpson on `[u_min, u_max]`.
    pub quadrature: Complex64,
    /// `|Simpson(h) - Simpson(2h)|`.
    pub quadrature_err: f64,
    /// Analytic integral over `(0, e^{u_min}]`.
    pub small_y_tail: Complex64,
    /// Integral over `[e^{u_max}, ∞)` with `P` frozen at its last value.
    pub large_y_tail: Complex64,
    /// For `Q`: `lhs / (Γ(-s)/ζ(2s+1))`, the factor relating `P` to the
    /// classical Hardy–Littlewood function.
    pub hardy_littlewood_ratio: Option<Complex64>,
    pub pass: bool,
}

fn simpson(values: &[Complex64], h: f64) -> Complex64 {
    let n = values.len() - 1;
    let mut acc = values[0] + values[n];
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        acc += v * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * (h / 3.0)
}

/// `2 Γ^{r1}(-s) Γ^{r2}(-2s) / ζ_K(2s + 1)`.
pub fn mellin_rhs(field: &FieldDescriptor, s: Complex64) -> Complex64 {
    let mut lg = Complex64::new(0.0, 0.0);
    if field.r1() > 0 {
        lg += log_gamma_unchecked(-s) * field.r1() as f64;
    }
    if field.r2() > 0 {
        lg += log_gamma_unchecked(-s * 2.0) * field.r2() as f64;
    }
    lg.exp() * 2.0 / dedekind_unchecked(s * 2.0 + 1.0, field)
}

/// `∫_0^{y0} y^{-s-1} P(y) dy` from the small-`y` expansion of `P`.
fn small_y_integral(field: &FieldDescriptor, s: Complex64, y0: f64, p_at_y0: f64, kappa: f64) -> Complex64 {
    let l0 = y0.ln();
    let one = Complex64::new(1.0, 0.0);
    // ∫_0^{y0} y^{a - s - 1} dy
    let power = |a: f64| ((a - s) * l0).exp() / (a - s);
    match SmallX::of(field) {
        SmallX::Gauss => power(1.0) * (-2.0 / zk_real(field, 3.0)) + power(2.0) / zk_real(field, 5.0),
        SmallX::Exponential => power(0.5) * (-1.0 / zk_real(field, 2.0)) + power(1.0) * (0.5 / zk_real(field, 3.0)),
        SmallX::Bessel => {
            let a = 1.0 / zk_real(field, 3.0);
            let b = log_weighted_inverse(field, 3.0);
            let i0 = power(1.0);
            let i1 = ((one - s) * l0).exp() * (l0 / (one - s) - one / ((one - s) * (one - s)));
            (i0 * ((1.0 - EULER_GAMMA) * a + b) - i1 * (0.5 * a)) * 4.0
        }
        SmallX::Generic => Complex64::new(p_at_y0, 0.0) * (-s * l0).exp() / (kappa / 2.0 - s),
    }
}

/// Both sides of the Mellin identity at `s` with `0 < Re s < 1/2`.
pub fn mellin_identity_check(field: &FieldDescriptor, s: Complex64, options: &MellinOptions) -> Result<MellinReport> {
    if !(s.re > 0.0 && s.re < 0.5) {
        return Err(Error::invalid(format!("Re s must lie in (0, 1/2), got {}", s.re)));
    }
    if !(options.u_max > options.u_min) || !(options.step > 0.0) {
        return Err(Error::invalid("invalid Mellin quadrature range"));
    }
    let mut intervals = ((options.u_max - options.u_min) / options.step).ceil() as usize;
    intervals += intervals % 4; // even at both h and 2h
    let h = (options.u_max - options.u_min) / intervals as f64;
    let y_top = options.u_max.exp();
    let n_max = (TERMS_PER_ROOT_Y * y_top.sqrt()).ceil().max(1000.0) as usize;
    let table = CoefficientTable::build(field, n_max, options.precision)?;
    let kernel = KernelEvaluator::new(KernelSpec::new(field.r1(), field.r2())?);
    let us: Vec<f64> = (0..=intervals).map(|i| options.u_min + i as f64 * h).collect();
    let ps: Vec<f64> = us
        .par_iter()
        .map(|&u| p_eval(field, u.exp(), &table, &kernel, options.precision).map(|p| p.value))
        .collect::<Result<_>>()?;
    let values: Vec<Complex64> = us.iter().zip(&ps).map(|(&u, &p)| (-s * u).exp() * p).collect();
    let quadrature = simpson(&values, h);
    let coarse: Vec<Complex64> = values.iter().step_by(2).copied().collect();
    let quadrature_err = (quadrature - simpson(&coarse, 2.0 * h)).norm();

    let small_y_tail = small_y_integral(field, s, us[0].exp(), ps[0], kernel.small_x_exponent());
    let p_last = *ps.last().unwrap();
    let large_y_tail = if field.r() == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        (-s * options.u_max).exp() * p_last / s
    };
    let lhs = quadrature + small_y_tail + large_y_tail;
    let rhs = mellin_rhs(field, s);
    let relative_discrepancy = (lhs - rhs).norm() / rhs.norm();
    let hardy_littlewood_ratio = field.is_rational().then(|| lhs / (mellin_rhs(field, s) / 2.0));
    Ok(MellinReport {
        field: FieldSummary::new(field, None),
        s,
        lhs,
        rhs,
        relative_discrepancy,
        quadrature,
        quadrature_err,
        small_y_tail,
        large_y_tail,
        hardy_littlewood_ratio,
        pass: relative_discrepancy <= MELLIN_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummatoryDecay {
    /// Envelope growth exponent of `|M_K(x)|` (running maximum from the left).
    pub big_m_exponent: f64,
    /// Envelope decay exponent of `|m_K(x)|` (running maximum from the right).
    pub small_m_exponent: f64,
    /// `max |M_K(x)| x^{-0.6}` over the range.
    pub big_m_scaled_max: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

/// Empirical growth of `M_K` and decay of `m_K` on `[10³, N]`.
pub fn m_k_decay_probe(table: &CoefficientTable) -> Result<SummatoryDecay> {
    let n = table.n_max();
    if n < 1_000_000 {
        return Err(Error::invalid(format!("summatory probe needs N >= 10^6, got {n}")));
    }
    let x_lo = 1000.0;
    let x_hi = n as f64;
    // Running maxima over all n, sampled on a log grid.
    let grid: Vec<usize> = log_grid(x_lo, x_hi, 200).iter().map(|x| (x.round() as usize).min(n)).collect();
    let mut prefix = vec![0f64; n + 1];
    let mut run: f64 = 0.0;
    let mut scaled_max: f64 = 0.0;
    for k in 1..=n {
        let v = table.big_m(k).abs() as f64;
        run = run.max(v);
        prefix[k] = run;
        if k >= 1000 {
            scaled_max = scaled_max.max(v * (k as f64).powf(-0.6));
        }
    }
    let mut suffix = vec![0f64; n + 2];
    let mut run: f64 = 0.0;
    for k in (1..=n).rev() {
        run = run.max(table.small_m(k).abs());
        suffix[k] = run;
    }
    let xs: Vec<f64> = grid.iter().map(|&k| (k as f64).ln()).collect();
    let big: Vec<f64> = grid.iter().map(|&k| prefix[k].max(1.0).ln()).collect();
    let small: Vec<f64> = grid.iter().map(|&k| suffix[k].max(f64::MIN_POSITIVE).ln()).collect();
    let fb = fit_line(&xs, &big).ok_or_else(|| Error::DegenerateFit("M_K envelope".into()))?;
    let fs = fit_line(&xs, &small).ok_or_else(|| Error::DegenerateFit("m_K envelope".into()))?;
    Ok(SummatoryDecay {
        big_m_exponent: fb.slope,
        small_m_exponent: fs.slope,
        big_m_scaled_max: scaled_max,
        x_lo,
        x_hi,
    })
}
