//! Critical-line zeros of `ζ_K = ζ · L(s, χ)`.
//!
//! Each factor is rotated to a real function of `t`
//! (`Z(t) = e^{iθ(t)} F(1/2 + it)`, root number `+1` for real characters),
//! scanned for sign changes on a fixed grid and bisected. Ordinates from the
//! two factors are merged into one list and grouped into brackets.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldSummary};
use crate::lfunction::zeta::{dedekind_unchecked, l_unchecked, log_gamma_factor, zeta_unchecked};
use crate::mellin::gamma::log_gamma_unchecked;
use crate::numeric::{richardson_derivative, wrap_angle};

/// Which factor of `ζ_K` a zero belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    #[serde(rename = "zeta")]
    Zeta,
    #[serde(rename = "L")]
    L,
}

impl std::fmt::Display for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Factor::Zeta => "zeta",
            Factor::L => "L",
        })
    }
}

/// Desk-scale ceiling on the scan height.
pub const MAX_SCAN_HEIGHT: f64 = 200.0;

/// `|ζ_K'(ρ)|` below this is treated as a multiple zero.
pub const MULTIPLE_ZERO_GUARD: f64 = 1e-8;

/// Two ordinates closer than this are flagged as a collision.
pub const COLLISION_GAP: f64 = 1e-6;

/// Required relative agreement of the two `ζ_K'(ρ)` routes.
pub const DERIVATIVE_ROUTE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroScanOptions {
    pub step: f64,
    pub tolerance: f64,
    /// Bracketing constant `c0`.
    pub c0: f64,
}

impl Default for ZeroScanOptions {
    fn default() -> Self {
        ZeroScanOptions {
            step: 0.05,
            tolerance: 1e-9,
            c0: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub gamma: f64,
    pub source: Factor,
    pub zeta_k_prime: Complex64,
    /// Half-width of the final bisection interval.
    pub localization_err: f64,
    /// Relative gap between the two derivative routes.
    pub derivative_gap: f64,
    pub bracket_id: usize,
    /// Left out of zero sums (collision or vanishing derivative).
    pub excluded: bool,
}

impl ZeroRecord {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(0.5, self.gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub field: FieldSummary,
    #[serde(rename = "T")]
    pub t: f64,
    pub options: ZeroScanOptions,
    pub zeros: Vec<ZeroRecord>,
    /// Zero indices per bracket, in increasing height; excluded zeros are left out.
    pub brackets: Vec<Vec<usize>>,
    /// Notes on refined windows, collisions and exclusions.
    pub flags: Vec<String>,
}

impl ZeroList {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.gamma).collect()
    }

    /// Ordinates below `t` only, with brackets recomputed.
    pub fn truncated(&self, t: f64) -> ZeroList {
        let zeros: Vec<ZeroRecord> = self.zeros.iter().filter(|z| z.gamma <= t).cloned().collect();
        let mut out = ZeroList {
            field: self.field.clone(),
            t,
            options: self.options,
            zeros,
            brackets: Vec::new(),
            flags: self.flags.clone(),
        };
        assign_brackets(&mut out);
        out
    }

    /// `max_{T0} #{γ ∈ [T0, T0+1]} / ln(T0 + 2)` over integer `T0 ≤ t0_max`.
    pub fn max_window_ratio(&self, t0_max: f64) -> f64 {
        let mut best: f64 = 0.0;
        let mut t0 = 0.0;
        while t0 <= t0_max {
            let count = self.zeros.iter().filter(|z| z.gamma >= t0 && z.gamma < t0 + 1.0).count();
            best = best.max(count as f64 / (t0 + 2.0).ln());
            t0 += 1.0;
        }
        best
    }

    /// CSV with columns `gamma, source, re_zeta_K_prime, im_zeta_K_prime,
    /// localization_err, bracket_id`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["gamma", "source", "re_zeta_K_prime", "im_zeta_K_prime", "localization_err", "bracket_id"])?;
        for z in &self.zeros {
            w.write_record([
                format!("{:.12}", z.gamma),
                z.source.to_string(),
                format!("{:e}", z.zeta_k_prime.re),
                format!("{:e}", z.zeta_k_prime.im),
                format!("{:e}", z.localization_err),
                if z.excluded { String::new() } else { z.bracket_id.to_string() },
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Rotation phase `θ(t)` making the factor real on the critical line.
pub fn rotation_phase(field: &FieldDescriptor, factor: Factor, t: f64) -> f64 {
    match factor {
        Factor::Zeta => log_gamma_unchecked(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * std::f64::consts::PI.ln(),
        Factor::L => {
            let a = if field.d_k() > 0 { 0.0 } else { 1.0 };
            let q = field.conductor() as f64;
            log_gamma_unchecked(Complex64::new(0.5 * (0.5 + a), 0.5 * t)).im
                + 0.5 * t * (q / std::f64::consts::PI).ln()
        }
    }
}

fn factor_value(field: &FieldDescriptor, factor: Factor, s: Complex64) -> Complex64 {
    match factor {
        Factor::Zeta => zeta_unchecked(s),
        Factor::L => l_unchecked(s, field),
    }
}

/// `e^{iθ(t)} F(1/2 + it)` as a complex number; its imaginary part vanishes
/// up to rounding.
pub fn rotated_complex(field: &FieldDescriptor, factor: Factor, t: f64) -> Complex64 {
    let theta = rotation_phase(field, factor, t);
    Complex64::from_polar(1.0, theta) * factor_value(field, factor, Complex64::new(0.5, t))
}

/// The real rotated function of one factor on the critical line.
pub fn rotated(field: &FieldDescriptor, factor: Factor, t: f64) -> f64 {
    rotated_complex(field, factor, t).re
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> (f64, f64) {
    while hi - lo > 2.0 * tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return (mid, 0.0);
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), 0.5 * (hi - lo))
}

struct WindowResult {
    roots: Vec<(f64, f64)>,
    flags: Vec<String>,
}

/// Sign changes of `f` on the grid points `k0..=k1` of spacing `step`, plus
/// a finer look at local dips of `|f|` that do not change sign.
fn scan_window<F: Fn(f64) -> f64>(f: &F, k0: i64, k1: i64, step: f64, tol: f64, t_max: f64, label: &str) -> WindowResult {
    let lo_k = (k0 - 1).max(0);
    let ts: Vec<f64> = (lo_k..=k1 + 1).map(|k| (k as f64 * step).min(t_max)).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut roots = Vec::new();
    let mut flags = Vec::new();
    let first = (k0 - lo_k) as usize;
    let last = (k1 - lo_k) as usize;
    for i in first..last.min(ts.len() - 1) {
        if ts[i + 1] <= ts[i] {
            continue;
        }
        let (a, b) = (vs[i], vs[i + 1]);
        if a == 0.0 && ts[i] > 0.0 {
            roots.push((ts[i], 0.0));
            continue;
        }
        if (a > 0.0) != (b > 0.0) && b != 0.0 {
            roots.push(bisect(f, ts[i], ts[i + 1], a, tol));
        } else if i > 0 && i + 1 < ts.len() {
            // Dip: |f| has a local minimum at ts[i] without a sign change.
            let (l, m, r) = (vs[i - 1], a, b);
            if m.abs() < l.abs() && m.abs() < r.abs() && (l > 0.0) == (m > 0.0) && (m > 0.0) == (r > 0.0) {
                let fine = 20;
                let h = (ts[i + 1] - ts[i - 1]) / fine as f64;
                let mut found = 0;
                let mut prev_t = ts[i - 1];
                let mut prev_v = l;
                for j in 1..=fine {
                    let t = ts[i - 1] + j as f64 * h;
                    let v = f(t);
                    if (v > 0.0) != (prev_v > 0.0) {
                        roots.push(bisect(f, prev_t, t, prev_v, tol));
                        found += 1;
                    }
                    prev_t = t;
                    prev_v = v;
                }
                if found > 0 {
                    flags.push(format!("{label}: {found} zeros recovered by refinement near t = {:.3}", ts[i]));
                }
            }
        }
    }
    WindowResult { roots, flags }
}

fn scan_factor(field: &FieldDescriptor, factor: Factor, t_max: f64, options: &ZeroScanOptions) -> (Vec<(f64, f64)>, Vec<String>) {
    let f = |t: f64| rotated(field, factor, t);
    let k_total = (t_max / options.step).ceil() as i64;
    let per_window = (1.0 / options.step).round().max(1.0) as i64;
    let windows: Vec<(i64, i64)> = (0..k_total)
        .step_by(per_window as usize)
        .map(|k0| (k0, (k0 + per_window).min(k_total)))
        .collect();
    let label = factor.to_string();
    let density_cap = 3.0 * t_max.max(3.0).ln();
    let results: Vec<WindowResult> = windows
        .par_iter()
        .map(|&(k0, k1)| {
            let mut w = scan_window(&f, k0, k1, options.step, options.tolerance, t_max, &label);
            if w.roots.len() as f64 > density_cap {
                // Too many candidates for a unit window: rescan ten times finer.
                let fine_step = options.step / 10.0;
                let mut fine = scan_window(&f, k0 * 10, k1 * 10, fine_step, options.tolerance, t_max, &label);
                fine.flags.push(format!(
                    "{label}: window starting at t = {:.2} exceeded the density cap and was rescanned",
                    k0 as f64 * options.step
                ));
                w = fine;
            }
            w
        })
        .collect();
    let mut roots = Vec::new();
    let mut flags = Vec::new();
    for w in results {
        roots.extend(w.roots);
        flags.extend(w.flags);
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots.dedup_by(|a, b| (a.0 - b.0).abs() < options.tolerance * 4.0);
    roots.retain(|r| r.0 > 0.0 && r.0 <= t_max);
    (roots, flags)
}

/// `ζ_K'(ρ)` by the product rule on the tagged factor, cross-checked with a
/// plain central difference of `ζ_K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaKPrime {
    pub value: Complex64,
    pub direct: Complex64,
    pub relative_gap: f64,
}

pub fn zeta_k_prime_at(rho: Complex64, field: &FieldDescriptor, source: Factor) -> Result<ZetaKPrime> {
    if field.is_rational() && source == Factor::L {
        return Err(Error::NotQuadratic("L-factor zero"));
    }
    let fd = |s: Complex64| factor_value(field, source, s);
    let derivative = richardson_derivative(fd, rho, 1, 1e-2, 6).value;
    let value = if field.is_rational() {
        derivative
    } else {
        match source {
            Factor::Zeta => derivative * l_unchecked(rho, field),
            Factor::L => derivative * zeta_unchecked(rho),
        }
    };
    let h = 1e-6;
    let direct = (dedekind_unchecked(rho + h, field) - dedekind_unchecked(rho - h, field)) / (2.0 * h);
    if value.norm() < MULTIPLE_ZERO_GUARD {
        return Err(Error::MultipleZero {
            gamma: rho.im,
            magnitude: value.norm(),
        });
    }
    let relative_gap = (value - direct).norm() / value.norm();
    if relative_gap > DERIVATIVE_ROUTE_TOL {
        return Err(Error::RouteDisagreement {
            what: "zeta_K'(rho) product rule vs direct difference",
            a: value.norm(),
            b: direct.norm(),
            gap: relative_gap,
            tolerance: DERIVATIVE_ROUTE_TOL,
        });
    }
    Ok(ZetaKPrime {
        value,
        direct,
        relative_gap,
    })
}

fn bracket_width(gamma: f64, c0: f64) -> f64 {
    (-c0 * gamma / gamma.max(std::f64::consts::E).ln()).exp()
}

fn assign_brackets(list: &mut ZeroList) {
    let c0 = list.options.c0;
    let mut brackets: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<f64> = None;
    for (i, z) in list.zeros.iter_mut().enumerate() {
        if z.excluded {
            continue;
        }
        let join = match last {
            Some(g) => (z.gamma - g).abs() < bracket_width(g, c0) + bracket_width(z.gamma, c0),
            None => false,
        };
        if !join {
            brackets.push(Vec::new());
        }
        z.bracket_id = brackets.len() - 1;
        brackets.last_mut().unwrap().push(i);
        last = Some(z.gamma);
    }
    list.brackets = brackets;
}

/// Zeros of `ζ_K` on the critical line with `0 < γ ≤ t`.
pub fn find_zeros(field: &FieldDescriptor, t: f64, options: ZeroScanOptions) -> Result<ZeroList> {
    if !(t > 0.0) || t > MAX_SCAN_HEIGHT {
        return Err(Error::invalid(format!("scan height T = {t} outside (0, {MAX_SCAN_HEIGHT}]")));
    }
    if !(options.step > 0.0) || !(options.tolerance > 0.0) || !(options.c0 > 0.0) {
        return Err(Error::invalid("zero scan step, tolerance and c0 must be positive"));
    }
    let mut factors = vec![Factor::Zeta];
    if !field.is_rational() {
        factors.push(Factor::L);
    }
    let mut raw: Vec<(f64, f64, Factor)> = Vec::new();
    let mut flags = Vec::new();
    for factor in factors {
        let (roots, f) = scan_factor(field, factor, t, &options);
        raw.extend(roots.into_iter().map(|(g, e)| (g, e, factor)));
        flags.extend(f);
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    let derivatives: Vec<Result<ZetaKPrime>> = raw
        .par_iter()
        .map(|&(g, _, factor)| zeta_k_prime_at(Complex64::new(0.5, g), field, factor))
        .collect();

    let mut zeros = Vec::with_capacity(raw.len());
    for ((gamma, err, source), d) in raw.iter().copied().zip(derivatives) {
        let (zeta_k_prime, derivative_gap, excluded) = match d {
            Ok(v) => (v.value, v.relative_gap, false),
            Err(Error::MultipleZero { magnitude, .. }) => {
                flags.push(format!("{source} zero at {gamma:.9}: |zeta_K'| = {magnitude:e}, excluded"));
                (Complex64::new(0.0, 0.0), f64::NAN, true)
            }
            Err(e) => return Err(e.in_component("zeta_K'(rho)")),
        };
        zeros.push(ZeroRecord {
            gamma,
            source,
            zeta_k_prime,
            localization_err: err,
            derivative_gap,
            bracket_id: 0,
            excluded,
        });
    }
    for i in 1..zeros.len() {
        if zeros[i].gamma - zeros[i - 1].gamma < COLLISION_GAP {
            flags.push(format!(
                "ordinates {:.9} ({}) and {:.9} ({}) collide; both excluded",
                zeros[i - 1].gamma,
                zeros[i - 1].source,
                zeros[i].gamma,
                zeros[i].source
            ));
            zeros[i - 1].excluded = true;
            zeros[i].excluded = true;
        }
    }
    let mut list = ZeroList {
        field: FieldSummary::new(field, None),
        t,
        options,
        zeros,
        brackets: Vec::new(),
        flags,
    };
    assign_brackets(&mut list);
    Ok(list)
}

/// Principal argument of `ξ_K(s) = s (s - 1) Λ_K(s)`.
fn xi_phase(field: &FieldDescriptor, s: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let im = s.arg() + (s - one).arg() + log_gamma_factor(s, field).im + dedekind_unchecked(s, field).arg();
    wrap_angle(im)
}

/// Winding number of `ξ_K` around `[-1/2, 3/2] × [-t, t]`, which counts the
/// zeros of `ζ_K` in the critical strip with `|γ| < t`.
pub fn argument_principle_count(field: &FieldDescriptor, t: f64) -> Result<f64> {
    if !(t > 0.0) || t > MAX_SCAN_HEIGHT {
        return Err(Error::invalid(format!("contour height {t} outside (0, {MAX_SCAN_HEIGHT}]")));
    }
    let corners = [
        Complex64::new(1.5, -t),
        Complex64::new(1.5, t),
        Complex64::new(-0.5, t),
        Complex64::new(-0.5, -t),
        Complex64::new(1.5, -t),
    ];
    let base_step = 0.05;
    let sides: Vec<f64> = corners
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|w| {
            let (p, q) = (w[0], w[1]);
            let pieces = ((q - p).norm() / base_step).ceil().max(1.0) as usize;
            let mut acc = 0.0;
            for k in 0..pieces {
                let a = p + (q - p) * (k as f64 / pieces as f64);
                let b = p + (q - p) * ((k + 1) as f64 / pieces as f64);
                acc += phase_change(field, a, b, xi_phase(field, a), xi_phase(field, b), 0);
            }
            acc
        })
        .collect();
    Ok(sides.iter().sum::<f64>() / (2.0 * std::f64::consts::PI))
}

fn phase_change(field: &FieldDescriptor, a: Complex64, b: Complex64, pa: f64, pb: f64, depth: u32) -> f64 {
    let d = wrap_angle(pb - pa);
    if d.abs() <= std::f64::consts::FRAC_PI_4 || depth > 30 {
        return d;
    }
    let m = (a + b) * 0.5;
    let pm = xi_phase(field, m);
    phase_change(field, a, m, pa, pm, depth + 1) + phase_change(field, m, b, pm, pb, depth + 1)
}
