//! Modified Bessel function of the second kind, order zero.

use crate::error::{Error, Result};
use crate::mellin::gamma::EULER_GAMMA;

/// Below this the ascending series is used, above it Steed's continued fraction.
pub const K0_CROSSOVER: f64 = 2.0;

const SERIES_MAX_TERMS: usize = 200;
const CF_MAX_ITER: usize = 10_000;

/// `K_0(x)` for `x > 0`.
///
/// For `x <= 2` the ascending series
/// `K_0(x) = -(ln(x/2) + γ) I_0(x) + Σ_{k≥1} (x²/4)^k H_k / (k!)²`;
/// for larger `x` the Thompson–Barnett continued fraction (Steed's method)
/// for the normalised `K_0(x) e^x sqrt(2x/π)`, which converges quickly where
/// the plain asymptotic series is still too coarse.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "bessel_k0",
            value: x,
            reason: "x must be positive and finite",
        });
    }
    if x <= K0_CROSSOVER {
        Ok(k0_series(x))
    } else {
        Ok(k0_continued_fraction(x))
    }
}

fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0; // (x²/4)^k / (k!)²
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < 1e-18 * tail.abs().max(1e-300) && term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

fn k0_continued_fraction(x: f64) -> f64 {
    // Steed's algorithm for K_ν, ν = 0.
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..CF_MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s
}

/// `K_0(2x) + γ + ln x`, the bracket of the real-quadratic kernel
/// `Z_{2,0}(x) = 4 (K_0(2x) + γ + ln x)`.
///
/// For small `x` the logarithms cancel exactly, so the series
/// `Σ_{k≥1} x^{2k} (H_k - γ - ln x) / (k!)²` is summed directly.
pub fn k0_log_bracket(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "k0_log_bracket",
            value: x,
            reason: "x must be positive and finite",
        });
    }
    if 2.0 * x > K0_CROSSOVER {
        return Ok(bessel_k0(2.0 * x)? + EULER_GAMMA + x.ln());
    }
    let q = x * x;
    let lg = EULER_GAMMA + x.ln();
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        let t = term * (harmonic - lg);
        sum += t;
        if t.abs() < 1e-18 * sum.abs() || term < 1e-300 {
            break;
        }
    }
    Ok(sum)
}
