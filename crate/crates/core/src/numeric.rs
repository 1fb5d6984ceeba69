//! Small numerical building blocks: finite-difference derivatives with
//! Richardson extrapolation, Taylor coefficients on a Cauchy ring, and
//! least-squares lines.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Binomial coefficient as `f64`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// A derivative estimate together with its extrapolation error.
#[derive(Debug, Clone, Copy)]
pub struct Derivative {
    pub value: Complex64,
    pub err: f64,
}

/// Central difference of order `order` with spacing `h`, along the real
/// direction: `h^{-k} Σ_j (-1)^j C(k, j) f(z + (k/2 - j) h)`.
fn central_difference<F>(f: &F, z: Complex64, order: usize, h: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=order {
        let offset = (order as f64 / 2.0 - j as f64) * h;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += f(z + offset) * (sign * binomial(order, j));
    }
    acc / h.powi(order as i32)
}

/// `order`-th derivative of `f` at `z` by central differences with step
/// `h0` halved `halvings` times, Richardson-extrapolated in `h²`. The entry of
/// the tableau with the smallest error estimate is returned.
pub fn richardson_derivative<F>(f: F, z: Complex64, order: usize, h0: f64, halvings: usize) -> Derivative
where
    F: Fn(Complex64) -> Complex64,
{
    let levels = halvings + 1;
    let mut prev: Vec<Complex64> = Vec::new();
    let mut best = Derivative {
        value: central_difference(&f, z, order, h0),
        err: f64::INFINITY,
    };
    let mut h = h0;
    for k in 0..levels {
        let mut row = vec![central_difference(&f, z, order, h)];
        let mut factor = 1.0;
        for j in 1..=k {
            factor *= 4.0;
            let v = (row[j - 1] * factor - prev[j - 1]) / (factor - 1.0);
            row.push(v);
            let err = (v - row[j - 1]).norm().max((v - prev[j - 1]).norm());
            if err <= best.err {
                best = Derivative { value: v, err };
            }
        }
        if k >= 1 && (row[k] - prev[k - 1]).norm() >= 2.0 * best.err && best.err.is_finite() {
            break;
        }
        prev = row;
        h *= 0.5;
    }
    best
}

/// Real-valued convenience wrapper around [`richardson_derivative`].
pub fn richardson_derivative_real<F>(f: F, x: f64, order: usize, h0: f64, halvings: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let d = richardson_derivative(|z: Complex64| Complex64::new(f(z.re), 0.0), Complex64::new(x, 0.0), order, h0, halvings);
    (d.value.re, d.err)
}

/// Limit of `g(h)` as `h -> 0` for `g` with an error expansion in `h²`, from
/// `h0, h0/2, ...` (`halvings` halvings). Returns `(value, error estimate)`.
pub fn richardson_limit<G>(g: G, h0: f64, halvings: usize) -> (f64, f64)
where
    G: Fn(f64) -> f64,
{
    let mut prev: Vec<f64> = Vec::new();
    let mut best = (g(h0), f64::INFINITY);
    let mut h = h0;
    for k in 0..=halvings {
        let mut row = vec![g(h)];
        let mut factor = 1.0;
        for j in 1..=k {
            factor *= 4.0;
            let v = (factor * row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(v);
            let err = (v - row[j - 1]).abs().max((v - prev[j - 1]).abs());
            if err <= best.1 {
                best = (v, err);
            }
        }
        prev = row;
        h *= 0.5;
    }
    best
}

/// Taylor coefficients `c_0..=c_max_order` of `f` about `center`, from `points`
/// samples on the circle of the given radius (trapezoid rule for Cauchy's
/// integral). `f` must be analytic on the closed disc; removable
/// singularities at the centre are fine because the centre is never sampled.
pub fn cauchy_taylor<F>(f: F, center: Complex64, radius: f64, points: usize, max_order: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let samples: Vec<(Complex64, Complex64)> = (0..points)
        .map(|j| {
            let theta = 2.0 * PI * (j as f64 + 0.5) / points as f64;
            let w = Complex64::from_polar(1.0, theta);
            (w, f(center + w * radius))
        })
        .collect();
    (0..=max_order)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, v) in &samples {
                acc += v * w.powi(-(k as i32));
            }
            acc / (points as f64 * radius.powi(k as i32))
        })
        .collect()
}

/// Ordinary least-squares line `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let slope_stderr = if n > 2 { (ss / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Some(LineFit {
        slope,
        intercept,
        rms_residual: (ss / nf).sqrt(),
        slope_stderr,
    })
}

/// Wrap an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// `(e^z - 1) / z`, accurate near `z = 0`.
pub fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // 1 + z/2 + z²/6 + z³/24 + z⁴/120
        Complex64::new(1.0, 0.0) + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)))
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Log-spaced grid of `points` values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect()
}
