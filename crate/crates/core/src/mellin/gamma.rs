//! Complex log-gamma by recurrence shift and the Stirling series.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k - 1))` for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN_MODULUS: f64 = 15.0;

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series
}

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// Principal branch of `log Γ(s)`: analytic on `C` minus the non-positive real
/// axis and real on the positive axis (the `loggamma` convention).
///
/// Poles at non-positive integers are reported as errors.
pub fn log_gamma_complex(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole {
            function: "log_gamma",
            at: format!("{}", s.re),
        });
    }
    Ok(log_gamma_unchecked(s))
}

/// `log Γ(s)` without the pole check. Callers guarantee `s` is not a pole.
pub(crate) fn log_gamma_unchecked(s: Complex64) -> Complex64 {
    let needs_shift = s.re < 0.5 || s.norm() < STIRLING_MIN_MODULUS;
    if !needs_shift {
        return stirling(s);
    }
    let target = if s.im.abs() >= STIRLING_MIN_MODULUS {
        0.5
    } else {
        STIRLING_MIN_MODULUS
    };
    let shift = (target - s.re).ceil().max(0.0) as usize;
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        correction += (s + k as f64).ln();
    }
    stirling(s + shift as f64) - correction
}

/// `Γ(s)` for complex `s`.
pub fn gamma_complex(s: Complex64) -> Result<Complex64> {
    log_gamma_complex(s).map(Complex64::exp)
}

/// `Γ(x)` for real `x` (negative non-integers allowed).
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma_complex(Complex64::new(x, 0.0)).map(|g| g.re)
}

/// Digamma `ψ(x)` for real `x > 0` via recurrence and the asymptotic series.
pub fn digamma(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x < 16.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // B_{2k} / (2k)
    let series = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    acc + x.ln() - 0.5 / x - series
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Product-recursion oracle: Γ(s) = Γ(s + 60) / (s (s+1) ... (s+59)), with
    /// a short Stirling tail evaluated at real part > 40.
    fn oracle_log_gamma(s: Complex64) -> Complex64 {
        let shift = 60;
        let mut corr = Complex64::new(0.0, 0.0);
        for k in 0..shift {
            corr += (s + k as f64).ln();
        }
        let z = s + shift as f64;
        let inv = z.inv();
        (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + inv / 12.0 - inv.powi(3) / 360.0
            + inv.powi(5) / 1260.0
            - corr
    }

    #[test]
    fn known_values() {
        assert!(log_gamma_complex(Complex64::new(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma_complex(Complex64::new(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
    }

    #[test]
    fn matches_reference_at_three_plus_four_i() {
        // log Γ(3 + 4i), 30-digit reference.
        let v = log_gamma_complex(Complex64::new(3.0, 4.0)).unwrap();
        assert!((v.re - (-1.756_626_784_603_784)).abs() < 1e-13);
        assert!((v.im - 4.742_664_438_034_658).abs() < 1e-13);
        let o = oracle_log_gamma(Complex64::new(3.0, 4.0));
        assert!((v - o).norm() < 1e-13);
    }

    #[test]
    fn negative_real_part_branch() {
        // log Γ(-2.5 + 0.3i) on the principal loggamma branch.
        let v = log_gamma_complex(Complex64::new(-2.5, 0.3)).unwrap();
        assert!((v.re - (-0.432_088_892_613_201_9)).abs() < 1e-13);
        assert!((v.im - (-9.093_345_421_289_74)).abs() < 1e-12);
    }

    #[test]
    fn poles_are_rejected() {
        for k in 0..5 {
            assert!(log_gamma_complex(Complex64::new(-(k as f64), 0.0)).is_err());
        }
    }

    #[test]
    fn gamma_of_negative_half() {
        let g = gamma_real(-0.5).unwrap();
        assert!((g + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn digamma_at_one_is_minus_euler() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(0.5) + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn recurrence_holds(re in -30.0f64..60.0, im in -200.0f64..200.0) {
            let s = Complex64::new(re, im);
            prop_assume!(s.norm() > 1e-3 && (s + 1.0).norm() > 1e-3);
            let lhs = log_gamma_unchecked(s + 1.0);
            let rhs = log_gamma_unchecked(s) + s.ln();
            // Equal modulo 2πi.
            let diff = lhs - rhs;
            let k = (diff.im / (2.0 * PI)).round();
            let scale = lhs.norm().max(1.0);
            prop_assert!((diff.re).abs() < 1e-12 * scale);
            prop_assert!((diff.im - 2.0 * PI * k).abs() < 1e-12 * scale);
        }

        #[test]
        fn agrees_with_product_oracle(re in -20.0f64..40.0, im in -300.0f64..300.0) {
            let s = Complex64::new(re, im);
            prop_assume!((s - s.re.round()).norm() > 1e-3 || s.re > 0.5);
            prop_assume!(re > -20.0 + 1e-9);
            let v = log_gamma_unchecked(s);
            let o = oracle_log_gamma(s);
            prop_assert!((v - o).norm() <= 1e-13 * v.norm().max(1.0));
        }
    }
}
