//! Euler–Maclaurin evaluation of `ζ(s)`, Hurwitz `ζ(s, a)` and the quadratic
//! `L(s, χ)`, and the Dedekind zeta function built from them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::mellin::gamma::log_gamma_unchecked;
use crate::numeric::phi1;

/// `B_{2k} / (2k)!` for k = 1..=8.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

fn cutoff(s: Complex64) -> usize {
    s.im.abs().ceil() as usize + 30
}

/// Euler–Maclaurin correction `Σ_k B_{2k}/(2k)! (s)_{2k-1} u^{-s-2k+1}`.
fn em_corrections(s: Complex64, u: f64) -> Complex64 {
    let u_pow = (-s * u.ln()).exp(); // u^{-s}
    let inv_u = 1.0 / u;
    let mut rising = s; // s (s+1) ... (s+2k-2)
    let mut upow = u_pow * inv_u;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        acc += rising * upow * *b;
        let m = (2 * k + 1) as f64;
        rising = rising * (s + m) * (s + m + 1.0);
        upow *= inv_u * inv_u;
    }
    acc
}

/// Riemann zeta function for `s ≠ 1`.
pub fn zeta_eval(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta",
            at: "1".into(),
        });
    }
    Ok(zeta_unchecked(s))
}

pub(crate) fn zeta_unchecked(s: Complex64) -> Complex64 {
    let n = cutoff(s);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..n {
        acc += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp();
    acc + n_pow * nf / (s - 1.0) + n_pow * 0.5 + em_corrections(s, nf)
}

/// Hurwitz zeta `ζ(s, a)` for `0 < a`, `s ≠ 1`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(Error::Domain {
            function: "hurwitz_zeta",
            value: a,
            reason: "a must be positive",
        });
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "hurwitz_zeta",
            at: "1".into(),
        });
    }
    let (body, u) = hurwitz_body(s, a);
    Ok(body + (-(s - 1.0) * u.ln()).exp() / (s - 1.0))
}

/// Everything in the Euler–Maclaurin formula for `ζ(s, a)` except the pole
/// term `u^{1-s}/(s-1)`; returns the body and `u = N + a`.
fn hurwitz_body(s: Complex64, a: f64) -> (Complex64, f64) {
    let n = cutoff(s);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += (-s * (k as f64 + a).ln()).exp();
    }
    let u = n as f64 + a;
    let u_pow = (-s * u.ln()).exp();
    (acc + u_pow * 0.5 + em_corrections(s, u), u)
}

/// `L(s, χ_{d_K}) = q^{-s} Σ_a χ(a) ζ(s, a/q)`. The pole terms are combined as
/// `Σ χ(a) (u_a^{1-s} - 1)/(s-1)` so the function is finite at `s = 1`.
pub fn l_eval(s: Complex64, field: &FieldDescriptor) -> Result<Complex64> {
    if field.is_rational() {
        return Err(Error::NotQuadratic("l_eval"));
    }
    Ok(l_unchecked(s, field))
}

pub(crate) fn l_unchecked(s: Complex64, field: &FieldDescriptor) -> Complex64 {
    let q = field.conductor();
    let qf = q as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..q {
        let c = field.chi_unchecked(a);
        if c == 0 {
            continue;
        }
        let (body, u) = hurwitz_body(s, a as f64 / qf);
        let lu = u.ln();
        let pole = -phi1(-(s - 1.0) * lu) * lu;
        acc += (body + pole) * c as f64;
    }
    acc * (-s * qf.ln()).exp()
}

/// `ζ_K(s)`: `ζ(s)` for `Q`, `ζ(s) L(s, χ)` for quadratic fields.
pub fn dedekind_eval(s: Complex64, field: &FieldDescriptor) -> Result<Complex64> {
    let z = zeta_eval(s)?;
    if field.is_rational() {
        Ok(z)
    } else {
        Ok(z * l_unchecked(s, field))
    }
}

pub(crate) fn dedekind_unchecked(s: Complex64, field: &FieldDescriptor) -> Complex64 {
    let z = zeta_unchecked(s);
    if field.is_rational() {
        z
    } else {
        z * l_unchecked(s, field)
    }
}

/// `log` of the gamma factor `η^{-s/2} Γ^{r1}(s/2) Γ^{r2}(s)` of `Λ_K`.
pub(crate) fn log_gamma_factor(s: Complex64, field: &FieldDescriptor) -> Complex64 {
    let mut acc = -s * 0.5 * field.eta().ln();
    if field.r1() > 0 {
        acc += log_gamma_unchecked(s * 0.5) * field.r1() as f64;
    }
    if field.r2() > 0 {
        acc += log_gamma_unchecked(s) * field.r2() as f64;
    }
    acc
}

fn gamma_factor_pole(s: Complex64, field: &FieldDescriptor) -> bool {
    if s.im != 0.0 || s.re > 0.0 || s.re != s.re.round() {
        return false;
    }
    field.r2() > 0 || (s.re as i64) % 2 == 0
}

/// Completed zeta `Λ_K(s) = (|d_K| / (4^{r2} π^n))^{s/2} Γ^{r1}(s/2) Γ^{r2}(s) ζ_K(s)`.
pub fn completed_lambda(s: Complex64, field: &FieldDescriptor) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) || gamma_factor_pole(s, field) {
        return Err(Error::Pole {
            function: "completed_lambda",
            at: format!("{s}"),
        });
    }
    Ok(log_gamma_factor(s, field).exp() * dedekind_unchecked(s, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_classical_values() {
        assert!((zeta_eval(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta_eval(c(-1.0, 0.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-13);
        assert!((zeta_eval(c(0.0, 0.0)).unwrap().re + 0.5).abs() < 1e-14);
        assert!(zeta_eval(c(0.5, 14.134_725_141_734_694)).unwrap().norm() < 1e-10);
        assert!(zeta_eval(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn zeta_matches_dirichlet_series_right_of_one() {
        let s = c(3.0, 40.0);
        let direct: Complex64 = (1..200_000).map(|n| (-s * (n as f64).ln()).exp()).sum();
        assert!((zeta_eval(s).unwrap() - direct).norm() < 1e-9);
    }

    #[test]
    fn hurwitz_at_one_is_zeta() {
        for s in [c(2.0, 0.0), c(0.5, 30.0), c(-1.5, 3.0)] {
            let z = zeta_eval(s).unwrap();
            assert!((hurwitz_zeta(s, 1.0).unwrap() - z).norm() < 1e-10 * z.norm());
        }
        // ζ(-1.5 + 3i), 30-digit reference.
        let z = zeta_eval(c(-1.5, 3.0)).unwrap();
        assert!((z - c(0.201_328_830_542_150_3, 0.097_149_743_015_620_04)).norm() < 1e-10 * z.norm());
        // ζ(s, 1/2) = (2^s - 1) ζ(s)
        let s = c(0.7, 9.0);
        let expect = ((s * 2f64.ln()).exp() - 1.0) * zeta_eval(s).unwrap();
        assert!((hurwitz_zeta(s, 0.5).unwrap() - expect).norm() < 1e-12);
    }

    #[test]
    fn l_values_at_one_and_two() {
        let gauss = make_field(Some(-1)).unwrap();
        assert!((l_eval(c(1.0, 0.0), &gauss).unwrap().re - PI / 4.0).abs() < 1e-13);
        // Catalan's constant
        assert!((l_eval(c(2.0, 0.0), &gauss).unwrap().re - 0.915_965_594_177_219).abs() < 1e-13);
        let k5 = make_field(Some(5)).unwrap();
        assert!((l_eval(c(1.0, 0.0), &k5).unwrap().re - 0.430_408_940_964_004).abs() < 1e-13);
        assert!((l_eval(c(2.0, 0.0), &k5).unwrap().re - 0.706_211_403_259_741).abs() < 1e-13);
        assert!(l_eval(c(0.0, 0.0), &k5).unwrap().norm() < 1e-12);
        let k3 = make_field(Some(-3)).unwrap();
        assert!((l_eval(c(1.0, 0.0), &k3).unwrap().re - 0.604_599_788_078_073).abs() < 1e-13);
        assert!(l_eval(c(1.0, 0.0), &make_field(None).unwrap()).is_err());
    }

    #[test]
    fn l_first_zero_for_gaussian_character() {
        let gauss = make_field(Some(-1)).unwrap();
        assert!(l_eval(c(0.5, 6.020_948_904_697_597), &gauss).unwrap().norm() < 1e-10);
    }

    #[test]
    fn lambda_functional_equation() {
        for d in [None, Some(5), Some(-1), Some(-3), Some(2)] {
            let k = make_field(d).unwrap();
            for s in [c(0.3, 2.0), c(0.5, 5.0), c(-0.4, 11.0), c(1.7, -3.0), c(0.1, 40.0)] {
                let a = completed_lambda(s, &k).unwrap();
                let b = completed_lambda(Complex64::new(1.0, 0.0) - s, &k).unwrap();
                assert!((a - b).norm() <= 1e-10 * a.norm().max(b.norm()), "{d:?} {s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn lambda_of_rationals_at_two() {
        let q = make_field(None).unwrap();
        assert!((completed_lambda(c(2.0, 0.0), &q).unwrap().re - PI / 6.0).abs() < 1e-14);
        assert!(completed_lambda(c(0.0, 0.0), &q).is_err());
        assert!(completed_lambda(c(1.0, 0.0), &q).is_err());
    }
}
