//! Analytic invariants of `Q` and quadratic fields `Q(√d)`.
//!
//! A [`FieldDescriptor`] carries the signature `(r1, r2)`, the fundamental
//! discriminant and the kernel scale `η = 4^{r2} π^n / |d_K|`. For quadratic
//! fields it also holds one period of the Kronecker character `(d_K / ·)`,
//! through which `ζ_K(s) = ζ(s) L(s, χ_{d_K})`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Analytic invariants of `Q` (when `d` is `None`) or `Q(√d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDescriptor {
    d: Option<i64>,
    d_k: i64,
    r1: u32,
    r2: u32,
    w: u32,
    eta: f64,
    chi: Vec<i8>,
}

impl FieldDescriptor {
    pub fn d(&self) -> Option<i64> {
        self.d
    }

    /// Fundamental discriminant (1 for `Q`).
    pub fn d_k(&self) -> i64 {
        self.d_k
    }

    /// Conductor `|d_K|` of the quadratic character.
    pub fn conductor(&self) -> u64 {
        self.d_k.unsigned_abs()
    }

    pub fn r1(&self) -> u32 {
        self.r1
    }

    pub fn r2(&self) -> u32 {
        self.r2
    }

    /// Degree `n = r1 + 2 r2`.
    pub fn degree(&self) -> u32 {
        self.r1 + 2 * self.r2
    }

    /// Order of vanishing of `ζ_K` at `s = 0`: `r = r1 + r2 - 1`.
    pub fn r(&self) -> u32 {
        self.r1 + self.r2 - 1
    }

    /// Number of roots of unity.
    pub fn w(&self) -> u32 {
        self.w
    }

    /// `η = 4^{r2} π^n / |d_K|`; the modular relation requires `αβ = η`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_none()
    }

    pub fn is_real_quadratic(&self) -> bool {
        matches!(self.d, Some(d) if d > 0)
    }

    pub fn is_imaginary_quadratic(&self) -> bool {
        matches!(self.d, Some(d) if d < 0)
    }

    /// `χ(-1)`: +1 for real quadratic fields, -1 for imaginary ones.
    pub fn parity(&self) -> Result<i32> {
        if self.is_rational() {
            return Err(Error::NotQuadratic("parity"));
        }
        Ok(if self.d_k > 0 { 1 } else { -1 })
    }

    /// Kronecker symbol `(d_K / m)` for `m >= 1`.
    pub fn kronecker_chi(&self, m: u64) -> Result<i32> {
        if self.is_rational() {
            return Err(Error::NotQuadratic("kronecker_chi"));
        }
        if m == 0 {
            return Err(Error::invalid("kronecker_chi needs m >= 1"));
        }
        Ok(self.chi_unchecked(m))
    }

    /// Table lookup of the character; `m` may be any non-negative integer.
    #[inline]
    pub(crate) fn chi_unchecked(&self, m: u64) -> i32 {
        self.chi[(m % self.chi.len() as u64) as usize] as i32
    }

    /// Short label such as `Q`, `Q(sqrt(5))`, `Q(sqrt(-1))`.
    pub fn label(&self) -> String {
        match self.d {
            None => "Q".to_string(),
            Some(d) => format!("Q(sqrt({d}))"),
        }
    }
}

/// Build the descriptor for `Q` (`None`) or `Q(√d)`.
pub fn make_field(d: Option<i64>) -> Result<FieldDescriptor> {
    let Some(d) = d else {
        return Ok(FieldDescriptor {
            d: None,
            d_k: 1,
            r1: 1,
            r2: 0,
            w: 2,
            eta: PI,
            chi: vec![1],
        });
    };
    if d == 0 || d == 1 {
        return Err(Error::InvalidFieldParameter(d));
    }
    if !is_squarefree(d.unsigned_abs()) {
        return Err(Error::NotSquarefree(d));
    }
    let d_k = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let (r1, r2) = if d > 0 { (2, 0) } else { (0, 1) };
    let w = match d {
        -1 => 4,
        -3 => 6,
        _ => 2,
    };
    let q = d_k.unsigned_abs();
    let chi = (0..q).map(|m| kronecker_symbol(d_k, m) as i8).collect();
    let degree = r1 + 2 * r2;
    let eta = 4f64.powi(r2 as i32) * PI.powi(degree as i32) / q as f64;
    Ok(FieldDescriptor {
        d: Some(d),
        d_k,
        r1,
        r2,
        w,
        eta,
        chi,
    })
}

/// Parse a field selector: `Q` (any case) or an integer `d`.
pub fn parse_field(selector: &str) -> Result<FieldDescriptor> {
    let t = selector.trim();
    if t.eq_ignore_ascii_case("q") {
        return make_field(None);
    }
    let d: i64 = t
        .parse()
        .map_err(|_| Error::invalid(format!("unknown field selector `{selector}`")))?;
    make_field(Some(d))
}

pub(crate) fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Jacobi symbol `(a / n)` for odd `n > 0`.
fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(d / m)` for a discriminant `d` and `m >= 0`.
pub(crate) fn kronecker_symbol(d: i64, m: u64) -> i32 {
    if m == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut m = m;
    let mut result = 1;
    let twos = m.trailing_zeros();
    if twos > 0 {
        m >>= twos;
        let at_two = match d.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
        if at_two == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            result *= at_two;
        }
    }
    result * jacobi(d, m)
}

/// Class-number data obtained from `L(1, χ_{d_K})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldInvariants {
    /// Class number, when it can be isolated (imaginary quadratic fields).
    pub h: Option<u64>,
    /// Unrounded class number, `w sqrt|d_K| L1 / (2π)` (imaginary case).
    pub h_raw: Option<f64>,
    /// Regulator (`1` for imaginary quadratic fields).
    pub regulator: Option<f64>,
    /// The product `hR`.
    pub h_r: f64,
    /// `L(1, χ_{d_K})`.
    pub l1: f64,
    /// Error estimate of `l1` from the extrapolation table.
    pub l1_err: f64,
    /// Real quadratic fields: only `hR` is determined.
    pub product_only: bool,
}

/// Hard cap on the number of character-sum terms.
pub const L1_TERM_CAP: u64 = 10_000_000;

/// Default target absolute error on `L(1, χ)`.
pub const L1_DEFAULT_BUDGET: f64 = 1e-10;

/// `L(1, χ)` by block partial sums `S(N) = Σ_{n ≤ N q} χ(n)/n` with
/// Richardson extrapolation in `1/N`: the tail of the character sum has an
/// asymptotic expansion in integer powers of `1/N` (the `log N` terms cancel
/// because `χ` sums to zero over a period). Returns `(value, error estimate)`.
pub fn l1_accelerated(field: &FieldDescriptor, budget: f64) -> Result<(f64, f64)> {
    if field.is_rational() {
        return Err(Error::NotQuadratic("l1_accelerated"));
    }
    if !(budget > 0.0) {
        return Err(Error::invalid("precision budget must be positive"));
    }
    let q = field.conductor();
    let mut blocks: u64 = 8;
    let mut n_done: u64 = 0;
    let mut partial = crate::summation::NeumaierSum::new();
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut best_err = f64::INFINITY;
    loop {
        let upto = blocks * q;
        if upto > L1_TERM_CAP {
            return Err(Error::NotConverged {
                what: "L(1, chi) character sum",
                iterations: n_done as usize,
                estimate: best_err,
            });
        }
        for n in (n_done + 1)..=upto {
            let c = field.chi_unchecked(n);
            if c != 0 {
                partial.add(c as f64 / n as f64);
            }
        }
        n_done = upto;
        let mut row = vec![partial.value()];
        if let Some(prev) = table.last() {
            let mut factor = 1.0;
            for j in 0..prev.len() {
                factor *= 2.0;
                let v = (factor * row[j] - prev[j]) / (factor - 1.0);
                row.push(v);
            }
            let k = row.len() - 1;
            let err = (row[k] - prev[k - 1]).abs();
            best_err = best_err.min(err);
            if err < budget && k >= 3 {
                return Ok((row[k], err));
            }
        }
        table.push(row);
        blocks *= 2;
    }
}

/// Class-number data via the analytic class number formula.
pub fn class_number_data(field: &FieldDescriptor, precision_budget: f64) -> Result<FieldInvariants> {
    let (l1, l1_err) = l1_accelerated(field, precision_budget)?;
    let sqrt_disc = (field.conductor() as f64).sqrt();
    if field.is_real_quadratic() {
        Ok(FieldInvariants {
            h: None,
            h_raw: None,
            regulator: None,
            h_r: sqrt_disc * l1 / 2.0,
            l1,
            l1_err,
            product_only: true,
        })
    } else {
        let h_raw = field.w() as f64 * sqrt_disc * l1 / (2.0 * PI);
        let h = h_raw.round().max(1.0) as u64;
        Ok(FieldInvariants {
            h: Some(h),
            h_raw: Some(h_raw),
            regulator: Some(1.0),
            h_r: h as f64,
            l1,
            l1_err,
            product_only: false,
        })
    }
}

/// JSON record `{d, d_K, r1, r2, n, eta, w, h, R, hR, L1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub d: Option<i64>,
    #[serde(rename = "d_K")]
    pub d_k: i64,
    pub r1: u32,
    pub r2: u32,
    pub n: u32,
    pub eta: f64,
    pub w: u32,
    pub h: Option<u64>,
    #[serde(rename = "R")]
    pub regulator: Option<f64>,
    #[serde(rename = "hR")]
    pub h_r: Option<f64>,
    #[serde(rename = "L1")]
    pub l1: Option<f64>,
}

impl FieldSummary {
    pub fn new(field: &FieldDescriptor, invariants: Option<&FieldInvariants>) -> Self {
        let (h, regulator, h_r, l1) = match (field.is_rational(), invariants) {
            (true, _) => (Some(1), Some(1.0), Some(1.0), None),
            (false, Some(inv)) => (inv.h, inv.regulator, Some(inv.h_r), Some(inv.l1)),
            (false, None) => (None, None, None, None),
        };
        FieldSummary {
            d: field.d(),
            d_k: field.d_k(),
            r1: field.r1(),
            r2: field.r2(),
            n: field.degree(),
            eta: field.eta(),
            w: field.w(),
            h,
            regulator,
            h_r,
            l1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Legendre symbol by enumerating squares mod an odd prime.
    fn legendre_brute(a: i64, p: u64) -> i32 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn rational_field() {
        let q = make_field(None).unwrap();
        assert_eq!((q.r1(), q.r2(), q.d_k(), q.degree(), q.r()), (1, 0, 1, 1, 0));
        assert_eq!(q.eta(), PI);
        assert!(q.kronecker_chi(3).is_err());
    }

    #[test]
    fn real_quadratic_sqrt5() {
        let k = make_field(Some(5)).unwrap();
        assert_eq!((k.r1(), k.r2(), k.d_k(), k.w(), k.r()), (2, 0, 5, 2, 1));
        assert!((k.eta() - PI * PI / 5.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_field() {
        let k = make_field(Some(-1)).unwrap();
        assert_eq!((k.r1(), k.r2(), k.d_k(), k.w(), k.r()), (0, 1, -4, 4, 0));
        assert!((k.eta() - PI * PI).abs() < 1e-14);
    }

    #[test]
    fn discriminant_convention() {
        for (d, dk) in [(2, 8), (3, 12), (-2, -8), (-3, -3), (-5, -20), (13, 13), (-7, -7), (6, 24)] {
            let k = make_field(Some(d)).unwrap();
            assert_eq!(k.d_k(), dk, "d = {d}");
            assert!(matches!(dk.rem_euclid(4), 0 | 1));
        }
        assert_eq!(make_field(Some(-3)).unwrap().w(), 6);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_field(Some(0)), Err(Error::InvalidFieldParameter(0))));
        assert!(matches!(make_field(Some(1)), Err(Error::InvalidFieldParameter(1))));
        assert!(matches!(make_field(Some(12)), Err(Error::NotSquarefree(12))));
        assert!(matches!(make_field(Some(-4)), Err(Error::NotSquarefree(-4))));
        assert!(parse_field("banana").is_err());
        assert!(parse_field("q").unwrap().is_rational());
    }

    #[test]
    fn kronecker_examples() {
        let gauss = make_field(Some(-1)).unwrap();
        assert_eq!(gauss.kronecker_chi(2).unwrap(), 0);
        assert_eq!(gauss.kronecker_chi(3).unwrap(), -1);
        assert_eq!(gauss.kronecker_chi(5).unwrap(), 1);
        let k5 = make_field(Some(5)).unwrap();
        assert_eq!(k5.kronecker_chi(4).unwrap(), 1);
        assert!(k5.kronecker_chi(0).is_err());
    }

    #[test]
    fn kronecker_matches_legendre_on_odd_primes() {
        let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73];
        for d in [-1i64, -2, -3, -5, -7, 2, 3, 5, 6, 7, 13, 17] {
            let k = make_field(Some(d)).unwrap();
            for &p in &primes {
                assert_eq!(k.kronecker_chi(p).unwrap(), legendre_brute(k.d_k(), p), "d_K={} p={p}", k.d_k());
            }
        }
    }

    #[test]
    fn character_is_periodic_and_completely_multiplicative() {
        for d in [-1i64, -3, 5, 2, -5, 3] {
            let k = make_field(Some(d)).unwrap();
            let q = k.conductor();
            for a in 1..=1000u64 {
                let direct = kronecker_symbol(k.d_k(), a);
                assert_eq!(k.kronecker_chi(a).unwrap(), direct);
                assert_eq!(kronecker_symbol(k.d_k(), a + q), direct);
                for b in 1..=1000u64 {
                    assert_eq!(
                        kronecker_symbol(k.d_k(), a * b),
                        direct * kronecker_symbol(k.d_k(), b)
                    );
                }
            }
        }
    }

    #[test]
    fn class_numbers_of_small_imaginary_fields() {
        let inv = class_number_data(&make_field(Some(-1)).unwrap(), 1e-10).unwrap();
        assert_eq!(inv.h, Some(1));
        assert!((inv.l1 - PI / 4.0).abs() < 1e-10);
        assert!((inv.h_raw.unwrap() - 1.0).abs() < 1e-6);

        let inv = class_number_data(&make_field(Some(-3)).unwrap(), 1e-10).unwrap();
        assert_eq!(inv.h, Some(1));
        assert!((inv.l1 - PI / (3.0 * 3f64.sqrt())).abs() < 1e-10);

        // h(Q(sqrt(-5))) = 2, h(Q(sqrt(-23))) = 3
        let inv = class_number_data(&make_field(Some(-5)).unwrap(), 1e-10).unwrap();
        assert_eq!(inv.h, Some(2));
        let inv = class_number_data(&make_field(Some(-23)).unwrap(), 1e-10).unwrap();
        assert_eq!(inv.h, Some(3));
    }

    /// Smallest unit `ε > 1` of the ring of integers of `Q(√d)`, `d > 1`
    /// squarefree, by brute-force search for `x² - D y² = ±4` (`D = d_K`).
    fn fundamental_unit(d_k: i64) -> f64 {
        for y in 1i64..100_000 {
            for sign in [-4i64, 4] {
                let x2 = d_k * y * y + sign;
                if x2 <= 0 {
                    continue;
                }
                let x = (x2 as f64).sqrt().round() as i64;
                if x * x == x2 {
                    return (x as f64 + y as f64 * (d_k as f64).sqrt()) / 2.0;
                }
            }
        }
        panic!("no unit found");
    }

    #[test]
    fn real_quadratic_products_match_unit_search() {
        // (d, h) with h known: Q(sqrt 10) and Q(sqrt 15) have class number 2.
        for (d, h) in [(5i64, 1.0), (2, 1.0), (3, 1.0), (13, 1.0), (10, 2.0), (15, 2.0)] {
            let k = make_field(Some(d)).unwrap();
            let inv = class_number_data(&k, 1e-10).unwrap();
            assert!(inv.product_only);
            let regulator = fundamental_unit(k.d_k()).ln();
            assert!((inv.h_r - h * regulator).abs() < 1e-9, "d = {d}: {} vs {}", inv.h_r, h * regulator);
        }
    }

    #[test]
    fn summary_serializes_expected_keys() {
        let k = make_field(Some(5)).unwrap();
        let inv = class_number_data(&k, 1e-10).unwrap();
        let v = serde_json::to_value(FieldSummary::new(&k, Some(&inv))).unwrap();
        for key in ["d", "d_K", "r1", "r2", "n", "eta", "w", "h", "R", "hR", "L1"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
