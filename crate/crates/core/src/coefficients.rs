//! Dirichlet coefficients of `ζ_K` and `1/ζ_K`.
//!
//! `a_n` counts integral ideals of norm `n`; for a quadratic field
//! `a_n = Σ_{d | n} χ(d)`. The `b_n` of `1/ζ_K = Σ b_n n^{-s}` come from
//! inverting the series with a sieve, and an independent enumeration of
//! squarefree ideal products serves as the oracle.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::summation::{Accumulator, Precision};

/// Coefficient arrays for `n = 1..=N`. Index 0 is unused and holds zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    n_max: usize,
    a: Vec<i64>,
    b: Vec<i64>,
    big_m: Vec<i64>,
    small_m: Vec<f64>,
}

impl CoefficientTable {
    /// Build `a`, `b` and both running sums up to `n_max`.
    pub fn build(field: &FieldDescriptor, n_max: usize, precision: Precision) -> Result<Self> {
        let a = ideal_counts(field, n_max)?;
        let b = dirichlet_inverse(&a, n_max)?;
        let (big_m, small_m) = running_sums(&b, precision);
        Ok(CoefficientTable {
            n_max,
            a,
            b,
            big_m,
            small_m,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn a(&self, n: usize) -> i64 {
        self.a[n]
    }

    pub fn b(&self, n: usize) -> i64 {
        self.b[n]
    }

    /// `M_K(n) = Σ_{k ≤ n} b_k`.
    pub fn big_m(&self, n: usize) -> i64 {
        self.big_m[n]
    }

    /// `m_K(n) = Σ_{k ≤ n} b_k / k`.
    pub fn small_m(&self, n: usize) -> f64 {
        self.small_m[n]
    }

    /// `a_0..=a_N` with `a_0 = 0`.
    pub fn a_slice(&self) -> &[i64] {
        &self.a
    }

    pub fn b_slice(&self) -> &[i64] {
        &self.b
    }

    /// Write `n, a_n, b_n, M_K, m_K` as CSV.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            n: usize,
            a_n: i64,
            b_n: i64,
            #[serde(rename = "M_K")]
            big_m: i64,
            #[serde(rename = "m_K")]
            small_m: f64,
        }
        let mut w = csv::Writer::from_writer(writer);
        for n in 1..=self.n_max {
            w.serialize(Row {
                n,
                a_n: self.a[n],
                b_n: self.b[n],
                big_m: self.big_m[n],
                small_m: self.small_m[n],
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// `a_1..=a_N` (index 0 is zero).
pub fn ideal_counts(field: &FieldDescriptor, n_max: usize) -> Result<Vec<i64>> {
    if n_max == 0 {
        return Err(Error::invalid("coefficient bound must be at least 1"));
    }
    let mut a = vec![0i64; n_max + 1];
    if field.is_rational() {
        a[1..].iter_mut().for_each(|v| *v = 1);
        return Ok(a);
    }
    for d in 1..=n_max {
        let c = field.chi_unchecked(d as u64) as i64;
        if c == 0 {
            continue;
        }
        let mut m = d;
        while m <= n_max {
            a[m] += c;
            m += d;
        }
    }
    Ok(a)
}

/// Dirichlet inverse of `a` up to `n_max`: `b_1 = 1`,
/// `b_n = -Σ_{d | n, d > 1} a_d b_{n/d}`.
pub fn dirichlet_inverse(a: &[i64], n_max: usize) -> Result<Vec<i64>> {
    if a.len() <= n_max || n_max == 0 {
        return Err(Error::invalid("coefficient array shorter than the bound"));
    }
    if a[1] != 1 {
        return Err(Error::invalid(format!("series is not invertible: a_1 = {}", a[1])));
    }
    // acc[n] collects Σ_{d | n, d > 1} a_d b_{n/d} as the b_i become known.
    let mut acc = vec![0i64; n_max + 1];
    let mut b = vec![0i64; n_max + 1];
    for i in 1..=n_max {
        b[i] = if i == 1 { 1 } else { -acc[i] };
        if b[i] == 0 {
            continue;
        }
        let mut d = 2;
        while i * d <= n_max {
            if a[d] != 0 {
                acc[i * d] += a[d] * b[i];
            }
            d += 1;
        }
    }
    Ok(b)
}

pub(crate) fn prime_sieve(n_max: usize) -> Vec<usize> {
    let mut composite = vec![false; n_max + 1];
    let mut primes = Vec::new();
    for p in 2..=n_max {
        if !composite[p] {
            primes.push(p);
            let mut m = p * p;
            while m <= n_max {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// `b_n` from products of distinct prime ideals: each product of `ν` distinct
/// prime ideals with norm `n` contributes `(-1)^ν`.
pub fn b_via_prime_ideals(field: &FieldDescriptor, n_max: usize) -> Result<Vec<i64>> {
    if n_max == 0 {
        return Err(Error::invalid("coefficient bound must be at least 1"));
    }
    let mut norms: Vec<usize> = Vec::new();
    for p in prime_sieve(n_max) {
        if field.is_rational() {
            norms.push(p);
            continue;
        }
        match field.chi_unchecked(p as u64) {
            1 => {
                norms.push(p);
                norms.push(p);
            }
            0 => norms.push(p),
            _ => {
                if p.checked_mul(p).is_some_and(|q| q <= n_max) {
                    norms.push(p * p);
                }
            }
        }
    }
    norms.sort_unstable();
    let mut b = vec![0i64; n_max + 1];
    b[1] = 1;
    // Explicit stack of (next index, product, sign of the product).
    let mut stack: Vec<(usize, usize, i64)> = vec![(0, 1, 1)];
    while let Some((start, prod, sign)) = stack.pop() {
        for j in start..norms.len() {
            let Some(q) = prod.checked_mul(norms[j]).filter(|&q| q <= n_max) else {
                break;
            };
            b[q] -= sign;
            stack.push((j + 1, q, -sign));
        }
    }
    Ok(b)
}

fn running_sums(b: &[i64], precision: Precision) -> (Vec<i64>, Vec<f64>) {
    let n_max = b.len() - 1;
    let mut big_m = vec![0i64; n_max + 1];
    let mut small_m = vec![0f64; n_max + 1];
    let mut acc = Accumulator::new(precision);
    for n in 1..=n_max {
        big_m[n] = big_m[n - 1] + b[n];
        if b[n] != 0 {
            acc.add(b[n] as f64 / n as f64);
        }
        small_m[n] = acc.value();
    }
    (big_m, small_m)
}

/// `(M, m)` running sums of a table, recomputed at the given precision.
pub fn partial_sums(table: &CoefficientTable, precision: Precision) -> (Vec<i64>, Vec<f64>) {
    running_sums(&table.b, precision)
}
