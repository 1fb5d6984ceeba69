//! Compensated accumulation with a fixed reduction order.
//!
//! Every long series in the crate (kernel-weighted coefficient sums, running
//! means of `b_n / n`, quadrature sums) goes through one of the accumulators
//! here. Parallel sums split the index range into fixed-size chunks and
//! combine chunk results in index order, so the result does not depend on the
//! number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Arithmetic used by accumulators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Neumaier-compensated `f64`.
    #[default]
    Standard,
    /// Double-double accumulation (about 32 significant digits in the sum).
    Extended,
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn add(self, other: DoubleDouble) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }

    /// Exact product of two doubles (via FMA).
    #[inline]
    pub fn mul_f64s(a: f64, b: f64) -> Self {
        let p = a * b;
        let e = a.mul_add(b, -p);
        DoubleDouble { hi: p, lo: e }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// An accumulator selected at runtime by [`Precision`].
#[derive(Debug, Clone, Copy)]
pub enum Accumulator {
    Standard(NeumaierSum),
    Extended(DoubleDouble),
}

impl Accumulator {
    pub fn new(precision: Precision) -> Self {
        match precision {
            Precision::Standard => Accumulator::Standard(NeumaierSum::new()),
            Precision::Extended => Accumulator::Extended(DoubleDouble::ZERO),
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        match self {
            Accumulator::Standard(s) => s.add(x),
            Accumulator::Extended(d) => *d = d.add_f64(x),
        }
    }

    pub fn merge(&mut self, other: &Accumulator) {
        match (self, other) {
            (Accumulator::Standard(a), Accumulator::Standard(b)) => a.merge(b),
            (Accumulator::Extended(a), Accumulator::Extended(b)) => *a = a.add(*b),
            (Accumulator::Standard(a), Accumulator::Extended(b)) => {
                a.add(b.hi);
                a.add(b.lo);
            }
            (Accumulator::Extended(a), Accumulator::Standard(b)) => {
                *a = a.add_f64(b.sum).add_f64(b.comp);
            }
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Accumulator::Standard(s) => s.value(),
            Accumulator::Extended(d) => d.to_f64(),
        }
    }
}

/// Chunk length for [`ordered_par_sum`]. Fixed so results are independent of
/// the thread count.
pub const REDUCTION_CHUNK: usize = 4096;

/// Sum `term(i)` for `i` in `range` using fixed chunks reduced in index order.
pub fn ordered_par_sum<F>(range: std::ops::Range<usize>, precision: Precision, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let start = range.start;
    let end = range.end.max(start);
    let n_chunks = (end - start).div_ceil(REDUCTION_CHUNK);
    let partials: Vec<Accumulator> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = start + c * REDUCTION_CHUNK;
            let hi = (lo + REDUCTION_CHUNK).min(end);
            let mut acc = Accumulator::new(precision);
            for i in lo..hi {
                acc.add(term(i));
            }
            acc
        })
        .collect();
    let mut total = Accumulator::new(precision);
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

/// Sequential compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}
