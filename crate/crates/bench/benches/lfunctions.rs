use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dedekind_core::lfunction::{dedekind_eval, find_zeros, ZeroScanOptions};
use dedekind_core::mellin::{KernelEvaluator, KernelSpec};
use dedekind_core::modular::lhs_sum;
use dedekind_core::{make_field, CoefficientTable, Complex64, Precision};

fn lfunctions(c: &mut Criterion) {
    let gauss = make_field(Some(-1)).unwrap();
    let real = make_field(Some(5)).unwrap();
    let q = make_field(None).unwrap();

    c.bench_function("dedekind_eval_critical_line", |b| {
        b.iter(|| dedekind_eval(black_box(Complex64::new(0.5, 50.0)), &gauss).unwrap())
    });
    c.bench_function("coefficient_table_1e6", |b| {
        b.iter(|| CoefficientTable::build(&real, black_box(1_000_000), Precision::Standard).unwrap())
    });

    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("find_zeros_q_30", |b| {
        b.iter(|| find_zeros(&q, black_box(30.0), ZeroScanOptions::default()).unwrap())
    });
    let table = CoefficientTable::build(&real, 1_000_000, Precision::Standard).unwrap();
    let kernel = KernelEvaluator::new(KernelSpec::new(2, 0).unwrap());
    g.bench_function("lhs_sum_real_quadratic_1e6", |b| {
        b.iter(|| lhs_sum(&real, black_box(1.0), &table, &kernel, Precision::Standard).unwrap())
    });
    g.finish();
}

criterion_group!(benches, lfunctions);
criterion_main!(benches);
