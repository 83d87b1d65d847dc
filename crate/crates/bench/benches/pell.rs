use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stormer_bench::sample_moduli;
use stormer_core::infra::{compact_rep_build, regulator_bsgs, DEFAULT_GIANT_STEP_BUDGET};
use stormer_core::quadfield::fundamental_solution;
use stormer_core::sieve::scan_d;
use stormer_core::smooth::gen_basis;
use stormer_core::SearchConfig;

fn units(c: &mut Criterion) {
    let mut g = c.benchmark_group("unit");
    for d in sample_moduli() {
        g.bench_with_input(BenchmarkId::new("continued_fraction", &d), &d, |b, d| {
            b.iter(|| fundamental_solution(black_box(d)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("bsgs", &d), &d, |b, d| {
            b.iter(|| regulator_bsgs(black_box(d), DEFAULT_GIANT_STEP_BUDGET).unwrap())
        });
        let reg = regulator_bsgs(&d, DEFAULT_GIANT_STEP_BUDGET).unwrap();
        g.bench_with_input(BenchmarkId::new("compact", &d), &d, |b, d| {
            b.iter(|| compact_rep_build(black_box(d), &reg).unwrap())
        });
    }
    g.finish();
}

fn tower_scan(c: &mut Criterion) {
    let basis = gen_basis(41).unwrap();
    let cfg = SearchConfig::new(41);
    let mut g = c.benchmark_group("scan_d");
    for d in sample_moduli() {
        g.bench_with_input(BenchmarkId::from_parameter(&d), &d, |b, d| {
            b.iter(|| scan_d(black_box(d), &cfg, &basis).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, units, tower_scan);
criterion_main!(benches);
