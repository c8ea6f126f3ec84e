use criterion::{criterion_group, criterion_main, Criterion};
use meridian_bench::{cosh_over_spiral, counterexample, grid, line_over_small_circle};
use meridian_core::patch;
use meridian_core::weingarten::{self, Tolerances};
use std::hint::black_box;

fn residual_grids(c: &mut Criterion) {
    let m = cosh_over_spiral();
    let g = grid(&m, 41);
    c.bench_function("residual 41x41 cosh/spiral", |b| {
        b.iter(|| weingarten::residual(black_box(&m), &g).unwrap())
    });
    let m = counterexample();
    let g = grid(&m, 41);
    c.bench_function("classify 41x41 counterexample", |b| {
        b.iter(|| weingarten::classify(black_box(&m), &g, &Tolerances::default()))
    });
}

fn generic_pipeline(c: &mut Criterion) {
    let m = line_over_small_circle();
    c.bench_function("generic curvature point", |b| {
        b.iter(|| patch::curvature(black_box(&m), 1.2, 0.4).unwrap())
    });
    let g = grid(&m, 20);
    c.bench_function("curvature field 20x20", |b| {
        b.iter(|| weingarten::curvature_field(black_box(&m), &g).unwrap())
    });
}

criterion_group!(benches, residual_grids, generic_pipeline);
criterion_main!(benches);
