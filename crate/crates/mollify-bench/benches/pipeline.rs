//! Benchmarks for the hot paths: one convolution, a full scale sweep, the
//! band-pass decomposition, and the direct seminorm.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mollify_core::corpus::analysis_window;
use mollify_core::{
    estimate_from_sweep, gen_power_cusp, geometric_ladder, holder_seminorm, lp_decompose,
    mollify, scale_sweep, GridSpec, LpFamily, MollifierKernel,
};

fn bench_spec() -> GridSpec {
    GridSpec::new(1 << 14, -4.0, 4.0).unwrap()
}

fn bench_mollify(c: &mut Criterion) {
    let cusp = gen_power_cusp(0.5, bench_spec()).unwrap();
    let kernel = MollifierKernel::gaussian();
    c.bench_function("mollify_16k_m1", |b| {
        b.iter(|| mollify(black_box(&cusp), &kernel, 64.0, 1).unwrap())
    });
}

fn bench_scale_sweep(c: &mut Criterion) {
    let cusp = gen_power_cusp(0.5, bench_spec()).unwrap();
    let kernel = MollifierKernel::gaussian();
    let scales = geometric_ladder(4.0, 256.0, 2).unwrap();
    let window = analysis_window();
    c.bench_function("scale_sweep_16k_k1", |b| {
        b.iter(|| scale_sweep(black_box(&cusp), &kernel, 1, &scales, window).unwrap())
    });
    c.bench_function("estimate_from_sweep", |b| {
        let sweep = scale_sweep(&cusp, &kernel, 1, &scales, window).unwrap();
        b.iter(|| estimate_from_sweep(black_box(&sweep), 0.5).unwrap())
    });
}

fn bench_lp(c: &mut Criterion) {
    let cusp = gen_power_cusp(0.5, bench_spec()).unwrap();
    let family = LpFamily::new(8, 1.0).unwrap();
    let window = analysis_window();
    c.bench_function("lp_decompose_16k_j8", |b| {
        b.iter(|| lp_decompose(black_box(&cusp), &family, 8, window).unwrap())
    });
}

fn bench_seminorm(c: &mut Criterion) {
    let cusp = gen_power_cusp(0.5, bench_spec()).unwrap();
    let window = analysis_window();
    c.bench_function("holder_seminorm_16k", |b| {
        b.iter(|| holder_seminorm(black_box(cusp.grid().unwrap()), 0.5, window).unwrap())
    });
}

criterion_group!(
    benches,
    bench_mollify,
    bench_scale_sweep,
    bench_lp,
    bench_seminorm
);
criterion_main!(benches);
