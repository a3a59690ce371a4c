use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hsforge::ray_order::sorted_rays_box2;
use hsforge::{bracket_integral, decompose, leibniz_check, sorted_rays, CoIdeal};
use hsforge_bench::{algebra, boxed, derivation, total};

fn rays(c: &mut Criterion) {
    let mut group = c.benchmark_group("rays");
    for n in [8u32, 32] {
        let delta = CoIdeal::boxed(&[n, n].into()).unwrap();
        group.bench_with_input(BenchmarkId::new("sorted_rays", n), &delta, |b, d| b.iter(|| sorted_rays(black_box(d))));
        group.bench_with_input(BenchmarkId::new("box2", n), &n, |b, &n| b.iter(|| sorted_rays_box2(black_box(n), n)));
    }
    let simplex = total(3, 8);
    group.bench_function("sorted_rays/simplex_q3_r8", |b| b.iter(|| sorted_rays(black_box(&simplex))));
    group.finish();
}

fn series(c: &mut Criterion) {
    let a = algebra(5, &[3, 3]);
    let delta = total(2, 4);
    let d = derivation(&a, &delta, 1);
    let e = derivation(&a, &delta, 2);
    c.bench_function("series/compose", |b| b.iter(|| black_box(&d).compose(black_box(&e)).unwrap()));
    c.bench_function("series/inverse", |b| b.iter(|| black_box(&d).inverse()));
    c.bench_function("series/leibniz_check", |b| b.iter(|| leibniz_check(black_box(&d))));
}

fn peeling(c: &mut Criterion) {
    let a = algebra(5, &[3, 3]);
    let mut group = c.benchmark_group("decompose");
    for corner in [[2u32, 2], [3, 3]] {
        let d = derivation(&a, &boxed(&corner), 7);
        let label = format!("{}x{}", corner[0], corner[1]);
        group.bench_with_input(BenchmarkId::from_parameter(label), &d, |b, d| b.iter(|| decompose(black_box(d)).unwrap()));
    }
    group.finish();
}

fn integrals(c: &mut Criterion) {
    let a = algebra(3, &[3, 3]);
    let uni = std::sync::Arc::new(CoIdeal::uni(3));
    let d = derivation(&a, &uni, 1);
    let e = derivation(&a, &uni, 2);
    c.bench_function("bracket_integral/m3", |b| b.iter(|| bracket_integral(black_box(&d), black_box(&e)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = rays, series, peeling, integrals
}
criterion_main!(benches);
