use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plnet_bench::{lifted_simplex, mesh, probe};
use plnet_core::{compile_mesh, decompose, maxmin_form};

fn tau(c: &mut Criterion) {
    let mut group = c.benchmark_group("tau");
    for d in 1..=3 {
        let s = lifted_simplex(d);
        let xs = probe(d, 16);
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| xs.iter().map(|x| s.tau(black_box(x)).unwrap()).count())
        });
    }
    group.finish();
}

fn maxmin(c: &mut Criterion) {
    let mut group = c.benchmark_group("maxmin_form");
    for d in 1..=3 {
        let s = lifted_simplex(d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &s, |b, s| b.iter(|| maxmin_form(black_box(s)).unwrap()));
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    group.sample_size(20);
    for (d, n) in [(1, 10), (2, 10), (3, 10)] {
        let m = mesh(d, n);
        group.bench_with_input(BenchmarkId::new(format!("d{d}"), n), &m, |b, m| {
            b.iter(|| decompose(black_box(m), None, 0).unwrap())
        });
    }
    group.finish();
}

fn compile(c: &mut Criterion) {
    let mut group = c.benchmark_group("compile_mesh");
    group.sample_size(10);
    for (d, n) in [(1, 10), (2, 10), (3, 10)] {
        let m = mesh(d, n);
        group.bench_with_input(BenchmarkId::new(format!("d{d}"), n), &m, |b, m| {
            b.iter(|| compile_mesh(black_box(m), 0, None).unwrap())
        });
    }
    group.finish();
}

fn forward(c: &mut Criterion) {
    let mut group = c.benchmark_group("forward");
    for (d, n) in [(1, 20), (2, 20), (3, 20)] {
        let net = compile_mesh(&mesh(d, n), 0, None).unwrap();
        let xs: Vec<Vec<f64>> = probe(d, 16).iter().map(|p| p.to_f64()).collect();
        group.bench_with_input(BenchmarkId::new(format!("d{d}"), n), &net, |b, net| {
            b.iter(|| xs.iter().map(|x| net.forward(black_box(x)).unwrap()).sum::<f64>())
        });
    }
    group.finish();
}

criterion_group!(benches, tau, maxmin, decomposition, compile, forward);
criterion_main!(benches);
