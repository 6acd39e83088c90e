use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nncalc::approx::{build_matrix_mult, build_square};
use nncalc::linalg::vectorize;
use nncalc::spectral_norm;
use nncalc_bench::{fixture_matrix, unit_grid};
use std::hint::black_box;

fn realize(c: &mut Criterion) {
    let mut g = c.benchmark_group("realize_square");
    let xs = unit_grid(256);
    for m in [4, 8, 12] {
        let net = build_square(m).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(m), &net, |b, net| {
            b.iter(|| {
                for &x in &xs {
                    black_box(net.realize(&[x]).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn square_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_square");
    for m in [4, 12, 24] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| b.iter(|| build_square(black_box(m)).unwrap()));
    }
    g.finish();
}

fn matmul(c: &mut Criterion) {
    let mut g = c.benchmark_group("matmul_network");
    g.sample_size(20);
    for d in [2, 4] {
        let net = build_matrix_mult(d, d, d, 1e-3, 1.0).unwrap();
        let a = fixture_matrix(d).scale(1.0 / d as f64);
        let mut x = vectorize(&a);
        x.extend(vectorize(&a.transpose()));
        g.bench_with_input(BenchmarkId::new("build", d), &d, |b, &d| {
            b.iter(|| build_matrix_mult(d, d, d, 1e-3, 1.0).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("realize", d), &x, |b, x| b.iter(|| net.realize(black_box(x)).unwrap()));
    }
    g.finish();
}

fn spectral(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral_norm");
    for n in [4, 16, 32] {
        let a = fixture_matrix(n);
        let s = a.add(&a.transpose()).unwrap();
        g.bench_with_input(BenchmarkId::new("general", n), &a, |b, a| b.iter(|| spectral_norm(black_box(a)).unwrap()));
        g.bench_with_input(BenchmarkId::new("symmetric", n), &s, |b, s| b.iter(|| spectral_norm(black_box(s)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, realize, square_build, matmul, spectral);
criterion_main!(benches);
