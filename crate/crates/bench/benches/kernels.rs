use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kisspoly::asymptotics;
use kisspoly::hankel;
use kisspoly::moments;
use kisspoly::numerics::Complex;
use kisspoly::oracle;
use kisspoly::orthopoly;
use kisspoly::roots;
use kisspoly_bench::{bench_policy, omega};

fn bench_moments(c: &mut Criterion) {
    let policy = bench_policy();
    let mut group = c.benchmark_group("moments");
    for w in [1.0f64, 30.0] {
        let om = omega(&policy, w);
        group.bench_with_input(BenchmarkId::from_parameter(w), &om, |b, om| {
            b.iter(|| moments::moments(16, om, &policy).unwrap())
        });
    }
    group.finish();
}

fn bench_hankel_det(c: &mut Criterion) {
    let policy = bench_policy();
    let mut group = c.benchmark_group("hankel_det");
    for n in [2usize, 5, 8] {
        let om = omega(&policy, 10.0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| hankel::hankel_det(n, &om, &policy).unwrap())
        });
    }
    group.finish();
}

fn bench_toda_residual(c: &mut Criterion) {
    let policy = bench_policy();
    let om = omega(&policy, 20.0);
    c.bench_function("toda_residual_n4", |b| {
        b.iter(|| hankel::toda_residual(4, &om, &policy).unwrap())
    });
}

fn bench_poly_roots(c: &mut Criterion) {
    let policy = bench_policy();
    let om = omega(&policy, 15.0);
    let poly = orthopoly::monic_op(6, &om, &policy).unwrap();
    c.bench_function("aberth_p6", |b| {
        b.iter(|| roots::poly_roots(&poly.coeffs, &policy).unwrap())
    });
}

fn bench_heine_oracle(c: &mut Criterion) {
    let policy = bench_policy();
    let om = omega(&policy, 1.0);
    let mut group = c.benchmark_group("heine_hankel");
    group.sample_size(10);
    group.bench_function("n2_order40", |b| {
        b.iter(|| oracle::heine_hankel(2, &om, 40, &policy).unwrap())
    });
    group.finish();
}

fn bench_lambert_w(c: &mut Criterion) {
    let policy = bench_policy();
    let z = Complex::from_f64(policy.bits, -0.5, 0.0);
    c.bench_function("lambert_w_branch1", |b| {
        b.iter(|| asymptotics::lambert_w(&z, 1, &policy).unwrap())
    });
}

criterion_group!(
    benches,
    bench_moments,
    bench_hankel_det,
    bench_toda_residual,
    bench_poly_roots,
    bench_heine_oracle,
    bench_lambert_w,
);
criterion_main!(benches);
