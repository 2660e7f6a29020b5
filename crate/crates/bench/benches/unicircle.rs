use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use unicircle::certify::certified_min_on_circle;
use unicircle::roots::{all_roots, default_max_iter};
use unicircle::special::{bernoulli, zeta};
use unicircle_bench::{h4, p_k, PRECISION};

fn aberth(c: &mut Criterion) {
    let mut group = c.benchmark_group("aberth");
    group.sample_size(10);
    for k in [10usize, 25, 50] {
        let p = p_k(k);
        group.bench_with_input(BenchmarkId::new("P_k", k), &p, |b, p| {
            b.iter(|| all_roots(black_box(p), PRECISION, default_max_iter(PRECISION)).unwrap())
        });
    }
    group.finish();
}

fn circle_min(c: &mut Criterion) {
    let h = h4();
    let mut group = c.benchmark_group("circle_min_h4");
    for samples in [1usize << 12, 1 << 16] {
        group.bench_with_input(BenchmarkId::from_parameter(samples), &samples, |b, &n| {
            b.iter(|| certified_min_on_circle(black_box(&h), n).unwrap())
        });
    }
    group.finish();
}

fn special_values(c: &mut Criterion) {
    // the Bernoulli table is cached after the first call, so this measures lookups
    c.bench_function("bernoulli_60", |b| b.iter(|| bernoulli(black_box(60)).unwrap()));
    c.bench_function("zeta_3_256", |b| b.iter(|| zeta(black_box(3.0), PRECISION).unwrap()));
    c.bench_function("zeta_2.5_256", |b| b.iter(|| zeta(black_box(2.5), PRECISION).unwrap()));
}

criterion_group!(benches, aberth, circle_min, special_values);
criterion_main!(benches);
