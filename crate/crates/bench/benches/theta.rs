use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gandhi_core::{
    next_prime_gandhi, theta_exact_coprime, theta_exact_divisor, theta_interval, EvalConfig,
    PrimeTable, Strategy,
};

fn bench_exact(c: &mut Criterion) {
    let table = PrimeTable::first(8);
    let cfg = EvalConfig::default();
    let mut group = c.benchmark_group("theta_exact");
    group.sample_size(10);
    for n in [4usize, 5, 6] {
        group.bench_with_input(BenchmarkId::new("divisor", n), &n, |b, &n| {
            b.iter(|| theta_exact_divisor(n, &table, &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("coprime", n), &n, |b, &n| {
            b.iter(|| theta_exact_coprime(n, &table, &cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_interval(c: &mut Criterion) {
    let table = PrimeTable::first(20);
    let mut group = c.benchmark_group("theta_interval");
    for n in [4usize, 8, 12, 16] {
        group.bench_with_input(BenchmarkId::new("b128", n), &n, |b, &n| {
            b.iter(|| theta_interval(n, &table, 128).unwrap())
        });
    }
    group.finish();
}

fn bench_next_prime(c: &mut Criterion) {
    let table = PrimeTable::first(12);
    // pure formula cost, no sieve comparison
    let cfg = EvalConfig {
        cross_check: false,
        ..EvalConfig::default()
    };
    let mut group = c.benchmark_group("next_prime");
    group.sample_size(10);
    for strategy in Strategy::ALL {
        group.bench_with_input(BenchmarkId::new(strategy.as_str(), 6), &6usize, |b, &n| {
            b.iter(|| next_prime_gandhi(n, &table, strategy, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_exact, bench_interval, bench_next_prime);
criterion_main!(benches);
