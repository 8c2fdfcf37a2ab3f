use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cobham_bench::{dense_matrix, fixture};
use cobham_core::harness::{cobham_check, CobhamOptions};
use cobham_core::language::{recurrence_constants_prefix, return_words};
use cobham_core::periodicity::detect_ultimate_periodicity;
use cobham_core::spectral::dominant_eigenvalue;
use cobham_core::normalize;

fn spectral(c: &mut Criterion) {
    let mut g = c.benchmark_group("dominant_eigenvalue");
    for n in [4, 8, 16] {
        let m = dense_matrix(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| dominant_eigenvalue(black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn words(c: &mut Criterion) {
    let fib = fixture("fibonacci");
    c.bench_function("fibonacci prefix 1e6", |b| b.iter(|| fib.image_prefix(black_box(1_000_000)).unwrap()));

    let x = fib.image_prefix(100_000).unwrap();
    c.bench_function("return words to 00", |b| b.iter(|| return_words(black_box(&x), &[0, 0]).unwrap()));

    let small = fib.image_prefix(10_000).unwrap();
    c.bench_function("recurrence constants n<=20", |b| {
        b.iter(|| recurrence_constants_prefix(black_box(&small), 20))
    });

    let tm = fixture("thue_morse").image_prefix(100_000).unwrap();
    c.bench_function("periodicity search 1e5", |b| {
        b.iter(|| detect_ultimate_periodicity(black_box(&tm), Some(2000), Some(2000)).unwrap())
    });
}

fn pipelines(c: &mut Criterion) {
    let sys = fixture("fibonacci_erasing");
    c.bench_function("normalize erasing presentation", |b| b.iter(|| normalize(black_box(&sys)).unwrap()));

    let (a, b2) = (fixture("per2"), fixture("per3"));
    let opts = CobhamOptions { depth: 10_000, ..Default::default() };
    c.bench_function("cobham check periodic pair", |b| {
        b.iter(|| cobham_check(black_box(&a), black_box(&b2), &opts).unwrap())
    });
}

criterion_group!(benches, spectral, words, pipelines);
criterion_main!(benches);
