use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use quadrep_bench::{big, CLASSPOLY_DISCRIMINANTS, DECISION_INPUTS};
use quadrep_core::classpoly::class_polynomial_with_diagnostics;
use quadrep_core::decision::{complete_search, decide_with, MethodChoice};
use quadrep_core::pell::{fundamental_solution, unit_witness};
use quadrep_core::{criterion_2_7, factorize, local_everywhere};

fn class_polynomials(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_polynomial");
    group.sample_size(20);
    for d in CLASSPOLY_DISCRIMINANTS {
        // the uncached entry point, so every iteration does the full evaluation
        group.bench_with_input(BenchmarkId::from_parameter(d), &big(d), |bch, d| {
            bch.iter(|| class_polynomial_with_diagnostics(black_box(d)).unwrap())
        });
    }
    group.finish();
}

fn decisions(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide");
    for (a, b, n) in DECISION_INPUTS {
        let (a, b, n) = (big(a), big(b), big(n));
        let id = format!("{a},{b},{n}");
        group.bench_with_input(BenchmarkId::new("auto", &id), &(), |bch, _| {
            bch.iter(|| decide_with(&a, &b, black_box(&n), MethodChoice::Auto).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("search", &id), &(), |bch, _| {
            bch.iter(|| complete_search(&a, &b, black_box(&n)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("local", &id), &(), |bch, _| {
            bch.iter(|| local_everywhere(&a, &b, black_box(&n)).unwrap())
        });
    }
    group.bench_function("criterion_2_7/n<=1000", |bch| {
        bch.iter(|| (1..=1000).filter(|&n| criterion_2_7(&big(n)).unwrap().witness.is_some()).count())
    });
    group.finish();
}

fn arithmetic(c: &mut Criterion) {
    let semiprime = big(1_000_003) * big(998_244_353);
    c.bench_function("factorize/semiprime", |bch| bch.iter(|| factorize(black_box(&semiprime)).unwrap()));
    c.bench_function("pell/fundamental_991", |bch| bch.iter(|| fundamental_solution(black_box(&big(991))).unwrap()));
    c.bench_function("pell/unit_witness_5_41", |bch| bch.iter(|| unit_witness(black_box(&big(5)), &big(41)).unwrap()));
}

criterion_group!(benches, class_polynomials, decisions, arithmetic);
criterion_main!(benches);
