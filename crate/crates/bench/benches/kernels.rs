use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

use quadsemi::arith::is_perfect_square;
use quadsemi::diophantine::{find_lemma, registry, solve_system_bounded};
use quadsemi::dynamics::{compose_word, scan_words};
use quadsemi::exceptional::scan_pairs;
use quadsemi::heights::canonical_height;
use quadsemi::oracle::find_factor;
use quadsemi::portraits::preper_set;
use quadsemi::{GeneratorSet, QuadraticMap, Word};

fn arith(c: &mut Criterion) {
    let big = BigInt::from(3).pow(400) * BigInt::from(3).pow(400);
    c.bench_function("perfect_square_1270_bits", |b| b.iter(|| is_perfect_square(black_box(&big))));
    c.bench_function("preper_set_c_-12", |b| b.iter(|| preper_set(black_box(&BigInt::from(-12)))));
}

fn dynamics(c: &mut Criterion) {
    let set = GeneratorSet::new([-4, -12]).unwrap();
    c.bench_function("scan_words_L10", |b| b.iter(|| scan_words(black_box(&set), 10, 1 << 20).unwrap()));
    let phi = QuadraticMap::new(3);
    c.bench_function("canonical_height_n30", |b| b.iter(|| canonical_height(&phi, black_box(&BigInt::from(7)), 30)));
}

fn oracle(c: &mut Criterion) {
    let set = GeneratorSet::new([-1, -12]).unwrap();
    let w = Word::new(vec![0, 1, 0], &set).unwrap();
    let f = compose_word(&set, &w, 8).unwrap();
    c.bench_function("find_factor_degree8", |b| b.iter(|| find_factor(black_box(&f), 8).unwrap()));
}

fn diophantine(c: &mut Criterion) {
    let entries = registry().unwrap();
    let sys = find_lemma(&entries, "case1.1").unwrap().system;
    c.bench_function("solve_system_B50", |b| b.iter(|| solve_system_bounded(black_box(&sys), 50).unwrap()));
    let mut g = c.benchmark_group("classification");
    g.sample_size(10);
    g.bench_function("scan_pairs_100", |b| b.iter(|| scan_pairs(-100, 100).unwrap()));
    g.finish();
}

criterion_group!(benches, arith, dynamics, oracle, diophantine);
criterion_main!(benches);
