use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spincalc_bench::{random_kappa, random_operator};
use spincalc_core::cliff::{make_rep, op_norm, TwoForm};
use spincalc_core::index::{alpha_c, find_vanishing};
use spincalc_core::mancat::{connected_sum, cp, reverse, synthetic_spin};
use spincalc_core::spectral::{principal_eigenpair, prescribe_curvature, DiscreteOperator, EigenOptions, PrescribeOptions};
use spincalc_core::LineBundleClass;

fn index(c: &mut Criterion) {
    let mut group = c.benchmark_group("alpha_c");
    for n in [2usize, 4, 8] {
        let m = cp(n).unwrap();
        let c1 = LineBundleClass(vec![(n as i64 + 1) % 2 + 4]);
        group.bench_with_input(BenchmarkId::from_parameter(format!("CP{n}")), &m, |b, m| {
            b.iter(|| alpha_c(black_box(m), black_box(&c1)).unwrap())
        });
    }
    let sum = connected_sum(&cp(4).unwrap(), &synthetic_spin(8, 1).unwrap()).unwrap();
    group.bench_function("CP4 # SpinBott(8,1)", |b| {
        b.iter(|| alpha_c(black_box(&sum), black_box(&LineBundleClass(vec![5]))).unwrap())
    });
    group.finish();

    let blow = connected_sum(&cp(2).unwrap(), &reverse(&cp(2).unwrap())).unwrap();
    c.bench_function("find_vanishing/CP2 # ~CP2 box 9", |b| {
        b.iter(|| find_vanishing(black_box(&blow), 9).unwrap())
    });
}

fn clifford(c: &mut Criterion) {
    let mut group = c.benchmark_group("op_norm");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [4usize, 8, 10] {
        let rep = make_rep(n).unwrap();
        let w = TwoForm::random(n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(rep, w), |b, (rep, w)| {
            b.iter(|| op_norm(black_box(rep), black_box(w)).unwrap())
        });
    }
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("principal_eigenpair");
    group.sample_size(10);
    for points in [8usize, 12, 16] {
        let op = random_operator(points, 20.0, 7);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{points}^3")), &op, |b, op| {
            b.iter(|| principal_eigenpair(black_box(op), EigenOptions::default()).unwrap())
        });
    }
    group.finish();

    let base = DiscreteOperator::constant(*random_operator(12, 1.0, 0).grid(), -1.0);
    let kappa = random_kappa(&base, 3);
    let mut group = c.benchmark_group("prescribe_curvature");
    group.sample_size(10);
    group.bench_function("12^3", |b| {
        b.iter(|| prescribe_curvature(black_box(&base), black_box(&kappa), PrescribeOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, index, clifford, spectral);
criterion_main!(benches);
