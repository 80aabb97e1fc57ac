use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quantred::{decompose, polarized_inverse, rr_character, verify, Gram, VerifyOptions, Weight};
use quantred_bench::{a2_flag, su2_flag};

fn inverse(c: &mut Criterion) {
    let gram = Gram::new(vec![vec![2, -1], vec![-1, 2]]);
    let roots = [Weight::new(vec![2, -1]), Weight::new(vec![-1, 2]), Weight::new(vec![1, 1])];
    let d = Weight::new(vec![1, 1]);
    let mut group = c.benchmark_group("polarized_inverse");
    for cutoff in [30, 60, 120] {
        group.bench_with_input(BenchmarkId::from_parameter(cutoff), &cutoff, |b, &cutoff| {
            b.iter(|| polarized_inverse(&gram, black_box(&roots), &d, cutoff).unwrap())
        });
    }
    group.finish();
}

fn character(c: &mut Criterion) {
    let mut group = c.benchmark_group("rr_character_a2");
    for lambda in [[1, 1], [2, 1], [3, 3]] {
        let spec = a2_flag(lambda);
        let d = Weight::new(vec![1, 1]);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{lambda:?}")), &spec, |b, spec| {
            b.iter(|| rr_character(spec, "L", &d, 3).unwrap())
        });
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let spec = a2_flag([2, 1]);
    let d = Weight::new(vec![1, 1]);
    c.bench_function("decompose_a2_21", |b| {
        b.iter(|| decompose(&spec, "L", &d, None, 3).unwrap())
    });
    let spec = su2_flag(6);
    c.bench_function("verify_su2_6", |b| {
        b.iter(|| verify(&spec, "L", &VerifyOptions::default()).unwrap())
    });
}

criterion_group!(benches, inverse, character, decomposition);
criterion_main!(benches);
