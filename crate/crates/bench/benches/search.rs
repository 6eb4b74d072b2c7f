use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tempo_bench::tree_instance;
use tempo_core::gadgets::{build_gadget, certify_gadget, Family};
use tempo_core::{auto_solve, solve_exact, SearchConfig};

fn certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for (family, delta, k) in [
        (Family::OddK0, 5, 0),
        (Family::OddQuarter, 5, 1),
        (Family::Delta4, 4, 0),
        (Family::OddComb, 3, 1),
        (Family::EvenComb, 4, 1),
    ] {
        let g = build_gadget(family, delta, k).expect("gadget");
        group.bench_function(format!("{family}({delta},{k})"), |b| {
            b.iter(|| certify_gadget(black_box(&g), &SearchConfig::default()))
        });
    }
    group.finish();
}

fn trees(c: &mut Criterion) {
    let cfg = SearchConfig::default().with_max_nodes(1_000_000);
    let inst = tree_instance(12, 4, 1, 5);
    c.bench_function("solve_exact/tree12", |b| b.iter(|| solve_exact(black_box(&inst), &cfg)));
    c.bench_function("auto_solve/tree12", |b| b.iter(|| auto_solve(black_box(&inst), &cfg)));
}

criterion_group!(benches, certify, trees);
criterion_main!(benches);
