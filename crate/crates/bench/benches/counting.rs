use std::hint::black_box;

use colorcount::count::Counter;
use colorcount::partial::FlawThresholds;
use colorcount_bench::{petersen, small_cover};
use criterion::{criterion_group, criterion_main, Criterion};

fn deletion_contraction(c: &mut Criterion) {
    let g = petersen();
    let counter = Counter::default();
    let mut group = c.benchmark_group("petersen-deletion-contraction");
    for q in [3usize, 12, 20] {
        group.bench_function(format!("q{q}"), |b| {
            b.iter(|| counter.colorings_by_deletion_contraction(black_box(&g), q).unwrap())
        });
    }
    group.finish();
}

fn partial_and_good(c: &mut Criterion) {
    let cover = small_cover(3, 1);
    let all = vec![true; cover.n()];
    let counter = Counter::default();
    c.bench_function("pcol-8v-q3", |b| b.iter(|| counter.partial_colorings(black_box(&cover), &all).unwrap()));
    let t = FlawThresholds::new(1.0, 1.0);
    c.bench_function("gcol-8v-q3", |b| b.iter(|| counter.good_colorings(black_box(&cover), &all, t).unwrap()));
}

criterion_group!(benches, deletion_contraction, partial_and_good);
criterion_main!(benches);
