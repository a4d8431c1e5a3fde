use std::hint::black_box;

use colorcount::coupon::{exact_expected_survivors, sample};
use colorcount::regular::{generator_algorithm1, sample_pairing, sample_simple_triangle_free};
use colorcount::CouponInstance;
use criterion::{criterion_group, criterion_main, Criterion};

fn pairings(c: &mut Criterion) {
    let mut seed = 0u64;
    c.bench_function("pairing-n100-d3", |b| {
        b.iter(|| {
            seed += 1;
            sample_pairing(black_box(100), 3, seed).unwrap()
        })
    });
    let f: Vec<Option<usize>> = (0..100).map(|v| Some(v % 4)).collect();
    c.bench_function("generator-n100-d3", |b| {
        b.iter(|| {
            seed += 1;
            generator_algorithm1(100, 3, 4, black_box(&f), seed).unwrap()
        })
    });
    c.bench_function("simple-triangle-free-n20-d3", |b| {
        b.iter(|| {
            seed += 1;
            sample_simple_triangle_free(20, 3, seed, 1_000_000).unwrap()
        })
    });
}

fn coupons(c: &mut Criterion) {
    let inst = CouponInstance::random_seeded(40, 30, 3);
    let mut seed = 0u64;
    c.bench_function("coupon-sample-q40-k30", |b| {
        b.iter(|| {
            seed += 1;
            sample(black_box(&inst), seed)
        })
    });
    c.bench_function("coupon-exact-q40-k30", |b| b.iter(|| exact_expected_survivors(black_box(&inst))));
}

criterion_group!(benches, pairings, coupons);
criterion_main!(benches);
