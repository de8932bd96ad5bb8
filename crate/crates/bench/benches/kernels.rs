use std::hint::black_box;

use cohomotopy::reduction::fixtures::z_squared_minus_one;
use cohomotopy::{
    brouwer_degree, min_characteristic_norm, minimal_integral_multiplier, sharpness_scan, sw_divisibility_lower_bound,
    DegreeOptions, GramMatrix, Rational,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn divisibility(c: &mut Criterion) {
    c.bench_function("sw_bound d=200 k=4", |b| {
        b.iter(|| sw_divisibility_lower_bound(black_box(200), 4))
    });
    c.bench_function("multiplier p=6 d=40", |b| {
        b.iter(|| minimal_integral_multiplier(black_box(6), 40))
    });
    c.bench_function("sharpness_scan 3..200", |b| {
        b.iter(|| sharpness_scan(black_box(3), 200))
    });
}

fn lattices(c: &mut Criterion) {
    let e8 = GramMatrix::negative_e8();
    let i8 = GramMatrix::negative_identity(8);
    c.bench_function("min_characteristic -E8", |b| {
        b.iter(|| min_characteristic_norm(black_box(&e8)))
    });
    c.bench_function("min_characteristic -I8", |b| {
        b.iter(|| min_characteristic_norm(black_box(&i8)))
    });
}

fn degree(c: &mut Criterion) {
    let p = z_squared_minus_one();
    let g = |x: &[f64]| p.eval_f64(x);
    let r = Rational::from(2);
    c.bench_function("degree z^2-1 on disc", |b| {
        b.iter(|| brouwer_degree(&g, 2, black_box(&r), &DegreeOptions::default()))
    });
}

criterion_group!(benches, divisibility, lattices, degree);
criterion_main!(benches);
