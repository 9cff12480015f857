use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use pqcalc::scalars::ratio;
use pqcalc::{
    bracket, integral_improper, integral_zero_to, pq_derive_poly, taylor_expand,
    taylor_expand_reversed, NumericFn, TruncationPolicy,
};
use pqcalc_bench::{sample_params, sample_poly};

fn twin_basic(c: &mut Criterion) {
    let pq = sample_params();
    c.bench_function("bracket_40", |b| b.iter(|| bracket(black_box(40), &pq)));
}

fn derivative(c: &mut Criterion) {
    let pq = sample_params();
    let f = sample_poly(20);
    c.bench_function("pq_derive_poly_deg20", |b| {
        b.iter(|| pq_derive_poly(black_box(&f), &pq))
    });
}

fn taylor(c: &mut Criterion) {
    let pq = sample_params();
    let f = sample_poly(8);
    let a = ratio(-3, 7);
    c.bench_function("taylor_expand_deg8", |b| {
        b.iter(|| taylor_expand(black_box(&f), &a, &pq))
    });
    c.bench_function("taylor_expand_reversed_deg8", |b| {
        b.iter(|| taylor_expand_reversed(black_box(&f), &a, &pq))
    });
    let e = taylor_expand(&f, &a, &pq).unwrap();
    c.bench_function("reconstruct_deg8", |b| {
        b.iter(|| e.reconstruct(black_box(&pq)))
    });
}

fn integrals(c: &mut Criterion) {
    let pq = sample_params();
    let policy = TruncationPolicy::default();
    let f = NumericFn::new(|x: f64| x.exp());
    c.bench_function("integral_zero_to_exp", |b| {
        b.iter(|| integral_zero_to(&f, black_box(1.5), &pq, &policy))
    });
    let witness = NumericFn::new(|x| if x <= 1.0 { x } else { x.powi(-3) });
    c.bench_function("integral_improper_witness", |b| {
        b.iter(|| integral_improper(black_box(&witness), &pq, &policy))
    });
}

criterion_group!(benches, twin_basic, derivative, taylor, integrals);
criterion_main!(benches);
