use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nusob_bench::{grid_1d, rational_decay};
use nusob_core::evolution::{heat_propagate, schrodinger_propagate};
use nusob_core::index::{bootstrap_recursion, integer_embedding_verdict};
use nusob_core::norms::{gagliardo_full, hs_seminorm_fourier, QuadratureSpec};
use nusob_core::{Exponent, ExponentVector, Field};

fn index_calculus(c: &mut Criterion) {
    let pv: ExponentVector = "2,3/2,4/3,5/4".parse().unwrap();
    c.bench_function("embedding_verdict_k3", |b| {
        b.iter(|| integer_embedding_verdict(black_box(5), 3, &pv).unwrap())
    });
    let (p0, p1) = (Exponent::from_int(6).unwrap(), Exponent::from_ratio(3, 2).unwrap());
    c.bench_function("bootstrap_recursion_n3", |b| {
        b.iter(|| bootstrap_recursion(black_box(3), &p0, &p1, 200).unwrap())
    });
}

fn spectral(c: &mut Criterion) {
    let f = Field::gaussian(1).sampled_on(grid_1d(2048)).unwrap();
    c.bench_function("hs_seminorm_fourier_2048", |b| b.iter(|| hs_seminorm_fourier(black_box(&f), 0.5).unwrap()));
    c.bench_function("heat_propagate_2048", |b| b.iter(|| heat_propagate(black_box(&f), 0.25).unwrap()));
    c.bench_function("schrodinger_propagate_2048", |b| {
        b.iter(|| schrodinger_propagate(black_box(&f), 0.25, 2.0).unwrap())
    });
}

fn gagliardo(c: &mut Criterion) {
    let mut g = c.benchmark_group("gagliardo");
    g.sample_size(10);
    let gauss = Field::gaussian(1);
    let tensor = QuadratureSpec::tensor(grid_1d(512));
    g.bench_function("tensor_gaussian_512", |b| b.iter(|| gagliardo_full(&gauss, 0.5, 2.0, &tensor).unwrap()));
    let rd = rational_decay(0.6);
    let adaptive = QuadratureSpec::adaptive(20);
    g.bench_function("adaptive_rational_decay", |b| b.iter(|| gagliardo_full(&rd, 0.6, 2.0, &adaptive).unwrap()));
    g.finish();
}

criterion_group!(benches, index_calculus, spectral, gagliardo);
criterion_main!(benches);
