use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use nkoszul_core::builtins::{antisymmetrizer, polynomial};
use nkoszul_core::koszul::dvp_check;
use nkoszul_core::mmt::{mmt_check, nmt_check, NumericMatrix};
use nkoszul_core::{Algebra, KoszulComplex, ManinBialgebra};

fn ideal(c: &mut Criterion) {
    c.bench_function("ideal antisym(4,3) to degree 6", |b| {
        b.iter(|| {
            let a = Algebra::new(antisymmetrizer(4, 3).unwrap());
            black_box(a.hilbert_series(6).unwrap())
        })
    });
}

fn koszul(c: &mut Criterion) {
    c.bench_function("certificate poly(3) to degree 5", |b| {
        b.iter(|| {
            let a = Algebra::new(polynomial(3).unwrap());
            black_box(KoszulComplex::new(&a).certificate(5).unwrap())
        })
    });
    c.bench_function("dvp antisym(3,3) to degree 8", |b| {
        b.iter(|| {
            let a = Algebra::new(antisymmetrizer(3, 3).unwrap());
            black_box(dvp_check(&KoszulComplex::new(&a), 8).unwrap())
        })
    });
}

fn manin(c: &mut Criterion) {
    c.bench_function("kmt poly(2) to degree 4", |b| {
        b.iter(|| {
            let a = Algebra::new(polynomial(2).unwrap());
            black_box(ManinBialgebra::new(&a).unwrap().kmt_check(4).unwrap())
        })
    });
}

fn master(c: &mut Criterion) {
    let z = NumericMatrix::random(3, 7);
    c.bench_function("mmt 3x3 to degree 6", |b| b.iter(|| black_box(mmt_check(&z, 6).unwrap())));
    c.bench_function("nmt n=3 N=3 to degree 5", |b| b.iter(|| black_box(nmt_check(3, &z, 5).unwrap())));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = ideal, koszul, manin, master
}
criterion_main!(benches);
