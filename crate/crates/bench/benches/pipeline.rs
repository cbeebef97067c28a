use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use otlab_core::dcomplex::synth::{random_sum, SynthConfig};
use otlab_core::dcomplex::zigzag_decompose;
use otlab_core::otcomplex::{oracle_cross_check, verify_structure_identities};
use otlab_core::polyfield::{find_roots, FieldDatum, Polynomial};
use otlab_core::relations::enumerate_relations;
use otlab_core::units::{build_unit_system, verify_degree12_example, UnitSystem, DEG12_POLY};
use otlab_core::Precision;
use rug::Rational;

fn system(poly: &[i64], units: &[&[i64]]) -> UnitSystem {
    let f = FieldDatum::new(Polynomial::from_i64(poly).unwrap(), Precision::default()).unwrap();
    let u = units.iter().map(|v| v.iter().map(|&x| Rational::from(x)).collect()).collect();
    build_unit_system(f, u).unwrap()
}

fn roots(c: &mut Criterion) {
    let f = Polynomial::from_i64(&DEG12_POLY).unwrap();
    for bits in [128, 256, 512] {
        c.bench_function(&format!("roots deg12 {bits} bits"), |b| b.iter(|| find_roots(black_box(&f), Precision::new(bits)).unwrap()));
    }
    c.bench_function("verify deg12", |b| b.iter(|| verify_degree12_example(Precision::default()).unwrap()));
}

fn relations(c: &mut Criterion) {
    let u = system(&[1, -4, 4, -2, 3, -2, 1], &[&[0, 1, 0, 0, 0, 0], &[1, -1, 0, 0, 0, 0]]);
    c.bench_function("relations (2,2)", |b| b.iter(|| enumerate_relations(black_box(&u)).unwrap()));
}

fn zigzags(c: &mut Criterion) {
    let (cx, _) = random_sum(42, &SynthConfig::default());
    c.bench_function("zigzag exact", |b| b.iter(|| zigzag_decompose(black_box(&cx)).unwrap()));
    let fx = cx.to_float(Precision::new(128));
    c.bench_function("zigzag float 128", |b| b.iter(|| zigzag_decompose(black_box(&fx)).unwrap()));
}

fn model(c: &mut Criterion) {
    let mut g = c.benchmark_group("model");
    g.sample_size(10);
    let inoue = system(&[-1, -1, 0, 1], &[&[0, 1, 0]]);
    let r = enumerate_relations(&inoue).unwrap();
    g.bench_function("cross-check (1,1)", |b| b.iter(|| oracle_cross_check(black_box(&inoue), &r).unwrap()));
    let p22 = system(&[1, -4, 4, -2, 3, -2, 1], &[&[0, 1, 0, 0, 0, 0], &[1, -1, 0, 0, 0, 0]]);
    let r22 = enumerate_relations(&p22).unwrap();
    g.bench_function("cross-check (2,2)", |b| b.iter(|| oracle_cross_check(black_box(&p22), &r22).unwrap()));
    g.bench_function("identities (2,2)", |b| b.iter(|| verify_structure_identities(black_box(&p22)).unwrap()));
    g.finish();
}

criterion_group!(benches, roots, relations, zigzags, model);
criterion_main!(benches);
