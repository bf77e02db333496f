use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nearfermi_bench::{family, family_matrix};
use nearfermi_core::eig::symmetric_eigs;
use nearfermi_core::formal::bgnf_iterate;
use nearfermi_core::hermite::{assemble_schrodinger, truncation_m};
use nearfermi_core::polyad::nf_spectrum_below;
use nearfermi_core::prep::prepare;

fn assembly(c: &mut Criterion) {
    let p = family();
    let mut g = c.benchmark_group("assemble");
    g.sample_size(10);
    for hbar in [0.01, 0.0025] {
        let m = truncation_m(hbar, 10.0 * hbar);
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| assemble_schrodinger(black_box(&p), 0.0, hbar, m).unwrap())
        });
    }
    g.finish();
}

fn eigensolver(c: &mut Criterion) {
    let mut g = c.benchmark_group("symmetric_eigs");
    g.sample_size(10);
    for hbar in [0.01, 0.0025] {
        let a = family_matrix(hbar);
        g.bench_with_input(BenchmarkId::from_parameter(a.order()), &a, |b, a| {
            b.iter(|| symmetric_eigs(black_box(a), false).unwrap())
        });
    }
    g.finish();
}

fn polyads(c: &mut Criterion) {
    let prep = prepare(&family()).unwrap();
    c.bench_function("nf_spectrum_below/hbar=0.001", |b| {
        b.iter(|| nf_spectrum_below(black_box(&prep), 0.001, 0.03, 0.01, 0.1).unwrap())
    });
}

fn normal_form(c: &mut Criterion) {
    let prep = prepare(&family()).unwrap();
    let (h20, r) = (prep.h20(), prep.perturbation());
    let mut g = c.benchmark_group("bgnf_iterate");
    for order in [3, 4, 5] {
        g.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &order| {
            b.iter(|| bgnf_iterate(black_box(&h20), &r, prep.freqs.omega0, order).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, assembly, eigensolver, polyads, normal_form);
criterion_main!(benches);
