use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quasigrid_core::fixtures::{golden_scheme, residue_scheme};
use quasigrid_core::numeric::int;
use quasigrid_core::{
    apply_chain, chain_model_set, epsilon_translations, sample_rational_chain, sample_sl2_chain,
    uniform_density, CutProjectScheme, EnumerationConfig, PointSet, RVector, RngState,
};
use std::hint::black_box;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    for r in [100i64, 1000, 10_000] {
        let golden = golden_scheme();
        g.bench_with_input(BenchmarkId::new("golden", r), &r, |b, &r| {
            b.iter(|| golden.enumerate(&RVector::zeros(1), &int(r)).unwrap())
        });
    }
    let z2 = CutProjectScheme::integer_lattice(2).unwrap();
    g.bench_function("z2_r50", |b| {
        b.iter(|| z2.enumerate(&RVector::zeros(2), &int(50)).unwrap())
    });
    g.finish();
}

fn chains(c: &mut Criterion) {
    let mut g = c.benchmark_group("chains");
    g.sample_size(20);
    let rational = sample_rational_chain(&mut RngState::new(9), 2, 2, 8).unwrap();
    g.bench_function("direct_k2_r50", |b| {
        b.iter(|| apply_chain(black_box(&rational), &int(50)).unwrap())
    });
    g.bench_function("model_k2_r50", |b| {
        b.iter(|| chain_model_set(black_box(&rational), &int(50), &EnumerationConfig::default()).unwrap())
    });
    for k in [1usize, 5, 20] {
        let sl2 = sample_sl2_chain(&mut RngState::new(42), k).unwrap();
        g.bench_with_input(BenchmarkId::new("sl2_model_r30", k), &sl2, |b, chain| {
            b.iter(|| chain_model_set(chain, &int(30), &EnumerationConfig::default()).unwrap())
        });
    }
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    g.sample_size(20);
    let residue: PointSet = residue_scheme()
        .enumerate(&RVector::zeros(1), &int(3001))
        .unwrap()
        .patch;
    g.bench_function("residue_density_r3000", |b| {
        b.iter(|| uniform_density(&residue, &[int(3000)], &quasigrid_core::numeric::rat(1, 100)).unwrap())
    });
    let z2 = PointSet::integer_grid(2, &int(31)).unwrap();
    g.bench_function("z2_density_r30", |b| {
        b.iter(|| uniform_density(&z2, &[int(30)], &quasigrid_core::numeric::rat(1, 100)).unwrap())
    });
    let small = residue_scheme()
        .enumerate(&RVector::zeros(1), &int(200))
        .unwrap()
        .patch;
    g.bench_function("residue_translations", |b| {
        b.iter(|| {
            epsilon_translations(&small, &quasigrid_core::numeric::rat(1, 10), &int(10), &int(40)).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, enumeration, chains, sweeps);
criterion_main!(benches);
