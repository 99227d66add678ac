//! Sequential against parallel execution on the data-parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use skewgal::ffield::{galois_group, FqField, SubfieldEmbedding};
use skewgal::groups::{catalog::catalog, solvable_tower, FiniteGroup};
use skewgal::orepoly::{fixed_subring_scan, InducedRingAut, OreRing};
use skewgal::selftest::{run_suite, SelftestOptions};
use skewgal::splitcon::{certify_all, construct_lprime, LocalSpec};
use skewgal::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fixed_subring(c: &mut Criterion) {
    let f2 = FqField::new(2, 1, 0).unwrap();
    let f16 = FqField::new(2, 4, 0).unwrap();
    let emb = SubfieldEmbedding::new(&f2, &f16).unwrap();
    let ring = OreRing::new(f16.frobenius(1));
    let auts: Vec<InducedRingAut> = galois_group(&f16, &emb)
        .unwrap()
        .iter()
        .map(|a| InducedRingAut::new(a, &ring, &emb).unwrap())
        .collect();
    let mut group = c.benchmark_group("fixed_subring_scan");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "F16 deg 3"), &exec, |b, &exec| {
            b.iter(|| black_box(fixed_subring_scan(&ring, &auts, &emb, 3, exec)))
        });
    }
    group.finish();
}

fn subgroups(c: &mut Criterion) {
    let s4 = FiniteGroup::symmetric(4);
    let order24: Vec<FiniteGroup> = catalog().into_iter().filter(|e| e.group.order() == 24).map(|e| e.group).collect();
    let mut group = c.benchmark_group("subgroups");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "S4 <= 3 generators"), &exec, |b, &exec| {
            b.iter(|| black_box(s4.subgroups_with_generators(3, exec)))
        });
        group.bench_with_input(BenchmarkId::new(name, "towers of order 24"), &exec, |b, &exec| {
            b.iter(|| order24.iter().map(|g| solvable_tower(g, exec).unwrap().len()).sum::<usize>())
        });
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("selftest");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = SelftestOptions { seed: 0, exec };
        for id in [1u8, 3, 5] {
            group.bench_with_input(BenchmarkId::new(name, format!("suite {id}")), &opts, |b, opts| {
                b.iter(|| black_box(run_suite(id, opts)))
            });
        }
    }
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let specs: Vec<LocalSpec> = ["3:rq", "5:ts", "7:ur2", "inf:ts"].iter().map(|s| s.parse().unwrap()).collect();
    let report = construct_lprime(&specs, &[], 11, 6, 0, Execution::Sequential).unwrap();
    let mut group = c.benchmark_group("certify_all");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "n=6"), &exec, |b, &exec| {
            b.iter(|| black_box(certify_all(&report.q, &report.specs, &report.aux, &report.l_ram, exec)))
        });
    }
    group.finish();
}

criterion_group!(benches, fixed_subring, subgroups, suites, certificates);
criterion_main!(benches);
