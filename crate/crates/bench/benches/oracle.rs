use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fqequiv::oracle::{self, enumerate_classes, KeySpace, PolySpace};
use fqequiv::{FieldCtx, DEFAULT_KEY_BUDGET};

fn fixed_points(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_fixed");
    for (q, n) in [(3u64, 4usize), (4, 3), (5, 3)] {
        let f = FieldCtx::of_order(q).unwrap();
        let space = KeySpace::build(&f, n, DEFAULT_KEY_BUDGET).unwrap();
        let classes = enumerate_classes(&f);
        g.bench_with_input(BenchmarkId::from_parameter(format!("q{q}n{n}")), &classes, |b, classes| {
            b.iter(|| classes.iter().map(|r| space.count_fixed(&r.transform(&f))).sum::<u64>())
        });
    }
    g.finish();
}

fn rational_orbits(c: &mut Criterion) {
    let mut g = c.benchmark_group("rational_orbits");
    g.sample_size(10);
    for (q, n) in [(2u64, 4usize), (3, 3), (5, 3)] {
        let f = FieldCtx::of_order(q).unwrap();
        let space = KeySpace::build(&f, n, DEFAULT_KEY_BUDGET).unwrap();
        g.bench_function(format!("q{q}n{n}"), |b| b.iter(|| oracle::rational_orbits(&space).count));
    }
    g.finish();
}

fn poly_orbits(c: &mut Criterion) {
    let mut g = c.benchmark_group("poly_orbits");
    for (q, n) in [(5u64, 5usize), (7, 5), (9, 5)] {
        let f = FieldCtx::of_order(q).unwrap();
        let space = PolySpace::new(&f, n, DEFAULT_KEY_BUDGET).unwrap();
        g.bench_function(format!("q{q}n{n}"), |b| b.iter(|| space.orbit_labels().len()));
    }
    g.finish();
}

fn key_space_build(c: &mut Criterion) {
    let f = FieldCtx::of_order(4).unwrap();
    c.bench_function("key_space_build/q4n3", |b| {
        b.iter(|| KeySpace::build(&f, 3, DEFAULT_KEY_BUDGET).unwrap().len())
    });
}

criterion_group!(benches, fixed_points, rational_orbits, poly_orbits, key_space_build);
criterion_main!(benches);
