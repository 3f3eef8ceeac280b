use criterion::{criterion_group, criterion_main, Criterion};

use curveclose_core::{endpoint_map, CurveTable, Cuts, FourierTerm, Perm, TurningCurve};

fn test_table() -> CurveTable {
    let curve = TurningCurve::from_fourier(
        1.0,
        1,
        vec![FourierTerm {
            amp: 0.9,
            freq: 1.0,
            phase: 0.7,
        }],
    )
    .unwrap()
    .normalize();
    CurveTable::new(&curve, 4096).unwrap()
}

fn bench_endpoint_map(c: &mut Criterion) {
    let table = test_table();
    let sigma = Perm::new(vec![1, 3, 2]).unwrap();
    c.bench_function("endpoint_map_two_cut", |b| {
        let mut x = 0.0_f64;
        b.iter(|| {
            x = (x + 0.001) % 0.5;
            endpoint_map(
                &table,
                &sigma,
                &Cuts::two(x, x + 0.5).unwrap(),
            )
            .unwrap()
        })
    });
}

fn bench_table_build(c: &mut Criterion) {
    let curve = test_table().curve().clone();
    c.bench_function("curve_table_4096", |b| {
        b.iter(|| CurveTable::new(&curve, 4096).unwrap())
    });
}

criterion_group!(benches, bench_endpoint_map, bench_table_build);
criterion_main!(benches);
