use criterion::{criterion_group, criterion_main, Criterion};
use dmaj_bench::heinosaari_instance;
use dmaj_core::{d_maj_feasibility, d_stochastic_witness, SolverParams, WeightVector};

fn feasibility(c: &mut Criterion) {
    let mut group = c.benchmark_group("feasibility");
    group.sample_size(10);

    let inst = heinosaari_instance();
    group.bench_function("heinosaari", |b| {
        b.iter(|| d_maj_feasibility(&inst, &SolverParams::default()).unwrap())
    });

    let d = WeightVector::new(vec![2.0, 1.0, 1.0]).unwrap();
    group.bench_function("vector_witness", |b| {
        b.iter(|| {
            d_stochastic_witness(&[3.0, 0.5, 0.5], &[4.0, 0.0, 0.0], &d, &SolverParams::default())
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, feasibility);
criterion_main!(benches);
