use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use overage::sim::{run_simulation, SimConfig};
use overage::{analytic, quadrature, QuadratureSpec, QueueModel};
use overage_bench::reference;

fn closed_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("analytic");
    for model in QueueModel::ALL {
        let s = reference(model, None);
        g.bench_function(BenchmarkId::from_parameter(model), |b| {
            b.iter(|| analytic::metrics(black_box(&s)).unwrap())
        });
    }
    g.finish();
}

fn quadratures(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let mut g = c.benchmark_group("quadrature");
    for (model, shape) in [
        (QueueModel::Mg11, Some(0.5)),
        (QueueModel::Mg11, Some(2.0)),
        (QueueModel::Mg12Star, Some(0.5)),
        (QueueModel::Mg12Star, Some(2.0)),
        (QueueModel::Mm1, None),
    ] {
        let s = reference(model, shape);
        let id = format!("{model}/alpha={}", shape.map_or("exp".into(), |a| a.to_string()));
        g.bench_function(id, |b| b.iter(|| quadrature::metrics(black_box(&s), &spec).unwrap()));
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulation_1e5");
    g.sample_size(10);
    let cfg = SimConfig::default().with_packets(100_000);
    for model in QueueModel::ALL {
        let s = reference(model, None);
        g.bench_function(BenchmarkId::from_parameter(model), |b| {
            b.iter(|| run_simulation(black_box(&s), &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, closed_forms, quadratures, simulation);
criterion_main!(benches);
