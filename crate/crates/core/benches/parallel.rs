use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use riscap_core::channel::{Model, SystemParams};
use riscap_core::montecarlo::{estimate_secrecy_with, McConfig};
use riscap_core::sweep::{run_sweep, SweepSpec, Varied};
use riscap_core::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    let cfg = McConfig::new(200_000, 1);
    for model in [Model::AccessPoint, Model::Relay] {
        let p = SystemParams::defaults(model);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("{model:?}")), &p, |b, p| {
                b.iter(|| estimate_secrecy_with(p, &cfg, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for model in [Model::AccessPoint, Model::Relay] {
        let spec = SweepSpec::new(
            SystemParams::defaults(model),
            Varied::Ps,
            (1..=30).map(f64::from).collect(),
        );
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("{model:?}")), &spec, |b, s| {
                b.iter(|| run_sweep(s, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, sweep);
criterion_main!(benches);
