use criterion::{criterion_group, criterion_main, Criterion};
use tidyfridge_bench::sample_case;
use tidyfridge_core::belief::NullSink;
use tidyfridge_core::benchgen::Family;
use tidyfridge_core::harness::{run_approach, Approach, EvalConfig};
use tidyfridge_core::Catalog;

fn generation(c: &mut Criterion) {
    let cat = Catalog::default();
    let mut group = c.benchmark_group("generate-case");
    group.sample_size(10);
    for family in Family::ALL {
        group.bench_function(family.name(), |b| b.iter(|| sample_case(family, 11, &cat)));
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let cat = Catalog::default();
    let case = sample_case(Family::Conditional, 5, &cat);
    let cfg = EvalConfig::default();
    let mut group = c.benchmark_group("run-approach");
    group.sample_size(20);
    for approach in [Approach::NonInteractive, Approach::Active] {
        group.bench_function(approach.name(), |b| {
            b.iter(|| run_approach(&case, approach, &cfg, 0, &cat, &mut NullSink).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, generation, evaluation);
criterion_main!(benches);
