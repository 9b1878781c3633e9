use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zonal_core::exactpoly::rat;
use zonal_core::parallel::Strategy;
use zonal_core::verify::{closed_forms, ClosedFormRanges};
use zonal_core::wishart::mc_expectation_u_with;
use zonal_core::zonal::coefficient_table_with;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn table_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("table");
    g.sample_size(10);
    for n in [12, 16] {
        for (name, s) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| b.iter(|| coefficient_table_with(n, s)));
        }
    }
    g.finish();
}

fn closed_form_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("closed-forms");
    g.sample_size(10);
    let ranges = ClosedFormRanges::up_to(14);
    for (name, s) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| closed_forms(&ranges, s)));
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("wishart-mc");
    g.sample_size(10);
    let y = [rat(1, 1), rat(1, 1)];
    for (name, s) in STRATEGIES {
        g.bench_function(name, |b| b.iter(|| mc_expectation_u_with(4, 2, 3, &y, 20_000, 42, s).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, table_build, closed_form_sweep, monte_carlo);
criterion_main!(benches);
