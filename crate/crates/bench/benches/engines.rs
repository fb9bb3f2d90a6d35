// SPDX-License-Identifier: Apache-2.0

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hybridcec::eps::{eps_check, eps_check_parallel, EpsConfig};
use hybridcec::sat::{solve, tseitin_encode, SatBudget};
use hybridcec_bench::middle_output_cone;

fn middle_output(c: &mut Criterion) {
    let mut g = c.benchmark_group("middle_output");
    g.sample_size(10).measurement_time(Duration::from_secs(5));
    for n in [4usize, 6, 8] {
        let cone = middle_output_cone(n);
        let cnf = tseitin_encode(&cone);
        let budget = SatBudget {
            max_conflicts: u64::MAX,
            max_time: Duration::from_secs(600),
        };
        g.bench_with_input(BenchmarkId::new("eps", n), &cone, |b, cone| {
            b.iter(|| eps_check(cone, &EpsConfig::default()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("cdcl", n), &cnf, |b, cnf| b.iter(|| solve(cnf, &budget)));
    }
    g.finish();
}

fn eps_workers(c: &mut Criterion) {
    let cone = middle_output_cone(10);
    let mut g = c.benchmark_group("eps_workers");
    g.sample_size(10);
    for workers in [1usize, 2, 4, 8] {
        let cfg = EpsConfig {
            workers,
            ..EpsConfig::default()
        };
        g.bench_with_input(BenchmarkId::from_parameter(workers), &cfg, |b, cfg| {
            b.iter(|| eps_check_parallel(&cone, cfg).unwrap())
        });
    }
    g.finish();
}

fn bits_limit(c: &mut Criterion) {
    let cone = middle_output_cone(9);
    let mut g = c.benchmark_group("eps_bits_limit");
    g.sample_size(10);
    for l in [8u32, 12, 16, 20] {
        let cfg = EpsConfig {
            bits_limit: l,
            ..EpsConfig::default()
        };
        g.bench_with_input(BenchmarkId::from_parameter(l), &cfg, |b, cfg| {
            b.iter(|| eps_check(&cone, cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, middle_output, eps_workers, bits_limit);
criterion_main!(benches);
