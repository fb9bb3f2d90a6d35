// SPDX-License-Identifier: Apache-2.0

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hybridcec::sweeper::{sweep, EngineOverride, SweepConfig};
use hybridcec_bench::{multiplier_miter, replicated_miter};

fn engine_modes(c: &mut Criterion) {
    let miter = multiplier_miter(7);
    let mut g = c.benchmark_group("sweep_engine");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    for (name, ov) in [
        ("hybrid", EngineOverride::Hybrid),
        ("sat", EngineOverride::SatOnly),
        ("eps", EngineOverride::EpsOnly),
    ] {
        let cfg = SweepConfig {
            engine_override: ov,
            sim_patterns: 4096,
            ..SweepConfig::default()
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| sweep(&miter, cfg)));
    }
    g.finish();
}

fn isd(c: &mut Criterion) {
    let miter = replicated_miter(4, 4);
    let mut g = c.benchmark_group("sweep_isd");
    g.sample_size(10);
    for on in [true, false] {
        let cfg = SweepConfig {
            isd_enabled: on,
            sim_patterns: 4096,
            ..SweepConfig::default()
        };
        let label = if on { "on" } else { "off" };
        g.bench_with_input(BenchmarkId::from_parameter(label), &cfg, |b, cfg| b.iter(|| sweep(&miter, cfg)));
    }
    g.finish();
}

criterion_group!(benches, engine_modes, isd);
criterion_main!(benches);
