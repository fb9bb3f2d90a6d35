// SPDX-License-Identifier: Apache-2.0

//! Machine-readable run statistics.
//!
//! Apart from the wall-clock fields (`wall_seconds`, `*_time_seconds` and the
//! per-pair `seconds`), the JSON is a deterministic function of the input and
//! the configuration.

use serde::Serialize;

use crate::selector::Engine;
use crate::sweeper::{PairOutcome, PairRecord, PerOutputResult, SweepResult, SweepStats, Verdict};

/// JSON schema the stats document validates against.
pub const STATS_SCHEMA: &str = include_str!("../schema/stats.schema.json");

/// Keys holding wall-clock measurements.
pub const WALL_CLOCK_KEYS: [&str; 4] = ["wall_seconds", "sat_time_seconds", "eps_time_seconds", "seconds"];

#[derive(Serialize)]
struct PairJson {
    id: usize,
    gates: usize,
    pis: usize,
    score_xor: Option<f64>,
    engine: Option<Engine>,
    verdict: PairOutcome,
    seconds: f64,
    a: usize,
    b: usize,
    antivalent: bool,
    fallback: bool,
}

impl From<&PairRecord> for PairJson {
    fn from(p: &PairRecord) -> Self {
        PairJson {
            id: p.id,
            gates: p.gates,
            pis: p.pis,
            score_xor: p.score_xor,
            engine: p.engine,
            verdict: p.verdict,
            seconds: p.seconds,
            a: p.a,
            b: p.b,
            antivalent: p.antivalent,
            fallback: p.fallback,
        }
    }
}

#[derive(Serialize)]
struct StatsJson<'a> {
    verdict: &'static str,
    wall_seconds: f64,
    pairs: usize,
    isd_hits: usize,
    sat_calls: usize,
    sat_time_seconds: f64,
    eps_calls: usize,
    eps_time_seconds: f64,
    skipped_pairs: usize,
    merges: usize,
    per_pair: Vec<PairJson>,
    counterexample: Option<&'a [bool]>,
    first_failing_output: Option<usize>,
    details: &'a SweepStats,
}

fn counterexample(v: &Verdict) -> Option<&[bool]> {
    match v {
        Verdict::NonEquivalent(c) => Some(c),
        _ => None,
    }
}

fn render(doc: &StatsJson) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("stats serialize");
    s.push('\n');
    s
}

/// The stats document of a single sweep.
pub fn stats_json(result: &SweepResult) -> String {
    let s = &result.stats;
    render(&StatsJson {
        verdict: result.verdict.kind(),
        wall_seconds: s.wall_seconds,
        pairs: s.pairs,
        isd_hits: s.isd_hits,
        sat_calls: s.sat_calls,
        sat_time_seconds: s.sat_time_seconds,
        eps_calls: s.eps_calls,
        eps_time_seconds: s.eps_time_seconds,
        skipped_pairs: s.skipped_pairs,
        merges: s.merges,
        per_pair: result.pair_log.iter().map(PairJson::from).collect(),
        counterexample: counterexample(&result.verdict),
        first_failing_output: None,
        details: s,
    })
}

/// The stats document of a per-output run; pairs of all outputs are
/// concatenated with ids renumbered in order.
pub fn per_output_stats_json(result: &PerOutputResult) -> String {
    let s = &result.stats;
    let mut per_pair = Vec::new();
    for r in &result.outputs {
        for p in &r.pair_log {
            let mut j = PairJson::from(p);
            j.id = per_pair.len();
            per_pair.push(j);
        }
    }
    render(&StatsJson {
        verdict: result.verdict.kind(),
        wall_seconds: s.wall_seconds,
        pairs: s.pairs,
        isd_hits: s.isd_hits,
        sat_calls: s.sat_calls,
        sat_time_seconds: s.sat_time_seconds,
        eps_calls: s.eps_calls,
        eps_time_seconds: s.eps_time_seconds,
        skipped_pairs: s.skipped_pairs,
        merges: s.merges,
        per_pair,
        counterexample: counterexample(&result.verdict),
        first_failing_output: result.first_failing,
        details: s,
    })
}

/// Replaces every wall-clock field with 0 so two documents can be compared.
pub fn strip_wall_clock(doc: &mut serde_json::Value) {
    match doc {
        serde_json::Value::Object(map) => {
            for (k, v) in map.iter_mut() {
                if WALL_CLOCK_KEYS.contains(&k.as_str()) {
                    *v = serde_json::Value::from(0.0);
                } else {
                    strip_wall_clock(v);
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_wall_clock),
        _ => {}
    }
}
