// SPDX-License-Identifier: Apache-2.0

use hybridcec::benchgen::{self, generate, miter_corpus, oracle_check, GenSpec, OracleVerdict};
use hybridcec::logicsim::CandidatePair;
use hybridcec::netlist::{build_miter, AigBuilder, Lit};
use hybridcec::selector::Engine;
use hybridcec::sweeper::{prove_pair, sweep, EngineOverride, EngineVerdict, SweepConfig, Verdict};
use proptest::prelude::*;

fn cfg(engine_override: EngineOverride, threads: usize) -> SweepConfig {
    SweepConfig {
        sim_patterns: 64,
        engine_override,
        threads,
        check_merges: true,
        ..SweepConfig::default()
    }
}

fn agrees(v: &Verdict, o: &OracleVerdict, miter: &hybridcec::netlist::Aig) -> bool {
    match (v, o) {
        (Verdict::Equivalent, OracleVerdict::Equivalent) => true,
        (Verdict::NonEquivalent(cex), OracleVerdict::Counterexample(_)) => miter.evaluate(cex)[0],
        _ => false,
    }
}

#[test]
fn corpus_matches_oracle_single_thread() {
    for e in miter_corpus(200, 14, 11) {
        let o = oracle_check(&e.miter, 14).unwrap();
        for ov in [EngineOverride::Hybrid, EngineOverride::SatOnly, EngineOverride::EpsOnly] {
            let r = sweep(&e.miter, &cfg(ov, 1));
            assert!(agrees(&r.verdict, &o, &e.miter), "{} {ov:?}: {:?} vs {o:?}", e.name, r.verdict);
            let s = &r.stats;
            assert_eq!(s.isd_hits + s.sat_decided + s.eps_decided + s.skipped_pairs, s.pairs);
            assert_eq!(r.pair_log.len(), s.pairs);
            assert!(s.merges <= s.pairs);
            match ov {
                EngineOverride::SatOnly => assert_eq!(s.eps_calls, 0),
                EngineOverride::EpsOnly => assert_eq!(s.sat_calls, 0),
                EngineOverride::Hybrid => {}
            }
        }
    }
}

#[test]
fn verdicts_stable_across_threads() {
    for e in miter_corpus(40, 12, 5) {
        let base = sweep(&e.miter, &cfg(EngineOverride::Hybrid, 1)).verdict;
        for t in [2, 4, 8] {
            let r = sweep(&e.miter, &cfg(EngineOverride::Hybrid, t));
            assert_eq!(r.verdict.kind(), base.kind(), "{} threads={t}", e.name);
            if let Verdict::NonEquivalent(cex) = &r.verdict {
                assert!(e.miter.evaluate(cex)[0]);
            }
        }
    }
}

#[test]
fn ten_bit_corrupted_multiplier() {
    let a = generate(&GenSpec::MultArray { width: 10 }).unwrap();
    for seed in 0..3 {
        let bad = benchgen::corrupt(&a, seed).unwrap();
        let m = build_miter(&a, &bad).unwrap();
        match sweep(&m, &SweepConfig::default()).verdict {
            Verdict::NonEquivalent(cex) => assert!(m.evaluate(&cex)[0]),
            v => panic!("seed {seed}: {v:?}"),
        }
    }
}

#[test]
fn xor_dense_pair_goes_to_eps() {
    let mut b = AigBuilder::new(12);
    let pis = b.pis();
    let mut x = pis[0];
    for &p in &pis[1..] {
        x = b.xor(x, p);
    }
    let mut y = pis[11];
    for &p in pis[..11].iter().rev() {
        y = b.xor(p, y);
    }
    b.add_output(x);
    b.add_output(y);
    let aig = b.finish();
    let (o0, o1) = (aig.outputs()[0], aig.outputs()[1]);
    let (lo, hi) = if o0.node() < o1.node() { (o0, o1) } else { (o1, o0) };
    let pair = CandidatePair {
        a: lo.regular(),
        b: hi.regular(),
        antivalent: lo.is_inverted() != hi.is_inverted(),
    };
    let (v, stats) = prove_pair(&pair, &aig, &SweepConfig::default());
    assert_eq!(v, EngineVerdict::Equivalent);
    assert_eq!(stats.eps_calls, 1);
    assert_eq!(stats.sat_calls, 0);
}

#[test]
fn wide_and_tree_goes_to_sat() {
    let mut b = AigBuilder::new(40);
    let pis = b.pis();
    let x = pis.iter().skip(1).fold(pis[0], |acc, &p| b.and(acc, p));
    let y = pis.iter().rev().skip(1).fold(pis[39], |acc, &p| b.and(acc, p));
    b.add_output(x);
    b.add_output(y);
    let aig = b.finish();
    let pair = CandidatePair {
        a: Lit::new(x.node().min(y.node()), false),
        b: Lit::new(x.node().max(y.node()), false),
        antivalent: false,
    };
    let (v, stats) = prove_pair(&pair, &aig, &SweepConfig::default());
    assert_eq!(v, EngineVerdict::Equivalent);
    assert_eq!(stats.sat_calls, 1);
    assert_eq!(stats.eps_calls, 0);
}

#[test]
fn hybrid_routes_middle_output_to_eps() {
    let m = benchgen::middle_output_miter(6);
    let r = sweep(&m, &cfg(EngineOverride::Hybrid, 1));
    assert_eq!(r.verdict, Verdict::Equivalent);
    assert!(r.pair_log.iter().any(|p| p.engine == Some(Engine::Eps)));
}

#[test]
fn timeout_reports_unknown() {
    let m = build_miter(
        &generate(&GenSpec::MultArray { width: 12 }).unwrap(),
        &generate(&GenSpec::MultColumnwise { width: 12 }).unwrap(),
    )
    .unwrap();
    let c = SweepConfig {
        timeout: Some(std::time::Duration::ZERO),
        sim_patterns: 64,
        ..SweepConfig::default()
    };
    assert_eq!(sweep(&m, &c).verdict, Verdict::Unknown);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_miters_match_oracle(pis in 2usize..10, ands in 5usize..60, seed in any::<u64>(), corrupt in any::<bool>(), threads in 1usize..5) {
        let a = benchgen::random_aig(pis, ands, 2, seed);
        let b = if corrupt {
            match benchgen::corrupt(&a, seed) { Ok(b) => b, Err(_) => a.clone() }
        } else {
            benchgen::rewrite_aig(&a, 15, seed)
        };
        let m = build_miter(&a, &b).unwrap();
        let o = oracle_check(&m, 14).unwrap();
        let r = sweep(&m, &cfg(EngineOverride::Hybrid, threads));
        prop_assert!(agrees(&r.verdict, &o, &m));
    }
}
