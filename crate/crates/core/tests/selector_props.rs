// SPDX-License-Identifier: Apache-2.0

use hybridcec::benchgen::{self, GenSpec};
use hybridcec::netlist::{Aig, Cone};
use hybridcec::selector::{detect_xor_gates, group_xor_blocks, score_xor, select_engine, Engine};
use proptest::prelude::*;

fn output_cone(m: &Aig, o: usize) -> Cone {
    Cone::of_literal(m, m.outputs()[o])
}

#[test]
fn ripple_adder_has_at_least_n_xor_roots() {
    for n in 1..=12 {
        let a = benchgen::generate(&GenSpec::AdderRipple { width: n }).unwrap();
        let roots: usize = (0..n).map(|o| detect_xor_gates(&output_cone(&a, o)).len()).max().unwrap();
        let all = hybridcec::selector::detect_xor_gates_in(&a).len();
        assert!(all >= n, "n={n}: {all} roots");
        assert!(roots >= 1);
    }
}

#[test]
fn multiplier_middle_outputs_route_to_eps() {
    for n in 3..=12 {
        let m = benchgen::middle_output_miter(n);
        let c = output_cone(&m, 0);
        let ch = select_engine(&c, 0.15, 36);
        assert!(ch.score > 0.15, "n={n} score {}", ch.score);
        assert_eq!(ch.engine, Engine::Eps);
    }
}

#[test]
fn xor_free_random_cones_score_zero() {
    for seed in 0..50 {
        let a = benchgen::random_aig(16, 120, 3, seed);
        for o in 0..3 {
            let c = output_cone(&a, o);
            let ch = select_engine(&c, 0.15, 36);
            assert_eq!(ch.score, 0.0);
            assert_eq!(ch.engine, Engine::Sat);
        }
    }
}

#[test]
fn renumbering_invariance() {
    // the same circuit built with and without hashing gives the same blocks
    let a = benchgen::generate(&GenSpec::AdderCla { width: 6 }).unwrap();
    let r = a.structural_hash();
    for o in 0..7 {
        let (ca, cr) = (output_cone(&a, o), output_cone(&r, o));
        let sizes = |c: &Cone| {
            let mut s: Vec<usize> = group_xor_blocks(&c.aig, &detect_xor_gates(c))
                .iter()
                .map(|b| b.gates.len())
                .collect();
            s.sort_unstable();
            s
        };
        assert_eq!(sizes(&ca), sizes(&cr));
    }
}

proptest! {
    #[test]
    fn score_monotone_and_antitone(mut sizes in prop::collection::vec(1usize..30, 1..6), n in 30usize..200, i in 0usize..6) {
        let base = score_xor(&sizes, n);
        prop_assert!(score_xor(&sizes, n + 1) <= base);
        let i = i % sizes.len();
        sizes[i] += 1;
        prop_assert!(score_xor(&sizes, n) >= base);
        let mut rev = sizes.clone();
        rev.reverse();
        prop_assert_eq!(score_xor(&rev, n), score_xor(&sizes, n));
    }
}
