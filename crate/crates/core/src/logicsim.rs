// SPDX-License-Identifier: Apache-2.0

//! Random bit-parallel logic simulation.
//!
//! Each round assigns one 64-bit word of random patterns to every PI and
//! propagates it through the AIG. Instead of keeping every simulated word,
//! each node folds its words into a 64-bit digest after normalizing the phase
//! so that the pattern-0 value is 0. Nodes whose digests agree form a
//! candidate class; the normalization puts complementary nodes into the same
//! class with opposite phase.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netlist::{Aig, Lit, Node};
use crate::simvec::WORD_BITS;

/// A potentially equivalent (or antivalent) pair of nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CandidatePair {
    pub a: Lit,
    pub b: Lit,
    pub antivalent: bool,
}

impl CandidatePair {
    /// `b` with the relative phase folded in, so the pair claims `a == b_phased()`.
    pub fn b_phased(&self) -> Lit {
        self.b ^ self.antivalent
    }
}

/// Accumulated simulation state of every node of one AIG.
#[derive(Clone, Debug)]
pub struct Signatures {
    digest: Vec<u64>,
    phase: Vec<bool>,
    head: Vec<u64>,
    words: usize,
    witness: Vec<Option<Vec<bool>>>,
    seed: u64,
    refinements: u64,
}

#[inline]
fn fmix64(mut k: u64) -> u64 {
    k ^= k >> 33;
    k = k.wrapping_mul(0xff51_afd7_ed55_8ccd);
    k ^= k >> 33;
    k = k.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    k ^ (k >> 33)
}

#[inline]
fn absorb(h: u64, w: u64) -> u64 {
    fmix64(h.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ w)
}

/// Word-level value of a literal.
#[inline]
fn lit_word(vals: &[u64], l: Lit) -> u64 {
    vals[l.node()] ^ (l.is_inverted() as u64).wrapping_neg()
}

/// Propagates one word per PI through every node.
fn propagate(aig: &Aig, pi_words: &[u64], vals: &mut Vec<u64>) {
    vals.clear();
    vals.resize(aig.num_nodes(), 0);
    vals[1..=aig.num_pis()].copy_from_slice(pi_words);
    for i in aig.and_indices() {
        if let Node::And(g) = aig.node(i) {
            vals[i] = lit_word(vals, g.fanin0) & lit_word(vals, g.fanin1);
        }
    }
}

impl Signatures {
    fn empty(aig: &Aig, seed: u64) -> Signatures {
        let n = aig.num_nodes();
        Signatures {
            digest: vec![0; n],
            phase: vec![false; n],
            head: vec![0; n],
            words: 0,
            witness: vec![None; aig.outputs().len()],
            seed,
            refinements: 0,
        }
    }

    fn absorb_word(&mut self, aig: &Aig, pi_words: &[u64], vals: &mut Vec<u64>) {
        propagate(aig, pi_words, vals);
        let first = self.words == 0;
        for (i, &v) in vals.iter().enumerate() {
            if first {
                self.phase[i] = v & 1 == 1;
                self.head[i] = v;
            }
            let norm = v ^ (self.phase[i] as u64).wrapping_neg();
            self.digest[i] = absorb(self.digest[i], norm);
        }
        for (k, &o) in aig.outputs().iter().enumerate() {
            if self.witness[k].is_some() {
                continue;
            }
            let w = lit_word(vals, o);
            if w != 0 {
                let bit = w.trailing_zeros();
                self.witness[k] = Some(pi_words.iter().map(|&p| p >> bit & 1 == 1).collect());
            }
        }
        self.words += 1;
    }

    /// Total simulated patterns.
    pub fn num_patterns(&self) -> usize {
        self.words * WORD_BITS
    }

    pub fn num_words(&self) -> usize {
        self.words
    }

    pub fn digest(&self, node: usize) -> u64 {
        self.digest[node]
    }

    /// Value of `node` under pattern 0.
    pub fn phase(&self, node: usize) -> bool {
        self.phase[node]
    }

    /// The first simulated word of `node`, unnormalized.
    pub fn head_word(&self, node: usize) -> u64 {
        self.head[node]
    }

    /// True when the two literals have matching signatures.
    pub fn lits_agree(&self, a: Lit, b: Lit) -> bool {
        self.digest[a.node()] == self.digest[b.node()]
            && (self.phase[a.node()] ^ a.is_inverted()) == (self.phase[b.node()] ^ b.is_inverted())
    }

    /// Number of distinct classes among the live nodes of `aig`.
    pub fn num_classes(&self, aig: &Aig) -> usize {
        let mut seen = std::collections::HashSet::new();
        for i in std::iter::once(0).chain(aig.topological_order()) {
            seen.insert(self.digest[i]);
        }
        seen.len()
    }

    /// Appends `pattern` plus 63 single-bit-flip neighbours as one extra
    /// simulation word.
    pub fn refine_with_pattern(&mut self, aig: &Aig, pattern: &[bool]) {
        assert_eq!(pattern.len(), aig.num_pis(), "pattern must assign every PI");
        if self.digest.len() < aig.num_nodes() {
            let n = aig.num_nodes();
            self.digest.resize(n, 0);
            self.phase.resize(n, false);
            self.head.resize(n, 0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed_f11e);
        rng.set_stream(self.refinements);
        self.refinements += 1;
        let mut pi_words: Vec<u64> = pattern.iter().map(|&b| (b as u64).wrapping_neg()).collect();
        if !pi_words.is_empty() {
            for bit in 1..WORD_BITS {
                let j = rng.gen_range(0..pi_words.len());
                pi_words[j] ^= 1 << bit;
            }
        }
        let mut vals = Vec::new();
        self.absorb_word(aig, &pi_words, &mut vals);
    }
}

/// Runs `rounds` rounds of 64 random patterns each.
///
/// PI `j` draws its words from ChaCha stream `j` of `seed`, so the patterns
/// depend only on `(seed, j, round)`.
pub fn simulate_random(aig: &Aig, rounds: usize, seed: u64) -> Signatures {
    assert!(rounds >= 1, "at least one simulation round is required");
    let mut sigs = Signatures::empty(aig, seed);
    let mut rngs: Vec<ChaCha8Rng> = (0..aig.num_pis())
        .map(|j| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(j as u64);
            r
        })
        .collect();
    let mut pi_words = vec![0u64; aig.num_pis()];
    let mut vals = Vec::with_capacity(aig.num_nodes());
    for _ in 0..rounds {
        for (w, r) in pi_words.iter_mut().zip(rngs.iter_mut()) {
            *w = r.next_u64();
        }
        sigs.absorb_word(aig, &pi_words, &mut vals);
    }
    sigs
}

/// Groups live nodes by signature and emits `(representative, member)` pairs
/// ordered by member index. The representative is the lowest-index node of
/// its class, so constant-valued nodes pair with node 0.
pub fn collect_candidate_pairs(sigs: &Signatures, aig: &Aig) -> Vec<CandidatePair> {
    let mut repr: HashMap<u64, usize> = HashMap::new();
    let mut pairs = Vec::new();
    for i in std::iter::once(0).chain(aig.topological_order()) {
        match repr.get(&sigs.digest[i]) {
            Some(&r) => pairs.push(CandidatePair {
                a: Lit::new(r, false),
                b: Lit::new(i, false),
                antivalent: sigs.phase[r] != sigs.phase[i],
            }),
            None => {
                repr.insert(sigs.digest[i], i);
            }
        }
    }
    pairs
}

/// If simulation ever drove an output to 1, the PI assignment that did so.
pub fn check_output_counterexample(sigs: &Signatures, miter: &Aig) -> Option<Vec<bool>> {
    debug_assert_eq!(sigs.witness.len(), miter.outputs().len());
    sigs.witness.iter().flatten().next().cloned()
}
