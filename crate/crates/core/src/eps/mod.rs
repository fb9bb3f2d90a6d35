// SPDX-License-Identifier: Apache-2.0

//! Exact simulation engine.
//!
//! The exact-probability assignment, once brought to a common denominator,
//! gives every PI a `2^N`-bit numerator whose columns enumerate all input
//! patterns. The engine simulates those numerators with bitwise AND/NOT,
//! cut into `2^(N-l)` rounds of `2^l`-bit blocks: in every round PI `j < l`
//! carries the periodic pattern whose bit `t` is bit `j` of `t`, and PI
//! `j >= l` is held constant at bit `j - l` of the round index. The rounds
//! jointly cover `{0,1}^N` exactly once, so a cone whose root stays zero is
//! constant 0.

mod rational;

pub use rational::{eps_check_rational, root_probability, theta_sequence, RationalError, RATIONAL_MAX_PIS};

use std::sync::Mutex;
use std::time::Duration;

use thiserror::Error;

use crate::interrupt::Interrupt;
use crate::netlist::{Cone, Node};
use crate::simvec::{SimVector, WORD_BITS};

#[derive(Clone, Debug, PartialEq)]
pub struct EpsConfig {
    /// Upper bound on the block exponent `l`.
    pub bits_limit: u32,
    /// Cones with more PIs are refused with `ResourceOut`.
    pub max_pis: usize,
    /// Worker count for [`eps_check_parallel`]; a power of two.
    pub workers: usize,
    pub memory_cap_bytes: usize,
    pub time_budget: Option<Duration>,
}

impl Default for EpsConfig {
    fn default() -> Self {
        EpsConfig {
            bits_limit: 20,
            max_pis: 36,
            workers: 1,
            memory_cap_bytes: 1 << 30,
            time_budget: None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EpsError {
    #[error("bits_limit must be in 1..=30, got {0}")]
    BitsLimit(u32),
    #[error("worker count must be a power of two, got {0}")]
    Workers(usize),
    #[error("PI index {pi} out of range for {num_pis} PIs")]
    PiOutOfRange { pi: usize, num_pis: usize },
    #[error("round {round} out of range for {rounds} rounds")]
    RoundOutOfRange { round: u64, rounds: u64 },
}

impl EpsConfig {
    pub fn validate(&self) -> Result<(), EpsError> {
        if !(1..=30).contains(&self.bits_limit) {
            return Err(EpsError::BitsLimit(self.bits_limit));
        }
        if !self.workers.is_power_of_two() {
            return Err(EpsError::Workers(self.workers));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResourceReason {
    TooManyPis { pis: usize, max: usize },
    Memory { needed: usize, cap: usize },
    Interrupted { rounds_completed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsVerdict {
    Equivalent,
    /// Assignment over the cone PIs that drives the root to 1.
    Counterexample(Vec<bool>),
    ResourceOut(ResourceReason),
}

/// Block exponent for a cone with `num_pis` inputs.
pub fn block_exponent(num_pis: usize, bits_limit: u32) -> u32 {
    (num_pis as u32).min(bits_limit)
}

/// Bytes of full value blocks for `nodes` nodes at block exponent `l`. Jobs
/// are admitted against this bound; the tiled kernel needs at most this.
pub fn predicted_memory(nodes: usize, l: u32) -> usize {
    nodes * block_words(l) * 8
}

fn block_words(l: u32) -> usize {
    (1usize << l).div_ceil(WORD_BITS)
}

/// Initial value of PI `j` in round `round` for `num_pis` PIs and block
/// exponent `l`.
pub fn construct_initial_value(j: usize, round: u64, num_pis: usize, l: u32) -> Result<SimVector, EpsError> {
    if j >= num_pis {
        return Err(EpsError::PiOutOfRange { pi: j, num_pis });
    }
    let rounds = 1u64 << (num_pis as u32 - l.min(num_pis as u32));
    if round >= rounds {
        return Err(EpsError::RoundOutOfRange { round, rounds });
    }
    let len = 1usize << l;
    let mut words = vec![0u64; block_words(l)];
    fill_pi_words(&mut words, j, round, l, 0);
    Ok(SimVector::from_words(words, len))
}

/// Low 64-bit pattern for PI `j < 6`: bit `t` = bit `j` of `t`.
const PERIODIC: [u64; 6] = [
    0xaaaa_aaaa_aaaa_aaaa,
    0xcccc_cccc_cccc_cccc,
    0xf0f0_f0f0_f0f0_f0f0,
    0xff00_ff00_ff00_ff00,
    0xffff_0000_ffff_0000,
    0xffff_ffff_0000_0000,
];

/// Fills words `first..first + words.len()` of PI `j`'s block.
fn fill_pi_words(words: &mut [u64], j: usize, round: u64, l: u32, first: usize) {
    if j >= l as usize {
        let v = if round >> (j - l as usize) & 1 == 1 { !0 } else { 0 };
        words.fill(v);
    } else if j < 6 {
        words.fill(PERIODIC[j]);
    } else {
        // word w covers patterns 64w..64w+63; bit j of t is bit (j - 6) of w
        for (w, word) in (first..).zip(words.iter_mut()) {
            *word = if w >> (j - 6) & 1 == 1 { !0 } else { 0 };
        }
    }
    if first + words.len() == block_words(l) {
        if let Some(last) = words.last_mut() {
            *last &= SimVector::tail_mask(1usize << l);
        }
    }
}

/// Words per node evaluated at a time. Blocks are processed tile by tile in
/// ascending order so the working set stays in cache for any `l`.
const TILE_WORDS: usize = 64;

/// Runs the exhaustive block simulation over rounds `first..first + count`.
fn run_rounds(cone: &Cone, l: u32, first: u64, count: u64, interrupt: &Interrupt) -> EpsVerdict {
    let aig = &cone.aig;
    let n = aig.num_pis();
    let bw = block_words(l);
    let tile = bw.min(TILE_WORDS);
    let root = cone.root();
    if root.is_const() {
        return if root.is_inverted() {
            EpsVerdict::Counterexample(vec![false; n])
        } else {
            EpsVerdict::Equivalent
        };
    }
    let inv = (root.is_inverted() as u64).wrapping_neg();
    let mut vals = vec![0u64; aig.num_nodes() * tile];
    for k in 0..count {
        let round = first + k;
        for start in (0..bw).step_by(tile) {
            for j in 0..n {
                fill_pi_words(&mut vals[(j + 1) * tile..(j + 2) * tile], j, round, l, start);
            }
            for i in aig.and_indices() {
                let Node::And(g) = aig.node(i) else { continue };
                let (done, rest) = vals.split_at_mut(i * tile);
                let out = &mut rest[..tile];
                let a = &done[g.fanin0.node() * tile..][..tile];
                let b = &done[g.fanin1.node() * tile..][..tile];
                let ma = (g.fanin0.is_inverted() as u64).wrapping_neg();
                let mb = (g.fanin1.is_inverted() as u64).wrapping_neg();
                for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
                    *o = (x ^ ma) & (y ^ mb);
                }
            }
            let rv = &vals[root.node() * tile..][..tile];
            // inverted roots set the padding bits of a short block, so mask
            let mask = SimVector::tail_mask(1usize << l);
            let hit = rv.iter().enumerate().find_map(|(w, &x)| {
                let x = (x ^ inv) & if start + w + 1 == bw { mask } else { !0 };
                (x != 0).then(|| (start + w) * WORD_BITS + x.trailing_zeros() as usize)
            });
            if let Some(t) = hit {
                let assignment = (0..n)
                    .map(|j| {
                        if j < l as usize {
                            t >> j & 1 == 1
                        } else {
                            round >> (j - l as usize) & 1 == 1
                        }
                    })
                    .collect();
                return EpsVerdict::Counterexample(assignment);
            }
        }
        if k + 1 < count && interrupt.is_set() {
            return EpsVerdict::ResourceOut(ResourceReason::Interrupted { rounds_completed: k + 1 });
        }
    }
    EpsVerdict::Equivalent
}

fn admission(cone: &Cone, cfg: &EpsConfig, l: u32, workers: usize) -> Option<EpsVerdict> {
    let n = cone.num_pis();
    if n > cfg.max_pis {
        return Some(EpsVerdict::ResourceOut(ResourceReason::TooManyPis {
            pis: n,
            max: cfg.max_pis,
        }));
    }
    let needed = predicted_memory(cone.aig.num_nodes(), l) * workers;
    if needed > cfg.memory_cap_bytes {
        return Some(EpsVerdict::ResourceOut(ResourceReason::Memory {
            needed,
            cap: cfg.memory_cap_bytes,
        }));
    }
    None
}

/// Single-threaded exhaustive check of a cone.
pub fn eps_check(cone: &Cone, cfg: &EpsConfig) -> Result<EpsVerdict, EpsError> {
    eps_check_with(cone, cfg, &Interrupt::new())
}

pub fn eps_check_with(cone: &Cone, cfg: &EpsConfig, interrupt: &Interrupt) -> Result<EpsVerdict, EpsError> {
    cfg.validate()?;
    let n = cone.num_pis();
    let l = block_exponent(n, cfg.bits_limit);
    if let Some(v) = admission(cone, cfg, l, 1) {
        return Ok(v);
    }
    let interrupt = interrupt.child(cfg.time_budget);
    let rounds = 1u64 << (n as u32 - l);
    Ok(run_rounds(cone, l, 0, rounds, &interrupt))
}

/// Splits the round space across `cfg.workers` threads by the top `k` round
/// bits, i.e. worker `w` fixes the `k` highest-numbered PIs to the bits of
/// `w`. When the cone has fewer than `k` PIs outside the block, the block is
/// shrunk to make room.
///
/// A worker that finds a counterexample cancels only the workers above it,
/// and the lowest worker's counterexample is returned, so the result is the
/// same smallest pattern index [`eps_check`] reports.
pub fn eps_check_parallel(cone: &Cone, cfg: &EpsConfig) -> Result<EpsVerdict, EpsError> {
    eps_check_parallel_with(cone, cfg, &Interrupt::new())
}

pub fn eps_check_parallel_with(cone: &Cone, cfg: &EpsConfig, interrupt: &Interrupt) -> Result<EpsVerdict, EpsError> {
    cfg.validate()?;
    let n = cone.num_pis();
    let k = (cfg.workers.trailing_zeros()).min(n as u32);
    if k == 0 {
        return eps_check_with(cone, cfg, interrupt);
    }
    let l = block_exponent(n, cfg.bits_limit).min(n as u32 - k);
    let workers = 1usize << k;
    if let Some(v) = admission(cone, cfg, l, workers) {
        return Ok(v);
    }
    let group = interrupt.child(cfg.time_budget);
    let per_worker = 1u64 << (n as u32 - l - k);
    let stops: Vec<Interrupt> = (0..workers).map(|_| group.child(None)).collect();
    let found: Mutex<Vec<Option<Vec<bool>>>> = Mutex::new(vec![None; workers]);
    let partial: Mutex<Option<ResourceReason>> = Mutex::new(None);
    std::thread::scope(|s| {
        for w in 0..workers {
            let (stops, found, partial) = (&stops, &found, &partial);
            s.spawn(move || match run_rounds(cone, l, w as u64 * per_worker, per_worker, &stops[w]) {
                EpsVerdict::Counterexample(a) => {
                    found.lock().unwrap()[w] = Some(a);
                    for later in &stops[w + 1..] {
                        later.trigger();
                    }
                }
                EpsVerdict::ResourceOut(r) => {
                    partial.lock().unwrap().get_or_insert(r);
                }
                EpsVerdict::Equivalent => {}
            });
        }
    });
    if let Some(a) = found.into_inner().unwrap().into_iter().flatten().next() {
        return Ok(EpsVerdict::Counterexample(a));
    }
    if let Some(r) = partial.into_inner().unwrap() {
        return Ok(EpsVerdict::ResourceOut(r));
    }
    Ok(EpsVerdict::Equivalent)
}
