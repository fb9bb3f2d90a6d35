// SPDX-License-Identifier: Apache-2.0

//! Identical structure detection.
//!
//! Two matchers are provided. [`structurally_identical`] is the direct
//! worklist comparison inside one netlist: position-wise fan-in matching
//! with equal polarities, bottoming out at identical literals or at pairs
//! already proven. [`try_isd_merge`] additionally reuses the shape of a
//! proven pair: every proven pair keeps a snapshot of its two cones, and a
//! candidate `(a, b)` is accepted when `a` and `b` are that snapshot with its
//! PIs consistently substituted by nodes of the current netlist. Since the
//! proven pair is equivalent as a function of its PIs, any substitution
//! keeps it equivalent, which is what makes repeated instances over
//! different inputs mergeable without an engine call.

use std::collections::{HashMap, HashSet};

use crate::logicsim::CandidatePair;
use crate::netlist::{Aig, Lit, Node};

const LEAF: u64 = 0x243f_6a88_85a3_08d3;
const CONST: u64 = 0x1319_8a2e_0370_7344;

fn mix(a: u64, b: u64) -> u64 {
    let mut h = a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b.rotate_left(29);
    h ^= h >> 33;
    h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
    h ^= h >> 33;
    h.wrapping_mul(0xc4ce_b9fe_1a85_ec53) ^ (h >> 29)
}

fn edge(shape: u64, l: Lit) -> u64 {
    mix(shape, l.is_inverted() as u64 + 1)
}

/// Position-wise shape of every node: PIs are interchangeable leaves.
fn shapes(aig: &Aig) -> Vec<u64> {
    let mut s = vec![LEAF; aig.num_nodes()];
    s[0] = CONST;
    for i in aig.and_indices() {
        if let Node::And(g) = aig.node(i) {
            s[i] = mix(edge(s[g.fanin0.node()], g.fanin0), edge(s[g.fanin1.node()], g.fanin1));
        }
    }
    s
}

#[derive(Clone, Debug)]
struct ProvenPair {
    /// Raw copy of the fan-in of both nodes; outputs are `[x, x']`.
    snapshot: Aig,
    antivalent: bool,
}

/// Proven pairs plus the caches built on them.
#[derive(Clone, Debug, Default)]
pub struct EquivDb {
    /// `(lower node, higher node, antivalent)`.
    pairs: HashSet<(usize, usize, bool)>,
    proven: Vec<ProvenPair>,
    by_shape: HashMap<(u64, u64), Vec<usize>>,
    memo: HashMap<(Lit, Lit), bool>,
    shapes: Option<Vec<u64>>,
    memo_enabled: bool,
}

impl EquivDb {
    pub fn new() -> EquivDb {
        EquivDb {
            memo_enabled: true,
            ..EquivDb::default()
        }
    }

    /// A database that never caches match results.
    pub fn without_memo() -> EquivDb {
        EquivDb::default()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Records that node `a` equals node `b` (complemented when
    /// `antivalent`) in the current state of `aig`. Call before merging.
    pub fn record(&mut self, aig: &Aig, a: usize, b: usize, antivalent: bool) {
        let (lo, hi) = (a.min(b), a.max(b));
        if !self.pairs.insert((lo, hi, antivalent)) {
            return;
        }
        self.memo.clear();
        if !aig.is_and(a) || !aig.is_and(b) {
            return;
        }
        let mut host = aig.clone();
        let keep = host.outputs().len();
        host.add_output(Lit::new(a, false));
        host.add_output(Lit::new(b, false));
        let snapshot = host.with_outputs(&[keep, keep + 1]);
        let s = shapes(&snapshot);
        let key = (s[snapshot.outputs()[0].node()], s[snapshot.outputs()[1].node()]);
        self.by_shape.entry(key).or_default().push(self.proven.len());
        self.proven.push(ProvenPair { snapshot, antivalent });
    }

    /// True when the literal pair claims an equality recorded in the db.
    pub fn is_proven(&self, x: Lit, y: Lit) -> bool {
        let (lo, hi) = (x.node().min(y.node()), x.node().max(y.node()));
        self.pairs.contains(&(lo, hi, x.is_inverted() != y.is_inverted()))
    }

    /// Drops structure-dependent caches; call after the netlist changes.
    pub fn invalidate(&mut self) {
        self.memo.clear();
        self.shapes = None;
    }
}

/// Worklist match of `x` against `y` inside one netlist.
pub fn structurally_identical(aig: &Aig, x: Lit, y: Lit, db: &mut EquivDb) -> bool {
    let key = if x <= y { (x, y) } else { (y, x) };
    if db.memo_enabled {
        if let Some(&r) = db.memo.get(&key) {
            return r;
        }
    }
    let r = match_within(aig, x, y, db);
    if db.memo_enabled {
        db.memo.insert(key, r);
    }
    r
}

fn match_within(aig: &Aig, x: Lit, y: Lit, db: &EquivDb) -> bool {
    let mut queue = std::collections::VecDeque::from([(x, y)]);
    let mut done = HashSet::new();
    while let Some((a, b)) = queue.pop_front() {
        if a == b || db.is_proven(a, b) {
            continue;
        }
        if a.is_inverted() != b.is_inverted() {
            return false;
        }
        if !done.insert((a.node(), b.node())) {
            continue;
        }
        let (Some((a0, a1)), Some((b0, b1))) = (aig.fanins(a.node()), aig.fanins(b.node())) else {
            return false;
        };
        queue.push_back((a0, b0));
        queue.push_back((a1, b1));
    }
    true
}

/// Matches snapshot roots against current nodes under one consistent
/// substitution of snapshot PIs.
fn match_substituted(snap: &Aig, aig: &Aig, roots: [(usize, usize); 2]) -> bool {
    let mut sigma: HashMap<usize, usize> = HashMap::new();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let mut stack = roots.to_vec();
    while let Some((s, c)) = stack.pop() {
        if !done.insert((s, c)) {
            continue;
        }
        match snap.node(s) {
            Node::Const => {
                if c != 0 {
                    return false;
                }
            }
            Node::Input => {
                if *sigma.entry(s).or_insert(c) != c {
                    return false;
                }
            }
            Node::And(g) => {
                let Some((h0, h1)) = aig.fanins(c) else {
                    return false;
                };
                if g.fanin0.is_inverted() != h0.is_inverted() || g.fanin1.is_inverted() != h1.is_inverted() {
                    return false;
                }
                stack.push((g.fanin0.node(), h0.node()));
                stack.push((g.fanin1.node(), h1.node()));
            }
        }
    }
    true
}

/// True when `pair` is implied by a proven pair through identical
/// structure, either directly or as a substituted instance of a proven
/// pair (straight `a~x, b~x'` or crossed `a~x', b~x`).
pub fn try_isd_merge(pair: &CandidatePair, aig: &Aig, db: &mut EquivDb) -> bool {
    if db.is_empty() {
        return false;
    }
    if structurally_identical(aig, pair.a, pair.b_phased(), db) {
        return true;
    }
    let (a, b) = (pair.a.node(), pair.b.node());
    if !aig.is_and(a) || !aig.is_and(b) {
        return false;
    }
    if db.shapes.is_none() {
        db.shapes = Some(shapes(aig));
    }
    let s = db.shapes.as_ref().unwrap();
    let (sa, sb) = (s[a], s[b]);
    for (key, straight) in [((sa, sb), true), ((sb, sa), false)] {
        let Some(ids) = db.by_shape.get(&key) else { continue };
        for &id in ids {
            let p = &db.proven[id];
            if p.antivalent != pair.antivalent {
                continue;
            }
            let (x, x2) = (p.snapshot.outputs()[0].node(), p.snapshot.outputs()[1].node());
            let roots = if straight { [(x, a), (x2, b)] } else { [(x2, a), (x, b)] };
            if match_substituted(&p.snapshot, aig, roots) {
                return true;
            }
        }
    }
    false
}
