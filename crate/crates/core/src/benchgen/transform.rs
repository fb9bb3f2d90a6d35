// SPDX-License-Identifier: Apache-2.0

//! Function-preserving rewrites, single-gate corruption and random netlists.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netlist::{Aig, AigBuilder, Lit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Edit {
    /// `AND(AND(p, q), y)` on fan-in `side` becomes `AND(p, AND(q, y))`.
    Reassociate { node: usize, side: usize },
    /// `(p1 ^ p2) ^ q` becomes `p1 ^ (p2 ^ q)`, `side` picks the nested operand.
    XorRebalance { node: usize, side: usize },
    /// Fan-in `x` is replaced by the double-inverter buffer `!AND(!x, !x)`.
    InsertBuffer { node: usize, side: usize },
    /// `AND(l, l)` is replaced by `l`.
    RemoveBuffer { node: usize },
    /// Flips the polarity of one fan-in.
    Flip { node: usize, side: usize },
}

fn side(f: (Lit, Lit), s: usize) -> Lit {
    if s == 0 {
        f.0
    } else {
        f.1
    }
}

fn candidates(aig: &Aig, kind: usize) -> Vec<Edit> {
    let mut out = Vec::new();
    for i in aig.and_indices() {
        if !aig.is_live(i) {
            continue;
        }
        let f = aig.fanins(i).unwrap();
        match kind {
            0 => {
                for s in 0..2 {
                    let x = side(f, s);
                    if !x.is_inverted() && aig.is_and(x.node()) {
                        out.push(Edit::Reassociate { node: i, side: s });
                    }
                }
            }
            1 => {
                if let Some((p, q)) = aig.xor_pattern(i) {
                    for (s, l) in [p, q].into_iter().enumerate() {
                        if aig.xor_pattern(l.node()).is_some() {
                            out.push(Edit::XorRebalance { node: i, side: s });
                        }
                    }
                }
            }
            2 => {
                for s in 0..2 {
                    out.push(Edit::InsertBuffer { node: i, side: s });
                }
            }
            _ => {
                if f.0 == f.1 {
                    out.push(Edit::RemoveBuffer { node: i });
                }
            }
        }
    }
    out
}

fn apply(aig: &Aig, edit: Edit) -> Aig {
    let mut b = AigBuilder::raw(aig.num_pis());
    let mut map = vec![Lit::FALSE; aig.num_nodes()];
    for j in 0..aig.num_pis() {
        map[j + 1] = b.pi(j);
    }
    let tr = |map: &[Lit], l: Lit| map[l.node()] ^ l.is_inverted();
    for i in aig.and_indices() {
        if !aig.is_live(i) {
            continue;
        }
        let f = aig.fanins(i).unwrap();
        let (f0, f1) = (tr(&map, f.0), tr(&map, f.1));
        map[i] = match edit {
            Edit::Reassociate { node, side: s } if node == i => {
                let x = side(f, s);
                let y = tr(&map, side(f, 1 - s));
                let (p, q) = aig.fanins(x.node()).unwrap();
                let inner = b.and(tr(&map, q), y);
                b.and(tr(&map, p), inner)
            }
            Edit::XorRebalance { node, side: s } if node == i => {
                let (p, q) = aig.xor_pattern(i).unwrap();
                let (nested, other) = if s == 0 { (p, q) } else { (q, p) };
                let (p1, p2) = aig.xor_pattern(nested.node()).unwrap();
                let inner = b.xor(tr(&map, p2), tr(&map, other) ^ nested.is_inverted());
                b.xor(tr(&map, p1), inner)
            }
            Edit::InsertBuffer { node, side: s } if node == i => {
                let x = if s == 0 { f0 } else { f1 };
                let buf = !b.and(!x, !x);
                if s == 0 {
                    b.and(buf, f1)
                } else {
                    b.and(f0, buf)
                }
            }
            Edit::RemoveBuffer { node } if node == i => f0,
            Edit::Flip { node, side: s } if node == i => {
                if s == 0 {
                    b.and(!f0, f1)
                } else {
                    b.and(f0, !f1)
                }
            }
            _ => b.and(f0, f1),
        };
    }
    for &o in aig.outputs() {
        b.add_output(tr(&map, o));
    }
    b.finish().cleanup()
}

/// Applies `steps` random function-preserving local rewrites.
///
/// Each step picks one of reassociation, XOR rebalancing, buffer insertion
/// and buffer removal among those applicable, then a random site.
pub fn rewrite_aig(aig: &Aig, steps: usize, seed: u64) -> Aig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = aig.cleanup();
    for _ in 0..steps {
        let mut kinds = [0usize, 1, 2, 3];
        kinds.shuffle(&mut rng);
        let Some(cands) = kinds.iter().map(|&k| candidates(&cur, k)).find(|c| !c.is_empty()) else {
            break;
        };
        let edit = *cands.choose(&mut rng).unwrap();
        cur = apply(&cur, edit);
    }
    cur
}

/// Flips one fan-in polarity of a random gate in the output cone.
pub(crate) fn flip_random_fanin(aig: &Aig, rng: &mut ChaCha8Rng) -> Option<Aig> {
    let gates: Vec<usize> = aig
        .tfi(aig.outputs())
        .into_iter()
        .filter(|&i| aig.is_and(i))
        .collect();
    let &node = gates.choose(rng)?;
    Some(apply(aig, Edit::Flip { node, side: rng.gen_range(0..2) }))
}

/// A random netlist in which no gate matches the three-gate XOR pattern.
///
/// Fan-ins are drawn from a sliding window over earlier nodes so the graph
/// gets some depth; outputs are the last `num_outputs` gates.
pub fn random_aig(num_pis: usize, num_ands: usize, num_outputs: usize, seed: u64) -> Aig {
    assert!(num_pis >= 1 && num_outputs <= num_ands.max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut aig = Aig::new(num_pis);
    let window = (2 * num_pis).max(8);
    while aig.num_ands() < num_ands {
        let n = aig.num_nodes();
        let lo = n.saturating_sub(window).max(1);
        let pick = |rng: &mut ChaCha8Rng| {
            let idx = if rng.gen_bool(0.25) {
                rng.gen_range(1..=num_pis)
            } else {
                rng.gen_range(lo..n)
            };
            Lit::new(idx, rng.gen_bool(0.5))
        };
        let (a, c) = (pick(&mut rng), pick(&mut rng));
        if a.node() == c.node() && n > 2 {
            continue;
        }
        if aig.xor_pattern_of(a, c).is_none() {
            aig.add_and(a, c);
        }
    }
    let n = aig.num_nodes();
    for k in 0..num_outputs.max(1) {
        let idx = if num_ands == 0 { 1 } else { n - 1 - k };
        aig.add_output(Lit::new(idx, rng.gen_bool(0.5)));
    }
    aig
}
