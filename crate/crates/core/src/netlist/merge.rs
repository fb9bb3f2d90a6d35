// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use super::{Aig, AigBuilder, AndNode, Lit, Node};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MergeError {
    #[error("node {keep} lies in the transitive fan-out of node {drop}; merging would create a cycle")]
    WouldCycle { keep: usize, drop: usize },
    #[error("surviving node {keep} must precede dropped node {drop} in index order")]
    KeepAfterDrop { keep: usize, drop: usize },
    #[error("node {0} is not a live AND node")]
    NotMergeable(usize),
    #[error("a node cannot be merged into its own complement")]
    Complement,
}

impl Aig {
    /// Redirects every fan-out of `drop` to `keep`.
    ///
    /// The caller guarantees `keep` and `drop` compute the same function.
    /// Dropped nodes keep their index but are marked dead, together with any
    /// part of their fan-in cone that loses its last reference.
    pub fn merge(&mut self, keep: Lit, drop: Lit) -> Result<(), MergeError> {
        let (k, d) = (keep.node(), drop.node());
        if k == d {
            return if keep == drop { Ok(()) } else { Err(MergeError::Complement) };
        }
        if !self.is_and(d) || !self.is_live(d) {
            return Err(MergeError::NotMergeable(d));
        }
        if k > d {
            return Err(if self.in_tfo(d, k) {
                MergeError::WouldCycle { keep: k, drop: d }
            } else {
                MergeError::KeepAfterDrop { keep: k, drop: d }
            });
        }

        // `drop` as seen by a fan-out edge: regular literal maps to `keep`
        // with the phase of the edge folded in.
        let phase = drop.is_inverted() ^ keep.is_inverted();
        let target = keep.regular() ^ phase;
        let redirect = |l: Lit| if l.node() == d { target ^ l.is_inverted() } else { l };

        let num_nodes = self.num_nodes();
        for i in d + 1..num_nodes {
            if !self.live[i] {
                continue;
            }
            if let Node::And(AndNode { fanin0, fanin1 }) = &mut self.nodes[i] {
                *fanin0 = redirect(*fanin0);
                *fanin1 = redirect(*fanin1);
            }
        }
        for o in self.outputs.iter_mut() {
            *o = redirect(*o);
        }

        // Reference counts over live nodes, then cascade death from `drop`.
        let mut refs = vec![0u32; num_nodes];
        for i in self.and_indices() {
            if self.is_live(i) {
                let (a, b) = self.fanins(i).unwrap();
                refs[a.node()] += 1;
                refs[b.node()] += 1;
            }
        }
        for o in &self.outputs {
            refs[o.node()] += 1;
        }
        let mut stack = vec![d];
        while let Some(n) = stack.pop() {
            if !self.live[n] || refs[n] > 0 || !self.is_and(n) {
                continue;
            }
            self.live[n] = false;
            let (a, b) = self.fanins(n).unwrap();
            for c in [a.node(), b.node()] {
                refs[c] -= 1;
                if refs[c] == 0 {
                    stack.push(c);
                }
            }
        }
        debug_assert!(!self.live[d]);
        Ok(())
    }

    /// Marks `idx` and its whole fan-in live again.
    ///
    /// Dead nodes keep their fan-ins and still compute their original
    /// function, so reviving one is always safe.
    pub fn revive(&mut self, idx: usize) {
        let mut stack = vec![idx];
        while let Some(n) = stack.pop() {
            if self.live[n] && n != idx {
                continue;
            }
            self.live[n] = true;
            if let Some((a, b)) = self.fanins(n) {
                for c in [a.node(), b.node()] {
                    if !self.live[c] {
                        stack.push(c);
                    }
                }
            }
        }
    }

    /// True when `to` is reachable from `from` along fan-out edges.
    pub fn in_tfo(&self, from: usize, to: usize) -> bool {
        if to <= from {
            return to == from;
        }
        let mut reach = vec![false; to + 1];
        reach[from] = true;
        for i in from + 1..=to {
            if let Some((a, b)) = self.fanins(i) {
                reach[i] = self.is_live(i) && (reach[a.node()] || reach[b.node()]);
            }
        }
        reach[to]
    }

    /// Rebuilds the live part of the netlist with structural hashing.
    pub fn structural_hash(&self) -> Aig {
        self.structural_hash_with_map().0
    }

    /// Like [`Aig::structural_hash`], also returning the old-node to
    /// new-literal map (`None` for dead nodes).
    pub fn structural_hash_with_map(&self) -> (Aig, Vec<Option<Lit>>) {
        let mut b = AigBuilder::new(self.num_pis());
        let mut map: Vec<Option<Lit>> = vec![None; self.num_nodes()];
        map[0] = Some(Lit::FALSE);
        for j in 0..self.num_pis() {
            map[j + 1] = Some(b.pi(j));
        }
        let tr = |map: &[Option<Lit>], l: Lit| map[l.node()].expect("live node depends on a dead node") ^ l.is_inverted();
        for i in self.and_indices() {
            if !self.is_live(i) {
                continue;
            }
            let (f0, f1) = self.fanins(i).unwrap();
            let lit = b.and(tr(&map, f0), tr(&map, f1));
            map[i] = Some(lit);
        }
        for &o in self.outputs() {
            b.add_output(tr(&map, o));
        }
        (b.finish(), map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truth_table(aig: &Aig) -> Vec<Vec<bool>> {
        let n = aig.num_pis();
        (0..1usize << n)
            .map(|p| {
                let inputs: Vec<bool> = (0..n).map(|j| p >> j & 1 == 1).collect();
                aig.evaluate(&inputs)
            })
            .collect()
    }

    fn duplicated() -> (Aig, Lit, Lit) {
        let mut aig = Aig::new(3);
        let g1 = aig.add_and(aig.pi(0), aig.pi(1));
        let g2 = aig.add_and(aig.pi(0), aig.pi(1));
        let h1 = aig.add_and(g1, aig.pi(2));
        let h2 = aig.add_and(!g2, aig.pi(2));
        aig.add_output(h1);
        aig.add_output(h2);
        (aig, g1, g2)
    }

    #[test]
    fn merge_duplicates() {
        let (mut aig, g1, g2) = duplicated();
        let before = truth_table(&aig);
        let live_before = aig.num_ands();
        aig.merge(g1, g2).unwrap();
        assert!(aig.num_ands() < live_before);
        assert!(!aig.is_live(g2.node()));
        assert_eq!(truth_table(&aig), before);
        assert!(!aig.topological_order().contains(&g2.node()));
    }

    #[test]
    fn revive_restores_fanin() {
        let mut aig = Aig::new(3);
        let g = aig.add_and(aig.pi(0), aig.pi(1));
        let h = aig.add_and(g, aig.pi(2));
        let h2 = aig.add_and(g, aig.pi(2));
        aig.add_output(h2);
        aig.merge(h, h2).unwrap();
        aig.set_output(0, Lit::FALSE);
        aig.merge(Lit::FALSE, Lit::FALSE).unwrap();
        let mut dead = aig.clone();
        dead.live[h.node()] = false;
        dead.live[g.node()] = false;
        dead.revive(h.node());
        assert!(dead.is_live(h.node()) && dead.is_live(g.node()));
    }

    #[test]
    fn merge_with_inverted_phase() {
        let mut aig = Aig::new(2);
        let g = aig.add_and(aig.pi(0), aig.pi(1));
        let t = aig.add_and(aig.pi(1), aig.pi(0));
        let h = !t;
        let o = aig.add_and(h, aig.pi(0));
        aig.add_output(o);
        aig.add_output(g);
        let before = truth_table(&aig);
        // h == !g
        aig.merge(!g, h).unwrap();
        assert_eq!(truth_table(&aig), before);
        assert!(!aig.is_live(t.node()));
    }

    #[test]
    fn merge_into_fanout_rejected() {
        let mut aig = Aig::new(2);
        let g = aig.add_and(aig.pi(0), aig.pi(1));
        let h = aig.add_and(g, aig.pi(1));
        aig.add_output(h);
        assert_eq!(
            aig.merge(h, g),
            Err(MergeError::WouldCycle {
                keep: h.node(),
                drop: g.node()
            })
        );
    }

    #[test]
    fn merge_order_enforced() {
        let (mut aig, g1, g2) = duplicated();
        assert_eq!(
            aig.merge(g2, g1),
            Err(MergeError::KeepAfterDrop {
                keep: g2.node(),
                drop: g1.node()
            })
        );
    }

    #[test]
    fn merge_pi_rejected() {
        let (mut aig, g1, _) = duplicated();
        assert_eq!(aig.merge(Lit::FALSE, aig.pi(0)), Err(MergeError::NotMergeable(1)));
        assert_eq!(aig.merge(g1, !g1), Err(MergeError::Complement));
    }

    #[test]
    fn strash_shares_identical_and_commuted_nodes() {
        let mut aig = Aig::new(2);
        let a = aig.add_and(aig.pi(0), aig.pi(1));
        let b = aig.add_and(aig.pi(1), aig.pi(0));
        let c = aig.add_and(aig.pi(0), aig.pi(1));
        aig.add_output(a);
        aig.add_output(b);
        aig.add_output(c);
        let h = aig.structural_hash();
        assert_eq!(h.num_ands(), 1);
        assert_eq!(truth_table(&h), truth_table(&aig));
    }

    #[test]
    fn strash_skips_dead_nodes() {
        let (mut aig, g1, g2) = duplicated();
        aig.merge(g1, g2).unwrap();
        let h = aig.structural_hash();
        assert_eq!(h.num_ands(), 3);
        assert_eq!(truth_table(&h), truth_table(&aig));
    }
}
