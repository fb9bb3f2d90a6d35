// SPDX-License-Identifier: Apache-2.0

use super::{Aig, AigBuilder, Lit};

impl Aig {
    /// Recognizes the three-gate XOR `AND(!AND(p, q), !AND(!p, !q))` rooted at
    /// `idx`, returning `(p, q)` with `node(idx) == p XOR q`.
    ///
    /// Both orders of the inner gates and of their fan-ins are accepted.
    pub fn xor_pattern(&self, idx: usize) -> Option<(Lit, Lit)> {
        let (u, v) = self.fanins(idx)?;
        self.xor_pattern_of(u, v)
    }

    /// [`Aig::xor_pattern`] for a prospective gate `AND(u, v)`.
    pub fn xor_pattern_of(&self, u: Lit, v: Lit) -> Option<(Lit, Lit)> {
        if !u.is_inverted() || !v.is_inverted() || u.node() == v.node() {
            return None;
        }
        let (p, q) = self.fanins(u.node())?;
        let (r, s) = self.fanins(v.node())?;
        if p.node() == q.node() {
            return None;
        }
        if (r == !p && s == !q) || (r == !q && s == !p) {
            Some((p, q))
        } else {
            None
        }
    }

    /// Raw copy keeping only the transitive fan-in of the outputs. Node order
    /// and gate structure are preserved.
    pub fn cleanup(&self) -> Aig {
        self.with_outputs(&(0..self.outputs().len()).collect::<Vec<_>>())
    }

    /// Raw copy restricted to the listed outputs and their fan-in.
    pub fn with_outputs(&self, outputs: &[usize]) -> Aig {
        let roots: Vec<Lit> = outputs.iter().map(|&o| self.outputs()[o]).collect();
        let keep = self.tfi(&roots);
        let mut b = AigBuilder::raw(self.num_pis());
        let mut map = vec![Lit::FALSE; self.num_nodes()];
        for j in 0..self.num_pis() {
            map[j + 1] = b.pi(j);
        }
        for i in keep {
            if let Some((f0, f1)) = self.fanins(i) {
                map[i] = b.and(map[f0.node()] ^ f0.is_inverted(), map[f1.node()] ^ f1.is_inverted());
            }
        }
        for l in roots {
            b.add_output(map[l.node()] ^ l.is_inverted());
        }
        b.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_xor_is_recognized() {
        let mut b = AigBuilder::new(2);
        let (x, y) = (b.pi(0), b.pi(1));
        let z = b.xor(x, y);
        let aig = b.finish();
        let (p, q) = aig.xor_pattern(z.node()).unwrap();
        for m in 0..4usize {
            let inp = [m & 1 == 1, m & 2 == 2];
            let want = aig.evaluate_lit(Lit::new(z.node(), false), &inp);
            assert_eq!(aig.evaluate_lit(p, &inp) ^ aig.evaluate_lit(q, &inp), want);
        }
    }

    #[test]
    fn plain_and_is_not_xor() {
        let mut aig = Aig::new(2);
        let u = aig.add_and(aig.pi(0), aig.pi(1));
        let v = aig.add_and(!aig.pi(0), aig.pi(1));
        let g = aig.add_and(!u, !v);
        assert!(aig.xor_pattern(g.node()).is_none());
        assert!(aig.xor_pattern(u.node()).is_none());
    }

    #[test]
    fn cleanup_drops_dangling() {
        let mut aig = Aig::new(2);
        let _dangling = aig.add_and(aig.pi(0), !aig.pi(1));
        let g = aig.add_and(aig.pi(0), aig.pi(1));
        let h = aig.add_and(g, g);
        aig.add_output(!h);
        aig.add_output(g);
        let c = aig.cleanup();
        assert_eq!(c.num_ands(), 2);
        let only = aig.with_outputs(&[1]);
        assert_eq!(only.num_ands(), 1);
        for m in 0..4usize {
            let inp = [m & 1 == 1, m & 2 == 2];
            assert_eq!(c.evaluate(&inp), aig.evaluate(&inp));
        }
    }
}
