// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use super::{Aig, Lit};

/// Incremental AIG construction with structural hashing and constant folding.
///
/// XOR and OR are expanded into AND gates; XOR always uses the three-gate
/// form `AND(!AND(a, b), !AND(!a, !b))`.
#[derive(Debug)]
pub struct AigBuilder {
    aig: Aig,
    table: HashMap<(Lit, Lit), Lit>,
    hashing: bool,
}

impl AigBuilder {
    pub fn new(num_pis: usize) -> AigBuilder {
        AigBuilder {
            aig: Aig::new(num_pis),
            table: HashMap::new(),
            hashing: true,
        }
    }

    /// A builder that neither hashes nor folds: every `and` call emits a node.
    pub fn raw(num_pis: usize) -> AigBuilder {
        AigBuilder {
            hashing: false,
            ..AigBuilder::new(num_pis)
        }
    }

    pub fn pi(&self, j: usize) -> Lit {
        self.aig.pi(j)
    }

    pub fn pis(&self) -> Vec<Lit> {
        (0..self.aig.num_pis()).map(|j| self.aig.pi(j)).collect()
    }

    pub fn num_nodes(&self) -> usize {
        self.aig.num_nodes()
    }

    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        if !self.hashing {
            return self.aig.add_and(a, b);
        }
        if a == Lit::FALSE || b == Lit::FALSE || a == !b {
            return Lit::FALSE;
        }
        if a == Lit::TRUE || a == b {
            return b;
        }
        if b == Lit::TRUE {
            return a;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&lit) = self.table.get(&key) {
            return lit;
        }
        let lit = self.aig.add_and(key.0, key.1);
        self.table.insert(key, lit);
        lit
    }

    /// Emits an AND node bypassing hashing and folding.
    pub fn and_raw(&mut self, a: Lit, b: Lit) -> Lit {
        self.aig.add_and(a, b)
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and(!a, !b)
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        if self.hashing {
            if a.is_const() {
                return b ^ a.is_inverted();
            }
            if b.is_const() {
                return a ^ b.is_inverted();
            }
            if a == b {
                return Lit::FALSE;
            }
            if a == !b {
                return Lit::TRUE;
            }
        }
        let both = self.and(a, b);
        let neither = self.and(!a, !b);
        self.and(!both, !neither)
    }

    pub fn xnor(&mut self, a: Lit, b: Lit) -> Lit {
        !self.xor(a, b)
    }

    /// Majority of three, the full-adder carry.
    pub fn maj(&mut self, a: Lit, b: Lit, c: Lit) -> Lit {
        let ab = self.and(a, b);
        let ac = self.and(a, c);
        let bc = self.and(b, c);
        let t = self.or(ab, ac);
        self.or(t, bc)
    }

    pub fn add_output(&mut self, lit: Lit) {
        self.aig.add_output(lit);
    }

    pub fn finish(self) -> Aig {
        self.aig
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashing_is_commutative() {
        let mut b = AigBuilder::new(2);
        let (x, y) = (b.pi(0), b.pi(1));
        let g1 = b.and(x, y);
        let g2 = b.and(y, x);
        assert_eq!(g1, g2);
        assert_eq!(b.num_nodes(), 4);
    }

    #[test]
    fn folding() {
        let mut b = AigBuilder::new(1);
        let x = b.pi(0);
        assert_eq!(b.and(x, !x), Lit::FALSE);
        assert_eq!(b.and(x, Lit::TRUE), x);
        assert_eq!(b.and(x, x), x);
        assert_eq!(b.xor(x, x), Lit::FALSE);
        assert_eq!(b.xor(x, Lit::TRUE), !x);
    }

    #[test]
    fn xor_uses_three_gates() {
        let mut b = AigBuilder::new(2);
        let (x, y) = (b.pi(0), b.pi(1));
        let g = b.xor(x, y);
        b.add_output(g);
        let aig = b.finish();
        assert_eq!(aig.num_ands(), 3);
        for (i, (p, q)) in [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .enumerate()
        {
            assert_eq!(aig.evaluate(&[p, q])[0], p ^ q, "row {i}");
        }
    }

    #[test]
    fn raw_builder_keeps_duplicates() {
        let mut b = AigBuilder::raw(2);
        let (x, y) = (b.pi(0), b.pi(1));
        let g1 = b.and(x, y);
        let g2 = b.and(x, y);
        assert_ne!(g1, g2);
    }
}
