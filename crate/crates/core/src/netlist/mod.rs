// SPDX-License-Identifier: Apache-2.0

//! And-Inverter Graph representation.
//!
//! Node 0 is the constant FALSE node, nodes `1..=num_pis` are the primary
//! inputs and every later node is a two-input AND gate whose fan-ins point at
//! strictly smaller indices. Edges carry an optional inverter, encoded in the
//! low bit of a [`Lit`] exactly like AIGER literals.

mod aiger;
mod build;
mod merge;
mod miter;
mod xor;

pub use aiger::{parse_aiger, write_aiger, write_aiger_binary, AigerError};
pub use build::AigBuilder;
pub use merge::MergeError;
pub use miter::{build_miter, build_output_miter, miter_tfi_cones, or_reduce_outputs, Cone, MiterError};

use std::fmt;
use std::ops::{BitXor, Not};

/// A possibly inverted reference to a node.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub const FALSE: Lit = Lit(0);
    pub const TRUE: Lit = Lit(1);

    #[inline]
    pub fn new(node: usize, inverted: bool) -> Lit {
        Lit(((node as u32) << 1) | inverted as u32)
    }

    #[inline]
    pub fn from_code(code: u32) -> Lit {
        Lit(code)
    }

    /// AIGER encoding: `2 * node + inverted`.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn node(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverted(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn regular(self) -> Lit {
        Lit(self.0 & !1)
    }

    #[inline]
    pub fn is_const(self) -> bool {
        self.node() == 0
    }
}

impl Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

/// `lit ^ true` inverts, `lit ^ false` is the identity.
impl BitXor<bool> for Lit {
    type Output = Lit;
    #[inline]
    fn bitxor(self, rhs: bool) -> Lit {
        Lit(self.0 ^ rhs as u32)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverted() {
            write!(f, "!n{}", self.node())
        } else {
            write!(f, "n{}", self.node())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AndNode {
    pub fanin0: Lit,
    pub fanin1: Lit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Const,
    Input,
    And(AndNode),
}

/// A combinational AIG with positional primary inputs and outputs.
#[derive(Clone, Debug)]
pub struct Aig {
    nodes: Vec<Node>,
    num_pis: usize,
    outputs: Vec<Lit>,
    live: Vec<bool>,
}

impl Aig {
    pub fn new(num_pis: usize) -> Aig {
        let mut nodes = Vec::with_capacity(num_pis + 1);
        nodes.push(Node::Const);
        nodes.extend(std::iter::repeat_n(Node::Input, num_pis));
        Aig {
            live: vec![true; nodes.len()],
            nodes,
            num_pis,
            outputs: Vec::new(),
        }
    }

    /// Appends an AND node without any hashing or simplification.
    ///
    /// Panics if a fan-in does not reference an existing node.
    pub fn add_and(&mut self, fanin0: Lit, fanin1: Lit) -> Lit {
        let idx = self.nodes.len();
        assert!(
            fanin0.node() < idx && fanin1.node() < idx,
            "fan-in references a node that does not exist yet"
        );
        self.nodes.push(Node::And(AndNode { fanin0, fanin1 }));
        self.live.push(true);
        Lit::new(idx, false)
    }

    pub fn add_output(&mut self, lit: Lit) {
        assert!(lit.node() < self.nodes.len(), "output references a missing node");
        self.outputs.push(lit);
    }

    pub fn set_output(&mut self, index: usize, lit: Lit) {
        assert!(lit.node() < self.nodes.len(), "output references a missing node");
        self.outputs[index] = lit;
    }

    #[inline]
    pub fn num_pis(&self) -> usize {
        self.num_pis
    }

    /// Total node count including the constant node, PIs and dead nodes.
    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Number of live AND nodes.
    pub fn num_ands(&self) -> usize {
        (self.num_pis + 1..self.nodes.len())
            .filter(|&i| self.live[i])
            .count()
    }

    #[inline]
    pub fn outputs(&self) -> &[Lit] {
        &self.outputs
    }

    #[inline]
    pub fn node(&self, idx: usize) -> Node {
        self.nodes[idx]
    }

    #[inline]
    pub fn fanins(&self, idx: usize) -> Option<(Lit, Lit)> {
        match self.nodes[idx] {
            Node::And(AndNode { fanin0, fanin1 }) => Some((fanin0, fanin1)),
            _ => None,
        }
    }

    #[inline]
    pub fn is_and(&self, idx: usize) -> bool {
        matches!(self.nodes[idx], Node::And(_))
    }

    #[inline]
    pub fn is_pi(&self, idx: usize) -> bool {
        idx >= 1 && idx <= self.num_pis
    }

    #[inline]
    pub fn is_live(&self, idx: usize) -> bool {
        self.live[idx]
    }

    /// Literal of the `j`-th primary input (0-based).
    #[inline]
    pub fn pi(&self, j: usize) -> Lit {
        debug_assert!(j < self.num_pis);
        Lit::new(j + 1, false)
    }

    /// Position of a PI node among the inputs.
    #[inline]
    pub fn pi_position(&self, idx: usize) -> Option<usize> {
        self.is_pi(idx).then(|| idx - 1)
    }

    /// Indices of AND nodes (live or dead) in index order.
    pub fn and_indices(&self) -> std::ops::Range<usize> {
        self.num_pis + 1..self.nodes.len()
    }

    /// Live PIs and AND nodes with every node after its fan-ins.
    ///
    /// Indices are kept topologically ordered by construction, so this is the
    /// ascending sequence of live non-constant nodes.
    pub fn topological_order(&self) -> Vec<usize> {
        (1..self.nodes.len()).filter(|&i| self.live[i]).collect()
    }

    /// Sorted transitive fan-in of `roots`, including the roots themselves.
    /// The constant node is included when reached.
    pub fn tfi(&self, roots: &[Lit]) -> Vec<usize> {
        let mut mark = vec![false; self.nodes.len()];
        let mut stack: Vec<usize> = roots.iter().map(|l| l.node()).collect();
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut mark[n], true) {
                continue;
            }
            if let Some((a, b)) = self.fanins(n) {
                stack.push(a.node());
                stack.push(b.node());
            }
        }
        mark.iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect()
    }

    /// PI positions (0-based) in the structural support of `roots`.
    pub fn support(&self, roots: &[Lit]) -> Vec<usize> {
        self.tfi(roots)
            .into_iter()
            .filter_map(|n| self.pi_position(n))
            .collect()
    }

    /// Evaluates every node under one input assignment.
    pub fn simulate_values(&self, inputs: &[bool]) -> Vec<bool> {
        assert_eq!(inputs.len(), self.num_pis, "assignment must cover every PI");
        let mut val = vec![false; self.nodes.len()];
        val[1..=self.num_pis].copy_from_slice(inputs);
        for i in self.and_indices() {
            if let Node::And(AndNode { fanin0, fanin1 }) = self.nodes[i] {
                let a = val[fanin0.node()] ^ fanin0.is_inverted();
                let b = val[fanin1.node()] ^ fanin1.is_inverted();
                val[i] = a && b;
            }
        }
        val
    }

    /// Output values under one input assignment.
    pub fn evaluate(&self, inputs: &[bool]) -> Vec<bool> {
        let val = self.simulate_values(inputs);
        self.outputs
            .iter()
            .map(|l| val[l.node()] ^ l.is_inverted())
            .collect()
    }

    /// Value of a single literal under one input assignment.
    pub fn evaluate_lit(&self, lit: Lit, inputs: &[bool]) -> bool {
        self.simulate_values(inputs)[lit.node()] ^ lit.is_inverted()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> Aig {
        let mut aig = Aig::new(2);
        let g = aig.add_and(aig.pi(0), aig.pi(1));
        aig.add_output(g);
        aig
    }

    #[test]
    fn literal_encoding() {
        assert_eq!(Lit::new(0, false), Lit::FALSE);
        assert_eq!(Lit::new(0, true), Lit::TRUE);
        let l = Lit::new(7, true);
        assert_eq!(l.node(), 7);
        assert!(l.is_inverted());
        assert_eq!(!l, Lit::new(7, false));
        assert_eq!(l ^ true, Lit::new(7, false));
        assert_eq!(l.code(), 15);
    }

    #[test]
    fn topological_order_of_single_and() {
        assert_eq!(and2().topological_order(), vec![1, 2, 3]);
    }

    #[test]
    fn topological_order_of_chain() {
        let mut aig = Aig::new(2);
        let a = aig.add_and(aig.pi(0), aig.pi(1));
        let b = aig.add_and(a, aig.pi(1));
        aig.add_output(b);
        assert_eq!(aig.topological_order(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn evaluate_and() {
        let aig = and2();
        assert_eq!(aig.evaluate(&[true, true]), vec![true]);
        assert_eq!(aig.evaluate(&[true, false]), vec![false]);
    }

    #[test]
    fn tfi_and_support() {
        let mut aig = Aig::new(3);
        let a = aig.add_and(aig.pi(0), !aig.pi(2));
        let _b = aig.add_and(aig.pi(1), aig.pi(2));
        assert_eq!(aig.tfi(&[a]), vec![1, 3, 4]);
        assert_eq!(aig.support(&[a]), vec![0, 2]);
    }

    #[test]
    #[should_panic]
    fn forward_reference_is_rejected() {
        let mut aig = Aig::new(1);
        aig.add_and(Lit::new(5, false), aig.pi(0));
    }
}
