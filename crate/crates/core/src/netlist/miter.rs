// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use super::{Aig, Lit};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MiterError {
    #[error("PI count mismatch: {0} vs {1}")]
    PiMismatch(usize, usize),
    #[error("PO count mismatch: {0} vs {1}")]
    PoMismatch(usize, usize),
}

/// Appends the three-gate XOR of two literals, folding constant operands.
fn xor_into(aig: &mut Aig, a: Lit, b: Lit) -> Lit {
    if a == b {
        return Lit::FALSE;
    }
    if a == !b {
        return Lit::TRUE;
    }
    if a.is_const() {
        return b ^ a.is_inverted();
    }
    if b.is_const() {
        return a ^ b.is_inverted();
    }
    let both = aig.add_and(a, b);
    let neither = aig.add_and(!a, !b);
    aig.add_and(!both, !neither)
}

fn or_into(aig: &mut Aig, a: Lit, b: Lit) -> Lit {
    if a == Lit::FALSE {
        return b;
    }
    if b == Lit::FALSE {
        return a;
    }
    !aig.add_and(!a, !b)
}

/// Copies `src`'s AND gates into `dst`, mapping PI `j` to `dst.pi(j)`.
/// Returns the node map (dead nodes map to `None`).
fn copy_into(dst: &mut Aig, src: &Aig) -> Vec<Option<Lit>> {
    let mut map = vec![None; src.num_nodes()];
    map[0] = Some(Lit::FALSE);
    for j in 0..src.num_pis() {
        map[j + 1] = Some(dst.pi(j));
    }
    for i in src.and_indices() {
        if !src.is_live(i) {
            continue;
        }
        let (f0, f1) = src.fanins(i).unwrap();
        let a = map[f0.node()].unwrap() ^ f0.is_inverted();
        let b = map[f1.node()].unwrap() ^ f1.is_inverted();
        map[i] = Some(dst.add_and(a, b));
    }
    map
}

/// Builds the single-output miter of two circuits with positionally matched
/// PIs and POs: XOR per output pair, OR over all XORs.
pub fn build_miter(a: &Aig, b: &Aig) -> Result<Aig, MiterError> {
    if a.num_pis() != b.num_pis() {
        return Err(MiterError::PiMismatch(a.num_pis(), b.num_pis()));
    }
    if a.outputs().len() != b.outputs().len() {
        return Err(MiterError::PoMismatch(a.outputs().len(), b.outputs().len()));
    }
    let mut m = Aig::new(a.num_pis());
    let map_a = copy_into(&mut m, a);
    let map_b = copy_into(&mut m, b);
    let mut acc = Lit::FALSE;
    for (&oa, &ob) in a.outputs().iter().zip(b.outputs()) {
        let la = map_a[oa.node()].unwrap() ^ oa.is_inverted();
        let lb = map_b[ob.node()].unwrap() ^ ob.is_inverted();
        let x = xor_into(&mut m, la, lb);
        acc = or_into(&mut m, acc, x);
    }
    m.add_output(acc);
    Ok(m)
}

/// Builds a miter with one XOR output per output pair and no OR, for
/// checking outputs one at a time.
pub fn build_output_miter(a: &Aig, b: &Aig) -> Result<Aig, MiterError> {
    if a.num_pis() != b.num_pis() {
        return Err(MiterError::PiMismatch(a.num_pis(), b.num_pis()));
    }
    if a.outputs().len() != b.outputs().len() {
        return Err(MiterError::PoMismatch(a.outputs().len(), b.outputs().len()));
    }
    let mut m = Aig::new(a.num_pis());
    let map_a = copy_into(&mut m, a);
    let map_b = copy_into(&mut m, b);
    for (&oa, &ob) in a.outputs().iter().zip(b.outputs()) {
        let la = map_a[oa.node()].unwrap() ^ oa.is_inverted();
        let lb = map_b[ob.node()].unwrap() ^ ob.is_inverted();
        let x = xor_into(&mut m, la, lb);
        m.add_output(x);
    }
    Ok(m)
}

/// Collapses a multi-output netlist into one output that is the OR of all
/// original outputs. Single-output netlists are returned unchanged.
pub fn or_reduce_outputs(aig: &Aig) -> Aig {
    if aig.outputs().len() == 1 {
        return aig.clone();
    }
    let mut m = Aig::new(aig.num_pis());
    let map = copy_into(&mut m, aig);
    let mut acc = Lit::FALSE;
    for &o in aig.outputs() {
        let l = map[o.node()].unwrap() ^ o.is_inverted();
        acc = or_into(&mut m, acc, l);
    }
    m.add_output(acc);
    m
}

/// A self-contained single-output sub-netlist cut out of a larger AIG.
#[derive(Clone, Debug)]
pub struct Cone {
    pub aig: Aig,
    /// Cone PI position -> node index in the source AIG.
    pub pi_map: Vec<usize>,
}

impl Cone {
    pub fn root(&self) -> Lit {
        self.aig.outputs()[0]
    }

    pub fn num_pis(&self) -> usize {
        self.aig.num_pis()
    }

    /// Value of the root under an assignment to the cone PIs.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.aig.evaluate_lit(self.root(), assignment)
    }

    /// Expands a cone-PI assignment into a full assignment of the source AIG;
    /// PIs outside the cone are set to 0.
    pub fn lift_assignment(&self, assignment: &[bool], source_pis: usize) -> Vec<bool> {
        let mut full = vec![false; source_pis];
        for (j, &node) in self.pi_map.iter().enumerate() {
            full[node - 1] = assignment[j];
        }
        full
    }

    /// The cone of a single literal of `aig`.
    pub fn of_literal(aig: &Aig, lit: Lit) -> Cone {
        miter_tfi_cones(aig, lit, Lit::FALSE)
    }
}

/// Extracts the TFI cones of `a` and `b` and joins them with an XOR, so the
/// cone root is constant 0 exactly when `a` and `b` are equivalent. Pass `!b`
/// to test antivalence.
pub fn miter_tfi_cones(aig: &Aig, a: Lit, b: Lit) -> Cone {
    if a == b || a == !b {
        let mut c = Aig::new(0);
        c.add_output(if a == b { Lit::FALSE } else { Lit::TRUE });
        return Cone {
            aig: c,
            pi_map: Vec::new(),
        };
    }
    let tfi = aig.tfi(&[a, b]);
    let pis: Vec<usize> = tfi.iter().copied().filter(|&n| aig.is_pi(n)).collect();
    let mut cone = Aig::new(pis.len());
    let mut map = vec![Lit::FALSE; aig.num_nodes()];
    for (j, &n) in pis.iter().enumerate() {
        map[n] = cone.pi(j);
    }
    for &n in &tfi {
        if let Some((f0, f1)) = aig.fanins(n) {
            let x = map[f0.node()] ^ f0.is_inverted();
            let y = map[f1.node()] ^ f1.is_inverted();
            map[n] = cone.add_and(x, y);
        }
    }
    let la = map[a.node()] ^ a.is_inverted();
    let lb = map[b.node()] ^ b.is_inverted();
    let root = xor_into(&mut cone, la, lb);
    cone.add_output(root);
    Cone { aig: cone, pi_map: pis }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::AigBuilder;

    fn passthrough() -> Aig {
        let mut aig = Aig::new(1);
        aig.add_output(aig.pi(0));
        aig
    }

    fn gate(or: bool) -> Aig {
        let mut b = AigBuilder::new(2);
        let (x, y) = (b.pi(0), b.pi(1));
        let g = if or { b.or(x, y) } else { b.and(x, y) };
        b.add_output(g);
        b.finish()
    }

    fn rows(aig: &Aig) -> Vec<bool> {
        let n = aig.num_pis();
        (0..1usize << n)
            .map(|p| {
                let inputs: Vec<bool> = (0..n).map(|j| p >> j & 1 == 1).collect();
                aig.evaluate(&inputs)[0]
            })
            .collect()
    }

    #[test]
    fn self_miter_is_zero() {
        let m = build_miter(&passthrough(), &passthrough()).unwrap();
        assert_eq!(m.outputs().len(), 1);
        assert!(rows(&m).iter().all(|&v| !v));
    }

    #[test]
    fn and_vs_or_differs_on_mixed_inputs() {
        let m = build_miter(&gate(false), &gate(true)).unwrap();
        // pattern p: bit 0 = x, bit 1 = y
        assert_eq!(rows(&m), vec![false, true, true, false]);
    }

    #[test]
    fn mismatched_interfaces() {
        assert_eq!(
            build_miter(&passthrough(), &gate(false)).unwrap_err(),
            MiterError::PiMismatch(1, 2)
        );
        let mut two = Aig::new(1);
        two.add_output(two.pi(0));
        two.add_output(two.pi(0));
        assert_eq!(
            build_miter(&passthrough(), &two).unwrap_err(),
            MiterError::PoMismatch(1, 2)
        );
    }

    #[test]
    fn cone_of_identical_literal_is_false() {
        let g = gate(false);
        let c = miter_tfi_cones(&g, g.outputs()[0], g.outputs()[0]);
        assert_eq!(c.root(), Lit::FALSE);
        let c = miter_tfi_cones(&g, g.outputs()[0], !g.outputs()[0]);
        assert_eq!(c.root(), Lit::TRUE);
    }

    #[test]
    fn cone_of_disjoint_copies() {
        let mut aig = Aig::new(3);
        let a = aig.add_and(aig.pi(0), aig.pi(2));
        let b = aig.add_and(aig.pi(0), aig.pi(2));
        let c = miter_tfi_cones(&aig, a, b);
        assert_eq!(c.num_pis(), 2);
        assert_eq!(c.pi_map, vec![1, 3]);
        assert_eq!(c.aig.num_ands(), 2 + 3);
        assert!((0..4).all(|p| !c.evaluate(&[p & 1 == 1, p & 2 == 2])));
    }

    #[test]
    fn antivalent_cone() {
        let mut aig = Aig::new(2);
        let a = aig.add_and(aig.pi(0), aig.pi(1));
        // !a == OR(!x, !y)
        let b = !aig.add_and(aig.pi(0), aig.pi(1));
        let c = miter_tfi_cones(&aig, a, !b);
        assert!((0..4).all(|p| !c.evaluate(&[p & 1 == 1, p & 2 == 2])));
        let c = miter_tfi_cones(&aig, a, b);
        assert!((0..4).all(|p| c.evaluate(&[p & 1 == 1, p & 2 == 2])));
    }

    #[test]
    fn or_reduction() {
        let mut aig = Aig::new(2);
        aig.add_output(aig.pi(0));
        aig.add_output(aig.pi(1));
        let r = or_reduce_outputs(&aig);
        assert_eq!(rows(&r), vec![false, true, true, true]);
    }
}
