// SPDX-License-Identifier: Apache-2.0

//! Adders and multipliers. Operand `a` occupies PIs `0..n` and `b` PIs
//! `n..2n`, least significant bit first.

use std::collections::VecDeque;

use crate::netlist::{Aig, AigBuilder, Lit};

fn operands(b: &AigBuilder, n: usize) -> (Vec<Lit>, Vec<Lit>) {
    let pis = b.pis();
    (pis[..n].to_vec(), pis[n..].to_vec())
}

fn full_add(b: &mut AigBuilder, x: Lit, y: Lit, c: Lit) -> (Lit, Lit) {
    let t = b.xor(x, y);
    let s = b.xor(t, c);
    (s, b.maj(x, y, c))
}

fn half_add(b: &mut AigBuilder, x: Lit, y: Lit) -> (Lit, Lit) {
    (b.xor(x, y), b.and(x, y))
}

fn ripple(b: &mut AigBuilder, x: &[Lit], y: &[Lit]) -> (Vec<Lit>, Lit) {
    let mut sum = Vec::with_capacity(x.len());
    let mut carry = Lit::FALSE;
    for (&xi, &yi) in x.iter().zip(y) {
        let (s, c) = full_add(b, xi, yi, carry);
        sum.push(s);
        carry = c;
    }
    (sum, carry)
}

/// `n`-bit ripple-carry adder: outputs `s_0..s_{n-1}` then the carry out.
pub fn adder_ripple(n: usize) -> Aig {
    let mut b = AigBuilder::new(2 * n);
    let (x, y) = operands(&b, n);
    let (sum, carry) = ripple(&mut b, &x, &y);
    for s in sum {
        b.add_output(s);
    }
    b.add_output(carry);
    b.finish()
}

/// `n`-bit carry-lookahead adder using a Kogge-Stone prefix network over
/// generate/propagate pairs. Same interface as [`adder_ripple`].
pub fn adder_cla(n: usize) -> Aig {
    let mut b = AigBuilder::new(2 * n);
    let (x, y) = operands(&b, n);
    let p: Vec<Lit> = (0..n).map(|i| b.xor(x[i], y[i])).collect();
    let mut gg: Vec<Lit> = (0..n).map(|i| b.and(x[i], y[i])).collect();
    let mut pp = p.clone();
    let mut d = 1;
    while d < n {
        let (g0, p0) = (gg.clone(), pp.clone());
        for i in d..n {
            let t = b.and(p0[i], g0[i - d]);
            gg[i] = b.or(g0[i], t);
            pp[i] = b.and(p0[i], p0[i - d]);
        }
        d *= 2;
    }
    // gg[i] is now the carry out of bit i
    for i in 0..n {
        let s = if i == 0 { p[0] } else { b.xor(p[i], gg[i - 1]) };
        b.add_output(s);
    }
    b.add_output(gg[n - 1]);
    b.finish()
}

fn partial_products(b: &mut AigBuilder, x: &[Lit], y: &[Lit]) -> Vec<Vec<Lit>> {
    y.iter().map(|&yi| x.iter().map(|&xj| b.and(xj, yi)).collect()).collect()
}

/// `n x n` array multiplier: partial-product rows accumulated with ripple
/// adders. Outputs the `2n` product bits.
pub fn mult_array(n: usize) -> Aig {
    let mut b = AigBuilder::new(2 * n);
    let (x, y) = operands(&b, n);
    let pp = partial_products(&mut b, &x, &y);
    let mut out = Vec::with_capacity(2 * n);
    // acc holds bits of weight i..i+n of the running sum
    let mut acc = pp[0].clone();
    for row in &pp[1..] {
        out.push(acc[0]);
        let hi: Vec<Lit> = acc[1..].iter().copied().chain([Lit::FALSE]).collect();
        let (sum, carry) = ripple(&mut b, &hi, row);
        acc = sum;
        acc.push(carry);
    }
    out.extend(acc.iter().copied().take(2 * n - out.len()));
    while out.len() < 2 * n {
        out.push(Lit::FALSE);
    }
    for o in out {
        b.add_output(o);
    }
    b.finish()
}

/// `n x n` multiplier that reduces each weight column with full and half
/// adders, passing carries to the next column. Outputs the `2n` product bits.
pub fn mult_columnwise(n: usize) -> Aig {
    let mut b = AigBuilder::new(2 * n);
    let (x, y) = operands(&b, n);
    let pp = partial_products(&mut b, &x, &y);
    let mut cols: Vec<VecDeque<Lit>> = vec![VecDeque::new(); 2 * n + 1];
    for (i, row) in pp.iter().enumerate() {
        for (j, &l) in row.iter().enumerate() {
            cols[i + j].push_back(l);
        }
    }
    for k in 0..2 * n {
        while cols[k].len() > 1 {
            let (s, c) = if cols[k].len() >= 3 {
                let (p, q, r) = (
                    cols[k].pop_front().unwrap(),
                    cols[k].pop_front().unwrap(),
                    cols[k].pop_front().unwrap(),
                );
                full_add(&mut b, p, q, r)
            } else {
                let (p, q) = (cols[k].pop_front().unwrap(), cols[k].pop_front().unwrap());
                half_add(&mut b, p, q)
            };
            cols[k].push_back(s);
            cols[k + 1].push_back(c);
        }
        let bit = cols[k].pop_front().unwrap_or(Lit::FALSE);
        b.add_output(bit);
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(bits: &[bool]) -> u64 {
        bits.iter().enumerate().map(|(i, &v)| (v as u64) << i).sum()
    }

    fn inputs(a: u64, b: u64, n: usize) -> Vec<bool> {
        (0..n).map(|i| a >> i & 1 == 1).chain((0..n).map(|i| b >> i & 1 == 1)).collect()
    }

    #[test]
    fn half_adder() {
        let aig = adder_ripple(1);
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let out = aig.evaluate(&inputs(a, b, 1));
            assert_eq!(out, vec![a ^ b == 1, a & b == 1]);
        }
    }

    #[test]
    fn two_bit_multiplier_truth_table() {
        for aig in [mult_array(2), mult_columnwise(2)] {
            assert_eq!(aig.outputs().len(), 4);
            for a in 0..4 {
                for b in 0..4 {
                    assert_eq!(word(&aig.evaluate(&inputs(a, b, 2))), a * b);
                }
            }
        }
    }

    #[test]
    fn arithmetic_is_exact() {
        for n in 1..=5usize {
            let mask = (1u64 << n) - 1;
            let gens = [adder_ripple(n), adder_cla(n), mult_array(n), mult_columnwise(n)];
            for a in 0..=mask {
                for b in 0..=mask {
                    let inp = inputs(a, b, n);
                    assert_eq!(word(&gens[0].evaluate(&inp)), a + b, "ripple n={n}");
                    assert_eq!(word(&gens[1].evaluate(&inp)), a + b, "cla n={n}");
                    assert_eq!(word(&gens[2].evaluate(&inp)), a * b, "array n={n}");
                    assert_eq!(word(&gens[3].evaluate(&inp)), a * b, "columnwise n={n}");
                }
            }
        }
    }

    #[test]
    fn multipliers_differ_structurally() {
        let (a, c) = (mult_array(6), mult_columnwise(6));
        let m = crate::netlist::build_miter(&a, &c).unwrap().structural_hash();
        let shared = a.num_ands() + c.num_ands() - m.num_ands();
        assert!(shared < a.num_ands() / 2);
    }
}
