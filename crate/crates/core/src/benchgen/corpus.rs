// SPDX-License-Identifier: Apache-2.0

use super::{adder_cla, adder_ripple, corrupt, mult_array, mult_columnwise, random_aig, rewrite_aig};
use crate::netlist::{build_miter, Aig};

/// A generated miter with a short label naming its construction.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub miter: Aig,
}

fn entry(name: String, a: &Aig, b: &Aig) -> CorpusEntry {
    CorpusEntry {
        name,
        miter: build_miter(a, b).expect("corpus pairs share an interface"),
    }
}

/// Deterministic mix of equivalent and corrupted miters with at most
/// `max_pis` PIs: adders, multipliers, rewrites, corruptions and random
/// netlists.
pub fn miter_corpus(count: usize, max_pis: usize, seed: u64) -> Vec<CorpusEntry> {
    assert!(max_pis >= 2, "corpus needs at least two PIs");
    let max_w = max_pis / 2;
    let mut out = Vec::with_capacity(count);
    let mut k = 0u64;
    while out.len() < count {
        let s = seed.wrapping_mul(0x9e37_79b9).wrapping_add(k);
        let w = 1 + (k as usize / 10) % max_w;
        let e = match k % 10 {
            0 => entry(format!("ripple{w}-cla{w}"), &adder_ripple(w), &adder_cla(w)),
            1 => {
                let a = adder_ripple(w);
                entry(format!("ripple{w}-rewrite{s}"), &a, &rewrite_aig(&a, 20, s))
            }
            2 => entry(format!("array{w}-columnwise{w}"), &mult_array(w), &mult_columnwise(w)),
            3 => {
                let a = mult_array(w);
                entry(format!("array{w}-rewrite{s}"), &a, &rewrite_aig(&a, 30, s))
            }
            4 => {
                let a = adder_cla(w);
                match corrupt(&a, s) {
                    Ok(b) => entry(format!("cla{w}-corrupt{s}"), &a, &b),
                    Err(_) => {
                        k += 1;
                        continue;
                    }
                }
            }
            5 => {
                let a = mult_columnwise(w);
                match corrupt(&a, s) {
                    Ok(b) => entry(format!("columnwise{w}-corrupt{s}"), &mult_array(w), &b),
                    Err(_) => {
                        k += 1;
                        continue;
                    }
                }
            }
            6 => {
                let a = mult_array(w);
                let r = rewrite_aig(&a, 25, s);
                match corrupt(&r, s ^ 1) {
                    Ok(b) => entry(format!("array{w}-rewrite-corrupt{s}"), &a, &b),
                    Err(_) => {
                        k += 1;
                        continue;
                    }
                }
            }
            7 => {
                let pis = 2 + (s as usize % (max_pis - 1));
                let a = random_aig(pis, 10 + 3 * pis, 3, s);
                entry(format!("random{pis}-rewrite{s}"), &a, &rewrite_aig(&a, 20, s))
            }
            8 => {
                let pis = 2 + (s as usize % (max_pis - 1));
                let a = random_aig(pis, 10 + 3 * pis, 3, s);
                match corrupt(&a, s) {
                    Ok(b) => entry(format!("random{pis}-corrupt{s}"), &a, &b),
                    Err(_) => {
                        k += 1;
                        continue;
                    }
                }
            }
            _ => {
                let a = adder_ripple(w);
                entry(format!("ripple{w}-self"), &a, &a)
            }
        };
        out.push(e);
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchgen::{oracle_check, OracleVerdict};

    #[test]
    fn corpus_is_deterministic_and_mixed() {
        let a = miter_corpus(60, 14, 7);
        let b = miter_corpus(60, 14, 7);
        assert_eq!(a.len(), 60);
        let mut neq = 0;
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(crate::netlist::write_aiger(&x.miter), crate::netlist::write_aiger(&y.miter));
            assert!(x.miter.num_pis() <= 14);
            if matches!(oracle_check(&x.miter, 14).unwrap(), OracleVerdict::Counterexample(_)) {
                neq += 1;
            }
        }
        assert!((10..=40).contains(&neq), "{neq} corrupted miters");
    }
}
