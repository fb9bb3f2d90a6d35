// SPDX-License-Identifier: Apache-2.0

//! Desk-scale datapath benchmarks and the exhaustive oracle.

mod arith;
mod corpus;
mod oracle;
mod transform;

pub use arith::{adder_cla, adder_ripple, mult_array, mult_columnwise};
pub use corpus::{miter_corpus, CorpusEntry};
pub use oracle::{oracle_check, OracleError, OracleVerdict, ORACLE_DEFAULT_MAX_PIS};
pub use transform::{random_aig, rewrite_aig};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::netlist::{build_miter, Aig, AigBuilder, Lit};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenSpec {
    AdderRipple { width: usize },
    AdderCla { width: usize },
    MultArray { width: usize },
    MultColumnwise { width: usize },
    /// `copies` instances of `block`, each on its own PIs.
    Replicated { block: Box<GenSpec>, copies: usize },
    Rewrite { base: Box<GenSpec>, steps: usize, seed: u64 },
    Corrupt { base: Box<GenSpec>, seed: u64 },
    /// XOR-free random logic.
    Random { pis: usize, ands: usize, outputs: usize, seed: u64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("replication count must be at least 1")]
    ZeroCopies,
    #[error("cannot verify a corruption of a {pis}-PI netlist (limit {max})")]
    CorruptTooLarge { pis: usize, max: usize },
    #[error("no observable single-gate corruption found after {0} attempts")]
    NoObservableFault(usize),
    #[error("rewrite changed the function (pattern {0:?})")]
    RewriteMismatch(Vec<bool>),
}

const CORRUPT_ATTEMPTS: usize = 256;

/// Builds the netlist described by `spec`. Deterministic in the spec.
///
/// Rewrites of netlists with at most [`ORACLE_DEFAULT_MAX_PIS`] PIs are
/// checked against their base with the oracle; corruptions are always
/// checked and re-rolled until observable.
pub fn generate(spec: &GenSpec) -> Result<Aig, GenError> {
    Ok(match spec {
        GenSpec::AdderRipple { width } => adder_ripple(nonzero(*width)?),
        GenSpec::AdderCla { width } => adder_cla(nonzero(*width)?),
        GenSpec::MultArray { width } => mult_array(nonzero(*width)?),
        GenSpec::MultColumnwise { width } => mult_columnwise(nonzero(*width)?),
        GenSpec::Replicated { block, copies } => {
            if *copies == 0 {
                return Err(GenError::ZeroCopies);
            }
            replicate(&generate(block)?, *copies)
        }
        GenSpec::Rewrite { base, steps, seed } => {
            let base = generate(base)?;
            let out = rewrite_aig(&base, *steps, *seed);
            if base.num_pis() <= ORACLE_DEFAULT_MAX_PIS {
                let m = build_miter(&base, &out).expect("rewrite keeps the interface");
                if let OracleVerdict::Counterexample(p) = oracle_check(&m, ORACLE_DEFAULT_MAX_PIS).unwrap() {
                    return Err(GenError::RewriteMismatch(p));
                }
            }
            out
        }
        GenSpec::Corrupt { base, seed } => corrupt(&generate(base)?, *seed)?,
        GenSpec::Random { pis, ands, outputs, seed } => random_aig((*pis).max(1), *ands, *outputs, *seed),
    })
}

fn nonzero(width: usize) -> Result<usize, GenError> {
    if width == 0 {
        Err(GenError::ZeroWidth)
    } else {
        Ok(width)
    }
}

/// A copy of `base` with one gate fan-in inverted, verified inequivalent.
pub fn corrupt(base: &Aig, seed: u64) -> Result<Aig, GenError> {
    if base.num_pis() > ORACLE_DEFAULT_MAX_PIS {
        return Err(GenError::CorruptTooLarge {
            pis: base.num_pis(),
            max: ORACLE_DEFAULT_MAX_PIS,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CORRUPT_ATTEMPTS {
        let Some(c) = transform::flip_random_fanin(base, &mut rng) else {
            break;
        };
        let m = build_miter(base, &c).expect("corruption keeps the interface");
        if matches!(oracle_check(&m, ORACLE_DEFAULT_MAX_PIS), Ok(OracleVerdict::Counterexample(_))) {
            return Ok(c);
        }
    }
    Err(GenError::NoObservableFault(CORRUPT_ATTEMPTS))
}

/// `copies` side-by-side instances of `block` on disjoint PIs; outputs are
/// concatenated in instance order.
pub fn replicate(block: &Aig, copies: usize) -> Aig {
    let n = block.num_pis();
    let mut b = AigBuilder::raw(n * copies);
    for c in 0..copies {
        let mut map = vec![Lit::FALSE; block.num_nodes()];
        for j in 0..n {
            map[j + 1] = b.pi(c * n + j);
        }
        for i in block.and_indices() {
            if let Some((f0, f1)) = block.fanins(i) {
                if block.is_live(i) {
                    map[i] = b.and(map[f0.node()] ^ f0.is_inverted(), map[f1.node()] ^ f1.is_inverted());
                }
            }
        }
        for &o in block.outputs() {
            b.add_output(map[o.node()] ^ o.is_inverted());
        }
    }
    b.finish()
}

/// Index of the middle product bit of an `n x n` multiplier.
pub fn middle_output(n: usize) -> usize {
    n - 1
}

/// Single-output miter of the middle product bit of the array and
/// column-compression multipliers of width `n`.
pub fn middle_output_miter(n: usize) -> Aig {
    let o = middle_output(n);
    build_miter(&mult_array(n).with_outputs(&[o]), &mult_columnwise(n).with_outputs(&[o]))
        .expect("multipliers share an interface")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rewrite_of_mult8_is_oracle_equivalent() {
        let spec = GenSpec::Rewrite {
            base: Box::new(GenSpec::MultArray { width: 8 }),
            steps: 50,
            seed: 3,
        };
        let r = generate(&spec).unwrap();
        let m = build_miter(&mult_array(8), &r).unwrap();
        assert_eq!(oracle_check(&m, 24).unwrap(), OracleVerdict::Equivalent);
    }

    #[test]
    fn corruption_is_observable_and_deterministic() {
        let spec = GenSpec::Corrupt {
            base: Box::new(GenSpec::AdderCla { width: 4 }),
            seed: 11,
        };
        let c = generate(&spec).unwrap();
        let m = build_miter(&adder_cla(4), &c).unwrap();
        match oracle_check(&m, 24).unwrap() {
            OracleVerdict::Counterexample(p) => assert!(m.evaluate(&p)[0]),
            OracleVerdict::Equivalent => panic!("corruption not observable"),
        }
        let again = generate(&spec).unwrap();
        assert_eq!(write_ascii(&c), write_ascii(&again));
    }

    fn write_ascii(a: &Aig) -> String {
        String::from_utf8(crate::netlist::write_aiger(a)).unwrap()
    }

    #[test]
    fn corrupt_refuses_wide_netlists() {
        let spec = GenSpec::Corrupt {
            base: Box::new(GenSpec::MultArray { width: 13 }),
            seed: 0,
        };
        assert_eq!(
            generate(&spec).unwrap_err(),
            GenError::CorruptTooLarge { pis: 26, max: 24 }
        );
    }

    #[test]
    fn replication_uses_disjoint_pis() {
        let r = generate(&GenSpec::Replicated {
            block: Box::new(GenSpec::AdderRipple { width: 2 }),
            copies: 3,
        })
        .unwrap();
        assert_eq!(r.num_pis(), 12);
        assert_eq!(r.outputs().len(), 9);
        // copy 2 computes 3 + 1
        let mut inp = vec![false; 12];
        inp[8] = true;
        inp[9] = true;
        inp[10] = true;
        let out = r.evaluate(&inp);
        assert_eq!(&out[6..9], &[false, false, true]);
        assert!(out[..6].iter().all(|&v| !v));
    }

    #[test]
    fn zero_width_rejected() {
        assert_eq!(generate(&GenSpec::MultArray { width: 0 }).unwrap_err(), GenError::ZeroWidth);
    }

    #[test]
    fn middle_output_miter_is_equivalent() {
        let m = middle_output_miter(5);
        assert_eq!(m.num_pis(), 10);
        assert_eq!(oracle_check(&m, 24).unwrap(), OracleVerdict::Equivalent);
    }
}
