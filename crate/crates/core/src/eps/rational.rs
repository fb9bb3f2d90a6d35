// SPDX-License-Identifier: Apache-2.0

//! Exact-rational reference mode.
//!
//! PI `j` (0-based) is 1 with probability `1 / theta_{j+1}` where
//! `theta_1 = 3` and `theta_{i+1} = (theta_i - 1)^2 + 1`. With these
//! probabilities distinct Boolean functions always have distinct output
//! probabilities, so a cone is constant 0 iff its root probability is 0.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::EpsVerdict;
use crate::netlist::Cone;

/// Largest cone the rational mode accepts.
pub const RATIONAL_MAX_PIS: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalError {
    #[error("rational reference mode supports at most {RATIONAL_MAX_PIS} PIs, cone has {0}")]
    TooManyPis(usize),
}

/// `theta_1 .. theta_n`.
pub fn theta_sequence(n: usize) -> Vec<BigUint> {
    assert!(n >= 1, "theta sequence needs n >= 1");
    let mut out = Vec::with_capacity(n);
    let mut theta = BigUint::from(3u32);
    for _ in 0..n {
        out.push(theta.clone());
        let t = &theta - 1u32;
        theta = &t * &t + 1u32;
    }
    out
}

/// Exact probability that the cone root is 1.
///
/// Gate-level propagation (`1 - p` for inverters, `p1 * p2` for AND) is only
/// exact when fan-ins are independent, which reconvergent cones violate, so
/// the probability is summed over minterms instead: each input pattern
/// contributes the product of its per-PI probabilities.
pub fn root_probability(cone: &Cone) -> Result<BigRational, RationalError> {
    let n = cone.num_pis();
    if n > RATIONAL_MAX_PIS {
        return Err(RationalError::TooManyPis(n));
    }
    let one = BigRational::one();
    let probs: Vec<BigRational> = if n == 0 {
        Vec::new()
    } else {
        theta_sequence(n)
            .into_iter()
            .map(|t| BigRational::new(BigInt::one(), BigInt::from(t)))
            .collect()
    };
    let mut total = BigRational::zero();
    for p in 0..1usize << n {
        let assignment: Vec<bool> = (0..n).map(|j| p >> j & 1 == 1).collect();
        if !cone.evaluate(&assignment) {
            continue;
        }
        let mut w = one.clone();
        for (j, &bit) in assignment.iter().enumerate() {
            w *= if bit { probs[j].clone() } else { &one - &probs[j] };
        }
        total += w;
    }
    Ok(total)
}

/// Equivalent iff the root probability is exactly 0; otherwise the first
/// pattern (ascending) that drives the root to 1.
pub fn eps_check_rational(cone: &Cone) -> Result<EpsVerdict, RationalError> {
    let p = root_probability(cone)?;
    if p.is_zero() {
        return Ok(EpsVerdict::Equivalent);
    }
    let n = cone.num_pis();
    let cex = (0..1usize << n)
        .map(|p| (0..n).map(|j| p >> j & 1 == 1).collect::<Vec<bool>>())
        .find(|a| cone.evaluate(a))
        .expect("nonzero probability implies a satisfying pattern");
    Ok(EpsVerdict::Counterexample(cex))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{miter_tfi_cones, Aig, Lit};
    use std::collections::HashSet;

    #[test]
    fn first_five_thetas() {
        let t: Vec<u64> = theta_sequence(5).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(t, vec![3, 5, 17, 257, 65537]);
    }

    #[test]
    fn theta_minus_one_is_double_exponential() {
        for (i, t) in theta_sequence(10).iter().enumerate() {
            let m = t - 1u32;
            assert_eq!(m.count_ones(), 1, "theta_{} - 1 is a power of two", i + 1);
            assert_eq!(m.bits() - 1, 1u64 << i);
        }
        let t10 = &theta_sequence(10)[9] - 1u32;
        assert_eq!(t10.bits() - 1, 512);
    }

    fn single(aig: &Aig, l: Lit) -> Cone {
        miter_tfi_cones(aig, l, Lit::FALSE)
    }

    #[test]
    fn reference_probabilities() {
        let mut aig = Aig::new(2);
        let g = aig.add_and(aig.pi(0), aig.pi(1));
        let c = single(&aig, Lit::FALSE);
        assert!(root_probability(&c).unwrap().is_zero());
        assert_eq!(eps_check_rational(&c).unwrap(), EpsVerdict::Equivalent);

        let c = single(&aig, aig.pi(0));
        assert_eq!(root_probability(&c).unwrap(), BigRational::new(1.into(), 3.into()));
        assert!(matches!(eps_check_rational(&c).unwrap(), EpsVerdict::Counterexample(_)));

        let c = single(&aig, g);
        assert_eq!(root_probability(&c).unwrap(), BigRational::new(1.into(), 15.into()));
    }

    #[test]
    fn reconvergence_handled_exactly() {
        let mut aig = Aig::new(1);
        let z = aig.add_and(aig.pi(0), !aig.pi(0));
        let c = single(&aig, z);
        assert!(root_probability(&c).unwrap().is_zero());
    }

    #[test]
    fn too_many_pis() {
        let mut aig = Aig::new(9);
        let mut acc = aig.pi(0);
        for j in 1..9 {
            acc = aig.add_and(acc, aig.pi(j));
        }
        assert_eq!(
            root_probability(&single(&aig, acc)).unwrap_err(),
            RationalError::TooManyPis(9)
        );
    }

    /// Every one of the 2^(2^n) functions of n inputs gets its own
    /// probability, for n up to 3.
    #[test]
    fn assignment_is_aliasing_free() {
        for n in 1..=3usize {
            let thetas = theta_sequence(n);
            let probs: Vec<BigRational> = thetas
                .iter()
                .map(|t| BigRational::new(BigInt::one(), BigInt::from(t.clone())))
                .collect();
            let weights: Vec<BigRational> = (0..1usize << n)
                .map(|m| {
                    (0..n).fold(BigRational::one(), |acc, j| {
                        acc * if m >> j & 1 == 1 {
                            probs[j].clone()
                        } else {
                            BigRational::one() - &probs[j]
                        }
                    })
                })
                .collect();
            let mut seen = HashSet::new();
            for f in 0..1u64 << (1 << n) {
                let p = (0..1usize << n)
                    .filter(|&m| f >> m & 1 == 1)
                    .fold(BigRational::zero(), |acc, m| acc + &weights[m]);
                assert!(seen.insert(p), "aliasing at n = {n}, function {f:#x}");
            }
        }
    }
}
