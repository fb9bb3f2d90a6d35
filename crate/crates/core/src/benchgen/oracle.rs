// SPDX-License-Identifier: Apache-2.0

//! Exhaustive ground truth. Deliberately shares no code with the exact
//! simulation engine: values are recomputed here one 64-pattern word at a
//! time straight from the node list.

use thiserror::Error;

use crate::netlist::{Aig, Node};

pub const ORACLE_DEFAULT_MAX_PIS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Equivalent,
    /// The smallest pattern index (PI `j` = bit `j`) driving some output to 1.
    Counterexample(Vec<bool>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limited to {max} PIs, netlist has {pis}")]
    TooManyPis { pis: usize, max: usize },
}

/// Decides whether every output of `miter` is constant 0 by enumerating all
/// `2^N` input patterns in ascending order.
pub fn oracle_check(miter: &Aig, max_pis: usize) -> Result<OracleVerdict, OracleError> {
    let n = miter.num_pis();
    if n > max_pis {
        return Err(OracleError::TooManyPis { pis: n, max: max_pis });
    }
    let live = miter.tfi(miter.outputs());
    let mut low = [0u64; 6];
    for (j, w) in low.iter_mut().enumerate() {
        for t in 0..64 {
            if t >> j & 1 == 1 {
                *w |= 1 << t;
            }
        }
    }
    let total = 1u64 << n;
    let chunks = total.div_ceil(64);
    let valid = if total < 64 { (1u64 << total) - 1 } else { !0 };
    let mut val = vec![0u64; miter.num_nodes()];
    for chunk in 0..chunks {
        for j in 0..n {
            val[j + 1] = if j < 6 {
                low[j]
            } else if chunk >> (j - 6) & 1 == 1 {
                !0
            } else {
                0
            };
        }
        for &i in &live {
            if let Node::And(g) = miter.node(i) {
                let a = val[g.fanin0.node()] ^ if g.fanin0.is_inverted() { !0 } else { 0 };
                let b = val[g.fanin1.node()] ^ if g.fanin1.is_inverted() { !0 } else { 0 };
                val[i] = a & b;
            }
        }
        let mut any = 0u64;
        for o in miter.outputs() {
            any |= val[o.node()] ^ if o.is_inverted() { !0 } else { 0 };
        }
        any &= valid;
        if any != 0 {
            let p = chunk * 64 + any.trailing_zeros() as u64;
            return Ok(OracleVerdict::Counterexample((0..n).map(|j| p >> j & 1 == 1).collect()));
        }
    }
    Ok(OracleVerdict::Equivalent)
}
