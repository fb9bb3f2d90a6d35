// SPDX-License-Identifier: Apache-2.0

//! XOR recognition and the XOR-density engine choice.

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::netlist::{Aig, Cone};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorBlock {
    /// XOR root node indices, ascending.
    pub gates: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Sat,
    Eps,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineChoice {
    pub engine: Engine,
    pub score: f64,
    pub num_pis: usize,
}

/// Roots of three-gate XOR/XNOR patterns in the live part of `aig`.
///
/// Patterns are claimed outermost-first (descending node index) and every
/// AND node belongs to at most one recognized XOR.
pub fn detect_xor_gates_in(aig: &Aig) -> Vec<usize> {
    let mut claimed = vec![false; aig.num_nodes()];
    let mut roots = Vec::new();
    for v in aig.and_indices().rev() {
        if !aig.is_live(v) || claimed[v] {
            continue;
        }
        if aig.xor_pattern(v).is_none() {
            continue;
        }
        let (u, w) = aig.fanins(v).unwrap();
        if claimed[u.node()] || claimed[w.node()] {
            continue;
        }
        claimed[v] = true;
        claimed[u.node()] = true;
        claimed[w.node()] = true;
        roots.push(v);
    }
    roots.reverse();
    roots
}

pub fn detect_xor_gates(cone: &Cone) -> Vec<usize> {
    let tfi = cone.aig.tfi(&[cone.root()]);
    let mut in_cone = vec![false; cone.aig.num_nodes()];
    for n in tfi {
        in_cone[n] = true;
    }
    detect_xor_gates_in(&cone.aig)
        .into_iter()
        .filter(|&r| in_cone[r])
        .collect()
}

/// Connected components of XOR roots, two roots being adjacent when one is
/// (up to inversion) an XOR operand of the other. Ordered by smallest member.
pub fn group_xor_blocks(aig: &Aig, roots: &[usize]) -> Vec<XorBlock> {
    let mut pos = vec![usize::MAX; aig.num_nodes()];
    for (i, &r) in roots.iter().enumerate() {
        pos[r] = i;
    }
    let mut uf = UnionFind::<usize>::new(roots.len());
    for (i, &r) in roots.iter().enumerate() {
        if let Some((p, q)) = aig.xor_pattern(r) {
            for op in [p, q] {
                let j = pos[op.node()];
                if j != usize::MAX {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut blocks: Vec<XorBlock> = Vec::new();
    let mut block_of = vec![usize::MAX; roots.len()];
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by_key(|&i| roots[i]);
    for i in order {
        let rep = uf.find(i);
        if block_of[rep] == usize::MAX {
            block_of[rep] = blocks.len();
            blocks.push(XorBlock { gates: Vec::new() });
        }
        blocks[block_of[rep]].gates.push(roots[i]);
    }
    blocks
}

/// `log2(sum 2^|b|) / N`, evaluated as a log-sum-exp so large blocks do not
/// overflow. No blocks scores 0.
pub fn score_xor(block_sizes: &[usize], num_pis: usize) -> f64 {
    assert!(num_pis >= 1, "score needs at least one PI");
    let Some(&m) = block_sizes.iter().max() else {
        return 0.0;
    };
    let tail: f64 = block_sizes.iter().map(|&s| (s as f64 - m as f64).exp2()).sum();
    (m as f64 + tail.log2()) / num_pis as f64
}

/// EPS when the score strictly exceeds `rho` and the cone is small enough
/// for exhaustive simulation, SAT otherwise.
pub fn select_engine(cone: &Cone, rho: f64, eps_max_pis: usize) -> EngineChoice {
    let n = cone.num_pis();
    let score = if n == 0 {
        0.0
    } else {
        let roots = detect_xor_gates(cone);
        let sizes: Vec<usize> = group_xor_blocks(&cone.aig, &roots).iter().map(|b| b.gates.len()).collect();
        score_xor(&sizes, n)
    };
    choose(score, n, rho, eps_max_pis)
}

/// The decision rule on its own.
pub fn choose(score: f64, num_pis: usize, rho: f64, eps_max_pis: usize) -> EngineChoice {
    let engine = if score > rho && num_pis <= eps_max_pis {
        Engine::Eps
    } else {
        Engine::Sat
    };
    EngineChoice {
        engine,
        score,
        num_pis,
    }
}
