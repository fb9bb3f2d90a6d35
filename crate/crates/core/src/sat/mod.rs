// SPDX-License-Identifier: Apache-2.0

//! CNF encoding of cones and the SAT engines.

mod cdcl;
mod dimacs;
mod external;
mod parallel;

pub use cdcl::{luby, Solver, SolverStats};
pub use dimacs::{parse_dimacs, write_dimacs, DimacsError};
pub use external::{solve_external, ExternalError, ExternalSolver};
pub use parallel::{cube_variables, solve_parallel, solve_parallel_with};

use std::time::Duration;

use thiserror::Error;

use crate::interrupt::Interrupt;
use crate::netlist::{Cone, Lit};

/// A CNF formula over variables `1..=num_vars` in DIMACS sign convention.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    /// Cone node index -> CNF variable, for encoded nodes.
    pub var_map: Vec<Option<u32>>,
}

impl Cnf {
    /// True when `model` (indexed by variable - 1) satisfies every clause.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| model.get(l.unsigned_abs() as usize - 1).copied().unwrap_or(false) == (l > 0))
        })
    }

    fn lit(&self, l: Lit) -> i32 {
        let v = self.var_map[l.node()].expect("fan-in encoded before its gate") as i32;
        if l.is_inverted() {
            -v
        } else {
            v
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SatBudget {
    pub max_conflicts: u64,
    pub max_time: Duration,
}

impl Default for SatBudget {
    fn default() -> Self {
        SatBudget {
            max_conflicts: 100_000,
            max_time: Duration::from_secs(60),
        }
    }
}

impl SatBudget {
    pub fn scaled(&self, factor: u32) -> SatBudget {
        SatBudget {
            max_conflicts: self.max_conflicts.saturating_mul(factor as u64),
            max_time: self.max_time.saturating_mul(factor),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatVerdict {
    Unsat,
    /// Value of every CNF variable, indexed by variable - 1.
    Model(Vec<bool>),
    Budget,
}

impl SatVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            SatVerdict::Unsat => "unsat",
            SatVerdict::Model(_) => "sat",
            SatVerdict::Budget => "budget",
        }
    }
}

/// Tseitin encoding asserting the cone root.
///
/// Every node in the root's fan-in gets a variable (the constant node
/// included, fixed false by a unit clause); each AND `o = a & b` contributes
/// `(-o a) (-o b) (o -a -b)`. The final unit clause asserts the root, so the
/// formula is unsatisfiable exactly when the root is constant 0.
pub fn tseitin_encode(cone: &Cone) -> Cnf {
    let aig = &cone.aig;
    let root = cone.root();
    let mut cnf = Cnf {
        num_vars: 0,
        clauses: Vec::new(),
        var_map: vec![None; aig.num_nodes()],
    };
    let mut nodes = aig.tfi(&[root]);
    if !nodes.contains(&0) {
        nodes.insert(0, 0);
    }
    for &n in &nodes {
        cnf.num_vars += 1;
        cnf.var_map[n] = Some(cnf.num_vars as u32);
    }
    cnf.clauses.push(vec![cnf.lit(Lit::TRUE)]);
    for &n in &nodes {
        if let Some((f0, f1)) = aig.fanins(n) {
            let o = cnf.lit(Lit::new(n, false));
            let (a, b) = (cnf.lit(f0), cnf.lit(f1));
            cnf.clauses.push(vec![-o, a]);
            cnf.clauses.push(vec![-o, b]);
            cnf.clauses.push(vec![o, -a, -b]);
        }
    }
    let r = cnf.lit(root);
    cnf.clauses.push(vec![r]);
    cnf
}

/// Single-threaded CDCL.
pub fn solve(cnf: &Cnf, budget: &SatBudget) -> SatVerdict {
    solve_with(cnf, budget, &Interrupt::new()).0
}

/// [`solve`] with cooperative cancellation, also returning search counters.
///
/// Panics if the solver produces a model violating a clause.
pub fn solve_with(cnf: &Cnf, budget: &SatBudget, interrupt: &Interrupt) -> (SatVerdict, SolverStats) {
    let mut s = Solver::new(cnf);
    let v = s.solve(budget, interrupt);
    if let SatVerdict::Model(m) = &v {
        assert!(cnf.is_satisfied_by(m), "solver returned a model violating the formula");
    }
    (v, s.stats())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("cone PI {0} has no CNF variable")]
    UnmappedPi(usize),
    #[error("model has {got} values, formula has {want} variables")]
    ShortModel { got: usize, want: usize },
}

/// Reads the cone-PI assignment out of a model of `tseitin_encode(cone)`.
/// PIs outside the root's support are absent from the encoding and read as 0.
pub fn model_to_assignment(model: &[bool], cnf: &Cnf, cone: &Cone) -> Result<Vec<bool>, ModelError> {
    if model.len() < cnf.num_vars {
        return Err(ModelError::ShortModel {
            got: model.len(),
            want: cnf.num_vars,
        });
    }
    (0..cone.num_pis())
        .map(|j| {
            let node = j + 1;
            match cnf.var_map.get(node) {
                Some(Some(v)) => Ok(model[*v as usize - 1]),
                Some(None) => Ok(false),
                None => Err(ModelError::UnmappedPi(j)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{miter_tfi_cones, Aig, AigBuilder};

    fn cnf(clauses: &[&[i32]], n: usize) -> Cnf {
        Cnf {
            num_vars: n,
            clauses: clauses.iter().map(|c| c.to_vec()).collect(),
            var_map: Vec::new(),
        }
    }

    #[test]
    fn unit_conflict() {
        assert_eq!(solve(&cnf(&[&[1], &[-1]], 1), &SatBudget::default()), SatVerdict::Unsat);
    }

    #[test]
    fn unit_propagation_model() {
        assert_eq!(
            solve(&cnf(&[&[1, 2], &[-1]], 2), &SatBudget::default()),
            SatVerdict::Model(vec![false, true])
        );
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 5 pigeons, 4 holes
        let (p, h) = (5, 4);
        let v = |i: usize, j: usize| (i * h + j + 1) as i32;
        let mut cl: Vec<Vec<i32>> = (0..p).map(|i| (0..h).map(|j| v(i, j)).collect()).collect();
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    cl.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        let f = Cnf {
            num_vars: p * h,
            clauses: cl,
            var_map: Vec::new(),
        };
        assert_eq!(solve(&f, &SatBudget::default()), SatVerdict::Unsat);
        let tiny = SatBudget {
            max_conflicts: 3,
            ..SatBudget::default()
        };
        assert_eq!(solve(&f, &tiny), SatVerdict::Budget);
    }

    #[test]
    fn constant_false_root_is_unsat() {
        let aig = Aig::new(2);
        let c = miter_tfi_cones(&aig, aig.pi(0), aig.pi(0));
        let f = tseitin_encode(&c);
        assert!(f.clauses.contains(&vec![1]) && f.clauses.contains(&vec![-1]));
        assert_eq!(solve(&f, &SatBudget::default()), SatVerdict::Unsat);
    }

    #[test]
    fn single_pi_root() {
        let aig = Aig::new(1);
        let c = miter_tfi_cones(&aig, aig.pi(0), Lit::FALSE);
        let f = tseitin_encode(&c);
        match solve(&f, &SatBudget::default()) {
            SatVerdict::Model(m) => assert_eq!(model_to_assignment(&m, &f, &c).unwrap(), vec![true]),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn and_vs_or_model() {
        let mut b = AigBuilder::raw(2);
        let (x, y) = (b.pi(0), b.pi(1));
        let a = b.and(x, y);
        let o = b.or(x, y);
        let aig = b.finish();
        let c = miter_tfi_cones(&aig, a, o);
        let f = tseitin_encode(&c);
        let SatVerdict::Model(m) = solve(&f, &SatBudget::default()) else {
            panic!("expected model")
        };
        let asg = model_to_assignment(&m, &f, &c).unwrap();
        assert!(asg == vec![true, false] || asg == vec![false, true]);
        assert!(c.evaluate(&asg));
    }
}
