// SPDX-License-Identifier: Apache-2.0

//! Cube-and-conquer: `2^k` independent sub-solves, each with one full
//! assignment of `k` splitting variables added as unit clauses.

use std::sync::Mutex;

use super::{Cnf, SatBudget, SatVerdict, Solver};
use crate::interrupt::Interrupt;

/// The `k` variables with the most occurrences, ties broken by lower index.
pub fn cube_variables(cnf: &Cnf, k: usize) -> Vec<u32> {
    let mut count = vec![0usize; cnf.num_vars + 1];
    for c in &cnf.clauses {
        for l in c {
            count[l.unsigned_abs() as usize] += 1;
        }
    }
    let mut vars: Vec<u32> = (1..=cnf.num_vars as u32).collect();
    vars.sort_by(|&a, &b| count[b as usize].cmp(&count[a as usize]).then(a.cmp(&b)));
    vars.truncate(k);
    vars
}

pub fn solve_parallel(cnf: &Cnf, workers: usize, budget: &SatBudget) -> SatVerdict {
    solve_parallel_with(cnf, workers, budget, &Interrupt::new())
}

/// Runs one CDCL instance per cube on its own thread. A cube that finds a
/// model cancels the cubes after it, and the model of the lowest satisfiable
/// cube is returned, which keeps results reproducible. The verdict is Unsat
/// only if every cube is.
///
/// Panics unless `workers` is a power of two of at least 2.
pub fn solve_parallel_with(cnf: &Cnf, workers: usize, budget: &SatBudget, interrupt: &Interrupt) -> SatVerdict {
    assert!(workers >= 2 && workers.is_power_of_two(), "workers must be 2^k with k >= 1");
    let k = (workers.trailing_zeros() as usize).min(cnf.num_vars);
    let split = cube_variables(cnf, k);
    let cubes = 1usize << split.len();
    let group = interrupt.child(None);
    let stops: Vec<Interrupt> = (0..cubes).map(|_| group.child(None)).collect();
    let models: Mutex<Vec<Option<Vec<bool>>>> = Mutex::new(vec![None; cubes]);
    let budget_hit = Mutex::new(false);
    std::thread::scope(|s| {
        for cube in 0..cubes {
            let (split, stops, models, budget_hit) = (&split, &stops, &models, &budget_hit);
            s.spawn(move || {
                let mut sub = cnf.clone();
                for (i, &v) in split.iter().enumerate() {
                    let lit = if cube >> i & 1 == 1 { v as i32 } else { -(v as i32) };
                    sub.clauses.push(vec![lit]);
                }
                match Solver::new(&sub).solve(budget, &stops[cube]) {
                    SatVerdict::Model(m) => {
                        assert!(cnf.is_satisfied_by(&m), "cube solver returned an invalid model");
                        models.lock().unwrap()[cube] = Some(m);
                        for later in &stops[cube + 1..] {
                            later.trigger();
                        }
                    }
                    SatVerdict::Budget => *budget_hit.lock().unwrap() = true,
                    SatVerdict::Unsat => {}
                }
            });
        }
    });
    if let Some(m) = models.into_inner().unwrap().into_iter().flatten().next() {
        SatVerdict::Model(m)
    } else if budget_hit.into_inner().unwrap() {
        SatVerdict::Budget
    } else {
        SatVerdict::Unsat
    }
}
