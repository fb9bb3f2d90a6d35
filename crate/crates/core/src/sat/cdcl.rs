// SPDX-License-Identifier: Apache-2.0

//! Conflict-driven clause learning: two watched literals with blockers,
//! first-UIP learning with local minimization, VSIDS with a lazy heap,
//! phase saving, Luby restarts and activity-based learned-clause reduction.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::{Cnf, SatBudget, SatVerdict};
use crate::interrupt::Interrupt;

const UNDEF: u8 = 2;
const NO_REASON: u32 = u32::MAX;
const RESTART_BASE: u64 = 100;
const POLL_EVERY: u64 = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
    pub reductions: u64,
}

#[derive(Clone, Copy)]
struct Watch {
    cref: u32,
    blocker: u32,
}

struct Clause {
    lits: Vec<u32>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

/// Internal literal: `2 * var + negated`, variables 0-based.
fn lit_of(dimacs: i32) -> u32 {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + (dimacs < 0) as u32
}

fn var(l: u32) -> usize {
    (l >> 1) as usize
}

pub struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watch>>,
    assign: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: BinaryHeap<(u64, Reverse<u32>)>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    num_learnts: usize,
    max_learnts: f64,
    ok: bool,
    stats: SolverStats,
}

impl Solver {
    pub fn new(cnf: &Cnf) -> Solver {
        let n = cnf.num_vars;
        let mut s = Solver {
            num_vars: n,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assign: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: BinaryHeap::new(),
            phase: vec![false; n],
            seen: vec![false; n],
            num_learnts: 0,
            max_learnts: 0.0,
            ok: true,
            stats: SolverStats::default(),
        };
        for v in 0..n {
            s.heap.push((0f64.to_bits(), Reverse(v as u32)));
        }
        for c in &cnf.clauses {
            s.add_clause(c);
        }
        s.max_learnts = (s.clauses.len() as f64 / 3.0).max(2000.0);
        s
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    fn value(&self, l: u32) -> u8 {
        let a = self.assign[var(l)];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (l & 1) as u8
        }
    }

    fn add_clause(&mut self, dimacs: &[i32]) {
        if !self.ok {
            return;
        }
        let mut lits: Vec<u32> = dimacs.iter().map(|&d| lit_of(d)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        match lits.len() {
            0 => self.ok = false,
            1 => match self.value(lits[0]) {
                0 => self.ok = false,
                UNDEF => self.enqueue(lits[0], NO_REASON),
                _ => {}
            },
            _ => {
                self.attach(lits, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<u32>, learnt: bool) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(Watch { cref, blocker: lits[1] });
        self.watches[lits[1] as usize].push(Watch { cref, blocker: lits[0] });
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        cref
    }

    fn enqueue(&mut self, l: u32, reason: u32) {
        let v = var(l);
        self.assign[v] = (l & 1 == 0) as u8;
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let c = &mut self.clauses[w.cref as usize];
                if c.deleted {
                    continue;
                }
                if c.lits[0] == false_lit {
                    c.lits.swap(0, 1);
                }
                let first = c.lits[0];
                let fv = {
                    let a = self.assign[var(first)];
                    if a == UNDEF {
                        UNDEF
                    } else {
                        a ^ (first & 1) as u8
                    }
                };
                if first != w.blocker && fv == 1 {
                    ws[j] = Watch { cref: w.cref, blocker: first };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.lits.len() {
                    let l = c.lits[k];
                    let a = self.assign[var(l)];
                    if a == UNDEF || a ^ (l & 1) as u8 == 1 {
                        c.lits.swap(1, k);
                        self.watches[c.lits[1] as usize].push(Watch { cref: w.cref, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watch { cref: w.cref, blocker: first };
                j += 1;
                if fv == 0 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
            self.rebuild_heap();
        } else if self.assign[v] == UNDEF {
            self.heap.push((self.activity[v].to_bits(), Reverse(v as u32)));
        }
    }

    fn rebuild_heap(&mut self) {
        self.heap = (0..self.num_vars)
            .filter(|&v| self.assign[v] == UNDEF)
            .map(|v| (self.activity[v].to_bits(), Reverse(v as u32)))
            .collect();
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis; returns the learned clause (asserting literal
    /// first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, u32) {
        let mut learnt = vec![0u32];
        let mut path = 0usize;
        let mut p: Option<u32> = None;
        let mut idx = self.trail.len();
        let cur = self.decision_level();
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl as usize].lits.len() {
                let q = self.clauses[confl as usize].lits[k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= cur {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let pl = self.trail[idx];
            p = Some(pl);
            confl = self.reason[var(pl)];
            self.seen[var(pl)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.unwrap() ^ 1;

        // drop literals implied by other literals of the clause
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == 0 {
                    return true;
                }
                let r = self.reason[var(l)];
                r == NO_REASON
                    || self.clauses[r as usize].lits[1..]
                        .iter()
                        .any(|&q| !self.seen[var(q)] && self.level[var(q)] > 0)
            })
            .collect();
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut out: Vec<u32> = learnt.iter().zip(&keep).filter(|(_, &k)| k).map(|(&l, _)| l).collect();

        let mut bt = 0;
        if out.len() > 1 {
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.level[var(out[i])] > self.level[var(out[max_i])] {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            bt = self.level[var(out[1])];
        }
        (out, bt)
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assign[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.heap.push((self.activity[v].to_bits(), Reverse(v as u32)));
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
        if self.heap.len() > 8 * self.num_vars + 1024 {
            self.rebuild_heap();
        }
    }

    fn pick_branch(&mut self) -> Option<u32> {
        while let Some((bits, Reverse(v))) = self.heap.pop() {
            let v = v as usize;
            if self.assign[v] == UNDEF && bits == self.activity[v].to_bits() {
                return Some(2 * v as u32 + (!self.phase[v]) as u32);
            }
        }
        // stale entries only; fall back to a scan
        (0..self.num_vars)
            .find(|&v| self.assign[v] == UNDEF)
            .map(|v| 2 * v as u32 + (!self.phase[v]) as u32)
    }

    fn locked(&self, cref: u32) -> bool {
        let l = self.clauses[cref as usize].lits[0];
        self.reason[var(l)] == cref && self.value(l) == 1
    }

    fn reduce_db(&mut self) {
        self.stats.reductions += 1;
        let mut cands: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted && cl.lits.len() > 2
            })
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .total_cmp(&self.clauses[b as usize].activity)
        });
        for &c in &cands[..cands.len() / 2] {
            if !self.locked(c) {
                let cl = &mut self.clauses[c as usize];
                cl.deleted = true;
                cl.lits = Vec::new();
                self.num_learnts -= 1;
            }
        }
        for ws in &mut self.watches {
            ws.retain(|w| !self.clauses[w.cref as usize].deleted);
        }
    }

    fn model(&self) -> Vec<bool> {
        self.assign.iter().map(|&a| a == 1).collect()
    }

    /// Runs the search until a verdict or a budget/interrupt limit.
    pub fn solve(&mut self, budget: &SatBudget, interrupt: &Interrupt) -> SatVerdict {
        if !self.ok || self.propagate().is_some() {
            self.ok = false;
            return SatVerdict::Unsat;
        }
        let deadline = Instant::now() + budget.max_time;
        let start_conflicts = self.stats.conflicts;
        let mut restart_idx = 0u32;
        loop {
            let limit = luby(restart_idx) * RESTART_BASE;
            restart_idx += 1;
            let mut local = 0u64;
            loop {
                if let Some(confl) = self.propagate() {
                    self.stats.conflicts += 1;
                    local += 1;
                    if self.decision_level() == 0 {
                        self.ok = false;
                        return SatVerdict::Unsat;
                    }
                    let (learnt, bt) = self.analyze(confl);
                    self.cancel_until(bt);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], NO_REASON);
                    } else {
                        let first = learnt[0];
                        let cref = self.attach(learnt, true);
                        self.bump_clause(cref);
                        self.num_learnts += 1;
                        self.stats.learnt_clauses += 1;
                        self.enqueue(first, cref);
                    }
                    self.var_inc /= 0.95;
                    self.cla_inc /= 0.999;
                    let used = self.stats.conflicts - start_conflicts;
                    if used >= budget.max_conflicts {
                        self.cancel_until(0);
                        return SatVerdict::Budget;
                    }
                    if used.is_multiple_of(POLL_EVERY) && (interrupt.is_set() || Instant::now() >= deadline) {
                        self.cancel_until(0);
                        return SatVerdict::Budget;
                    }
                } else {
                    if local >= limit {
                        break;
                    }
                    if self.num_learnts as f64 >= self.max_learnts + self.trail.len() as f64 {
                        self.reduce_db();
                        self.max_learnts *= 1.1;
                    }
                    match self.pick_branch() {
                        None => return SatVerdict::Model(self.model()),
                        Some(l) => {
                            self.stats.decisions += 1;
                            self.trail_lim.push(self.trail.len());
                            self.enqueue(l, NO_REASON);
                        }
                    }
                }
            }
            self.stats.restarts += 1;
            self.cancel_until(0);
            if interrupt.is_set() || Instant::now() >= deadline {
                return SatVerdict::Budget;
            }
        }
    }
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ... (0-based index).
pub fn luby(mut i: u32) -> u64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < i as u64 + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = i as u64;
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    i = seq;
    1u64 << i
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let got: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(got, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}
