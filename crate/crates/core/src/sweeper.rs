// SPDX-License-Identifier: Apache-2.0

//! The sweeping driver: simulate, collect candidate pairs, prove or refute
//! them one at a time in topological order, merge, then decide the reduced
//! miter output.

use std::collections::HashSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::eps::{eps_check_parallel_with, EpsConfig, EpsVerdict};
use crate::interrupt::Interrupt;
use crate::isd::{try_isd_merge, EquivDb};
use crate::logicsim::{check_output_counterexample, collect_candidate_pairs, simulate_random, CandidatePair};
use crate::netlist::{miter_tfi_cones, or_reduce_outputs, Aig, Cone, Lit};
use crate::sat::{
    model_to_assignment, solve_external, solve_parallel_with, solve_with, tseitin_encode, write_dimacs, Cnf,
    ExternalSolver, SatBudget, SatVerdict,
};
use crate::selector::{select_engine, Engine};
use crate::simvec::WORD_BITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineOverride {
    Hybrid,
    SatOnly,
    EpsOnly,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub rho: f64,
    /// Total random simulation patterns (rounded up to whole 64-bit words).
    pub sim_patterns: usize,
    pub seed: u64,
    pub sat_budget: SatBudget,
    pub eps: EpsConfig,
    pub threads: usize,
    pub isd_enabled: bool,
    pub engine_override: EngineOverride,
    pub external_sat: Option<ExternalSolver>,
    /// Directory that receives the CNF of every SAT call.
    pub dump_cnf: Option<PathBuf>,
    pub timeout: Option<Duration>,
    /// Re-simulates the miter output after every merge and panics if it
    /// changed.
    pub check_merges: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            rho: 0.15,
            sim_patterns: 1 << 20,
            seed: 1,
            sat_budget: SatBudget::default(),
            eps: EpsConfig::default(),
            threads: 1,
            isd_enabled: true,
            engine_override: EngineOverride::Hybrid,
            external_sat: None,
            dump_cnf: None,
            timeout: None,
            check_merges: false,
        }
    }
}

/// Where a counterexample came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CexSource {
    /// Initial random simulation.
    Simulation,
    /// A pattern replayed from a refuted internal pair.
    Refinement,
    /// The final output proof.
    Sat,
    Eps,
}

/// Counters of one sweep.
///
/// Every processed pair is settled exactly once: `isd_hits + sat_decided +
/// eps_decided + skipped_pairs == pairs`. `sat_calls` and `eps_calls` count
/// engine invocations, which exceed the decided counts when a pair falls back
/// to the other engine, and include the final output proof.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepStats {
    pub miter_ands: usize,
    pub strashed_ands: usize,
    pub final_ands: usize,
    pub sim_patterns: usize,
    pub candidate_pairs: usize,
    pub recollections: usize,
    pub pairs: usize,
    pub isd_hits: usize,
    pub sat_calls: usize,
    pub sat_escalations: usize,
    pub sat_decided: usize,
    pub sat_time_seconds: f64,
    pub eps_calls: usize,
    pub eps_decided: usize,
    pub eps_time_seconds: f64,
    pub skipped_pairs: usize,
    pub refuted_pairs: usize,
    pub fallbacks: usize,
    pub merges: usize,
    pub final_engine: Option<Engine>,
    pub cex_source: Option<CexSource>,
    pub engine_errors: Vec<String>,
    pub wall_seconds: f64,
}

impl SweepStats {
    pub fn engine_calls(&self) -> usize {
        self.sat_calls + self.eps_calls
    }

    /// Adds the counters of `other` (used for per-output runs).
    pub fn absorb(&mut self, other: &SweepStats) {
        self.miter_ands += other.miter_ands;
        self.strashed_ands += other.strashed_ands;
        self.final_ands += other.final_ands;
        self.sim_patterns += other.sim_patterns;
        self.candidate_pairs += other.candidate_pairs;
        self.recollections += other.recollections;
        self.pairs += other.pairs;
        self.isd_hits += other.isd_hits;
        self.sat_calls += other.sat_calls;
        self.sat_escalations += other.sat_escalations;
        self.sat_decided += other.sat_decided;
        self.sat_time_seconds += other.sat_time_seconds;
        self.eps_calls += other.eps_calls;
        self.eps_decided += other.eps_decided;
        self.eps_time_seconds += other.eps_time_seconds;
        self.skipped_pairs += other.skipped_pairs;
        self.refuted_pairs += other.refuted_pairs;
        self.fallbacks += other.fallbacks;
        self.merges += other.merges;
        self.engine_errors.extend(other.engine_errors.iter().cloned());
        self.wall_seconds += other.wall_seconds;
        self.final_engine = other.final_engine.or(self.final_engine);
        self.cex_source = self.cex_source.or(other.cex_source);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineVerdict {
    Equivalent,
    /// Assignment over the cone PIs.
    Counterexample(Vec<bool>),
    ResourceOut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// Full miter PI assignment driving some output to 1.
    NonEquivalent(Vec<bool>),
    Unknown,
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Equivalent => "equivalent",
            Verdict::NonEquivalent(_) => "not-equivalent",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairOutcome {
    /// Merged by structural identity without an engine call.
    Isd,
    Equivalent,
    NotEquivalent,
    Skipped,
}

/// One line of the per-pair log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRecord {
    /// Position in processing order.
    pub id: usize,
    pub a: usize,
    pub b: usize,
    pub antivalent: bool,
    /// AND gates of the pair cone (0 for ISD hits, which build no cone).
    pub gates: usize,
    pub pis: usize,
    pub score_xor: Option<f64>,
    pub engine: Option<Engine>,
    pub fallback: bool,
    pub verdict: PairOutcome,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub verdict: Verdict,
    pub stats: SweepStats,
    pub pair_log: Vec<PairRecord>,
}

/// Mutable state shared by the pair loop and the final proof.
struct Run<'a> {
    cfg: &'a SweepConfig,
    stats: SweepStats,
    interrupt: Interrupt,
    cnf_dumps: usize,
}

/// Outcome of proving one cone, with the engine that decided it.
struct Proof {
    verdict: EngineVerdict,
    engine: Option<Engine>,
    score: Option<f64>,
    fallback: bool,
}

/// Budget multiplier of the single retry a pair gets when SAT runs out.
pub const SAT_ESCALATION: u32 = 4;

fn pow2_floor(n: usize) -> usize {
    if n <= 1 {
        1
    } else {
        1 << (usize::BITS - 1 - n.leading_zeros())
    }
}

impl Run<'_> {
    fn run_sat(&mut self, cone: &Cone, scale: u32) -> EngineVerdict {
        let start = Instant::now();
        self.stats.sat_calls += 1;
        let cnf = tseitin_encode(cone);
        if let Some(dir) = &self.cfg.dump_cnf {
            let path = dir.join(format!("pair_{:05}.cnf", self.cnf_dumps));
            self.cnf_dumps += 1;
            if let Err(e) = std::fs::write(&path, write_dimacs(&cnf)) {
                self.stats.engine_errors.push(format!("writing {}: {e}", path.display()));
            }
        }
        let mut verdict = self.sat_attempt(&cnf, scale);
        if verdict == SatVerdict::Budget && scale == 1 && !self.interrupt.is_set() {
            self.stats.sat_escalations += 1;
            verdict = self.sat_attempt(&cnf, SAT_ESCALATION);
        }
        self.stats.sat_time_seconds += start.elapsed().as_secs_f64();
        match verdict {
            SatVerdict::Unsat => EngineVerdict::Equivalent,
            SatVerdict::Model(m) => match model_to_assignment(&m, &cnf, cone) {
                Ok(a) => EngineVerdict::Counterexample(a),
                Err(e) => {
                    self.stats.engine_errors.push(format!("model decoding: {e}"));
                    EngineVerdict::ResourceOut
                }
            },
            SatVerdict::Budget => EngineVerdict::ResourceOut,
        }
    }

    fn sat_attempt(&mut self, cnf: &Cnf, scale: u32) -> SatVerdict {
        let budget = self.cfg.sat_budget.scaled(scale);
        let workers = pow2_floor(self.cfg.threads);
        if let Some(ext) = &self.cfg.external_sat {
            match solve_external(cnf, ext, &budget) {
                Ok(v) => v,
                Err(e) => {
                    self.stats.engine_errors.push(format!("external solver: {e}"));
                    SatVerdict::Budget
                }
            }
        } else if workers >= 2 {
            solve_parallel_with(cnf, workers, &budget, &self.interrupt)
        } else {
            solve_with(cnf, &budget, &self.interrupt).0
        }
    }

    fn run_eps(&mut self, cone: &Cone) -> EngineVerdict {
        let start = Instant::now();
        self.stats.eps_calls += 1;
        let cfg = EpsConfig {
            workers: pow2_floor(self.cfg.threads),
            ..self.cfg.eps.clone()
        };
        let v = eps_check_parallel_with(cone, &cfg, &self.interrupt);
        self.stats.eps_time_seconds += start.elapsed().as_secs_f64();
        match v {
            Ok(EpsVerdict::Equivalent) => EngineVerdict::Equivalent,
            Ok(EpsVerdict::Counterexample(a)) => EngineVerdict::Counterexample(a),
            Ok(EpsVerdict::ResourceOut(_)) => EngineVerdict::ResourceOut,
            Err(e) => {
                self.stats.engine_errors.push(format!("eps: {e}"));
                EngineVerdict::ResourceOut
            }
        }
    }

    fn run_engine(&mut self, engine: Engine, cone: &Cone, scale: u32) -> EngineVerdict {
        match engine {
            Engine::Sat => self.run_sat(cone, scale),
            Engine::Eps => self.run_eps(cone),
        }
    }

    /// Dispatches a cone to the selected engine, retrying once with the
    /// other engine in hybrid mode when the first runs out of resources.
    fn prove_cone(&mut self, cone: &Cone, scale: u32) -> Proof {
        let root = cone.root();
        if root.is_const() {
            return Proof {
                verdict: if root == Lit::FALSE {
                    EngineVerdict::Equivalent
                } else {
                    EngineVerdict::Counterexample(vec![false; cone.num_pis()])
                },
                engine: None,
                score: None,
                fallback: false,
            };
        }
        if self.interrupt.is_set() {
            return Proof {
                verdict: EngineVerdict::ResourceOut,
                engine: None,
                score: None,
                fallback: false,
            };
        }
        let (first, score) = match self.cfg.engine_override {
            EngineOverride::Hybrid => {
                let ch = select_engine(cone, self.cfg.rho, self.cfg.eps.max_pis);
                (ch.engine, Some(ch.score))
            }
            EngineOverride::SatOnly => (Engine::Sat, None),
            EngineOverride::EpsOnly => (Engine::Eps, None),
        };
        let verdict = self.run_engine(first, cone, scale);
        if verdict == EngineVerdict::ResourceOut
            && self.cfg.engine_override == EngineOverride::Hybrid
            && !self.interrupt.is_set()
        {
            let other = match first {
                Engine::Sat => Engine::Eps,
                Engine::Eps => Engine::Sat,
            };
            self.stats.fallbacks += 1;
            let v = self.run_engine(other, cone, scale);
            return Proof {
                verdict: v,
                engine: Some(other),
                score,
                fallback: true,
            };
        }
        Proof {
            verdict,
            engine: Some(first),
            score,
            fallback: false,
        }
    }
}

/// Proves one candidate pair on the current netlist.
pub fn prove_pair(pair: &CandidatePair, aig: &Aig, cfg: &SweepConfig) -> (EngineVerdict, SweepStats) {
    let mut run = Run {
        cfg,
        stats: SweepStats::default(),
        interrupt: cfg.timeout.map_or_else(Interrupt::new, Interrupt::with_timeout),
        cnf_dumps: 0,
    };
    if pair.a == pair.b_phased() {
        return (EngineVerdict::Equivalent, run.stats);
    }
    let cone = miter_tfi_cones(aig, pair.a, pair.b_phased());
    let p = run.prove_cone(&cone, 1);
    (p.verdict, run.stats)
}

fn output_words(aig: &Aig, seed: u64) -> Vec<bool> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..64)
        .flat_map(|_| {
            let inp: Vec<bool> = (0..aig.num_pis()).map(|_| rng.gen()).collect();
            aig.evaluate(&inp)
        })
        .collect()
}

fn is_counterexample(miter: &Aig, asg: &[bool]) -> bool {
    miter.evaluate(asg).into_iter().any(|v| v)
}

/// Decides whether every output of `miter` is constant 0.
pub fn sweep(miter: &Aig, cfg: &SweepConfig) -> SweepResult {
    assert!(cfg.threads >= 1, "threads must be at least 1");
    let start = Instant::now();
    let mut run = Run {
        cfg,
        stats: SweepStats::default(),
        interrupt: cfg.timeout.map_or_else(Interrupt::new, Interrupt::with_timeout),
        cnf_dumps: 0,
    };
    let mut log = Vec::new();
    let verdict = sweep_inner(miter, &mut run, &mut log);
    if let Verdict::NonEquivalent(cex) = &verdict {
        assert!(is_counterexample(miter, cex), "counterexample does not expose a difference");
    }
    run.stats.wall_seconds = start.elapsed().as_secs_f64();
    SweepResult {
        verdict,
        stats: run.stats,
        pair_log: log,
    }
}

fn sweep_inner(miter: &Aig, run: &mut Run, log: &mut Vec<PairRecord>) -> Verdict {
    let cfg = run.cfg;
    run.stats.miter_ands = miter.num_ands();
    if miter.outputs().is_empty() {
        return Verdict::Equivalent;
    }
    let reduced = if miter.outputs().len() == 1 {
        miter.clone()
    } else {
        or_reduce_outputs(miter)
    };
    let mut aig = reduced.structural_hash();
    run.stats.strashed_ands = aig.num_ands();
    let n = aig.num_pis();

    let out = aig.outputs()[0];
    if out == Lit::FALSE {
        run.stats.final_ands = 0;
        return Verdict::Equivalent;
    }
    if out == Lit::TRUE {
        run.stats.cex_source = Some(CexSource::Simulation);
        return Verdict::NonEquivalent(vec![false; n]);
    }

    let words = cfg.sim_patterns.div_ceil(WORD_BITS).max(1);
    let mut sigs = simulate_random(&aig, words, cfg.seed);
    run.stats.sim_patterns = sigs.num_patterns();
    if let Some(cex) = check_output_counterexample(&sigs, &aig) {
        run.stats.cex_source = Some(CexSource::Simulation);
        return Verdict::NonEquivalent(cex);
    }

    let mut db = if cfg.isd_enabled { Some(EquivDb::new()) } else { None };
    let mut settled: HashSet<(usize, usize)> = HashSet::new();
    let reference = cfg.check_merges.then(|| output_words(&aig, cfg.seed));
    let mut first_collection = true;

    'collect: loop {
        let pairs = collect_candidate_pairs(&sigs, &aig);
        if first_collection {
            run.stats.candidate_pairs = pairs.len();
            first_collection = false;
        } else {
            run.stats.recollections += 1;
        }
        for pair in pairs {
            if run.interrupt.is_set() {
                break 'collect;
            }
            let (a, b) = (pair.a.node(), pair.b.node());
            if !aig.is_live(b) || !aig.is_and(b) || settled.contains(&(a, b)) {
                continue;
            }
            run.stats.pairs += 1;
            if !aig.is_live(a) {
                aig.revive(a);
            }
            let pair_start = Instant::now();
            let mut record = PairRecord {
                id: log.len(),
                a,
                b,
                antivalent: pair.antivalent,
                gates: 0,
                pis: 0,
                score_xor: None,
                engine: None,
                fallback: false,
                verdict: PairOutcome::Skipped,
                seconds: 0.0,
            };
            let keep = pair.a;
            let drop = pair.b_phased();
            if let Some(db) = db.as_mut() {
                if try_isd_merge(&pair, &aig, db) {
                    run.stats.isd_hits += 1;
                    record.verdict = PairOutcome::Isd;
                    record.seconds = pair_start.elapsed().as_secs_f64();
                    log.push(record);
                    db.record(&aig, a, b, pair.antivalent);
                    merge(&mut aig, keep, drop, run, db, reference.as_deref());
                    continue;
                }
            }
            let cone = miter_tfi_cones(&aig, keep, drop);
            record.gates = cone.aig.num_ands();
            record.pis = cone.num_pis();
            let proof = run.prove_cone(&cone, 1);
            record.score_xor = proof.score;
            record.engine = proof.engine;
            record.fallback = proof.fallback;
            if proof.verdict != EngineVerdict::ResourceOut {
                match proof.engine {
                    Some(Engine::Eps) => run.stats.eps_decided += 1,
                    _ => run.stats.sat_decided += 1,
                }
            }
            match proof.verdict {
                EngineVerdict::Equivalent => {
                    record.verdict = PairOutcome::Equivalent;
                    record.seconds = pair_start.elapsed().as_secs_f64();
                    log.push(record);
                    let mut scratch = EquivDb::new();
                    let db = db.as_mut().unwrap_or(&mut scratch);
                    db.record(&aig, a, b, pair.antivalent);
                    merge(&mut aig, keep, drop, run, db, reference.as_deref());
                }
                EngineVerdict::Counterexample(cone_asg) => {
                    run.stats.refuted_pairs += 1;
                    record.verdict = PairOutcome::NotEquivalent;
                    record.seconds = pair_start.elapsed().as_secs_f64();
                    log.push(record);
                    settled.insert((a, b));
                    let full = cone.lift_assignment(&cone_asg, n);
                    sigs.refine_with_pattern(&aig, &full);
                    run.stats.sim_patterns = sigs.num_patterns();
                    if let Some(cex) = check_output_counterexample(&sigs, &aig) {
                        run.stats.cex_source = Some(CexSource::Refinement);
                        return Verdict::NonEquivalent(cex);
                    }
                    continue 'collect;
                }
                EngineVerdict::ResourceOut => {
                    run.stats.skipped_pairs += 1;
                    record.seconds = pair_start.elapsed().as_secs_f64();
                    log.push(record);
                    settled.insert((a, b));
                }
            }
        }
        break;
    }

    run.stats.final_ands = aig.num_ands();
    let out = aig.outputs()[0];
    if out == Lit::FALSE {
        return Verdict::Equivalent;
    }
    let cone = Cone::of_literal(&aig, out);
    let proof = run.prove_cone(&cone, SAT_ESCALATION);
    run.stats.final_engine = proof.engine;
    match proof.verdict {
        EngineVerdict::Equivalent => Verdict::Equivalent,
        EngineVerdict::Counterexample(a) => {
            run.stats.cex_source = Some(match proof.engine {
                Some(Engine::Eps) => CexSource::Eps,
                Some(Engine::Sat) => CexSource::Sat,
                // the output folded to constant 1; any pattern shows it
                None => CexSource::Simulation,
            });
            Verdict::NonEquivalent(cone.lift_assignment(&a, n))
        }
        EngineVerdict::ResourceOut => Verdict::Unknown,
    }
}

fn merge(aig: &mut Aig, keep: Lit, drop: Lit, run: &mut Run, db: &mut EquivDb, reference: Option<&[bool]>) {
    match aig.merge(keep, drop) {
        Ok(()) => run.stats.merges += 1,
        Err(e) => run.stats.engine_errors.push(format!("merge skipped: {e}")),
    }
    db.invalidate();
    if let Some(r) = reference {
        assert_eq!(output_words(aig, run.cfg.seed), r, "merge of {drop:?} into {keep:?} changed the miter");
    }
}

/// Result of proving every output of a miter separately.
#[derive(Clone, Debug)]
pub struct PerOutputResult {
    pub verdict: Verdict,
    pub first_failing: Option<usize>,
    pub outputs: Vec<SweepResult>,
    pub stats: SweepStats,
}

/// Sweeps the cone of each output on its own and reports the first output
/// that is not constant 0.
pub fn sweep_per_output(miter: &Aig, cfg: &SweepConfig) -> PerOutputResult {
    let mut outputs = Vec::new();
    let mut stats = SweepStats::default();
    let mut first_failing = None;
    let mut unknown = false;
    let mut verdict = Verdict::Equivalent;
    for k in 0..miter.outputs().len() {
        let single = miter.with_outputs(&[k]);
        let r = sweep(&single, cfg);
        stats.absorb(&r.stats);
        match &r.verdict {
            Verdict::NonEquivalent(cex) if first_failing.is_none() => {
                first_failing = Some(k);
                verdict = Verdict::NonEquivalent(cex.clone());
            }
            Verdict::Unknown => unknown = true,
            _ => {}
        }
        outputs.push(r);
    }
    if first_failing.is_none() && unknown {
        verdict = Verdict::Unknown;
    }
    PerOutputResult {
        verdict,
        first_failing,
        outputs,
        stats,
    }
}
