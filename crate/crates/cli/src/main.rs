// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hybridcec::benchgen::{generate, oracle_check, GenSpec, OracleVerdict, ORACLE_DEFAULT_MAX_PIS};
use hybridcec::eps::EpsConfig;
use hybridcec::netlist::{build_miter, build_output_miter, parse_aiger, write_aiger, write_aiger_binary, Aig};
use hybridcec::report::{per_output_stats_json, stats_json};
use hybridcec::sat::{ExternalSolver, SatBudget};
use hybridcec::sweeper::{sweep, sweep_per_output, EngineOverride, SweepConfig, Verdict};

const EXIT_EQUIVALENT: u8 = 0;
const EXIT_NOT_EQUIVALENT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "hybridcec", version, about = "Combinational equivalence checking with SAT and exact simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a miter, or two circuits with matching PIs and POs.
    Check(CheckArgs),
    /// Generate a benchmark circuit.
    Gen(GenArgs),
    /// Build the miter of two circuits.
    GenMiter(GenMiterArgs),
    /// Exhaustively check a miter, or confirm a counterexample file.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Hybrid,
    Sat,
    Eps,
}

#[derive(Args)]
struct CheckArgs {
    /// Miter AIGER file, or the first circuit when a second one is given.
    input: PathBuf,
    /// Second circuit; the two inputs are mitered.
    other: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "hybrid")]
    engine: EngineArg,
    #[arg(long, default_value_t = 0.15)]
    rho: f64,
    #[arg(long, default_value_t = 20)]
    bits_limit: u32,
    #[arg(long, default_value_t = 36)]
    eps_max_pis: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, env = "HYBRIDCEC_SEED", default_value_t = 1)]
    seed: u64,
    /// Total random simulation patterns.
    #[arg(long, default_value_t = 1 << 20)]
    sim_rounds: usize,
    /// Global time limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// External DIMACS solver command line, e.g. "kissat -q".
    #[arg(long)]
    external_sat: Option<String>,
    /// Directory receiving the CNF of every SAT call.
    #[arg(long)]
    dump_cnf: Option<PathBuf>,
    #[arg(long)]
    stats_json: Option<PathBuf>,
    /// Check each miter output separately.
    #[arg(long)]
    per_output: bool,
    /// Write the counterexample to this file.
    #[arg(long)]
    cex: Option<PathBuf>,
    #[arg(long)]
    no_isd: bool,
    /// Conflict limit of one SAT call.
    #[arg(long, default_value_t = 100_000)]
    sat_conflicts: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    AdderRipple,
    AdderCla,
    MultArray,
    MultColumnwise,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Operand width, or the PI count of a random netlist.
    #[arg(long)]
    width: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// AND gates of a random netlist.
    #[arg(long, default_value_t = 64)]
    ands: usize,
    /// Outputs of a random netlist.
    #[arg(long, default_value_t = 4)]
    outputs: usize,
    /// Apply this many function-preserving rewrite steps.
    #[arg(long, default_value_t = 0)]
    rewrite_steps: usize,
    /// Place this many disjoint copies side by side.
    #[arg(long, default_value_t = 1)]
    copies: usize,
    /// Flip one fan-in so the result differs from the clean circuit.
    #[arg(long)]
    corrupt: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenMiterArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Keep one XOR output per output pair instead of OR-ing them.
    #[arg(long)]
    per_output: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    other: Option<PathBuf>,
    #[arg(long, default_value_t = ORACLE_DEFAULT_MAX_PIS)]
    max_pis: usize,
    /// Instead of enumerating, check that this assignment drives an output
    /// to 1. Prints CONFIRMED (exit 0) or REJECTED (exit 1).
    #[arg(long)]
    cex: Option<PathBuf>,
}

struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn read_aig(path: &Path) -> Result<Aig, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    parse_aiger(&bytes).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn write_aig(path: &Path, aig: &Aig) -> Result<(), CliError> {
    let bytes = if path.extension().is_some_and(|e| e == "aig") {
        write_aiger_binary(aig)
    } else {
        write_aiger(aig)
    };
    fs::write(path, bytes).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load_miter(input: &Path, other: Option<&Path>, per_output: bool) -> Result<Aig, CliError> {
    let a = read_aig(input)?;
    match other {
        None => Ok(a),
        Some(p) => {
            let b = read_aig(p)?;
            Ok(if per_output {
                build_output_miter(&a, &b)?
            } else {
                build_miter(&a, &b)?
            })
        }
    }
}

fn format_assignment(cex: &[bool]) -> String {
    cex.iter()
        .enumerate()
        .map(|(i, &b)| format!("{i}={}\n", b as u8))
        .collect()
}

fn parse_assignment(text: &str, num_pis: usize) -> Result<Vec<bool>, CliError> {
    let mut out = vec![false; num_pis];
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || !line.contains('=') {
            continue;
        }
        let (i, b) = line.split_once('=').unwrap();
        let i: usize = i.trim().parse().map_err(|_| CliError(format!("line {}: bad PI index", n + 1)))?;
        if i >= num_pis {
            return Err(CliError(format!("line {}: PI {i} out of range", n + 1)));
        }
        out[i] = match b.trim() {
            "0" => false,
            "1" => true,
            _ => return Err(CliError(format!("line {}: bit must be 0 or 1", n + 1))),
        };
    }
    Ok(out)
}

fn run_check(args: CheckArgs) -> Result<u8, CliError> {
    if !(0.0..=1.0).contains(&args.rho) {
        return Err(CliError(format!("--rho must be in [0, 1], got {}", args.rho)));
    }
    if args.threads == 0 {
        return Err(CliError("--threads must be at least 1".into()));
    }
    let eps = EpsConfig {
        bits_limit: args.bits_limit,
        max_pis: args.eps_max_pis,
        ..EpsConfig::default()
    };
    eps.validate()?;
    let external_sat = match &args.external_sat {
        Some(cmd) => Some(
            ExternalSolver::from_command_line(cmd).ok_or_else(|| CliError("--external-sat is empty".into()))?,
        ),
        None => None,
    };
    if let Some(dir) = &args.dump_cnf {
        fs::create_dir_all(dir).map_err(|e| CliError(format!("{}: {e}", dir.display())))?;
    }
    let timeout = match args.timeout {
        Some(t) if !(t >= 0.0 && t.is_finite()) => return Err(CliError(format!("bad --timeout {t}"))),
        t => t.map(Duration::from_secs_f64),
    };
    let cfg = SweepConfig {
        rho: args.rho,
        sim_patterns: args.sim_rounds.max(1),
        seed: args.seed,
        sat_budget: SatBudget {
            max_conflicts: args.sat_conflicts,
            ..SatBudget::default()
        },
        eps,
        threads: args.threads,
        isd_enabled: !args.no_isd,
        engine_override: match args.engine {
            EngineArg::Hybrid => EngineOverride::Hybrid,
            EngineArg::Sat => EngineOverride::SatOnly,
            EngineArg::Eps => EngineOverride::EpsOnly,
        },
        external_sat,
        dump_cnf: args.dump_cnf.clone(),
        timeout,
        check_merges: false,
    };
    let miter = load_miter(&args.input, args.other.as_deref(), args.per_output)?;
    let (verdict, stats) = if args.per_output {
        let r = sweep_per_output(&miter, &cfg);
        let s = per_output_stats_json(&r);
        (r.verdict, s)
    } else {
        let r = sweep(&miter, &cfg);
        let s = stats_json(&r);
        (r.verdict, s)
    };
    if let Some(path) = &args.stats_json {
        fs::write(path, stats).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    }
    if let (Some(path), Verdict::NonEquivalent(cex)) = (&args.cex, &verdict) {
        fs::write(path, format_assignment(cex)).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    }
    Ok(match verdict {
        Verdict::Equivalent => {
            println!("EQUIVALENT");
            EXIT_EQUIVALENT
        }
        Verdict::NonEquivalent(cex) => {
            print!("NOT EQUIVALENT\n{}", format_assignment(&cex));
            EXIT_NOT_EQUIVALENT
        }
        Verdict::Unknown => {
            println!("UNKNOWN");
            EXIT_UNKNOWN
        }
    })
}

fn run_gen(args: GenArgs) -> Result<u8, CliError> {
    let mut spec = match args.family {
        Family::AdderRipple => GenSpec::AdderRipple { width: args.width },
        Family::AdderCla => GenSpec::AdderCla { width: args.width },
        Family::MultArray => GenSpec::MultArray { width: args.width },
        Family::MultColumnwise => GenSpec::MultColumnwise { width: args.width },
        Family::Random => GenSpec::Random {
            pis: args.width,
            ands: args.ands,
            outputs: args.outputs,
            seed: args.seed,
        },
    };
    if args.rewrite_steps > 0 {
        spec = GenSpec::Rewrite {
            base: Box::new(spec),
            steps: args.rewrite_steps,
            seed: args.seed,
        };
    }
    if args.copies != 1 {
        spec = GenSpec::Replicated {
            block: Box::new(spec),
            copies: args.copies,
        };
    }
    if args.corrupt {
        spec = GenSpec::Corrupt {
            base: Box::new(spec),
            seed: args.seed,
        };
    }
    write_aig(&args.output, &generate(&spec)?)?;
    Ok(0)
}

fn run_gen_miter(args: GenMiterArgs) -> Result<u8, CliError> {
    let m = load_miter(&args.a, Some(&args.b), args.per_output)?;
    write_aig(&args.output, &m)?;
    Ok(0)
}

fn run_oracle(args: OracleArgs) -> Result<u8, CliError> {
    let miter = load_miter(&args.input, args.other.as_deref(), false)?;
    if let Some(path) = &args.cex {
        let text = fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        let asg = parse_assignment(&text, miter.num_pis())?;
        return Ok(if miter.evaluate(&asg).into_iter().any(|v| v) {
            println!("CONFIRMED");
            0
        } else {
            println!("REJECTED");
            1
        });
    }
    Ok(match oracle_check(&miter, args.max_pis)? {
        OracleVerdict::Equivalent => {
            println!("EQUIVALENT");
            EXIT_EQUIVALENT
        }
        OracleVerdict::Counterexample(cex) => {
            print!("NOT EQUIVALENT\n{}", format_assignment(&cex));
            EXIT_NOT_EQUIVALENT
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Check(a) => run_check(a),
        Command::Gen(a) => run_gen(a),
        Command::GenMiter(a) => run_gen_miter(a),
        Command::Oracle(a) => run_oracle(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
