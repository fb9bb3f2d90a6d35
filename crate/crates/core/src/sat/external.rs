// SPDX-License-Identifier: Apache-2.0

//! Adapter for SAT-competition style command-line solvers.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use super::{write_dimacs, Cnf, SatBudget, SatVerdict};

/// A solver invoked as `program args... <file.cnf>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl ExternalSolver {
    /// Splits a command line on whitespace: the first word is the program.
    pub fn from_command_line(cmd: &str) -> Option<ExternalSolver> {
        let mut words = cmd.split_whitespace();
        let program = PathBuf::from(words.next()?);
        Some(ExternalSolver {
            program,
            args: words.map(str::to_string).collect(),
        })
    }
}

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("failed to run {program}: {source}")]
    Spawn {
        program: String,
        #[source]
        source: std::io::Error,
    },
    #[error("I/O error talking to the solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed solver output: {0}")]
    Malformed(String),
    #[error("solver model violates the formula")]
    InvalidModel,
}

/// Writes `cnf` to a temporary DIMACS file, runs the solver on it and parses
/// the `s` / `v` lines. A model is accepted only after checking it against
/// every clause. `s UNKNOWN` and a wall-clock timeout map to `Budget`.
pub fn solve_external(cnf: &Cnf, solver: &ExternalSolver, budget: &SatBudget) -> Result<SatVerdict, ExternalError> {
    let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
    file.write_all(write_dimacs(cnf).as_bytes())?;
    file.flush()?;
    let mut child = Command::new(&solver.program)
        .args(&solver.args)
        .arg(file.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| ExternalError::Spawn {
            program: solver.program.display().to_string(),
            source,
        })?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });
    let deadline = Instant::now() + budget.max_time;
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(SatVerdict::Budget);
        }
        std::thread::sleep(Duration::from_millis(2));
    }
    let out = reader
        .join()
        .map_err(|_| ExternalError::Malformed("reader thread panicked".into()))??;
    parse_solver_output(&out, cnf)
}

/// Parses SAT-competition output and validates any model against `cnf`.
pub fn parse_solver_output(out: &str, cnf: &Cnf) -> Result<SatVerdict, ExternalError> {
    let mut status = None;
    let mut values: Vec<i64> = Vec::new();
    let mut terminated = false;
    for line in out.lines() {
        if let Some(rest) = line.strip_prefix("s ") {
            if status.is_some() {
                return Err(ExternalError::Malformed("multiple status lines".into()));
            }
            status = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            for t in rest.split_whitespace() {
                let x: i64 = t
                    .parse()
                    .map_err(|_| ExternalError::Malformed(format!("bad model literal `{t}`")))?;
                if terminated {
                    return Err(ExternalError::Malformed("model values after terminating 0".into()));
                }
                if x == 0 {
                    terminated = true;
                } else {
                    values.push(x);
                }
            }
        }
    }
    match status.as_deref() {
        Some("UNSATISFIABLE") => Ok(SatVerdict::Unsat),
        Some("UNKNOWN") => Ok(SatVerdict::Budget),
        Some("SATISFIABLE") => {
            let mut model = vec![false; cnf.num_vars];
            for x in values {
                let v = x.unsigned_abs() as usize;
                if v == 0 || v > cnf.num_vars {
                    return Err(ExternalError::Malformed(format!("model variable {v} out of range")));
                }
                model[v - 1] = x > 0;
            }
            if cnf.is_satisfied_by(&model) {
                Ok(SatVerdict::Model(model))
            } else {
                Err(ExternalError::InvalidModel)
            }
        }
        Some(other) => Err(ExternalError::Malformed(format!("unknown status `{other}`"))),
        None => Err(ExternalError::Malformed("no status line".into())),
    }
}
