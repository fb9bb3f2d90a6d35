// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use thiserror::Error;

use super::Cnf;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: expected header `p cnf <vars> <clauses>`")]
    Header { line: usize },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: {msg}")]
    Clause { line: usize, msg: String },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
}

/// DIMACS text: `p cnf V C` then one 0-terminated clause per line.
pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut s = String::new();
    writeln!(s, "p cnf {} {}", cnf.num_vars, cnf.clauses.len()).unwrap();
    for c in &cnf.clauses {
        for l in c {
            write!(s, "{l} ").unwrap();
        }
        s.push_str("0\n");
    }
    s
}

/// Strict reader: optional `c` comment lines, exactly one `p cnf V C` header
/// with single spaces, then exactly `C` non-empty clauses, one per line, each
/// terminated by a single trailing `0` and using variables in `1..=V`.
pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.starts_with('c') && (raw.len() == 1 || raw.as_bytes()[1] == b' ') {
            continue;
        }
        let Some((vars, _)) = header else {
            header = Some(parse_header(raw).ok_or(DimacsError::Header { line })?);
            continue;
        };
        let err = |msg: &str| DimacsError::Clause {
            line,
            msg: msg.to_string(),
        };
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let (&last, body) = toks.split_last().ok_or_else(|| err("empty line"))?;
        if last != "0" {
            return Err(err("clause must end with 0"));
        }
        if body.is_empty() {
            return Err(err("empty clause"));
        }
        let mut clause = Vec::with_capacity(body.len());
        for t in body {
            let l: i32 = t.parse().map_err(|_| err(&format!("bad literal `{t}`")))?;
            if l == 0 {
                return Err(err("0 inside clause"));
            }
            if l.unsigned_abs() as usize > vars {
                return Err(err(&format!("variable {} exceeds {vars}", l.unsigned_abs())));
            }
            clause.push(l);
        }
        clauses.push(clause);
    }
    let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if declared != clauses.len() {
        return Err(DimacsError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    Ok(Cnf {
        num_vars,
        clauses,
        var_map: Vec::new(),
    })
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix("p cnf ")?;
    let (v, c) = rest.split_once(' ')?;
    let num = |s: &str| (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())).then(|| s.parse().ok()).flatten();
    Some((num(v)?, num(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cnf = Cnf {
            num_vars: 3,
            clauses: vec![vec![1, -2], vec![3], vec![-1, 2, -3]],
            var_map: Vec::new(),
        };
        let text = write_dimacs(&cnf);
        assert!(text.starts_with("p cnf 3 3\n"));
        assert_eq!(parse_dimacs(&text).unwrap(), cnf);
        let commented = format!("c hello\nc\n{text}");
        assert_eq!(parse_dimacs(&commented).unwrap(), cnf);
    }

    #[test]
    fn strictness() {
        assert_eq!(parse_dimacs("p cnf 2\n").unwrap_err(), DimacsError::Header { line: 1 });
        assert_eq!(parse_dimacs("p  cnf 2 1\n1 0\n").unwrap_err(), DimacsError::Header { line: 1 });
        assert_eq!(parse_dimacs("").unwrap_err(), DimacsError::MissingHeader);
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2\n"), Err(DimacsError::Clause { line: 2, .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n3 0\n"), Err(DimacsError::Clause { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n0\n"), Err(DimacsError::Clause { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 0 2 0\n"), Err(DimacsError::Clause { .. })));
        assert_eq!(
            parse_dimacs("p cnf 2 2\n1 0\n").unwrap_err(),
            DimacsError::ClauseCount { declared: 2, found: 1 }
        );
    }
}
