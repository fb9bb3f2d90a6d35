// SPDX-License-Identifier: Apache-2.0

//! AIGER reader (ASCII `aag` and binary `aig`) and writers.
//!
//! Only combinational files are accepted. Variables are renumbered so that
//! PIs take indices `1..=I` in declaration order and AND gates follow in a
//! topological order; symbol tables and comments are skipped.

use std::collections::HashMap;

use thiserror::Error;

use super::{Aig, Lit, Node};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AigerError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("byte {offset}: {msg}")]
    Binary { offset: usize, msg: String },
    #[error("line {line}: sequential netlists are not supported ({count} latches)")]
    Latches { line: usize, count: u64 },
    #[error("line {line}: literal {lit} references an undefined variable")]
    Dangling { line: usize, lit: u64 },
    #[error("combinational cycle through variable {var}")]
    Cycle { var: u64 },
}

fn syntax(line: usize, msg: impl Into<String>) -> AigerError {
    AigerError::Syntax {
        line,
        msg: msg.into(),
    }
}

struct Header {
    binary: bool,
    max_var: u64,
    inputs: u64,
    outputs: u64,
    ands: u64,
}

fn parse_header(line: &str) -> Result<Header, AigerError> {
    let mut fields = line.split_ascii_whitespace();
    let binary = match fields.next() {
        Some("aag") => false,
        Some("aig") => true,
        Some(other) => return Err(syntax(1, format!("unknown format tag '{other}'"))),
        None => return Err(syntax(1, "empty header")),
    };
    let nums = fields
        .map(|f| {
            f.parse::<u64>()
                .map_err(|_| syntax(1, format!("invalid header field '{f}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if nums.len() < 5 {
        return Err(syntax(1, "header needs M I L O A"));
    }
    if nums[2] != 0 {
        return Err(AigerError::Latches {
            line: 1,
            count: nums[2],
        });
    }
    // AIGER 1.9 B C J F: bad states and constraints make no sense here.
    if nums[5..].iter().any(|&n| n != 0) {
        return Err(syntax(1, "bad-state, constraint, justice and fairness sections are not supported"));
    }
    let h = Header {
        binary,
        max_var: nums[0],
        inputs: nums[1],
        outputs: nums[3],
        ands: nums[4],
    };
    if h.inputs + h.ands > h.max_var {
        return Err(syntax(1, "M is smaller than I + L + A"));
    }
    if binary && h.inputs + h.ands != h.max_var {
        return Err(syntax(1, "binary format requires M = I + L + A"));
    }
    Ok(h)
}

/// Parses an AIGER file in either ASCII or binary form.
pub fn parse_aiger(bytes: &[u8]) -> Result<Aig, AigerError> {
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .unwrap_or(bytes.len());
    let header_line = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| syntax(1, "header is not valid UTF-8"))?;
    let header = parse_header(header_line.trim_end_matches('\r'))?;
    if header.binary {
        parse_binary(bytes, header_end + 1, &header)
    } else {
        parse_ascii(bytes, &header)
    }
}

fn parse_lit(tok: &str, line: usize) -> Result<u64, AigerError> {
    tok.parse::<u64>()
        .map_err(|_| syntax(line, format!("invalid literal '{tok}'")))
}

/// Reads the line-oriented body as (line number, fields) tuples.
fn next_fields<'a, I>(lines: &mut I, want: usize, what: &str) -> Result<(usize, Vec<u64>), AigerError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (no, text) = lines
        .next()
        .ok_or_else(|| syntax(0, format!("unexpected end of file while reading {what}")))?;
    let toks: Vec<&str> = text.split_ascii_whitespace().collect();
    if toks.len() != want {
        return Err(syntax(no, format!("{what} line needs {want} field(s)")));
    }
    let vals = toks
        .iter()
        .map(|t| parse_lit(t, no))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((no, vals))
}

fn parse_ascii(bytes: &[u8], h: &Header) -> Result<Aig, AigerError> {
    let text = std::str::from_utf8(bytes).map_err(|_| syntax(0, "ASCII AIGER must be valid UTF-8"))?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .skip(1);

    let mut input_vars = Vec::with_capacity(h.inputs as usize);
    // var -> (line, rhs0, rhs1)
    let mut and_defs: HashMap<u64, (usize, u64, u64)> = HashMap::new();
    let mut defined: HashMap<u64, usize> = HashMap::new();

    for _ in 0..h.inputs {
        let (no, v) = next_fields(&mut lines, 1, "input")?;
        let lit = v[0];
        if lit < 2 || lit & 1 == 1 || lit / 2 > h.max_var {
            return Err(syntax(no, format!("invalid input literal {lit}")));
        }
        if defined.insert(lit / 2, no).is_some() {
            return Err(syntax(no, format!("variable {} defined twice", lit / 2)));
        }
        input_vars.push(lit / 2);
    }
    let mut output_lits = Vec::with_capacity(h.outputs as usize);
    for _ in 0..h.outputs {
        let (no, v) = next_fields(&mut lines, 1, "output")?;
        output_lits.push((no, v[0]));
    }
    let mut and_order = Vec::with_capacity(h.ands as usize);
    for _ in 0..h.ands {
        let (no, v) = next_fields(&mut lines, 3, "AND")?;
        let lhs = v[0];
        if lhs < 2 || lhs & 1 == 1 || lhs / 2 > h.max_var {
            return Err(syntax(no, format!("invalid AND output literal {lhs}")));
        }
        if defined.insert(lhs / 2, no).is_some() {
            return Err(syntax(no, format!("variable {} defined twice", lhs / 2)));
        }
        and_defs.insert(lhs / 2, (no, v[1], v[2]));
        and_order.push(lhs / 2);
    }

    let check_ref = |lit: u64, no: usize| -> Result<(), AigerError> {
        if lit / 2 == 0 || defined.contains_key(&(lit / 2)) {
            Ok(())
        } else {
            Err(AigerError::Dangling { line: no, lit })
        }
    };
    for &(no, lit) in &output_lits {
        check_ref(lit, no)?;
    }
    for &(no, r0, r1) in and_defs.values() {
        check_ref(r0, no)?;
        check_ref(r1, no)?;
    }

    let mut aig = Aig::new(input_vars.len());
    let mut map: HashMap<u64, usize> = HashMap::new();
    map.insert(0, 0);
    for (j, &v) in input_vars.iter().enumerate() {
        map.insert(v, j + 1);
    }

    // Iterative DFS so that AND gates may appear in any order in the file.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<u64, Mark> = HashMap::new();
    for &root in &and_order {
        if marks.contains_key(&root) {
            continue;
        }
        let mut stack = vec![(root, false)];
        while let Some((var, expanded)) = stack.pop() {
            let (_, r0, r1) = and_defs[&var];
            if expanded {
                let f0 = Lit::from_code((map[&(r0 / 2)] as u32) << 1 | (r0 & 1) as u32);
                let f1 = Lit::from_code((map[&(r1 / 2)] as u32) << 1 | (r1 & 1) as u32);
                let lit = aig.add_and(f0, f1);
                map.insert(var, lit.node());
                marks.insert(var, Mark::Done);
                continue;
            }
            match marks.get(&var) {
                Some(Mark::Done) => continue,
                Some(Mark::Open) => return Err(AigerError::Cycle { var }),
                None => {}
            }
            marks.insert(var, Mark::Open);
            stack.push((var, true));
            for child in [r1 / 2, r0 / 2] {
                if and_defs.contains_key(&child) {
                    match marks.get(&child) {
                        Some(Mark::Done) => {}
                        Some(Mark::Open) => return Err(AigerError::Cycle { var: child }),
                        None => stack.push((child, false)),
                    }
                }
            }
        }
    }

    for &(_, lit) in &output_lits {
        let node = map[&(lit / 2)];
        aig.add_output(Lit::new(node, lit & 1 == 1));
    }
    Ok(aig)
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> Result<u64, AigerError> {
    let start = *pos;
    let mut value: u64 = 0;
    let mut shift = 0;
    loop {
        let Some(&b) = bytes.get(*pos) else {
            return Err(AigerError::Binary {
                offset: start,
                msg: "truncated delta encoding".into(),
            });
        };
        *pos += 1;
        if shift > 63 {
            return Err(AigerError::Binary {
                offset: start,
                msg: "delta encoding overflows 64 bits".into(),
            });
        }
        value |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            return Ok(value);
        }
        shift += 7;
    }
}

fn parse_binary(bytes: &[u8], mut pos: usize, h: &Header) -> Result<Aig, AigerError> {
    let mut aig = Aig::new(h.inputs as usize);
    let mut outputs = Vec::with_capacity(h.outputs as usize);
    for k in 0..h.outputs {
        let end = bytes[pos.min(bytes.len())..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|p| pos + p)
            .ok_or_else(|| syntax(k as usize + 2, "unterminated output line"))?;
        let text = std::str::from_utf8(&bytes[pos..end]).map_err(|_| syntax(k as usize + 2, "invalid output line"))?;
        let lit = parse_lit(text.trim(), k as usize + 2)?;
        if lit / 2 > h.max_var {
            return Err(AigerError::Dangling {
                line: k as usize + 2,
                lit,
            });
        }
        outputs.push(lit);
        pos = end + 1;
    }
    for i in 0..h.ands {
        let lhs = 2 * (h.inputs + i + 1);
        let at = pos;
        let d0 = read_varint(bytes, &mut pos)?;
        let d1 = read_varint(bytes, &mut pos)?;
        if d0 == 0 || d0 > lhs {
            return Err(AigerError::Binary {
                offset: at,
                msg: format!("invalid first delta {d0} for AND literal {lhs}"),
            });
        }
        let r0 = lhs - d0;
        if d1 > r0 {
            return Err(AigerError::Binary {
                offset: at,
                msg: format!("invalid second delta {d1} for AND literal {lhs}"),
            });
        }
        let r1 = r0 - d1;
        aig.add_and(Lit::from_code(r0 as u32), Lit::from_code(r1 as u32));
    }
    for lit in outputs {
        aig.add_output(Lit::from_code(lit as u32));
    }
    Ok(aig)
}

/// Compacts live nodes into consecutive AIGER variables.
fn live_numbering(aig: &Aig) -> (Vec<u32>, Vec<usize>) {
    let mut var_of = vec![u32::MAX; aig.num_nodes()];
    var_of[0] = 0;
    let mut ands = Vec::new();
    let mut next = 1u32;
    for (idx, var) in var_of.iter_mut().enumerate().skip(1) {
        if aig.is_pi(idx) || aig.is_live(idx) {
            *var = next;
            next += 1;
            if aig.is_and(idx) {
                ands.push(idx);
            }
        }
    }
    (var_of, ands)
}

fn encode(var_of: &[u32], lit: Lit) -> u32 {
    let v = var_of[lit.node()];
    debug_assert!(v != u32::MAX, "live node references a dead node");
    v << 1 | lit.is_inverted() as u32
}

/// Writes ASCII AIGER. Dead nodes are dropped and the rest renumbered.
pub fn write_aiger(aig: &Aig) -> Vec<u8> {
    use std::fmt::Write;
    let (var_of, ands) = live_numbering(aig);
    let mut s = String::new();
    let max_var = aig.num_pis() + ands.len();
    let _ = writeln!(
        s,
        "aag {} {} 0 {} {}",
        max_var,
        aig.num_pis(),
        aig.outputs().len(),
        ands.len()
    );
    for j in 0..aig.num_pis() {
        let _ = writeln!(s, "{}", 2 * (j + 1));
    }
    for &o in aig.outputs() {
        let _ = writeln!(s, "{}", encode(&var_of, o));
    }
    for &idx in &ands {
        if let Node::And(g) = aig.node(idx) {
            let _ = writeln!(
                s,
                "{} {} {}",
                var_of[idx] << 1,
                encode(&var_of, g.fanin0),
                encode(&var_of, g.fanin1)
            );
        }
    }
    s.into_bytes()
}

fn write_varint(out: &mut Vec<u8>, mut x: u32) {
    while x & !0x7f != 0 {
        out.push((x & 0x7f) as u8 | 0x80);
        x >>= 7;
    }
    out.push(x as u8);
}

/// Writes binary AIGER with the standard delta encoding.
pub fn write_aiger_binary(aig: &Aig) -> Vec<u8> {
    let (var_of, ands) = live_numbering(aig);
    let mut out = format!(
        "aig {} {} 0 {} {}\n",
        aig.num_pis() + ands.len(),
        aig.num_pis(),
        aig.outputs().len(),
        ands.len()
    )
    .into_bytes();
    for &o in aig.outputs() {
        out.extend_from_slice(format!("{}\n", encode(&var_of, o)).as_bytes());
    }
    for &idx in &ands {
        if let Node::And(g) = aig.node(idx) {
            let lhs = var_of[idx] << 1;
            let (mut r0, mut r1) = (encode(&var_of, g.fanin0), encode(&var_of, g.fanin1));
            if r0 < r1 {
                std::mem::swap(&mut r0, &mut r1);
            }
            write_varint(&mut out, lhs - r0);
            write_varint(&mut out, r0 - r1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passthrough() {
        let aig = parse_aiger(b"aag 1 1 0 1 0\n2\n2\n").unwrap();
        assert_eq!(aig.num_pis(), 1);
        assert_eq!(aig.outputs(), &[Lit::new(1, false)]);
        assert_eq!(write_aiger(&aig), b"aag 1 1 0 1 0\n2\n2\n");
    }

    #[test]
    fn and_of_two_inputs() {
        let aig = parse_aiger(b"aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n").unwrap();
        assert_eq!(aig.num_ands(), 1);
        assert_eq!(aig.fanins(3), Some((Lit::new(1, false), Lit::new(2, false))));
        assert_eq!(aig.outputs(), &[Lit::new(3, false)]);
    }

    #[test]
    fn binary_matches_ascii() {
        // lhs 6, rhs 4 and 2: deltas 2 and 2.
        let bin = b"aig 3 2 0 1 1\n6\n\x02\x02";
        let a = parse_aiger(bin).unwrap();
        let b = parse_aiger(b"aag 3 2 0 1 1\n2\n4\n6\n6 4 2\n").unwrap();
        assert_eq!(a.fanins(3), b.fanins(3));
        assert_eq!(a.outputs(), b.outputs());
        assert_eq!(write_aiger_binary(&b), bin.to_vec());
    }

    #[test]
    fn empty_outputs() {
        let aig = Aig::new(2);
        assert_eq!(write_aiger(&aig), b"aag 2 2 0 0 0\n2\n4\n");
    }

    #[test]
    fn constant_outputs() {
        let aig = parse_aiger(b"aag 0 0 0 2 0\n0\n1\n").unwrap();
        assert_eq!(aig.outputs(), &[Lit::FALSE, Lit::TRUE]);
    }

    #[test]
    fn out_of_order_ands_are_sorted() {
        let aig = parse_aiger(b"aag 4 2 0 1 2\n2\n4\n8\n8 6 2\n6 2 4\n").unwrap();
        for idx in aig.and_indices() {
            let (a, b) = aig.fanins(idx).unwrap();
            assert!(a.node() < idx && b.node() < idx);
        }
        assert_eq!(aig.evaluate(&[true, true]), vec![true]);
        assert_eq!(aig.evaluate(&[true, false]), vec![false]);
    }

    #[test]
    fn symbols_and_comments_are_skipped() {
        let src = b"aag 3 2 0 1 1\n2\n4\n6\n6 2 4\ni0 x\ni1 y\no0 z\nc\nanything goes\n";
        assert_eq!(parse_aiger(src).unwrap().num_ands(), 1);
    }

    #[test]
    fn latches_rejected() {
        let err = parse_aiger(b"aag 1 0 1 0 0\n2 3\n").unwrap_err();
        assert_eq!(err, AigerError::Latches { line: 1, count: 1 });
    }

    #[test]
    fn malformed_header() {
        assert!(matches!(parse_aiger(b"aag 1 x 0 1 0\n"), Err(AigerError::Syntax { line: 1, .. })));
        assert!(matches!(parse_aiger(b"foo 1 1 0 1 0\n"), Err(AigerError::Syntax { line: 1, .. })));
        assert!(matches!(parse_aiger(b"aag 1 1 0\n"), Err(AigerError::Syntax { line: 1, .. })));
    }

    #[test]
    fn dangling_literal_reports_line() {
        let err = parse_aiger(b"aag 3 2 0 1 1\n2\n4\n6\n6 2 8\n").unwrap_err();
        assert_eq!(err, AigerError::Dangling { line: 5, lit: 8 });
        let err = parse_aiger(b"aag 4 2 0 1 1\n2\n4\n6\n6 2 8\n").unwrap_err();
        assert_eq!(err, AigerError::Dangling { line: 5, lit: 8 });
    }

    #[test]
    fn cycle_detected() {
        let err = parse_aiger(b"aag 4 1 0 1 2\n2\n6\n6 8 2\n8 6 2\n").unwrap_err();
        assert!(matches!(err, AigerError::Cycle { .. }));
    }

    #[test]
    fn truncated_binary() {
        let err = parse_aiger(b"aig 3 2 0 1 1\n6\n\x82").unwrap_err();
        assert!(matches!(err, AigerError::Binary { .. }));
    }
}
