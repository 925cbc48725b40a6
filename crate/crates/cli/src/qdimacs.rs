//! QDIMACS input for 2QBF specifications, and the matching printer.
//!
//! Accepted shape: comments, a `p cnf` header, an optional block of `a`
//! lines followed by an optional block of `e` lines, then clauses. Inputs
//! are the universally quantified variables plus the free (unquantified)
//! ones; outputs are the existentially quantified variables.

use skolem_core::{Lit, Spec, Var};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {0}: malformed header (expected `p cnf <vars> <clauses>`)")]
    BadHeader(usize),
    #[error("line {0}: content before the problem header")]
    MissingHeader(usize),
    #[error("line {0}: duplicate problem header")]
    DuplicateHeader(usize),
    #[error("line {0}: bad token `{1}`")]
    BadToken(usize, String),
    #[error("line {0}: variable {1} exceeds the declared count")]
    VarOutOfRange(usize, u32),
    #[error("line {0}: variable {1} quantified twice")]
    DuplicateQuantifier(usize, u32),
    #[error("line {0}: quantifier line not terminated by 0")]
    UnterminatedQuantifier(usize),
    #[error("line {0}: `{1}` quantifier after clauses or out of prefix order (only a-then-e is 2QBF)")]
    PrefixShape(usize, char),
    #[error("line {0}: empty clause (the formula is trivially unsatisfiable)")]
    EmptyClause(usize),
    #[error("unterminated clause at end of input")]
    UnterminatedClause,
    #[error("header declares {expected} clauses but {found} were read")]
    ClauseCount { expected: usize, found: usize },
    #[error("{0}")]
    Spec(String),
}

pub fn parse(text: &str) -> Result<Spec, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut universal: Vec<Var> = Vec::new();
    let mut existential: Vec<Var> = Vec::new();
    let mut quantified = std::collections::BTreeSet::new();
    let mut seen_e = false;
    let mut in_clauses = false;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut clause_open = false;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(ParseError::DuplicateHeader(ln));
            }
            let mut it = rest.split_whitespace();
            match (it.next(), it.next(), it.next(), it.next()) {
                (Some("cnf"), Some(nv), Some(nc), None) => {
                    let nv: u32 = nv.parse().map_err(|_| ParseError::BadHeader(ln))?;
                    let nc: usize = nc.parse().map_err(|_| ParseError::BadHeader(ln))?;
                    header = Some((nv, nc));
                }
                _ => return Err(ParseError::BadHeader(ln)),
            }
            continue;
        }
        let (nv, _) = header.ok_or(ParseError::MissingHeader(ln))?;
        if line.starts_with('a') || line.starts_with('e') {
            let kind = line.chars().next().unwrap();
            if in_clauses || (kind == 'a' && seen_e) {
                return Err(ParseError::PrefixShape(ln, kind));
            }
            if kind == 'e' {
                seen_e = true;
            }
            let mut terminated = false;
            for tok in line[1..].split_whitespace() {
                let n: i64 = tok
                    .parse()
                    .map_err(|_| ParseError::BadToken(ln, tok.to_string()))?;
                if n == 0 {
                    terminated = true;
                    break;
                }
                if n < 0 {
                    return Err(ParseError::BadToken(ln, tok.to_string()));
                }
                let id = n as u32;
                if id > nv {
                    return Err(ParseError::VarOutOfRange(ln, id));
                }
                if !quantified.insert(id) {
                    return Err(ParseError::DuplicateQuantifier(ln, id));
                }
                if kind == 'a' {
                    universal.push(Var::new(id));
                } else {
                    existential.push(Var::new(id));
                }
            }
            if !terminated {
                return Err(ParseError::UnterminatedQuantifier(ln));
            }
            continue;
        }
        // clause tokens; clauses may span lines and share them
        in_clauses = true;
        for tok in line.split_whitespace() {
            let n: i64 = tok
                .parse()
                .map_err(|_| ParseError::BadToken(ln, tok.to_string()))?;
            if n == 0 {
                if current.is_empty() {
                    return Err(ParseError::EmptyClause(ln));
                }
                clauses.push(std::mem::take(&mut current));
                clause_open = false;
            } else {
                let id = n.unsigned_abs() as u32;
                if id > nv {
                    return Err(ParseError::VarOutOfRange(ln, id));
                }
                current.push(Lit::from_dimacs(n as i32));
                clause_open = true;
            }
        }
    }
    if clause_open {
        return Err(ParseError::UnterminatedClause);
    }
    let (nv, nc) = header.ok_or(ParseError::MissingHeader(1))?;
    if clauses.len() != nc {
        return Err(ParseError::ClauseCount {
            expected: nc,
            found: clauses.len(),
        });
    }
    // free variables are inputs, appended in ascending id order
    let mut inputs = universal;
    for id in 1..=nv {
        if !quantified.contains(&id) {
            inputs.push(Var::new(id));
        }
    }
    Spec::new(nv, clauses, inputs, existential).map_err(|e| ParseError::Spec(e.to_string()))
}

/// Prints a specification in the accepted QDIMACS shape; `parse ∘ print` is
/// the identity on parsed specifications.
pub fn print(spec: &Spec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", spec.num_vars(), spec.clauses().len());
    if !spec.inputs().is_empty() {
        out.push('a');
        for v in spec.inputs() {
            let _ = write!(out, " {v}");
        }
        out.push_str(" 0\n");
    }
    if !spec.outputs().is_empty() {
        out.push('e');
        for v in spec.outputs() {
            let _ = write!(out, " {v}");
        }
        out.push_str(" 0\n");
    }
    for c in spec.clauses() {
        for l in c.lits() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}
