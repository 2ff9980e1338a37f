//! Line-oriented input file formats.
//!
//! Theory files (UTF-8, `#` starts a comment):
//!
//! ```text
//! prop a, a', b                      # optional; fixes the signature order
//! fact a
//! fact a'
//! default d1: a :: b / b             # name: prereq :: just, just, ... / consequent
//! default d2: a' :: !b / !b
//! threshold b                        # candidate formulas for thresholding
//! threshold !b
//! ```
//!
//! Without a `prop` line the signature is inferred from the formulas in
//! first-encounter order. When present, the `prop` line must precede every
//! formula-bearing line. An empty prerequisite is written `true`; the
//! justification list may be empty (`default d: a :: / c`).
//!
//! Weight files:
//!
//! ```text
//! default_weight 1                   # optional, at most once
//! weight a=1 a'=1 b=0 : 99           # full assignment, then the weight
//! ```
//!
//! Rationals are written `N`, `N/D`, or as finite decimals.

use crate::defaults::{DefaultRule, DefaultTheory};
use crate::error::{Error, Result, SyntaxError};
use crate::formula::Formula;
use crate::model::WorldModel;
use crate::parser::{is_valid_identifier, parse_formula, parse_formula_inferring};
use crate::rational::{parse_rational, Rational};
use crate::worlds::{Signature, DEFAULT_PROP_CAP};

/// A parsed theory file: the default theory plus any threshold formulas.
#[derive(Clone, Debug)]
pub struct TheoryFile {
    pub theory: DefaultTheory,
    pub thresholds: Vec<Formula>,
}

/// Character offset of `sub` (a slice of `line`) from the start of `line`.
fn char_offset(line: &str, sub: &str) -> usize {
    let byte = (sub.as_ptr() as usize).wrapping_sub(line.as_ptr() as usize);
    if byte > line.len() {
        return 0; // `sub` does not point into `line`
    }
    line[..byte].chars().count()
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

enum Mode<'a> {
    Fixed(&'a Signature),
    Infer(&'a mut Vec<String>),
}

/// Parse one formula segment of a file line, adjusting error positions to
/// the enclosing file line and column.
fn parse_segment(seg: &str, line: &str, line_no: usize, mode: &mut Mode) -> Result<Formula> {
    let col_base = char_offset(line, seg);
    let adjust = |err: Error| -> Error {
        match err {
            Error::Syntax(e) => SyntaxError::new(line_no, col_base + e.column, e.message).into(),
            other => other.at_line(line_no),
        }
    };
    match mode {
        Mode::Fixed(sig) => parse_formula(seg, sig).map_err(adjust),
        Mode::Infer(order) => {
            let (f, atoms) = parse_formula_inferring(seg).map_err(adjust)?;
            for a in atoms {
                if !order.iter().any(|n| n == &a) {
                    order.push(a);
                }
            }
            Ok(f)
        }
    }
}

/// Parse a theory file under the default proposition cap.
pub fn parse_theory_file(text: &str) -> Result<TheoryFile> {
    parse_theory_file_with_cap(text, DEFAULT_PROP_CAP)
}

/// Parse a theory file with an explicit proposition-cap override.
pub fn parse_theory_file_with_cap(text: &str, cap: usize) -> Result<TheoryFile> {
    let mut declared: Option<Signature> = None;
    let mut inferred: Vec<String> = Vec::new();
    let mut saw_formula = false;

    struct PendingRule {
        name: String,
        prerequisite: Formula,
        justifications: Vec<Formula>,
        consequent: Formula,
    }
    let mut facts: Vec<Formula> = Vec::new();
    let mut rules: Vec<PendingRule> = Vec::new();
    let mut thresholds: Vec<(usize, Formula)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (directive, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r),
            None => (trimmed, &trimmed[trimmed.len()..]),
        };
        // a single mode for the rest of the file: fixed iff `prop` came first
        let mut mode = match &declared {
            Some(sig) => Mode::Fixed(sig),
            None => Mode::Infer(&mut inferred),
        };
        match directive {
            "prop" => {
                if declared.is_some() {
                    return Err(Error::Syntax(SyntaxError::new(
                        line_no,
                        1,
                        "duplicate `prop` line",
                    )));
                }
                if saw_formula {
                    return Err(Error::Syntax(SyntaxError::new(
                        line_no,
                        1,
                        "`prop` line must precede all formulas",
                    )));
                }
                let names: Vec<String> =
                    rest.split(',').map(|n| n.trim().to_string()).collect();
                declared = Some(Signature::with_cap(names, cap).map_err(|e| e.at_line(line_no))?);
            }
            "fact" => {
                saw_formula = true;
                facts.push(parse_segment(rest, line, line_no, &mut mode)?);
            }
            "default" => {
                saw_formula = true;
                let (name_part, body) = rest.split_once(':').ok_or_else(|| {
                    Error::Syntax(SyntaxError::new(line_no, 1, "expected `:` after rule name"))
                })?;
                let name = name_part.trim().to_string();
                if !is_valid_identifier(&name) {
                    return Err(Error::InvalidName(name).at_line(line_no));
                }
                if rules.iter().any(|r| r.name == name) {
                    return Err(Error::DuplicateRuleName(name).at_line(line_no));
                }
                let (prereq_part, tail) = body.split_once("::").ok_or_else(|| {
                    Error::Syntax(SyntaxError::new(
                        line_no,
                        1,
                        "expected `::` between prerequisite and justifications",
                    ))
                })?;
                let (justs_part, conseq_part) = tail.split_once('/').ok_or_else(|| {
                    Error::Syntax(SyntaxError::new(
                        line_no,
                        1,
                        "expected `/` before the consequent",
                    ))
                })?;
                let prerequisite = parse_segment(prereq_part, line, line_no, &mut mode)?;
                let mut justifications = Vec::new();
                if !justs_part.trim().is_empty() {
                    for piece in justs_part.split(',') {
                        justifications.push(parse_segment(piece, line, line_no, &mut mode)?);
                    }
                }
                let consequent = parse_segment(conseq_part, line, line_no, &mut mode)?;
                rules.push(PendingRule {
                    name,
                    prerequisite,
                    justifications,
                    consequent,
                });
            }
            "threshold" => {
                saw_formula = true;
                let f = parse_segment(rest, line, line_no, &mut mode)?;
                if thresholds.iter().any(|(_, t)| *t == f) {
                    return Err(Error::DuplicateThreshold(f.to_string()).at_line(line_no));
                }
                thresholds.push((line_no, f));
            }
            other => {
                return Err(Error::Syntax(SyntaxError::new(
                    line_no,
                    1,
                    format!("unknown directive `{other}`"),
                )));
            }
        }
    }

    let sig = match declared {
        Some(sig) => sig,
        None => Signature::with_cap(inferred, cap)?,
    };
    let defaults: Vec<DefaultRule> = rules
        .into_iter()
        .map(|r| DefaultRule::new(r.name, r.prerequisite, r.justifications, r.consequent))
        .collect();
    let theory = DefaultTheory::new(sig, facts, defaults)?;
    Ok(TheoryFile {
        theory,
        thresholds: thresholds.into_iter().map(|(_, f)| f).collect(),
    })
}

/// Parse a weight file against the theory's signature.
pub fn parse_weights_file(text: &str, sig: &Signature) -> Result<WorldModel> {
    let mut default_weight: Option<Rational> = None;
    let mut entries: Vec<(u64, Rational)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (directive, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r),
            None => (trimmed, &trimmed[trimmed.len()..]),
        };
        match directive {
            "default_weight" => {
                if default_weight.is_some() {
                    return Err(Error::Syntax(SyntaxError::new(
                        line_no,
                        1,
                        "duplicate `default_weight` line",
                    )));
                }
                default_weight = Some(parse_rational(rest).map_err(|e| e.at_line(line_no))?);
            }
            "weight" => {
                let (assign_part, weight_part) = rest.split_once(':').ok_or_else(|| {
                    Error::Syntax(SyntaxError::new(
                        line_no,
                        1,
                        "expected `:` before the weight value",
                    ))
                })?;
                let mut assignment: Vec<(String, bool)> = Vec::new();
                for piece in assign_part.split_whitespace() {
                    let (name, value) = piece.split_once('=').ok_or_else(|| {
                        Error::Syntax(SyntaxError::new(
                            line_no,
                            1,
                            format!("expected `prop=0|1`, found `{piece}`"),
                        ))
                    })?;
                    let value = match value {
                        "0" => false,
                        "1" => true,
                        other => {
                            return Err(Error::Syntax(SyntaxError::new(
                                line_no,
                                1,
                                format!("truth value must be 0 or 1, found `{other}`"),
                            )));
                        }
                    };
                    assignment.push((name.to_string(), value));
                }
                let id = sig
                    .world_id_of(&assignment)
                    .map_err(|e| e.at_line(line_no))?;
                if entries.iter().any(|(seen, _)| *seen == id) {
                    return Err(Error::DuplicateWeightEntry {
                        world: sig.world(id).to_string(),
                    }
                    .at_line(line_no));
                }
                let weight = parse_rational(weight_part).map_err(|e| e.at_line(line_no))?;
                entries.push((id, weight));
            }
            other => {
                return Err(Error::Syntax(SyntaxError::new(
                    line_no,
                    1,
                    format!("unknown directive `{other}`"),
                )));
            }
        }
    }
    let default_weight =
        default_weight.unwrap_or_else(|| Rational::from_integer(num_bigint::BigInt::from(1)));
    WorldModel::build(sig.clone(), entries, default_weight)
}
