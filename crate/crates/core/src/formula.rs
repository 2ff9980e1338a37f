//! Propositional formula AST and its printer.
//!
//! The concrete grammar (see [`crate::parser`]) uses `!`, `&`, `|`, `->`,
//! `<->` with that precedence order, `true`/`false` constants, and
//! parentheses. `Display` emits the same grammar with minimal parentheses,
//! so printing and re-parsing round-trips exactly.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// All atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.as_str());
            }
            Formula::Top | Formula::Bottom => {}
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Flatten a tree of conjunctions into its conjuncts.
    /// A non-conjunction is its own single conjunct.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => 6,
            Formula::Not(_) => 5,
            Formula::And(..) => 4,
            Formula::Or(..) => 3,
            Formula::Implies(..) => 2,
            Formula::Iff(..) => 1,
        }
    }
}

fn write_prec(f: &mut fmt::Formatter<'_>, node: &Formula, min: u8) -> fmt::Result {
    let parens = node.precedence() < min;
    if parens {
        write!(f, "(")?;
    }
    match node {
        Formula::Atom(name) => write!(f, "{name}")?,
        Formula::Top => write!(f, "true")?,
        Formula::Bottom => write!(f, "false")?,
        Formula::Not(x) => {
            write!(f, "!")?;
            write_prec(f, x, 5)?;
        }
        // `&` and `|` are left-associative: same-precedence right children
        // need parentheses to survive the round-trip unchanged.
        Formula::And(a, b) => {
            write_prec(f, a, 4)?;
            write!(f, " & ")?;
            write_prec(f, b, 5)?;
        }
        Formula::Or(a, b) => {
            write_prec(f, a, 3)?;
            write!(f, " | ")?;
            write_prec(f, b, 4)?;
        }
        // `->` and `<->` are right-associative.
        Formula::Implies(a, b) => {
            write_prec(f, a, 3)?;
            write!(f, " -> ")?;
            write_prec(f, b, 2)?;
        }
        Formula::Iff(a, b) => {
            write_prec(f, a, 2)?;
            write!(f, " <-> ")?;
            write_prec(f, b, 1)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(f, self, 0)
    }
}
