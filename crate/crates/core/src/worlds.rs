//! Possible worlds over a finite propositional signature.
//!
//! A world is a total truth assignment, encoded canonically as an integer
//! id: bit `k` of the id is the truth value of the `k`-th proposition in
//! signature order. Entailment is decided by exhaustive model enumeration
//! over the capped signature; every downstream notion (extensions,
//! thresholding, partitions) is defined over these model sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::parser::is_valid_identifier;

/// Default cap on the number of propositions; larger signatures are
/// rejected unless an explicit cap override is supplied.
pub const DEFAULT_PROP_CAP: usize = 20;

// World ids are u64 bit patterns, so the signature can never exceed this
// regardless of the requested cap.
const HARD_PROP_LIMIT: usize = 62;

/// An ordered list of distinct proposition names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    props: Vec<String>,
}

impl Signature {
    /// Build a signature under the default proposition cap.
    pub fn new(props: Vec<String>) -> Result<Signature> {
        Signature::with_cap(props, DEFAULT_PROP_CAP)
    }

    /// Build a signature with an explicit cap override.
    pub fn with_cap(props: Vec<String>, cap: usize) -> Result<Signature> {
        let cap = cap.min(HARD_PROP_LIMIT);
        if props.len() > cap {
            return Err(Error::TooManyPropositions {
                count: props.len(),
                cap,
            });
        }
        let mut seen = BTreeSet::new();
        for name in &props {
            if !is_valid_identifier(name) {
                return Err(Error::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateProposition(name.clone()));
            }
        }
        Ok(Signature { props })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Number of worlds, `2^|props|`.
    pub fn world_count(&self) -> u64 {
        1u64 << self.props.len()
    }

    /// Truth value of the `index`-th proposition in `world`.
    pub fn truth_in(&self, world: u64, index: usize) -> bool {
        (world >> index) & 1 == 1
    }

    pub fn all_worlds(&self) -> WorldSet {
        (0..self.world_count()).collect()
    }

    pub fn world(&self, id: u64) -> World<'_> {
        debug_assert!(id < self.world_count());
        World { sig: self, id }
    }

    /// Canonical id of the world described by a full assignment.
    /// Every proposition must be assigned exactly once.
    pub fn world_id_of(&self, assignment: &[(String, bool)]) -> Result<u64> {
        let mut id = 0u64;
        let mut seen = vec![false; self.props.len()];
        for (name, value) in assignment {
            let idx = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownProposition(name.clone()))?;
            if seen[idx] {
                return Err(Error::DuplicateProposition(name.clone()));
            }
            seen[idx] = true;
            if *value {
                id |= 1 << idx;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::UnknownProposition(format!(
                "missing assignment for `{}`",
                self.props[missing]
            )));
        }
        Ok(id)
    }

    /// Check that every atom of `f` belongs to this signature.
    pub fn check_formula(&self, f: &Formula) -> Result<()> {
        for atom in f.atoms() {
            if !self.contains(atom) {
                return Err(Error::UnknownProposition(atom.to_string()));
            }
        }
        Ok(())
    }
}

/// A single world, viewed against its signature for display purposes.
#[derive(Clone, Copy, Debug)]
pub struct World<'a> {
    sig: &'a Signature,
    pub id: u64,
}

impl World<'_> {
    pub fn truth(&self, name: &str) -> Option<bool> {
        self.sig.index_of(name).map(|i| self.sig.truth_in(self.id, i))
    }
}

impl fmt::Display for World<'_> {
    /// Renders as `{a, a', !b}`: satisfied atoms bare, falsified negated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, name) in self.sig.props().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if self.sig.truth_in(self.id, i) {
                write!(f, "{name}")?;
            } else {
                write!(f, "!{name}")?;
            }
        }
        write!(f, "}}")
    }
}

/// A set of world ids over a fixed signature.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldSet(BTreeSet<u64>);

impl WorldSet {
    pub fn empty() -> WorldSet {
        WorldSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.0.contains(&id)
    }

    pub fn insert(&mut self, id: u64) -> bool {
        self.0.insert(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn ids(&self) -> Vec<u64> {
        self.0.iter().copied().collect()
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        WorldSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        WorldSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &WorldSet) -> WorldSet {
        WorldSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &WorldSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl FromIterator<u64> for WorldSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> WorldSet {
        WorldSet(iter.into_iter().collect())
    }
}

/// Classical truth value of `f` in the world `world` of `sig`.
///
/// Panics if `f` mentions an atom outside the signature; all public entry
/// points validate formulas against their signature before evaluation.
pub fn evaluate(f: &Formula, sig: &Signature, world: u64) -> bool {
    match f {
        Formula::Atom(name) => {
            let idx = sig
                .index_of(name)
                .unwrap_or_else(|| panic!("proposition `{name}` is not in the signature"));
            sig.truth_in(world, idx)
        }
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Not(x) => !evaluate(x, sig, world),
        Formula::And(a, b) => evaluate(a, sig, world) && evaluate(b, sig, world),
        Formula::Or(a, b) => evaluate(a, sig, world) || evaluate(b, sig, world),
        Formula::Implies(a, b) => !evaluate(a, sig, world) || evaluate(b, sig, world),
        Formula::Iff(a, b) => evaluate(a, sig, world) == evaluate(b, sig, world),
    }
}

/// Worlds satisfying every formula in `formulas`; the empty set of
/// formulas has every world as a model.
pub fn models_of<'a, I>(formulas: I, sig: &Signature) -> WorldSet
where
    I: IntoIterator<Item = &'a Formula>,
{
    let fs: Vec<&Formula> = formulas.into_iter().collect();
    (0..sig.world_count())
        .filter(|&w| fs.iter().all(|f| evaluate(f, sig, w)))
        .collect()
}

pub fn models_of_formula(f: &Formula, sig: &Signature) -> WorldSet {
    models_of(std::iter::once(f), sig)
}

/// `premises |- conclusion`, decided by model inclusion over the finite
/// signature.
pub fn entails<'a, I>(premises: I, conclusion: &Formula, sig: &Signature) -> bool
where
    I: IntoIterator<Item = &'a Formula>,
{
    models_of(premises, sig).is_subset(&models_of_formula(conclusion, sig))
}
