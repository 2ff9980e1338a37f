//! Default theories and extension computation.
//!
//! A default rule `prerequisite : justifications / consequent` licenses its
//! consequent once the prerequisite is established, provided every
//! justification is consistent with the candidate theory being tested.
//! Theories are represented extensionally: a "theory" is always a model
//! set over the finite signature, so deductive closure is automatic and
//! theory equality is model-set equality.
//!
//! `default_closure(theory, candidate)` computes the least model set that
//! contains the facts and is closed under every rule whose prerequisite is
//! entailed by the current stage and whose justifications are each
//! satisfiable within `candidate`. An extension is a fixed point of that
//! operator; `enumerate_extensions` searches the standard candidate space
//! of fact-plus-consequent subsets, which is complete because every
//! extension is axiomatized by its generating defaults.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::worlds::{models_of, models_of_formula, Signature, WorldSet};

/// Cap on `|defaults|` for exhaustive extension enumeration (2^n candidates).
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Normal,
    SemiNormal,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefaultRule {
    pub name: String,
    pub prerequisite: Formula,
    pub justifications: Vec<Formula>,
    pub consequent: Formula,
}

impl DefaultRule {
    pub fn new(
        name: impl Into<String>,
        prerequisite: Formula,
        justifications: Vec<Formula>,
        consequent: Formula,
    ) -> DefaultRule {
        DefaultRule {
            name: name.into(),
            prerequisite,
            justifications,
            consequent,
        }
    }

    /// A normal rule: the single justification is the consequent itself.
    pub fn normal(name: impl Into<String>, prerequisite: Formula, consequent: Formula) -> DefaultRule {
        DefaultRule {
            name: name.into(),
            prerequisite,
            justifications: vec![consequent.clone()],
            consequent,
        }
    }

    /// Classify the rule: normal when the justification is syntactically
    /// the consequent, semi-normal when it is a conjunction carrying the
    /// consequent as a conjunct, general otherwise.
    pub fn kind(&self) -> RuleKind {
        if let [j] = &self.justifications[..] {
            if *j == self.consequent {
                return RuleKind::Normal;
            }
            let conjuncts = j.conjuncts();
            if conjuncts.len() > 1 && conjuncts.contains(&&self.consequent) {
                return RuleKind::SemiNormal;
            }
        }
        RuleKind::General
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefaultTheory {
    sig: Signature,
    facts: Vec<Formula>,
    defaults: Vec<DefaultRule>,
}

impl DefaultTheory {
    pub fn new(sig: Signature, facts: Vec<Formula>, defaults: Vec<DefaultRule>) -> Result<DefaultTheory> {
        let mut names = BTreeSet::new();
        for rule in &defaults {
            if !names.insert(rule.name.as_str()) {
                return Err(Error::DuplicateRuleName(rule.name.clone()));
            }
            sig.check_formula(&rule.prerequisite)?;
            sig.check_formula(&rule.consequent)?;
            for j in &rule.justifications {
                sig.check_formula(j)?;
            }
        }
        for f in &facts {
            sig.check_formula(f)?;
        }
        Ok(DefaultTheory {
            sig,
            facts,
            defaults,
        })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn defaults(&self) -> &[DefaultRule] {
        &self.defaults
    }

    pub fn rule(&self, name: &str) -> Option<&DefaultRule> {
        self.defaults.iter().find(|r| r.name == name)
    }

    pub fn is_normal(&self) -> bool {
        self.defaults.iter().all(|r| r.kind() == RuleKind::Normal)
    }

    /// First rule that is not normal, if any.
    pub fn first_non_normal(&self) -> Option<&DefaultRule> {
        self.defaults.iter().find(|r| r.kind() != RuleKind::Normal)
    }
}

/// One extension: its generating defaults, its model set (the models of
/// facts plus generating consequents), and whether it is the degenerate
/// inconsistent extension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Extension {
    pub generating: BTreeSet<String>,
    pub model_set: WorldSet,
    pub inconsistent: bool,
}

/// Per-rule model sets, computed once per theory.
struct Compiled {
    fact_models: WorldSet,
    prereq: Vec<WorldSet>,
    justif: Vec<Vec<WorldSet>>,
    conseq: Vec<WorldSet>,
}

fn compile(theory: &DefaultTheory) -> Compiled {
    let sig = theory.sig();
    Compiled {
        fact_models: models_of(theory.facts(), sig),
        prereq: theory
            .defaults()
            .iter()
            .map(|r| models_of_formula(&r.prerequisite, sig))
            .collect(),
        justif: theory
            .defaults()
            .iter()
            .map(|r| {
                r.justifications
                    .iter()
                    .map(|j| models_of_formula(j, sig))
                    .collect()
            })
            .collect(),
        conseq: theory
            .defaults()
            .iter()
            .map(|r| models_of_formula(&r.consequent, sig))
            .collect(),
    }
}

/// Iterate the closure to stability. Returns the final model set and, per
/// rule, whether the rule's conditions held (prerequisite entailed by the
/// final stage, every justification satisfiable within `candidate`).
fn closure_fired(c: &Compiled, candidate: &WorldSet) -> (WorldSet, Vec<bool>) {
    let n = c.prereq.len();
    let mut stage = c.fact_models.clone();
    let mut fired = vec![false; n];
    loop {
        let mut changed = false;
        for (i, fired_i) in fired.iter_mut().enumerate() {
            if *fired_i {
                continue;
            }
            // prerequisite must hold in every world of the current stage
            if !stage.is_subset(&c.prereq[i]) {
                continue;
            }
            // each justification must be consistent with the candidate:
            // its negation is in the candidate theory exactly when no
            // candidate world satisfies it
            if !c.justif[i]
                .iter()
                .all(|mj| !candidate.intersection(mj).is_empty())
            {
                continue;
            }
            stage = stage.intersection(&c.conseq[i]);
            *fired_i = true;
            changed = true;
        }
        if !changed {
            return (stage, fired);
        }
    }
}

/// The model set of the least theory containing the facts and closed under
/// all defaults whose justifications survive against `candidate`.
pub fn default_closure(theory: &DefaultTheory, candidate: &WorldSet) -> WorldSet {
    closure_fired(&compile(theory), candidate).0
}

/// `candidate` is an extension iff it is a fixed point of the closure.
pub fn is_extension(theory: &DefaultTheory, candidate: &WorldSet) -> bool {
    default_closure(theory, candidate) == *candidate
}

/// All extensions, found by testing every subset of consequents as a
/// candidate. Results are deduplicated by (model set, generating set) and
/// returned in canonical model-set order.
pub fn enumerate_extensions(theory: &DefaultTheory) -> Result<Vec<Extension>> {
    let n = theory.defaults().len();
    if n > DEFAULT_ENUMERATION_CAP {
        return Err(Error::TooManyDefaults {
            count: n,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let compiled = compile(theory);
    let mut found: BTreeMap<(WorldSet, BTreeSet<String>), Extension> = BTreeMap::new();
    for mask in 0u32..(1u32 << n) {
        let mut candidate = compiled.fact_models.clone();
        for i in 0..n {
            if mask >> i & 1 == 1 {
                candidate = candidate.intersection(&compiled.conseq[i]);
            }
        }
        let (closed, fired) = closure_fired(&compiled, &candidate);
        if closed != candidate {
            continue;
        }
        let generating: BTreeSet<String> = fired
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(i, _)| theory.defaults()[i].name.clone())
            .collect();
        let inconsistent = candidate.is_empty();
        found.insert(
            (candidate.clone(), generating.clone()),
            Extension {
                generating,
                model_set: candidate,
                inconsistent,
            },
        );
    }
    Ok(found.into_values().collect())
}

/// All orderings of the extension's generating defaults in which each
/// prerequisite is entailed by the facts plus the consequents applied so
/// far. The empty generating set yields the single empty ordering.
/// Orderings come out in lexicographic rule-name order.
pub fn grounded_orderings(theory: &DefaultTheory, extension: &Extension) -> Vec<Vec<String>> {
    let compiled = compile(theory);
    let names: Vec<&str> = extension.generating.iter().map(|s| s.as_str()).collect();
    let index: Vec<usize> = names
        .iter()
        .map(|n| {
            theory
                .defaults()
                .iter()
                .position(|r| r.name == *n)
                .expect("generating rule must belong to the theory")
        })
        .collect();
    let mut out = Vec::new();
    let mut used = vec![false; names.len()];
    let mut prefix: Vec<String> = Vec::new();
    fn dfs(
        compiled: &Compiled,
        names: &[&str],
        index: &[usize],
        ctx: WorldSet,
        used: &mut [bool],
        prefix: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) {
        if prefix.len() == names.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..names.len() {
            if used[k] {
                continue;
            }
            let i = index[k];
            if !ctx.is_subset(&compiled.prereq[i]) {
                continue;
            }
            used[k] = true;
            prefix.push(names[k].to_string());
            dfs(
                compiled,
                names,
                index,
                ctx.intersection(&compiled.conseq[i]),
                used,
                prefix,
                out,
            );
            prefix.pop();
            used[k] = false;
        }
    }
    dfs(
        &compiled,
        &names,
        &index,
        compiled.fact_models.clone(),
        &mut used,
        &mut prefix,
        &mut out,
    );
    out
}
