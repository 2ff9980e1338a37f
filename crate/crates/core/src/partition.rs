//! Possible-world partition sequences.
//!
//! One generic process covers both engines. Starting from the worlds that
//! violate the background facts (class `W_0`), it repeatedly picks an
//! unapplied rule whose condition holds on the current context, splits off
//! the context worlds falsifying the rule's result as the next class, and
//! continues on the shrunken context. It stops when no unapplied rule's
//! condition holds; the remaining context is the final class.
//!
//! A rule may apply even when its result is already entailed by the
//! context: the emitted class is then empty, which the sequence format
//! explicitly permits. Each rule applies at most once, so a run performs
//! at most `|rules|` steps.
//!
//! Two rule conditions are provided. For a normal default rule, the
//! condition holds when the prerequisite is true in every context world
//! and the consequent in at least one; the result is the consequent. For a
//! threshold rule, the condition holds when the weighted proportion of
//! context worlds satisfying the candidate meets `1 - epsilon`; a
//! zero-mass context fails the condition rather than erroring.
//!
//! The process is a relation, not a function: different rule choices can
//! yield different sequences. `run_partition` resolves choices with an
//! explicit priority order; `enumerate_partition_sequences` explores every
//! choice and deduplicates.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;

use crate::defaults::DefaultTheory;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::model::WorldModel;
use crate::rational::Rational;
use crate::threshold::{ThresholdCollection, ThresholdParams};
use crate::worlds::{models_of, models_of_formula, Signature, WorldSet};

/// Cap on `|rules|` for exhaustive sequence enumeration.
pub const RULE_ENUMERATION_CAP: usize = 12;

/// When a rule may fire on a context.
#[derive(Clone, Debug)]
pub enum RuleCondition {
    /// The prerequisite holds in every context world and the rule's result
    /// in at least one.
    EstablishedAndConsistent { prerequisite: Formula },
    /// The weighted proportion of context worlds satisfying the rule's
    /// result is at least `bound`.
    ProportionAtLeast {
        bound: Rational,
        model: Arc<WorldModel>,
    },
}

/// A nonmonotonic rule: a condition over contexts plus the formula taken
/// as true once the rule is applied.
#[derive(Clone, Debug)]
pub struct NmRule {
    pub name: String,
    pub condition: RuleCondition,
    pub result: Formula,
}

impl NmRule {
    /// Does the condition hold on `context`?
    pub fn applies(&self, sig: &Signature, context: &WorldSet) -> bool {
        let result_models = models_of_formula(&self.result, sig);
        match &self.condition {
            RuleCondition::EstablishedAndConsistent { prerequisite } => {
                context.is_subset(&models_of_formula(prerequisite, sig))
                    && !context.intersection(&result_models).is_empty()
            }
            RuleCondition::ProportionAtLeast { bound, model } => {
                let total = model.mass(context);
                if total.is_zero() {
                    return false;
                }
                model.mass(&context.intersection(&result_models)) / total >= *bound
            }
        }
    }
}

/// An ordered list of world classes `<W_0, ..., W_l>`: the background
/// violations first, one class per applied rule (possibly empty), and the
/// final context last. `applied[i]` names the rule that produced class
/// `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartitionSequence {
    pub classes: Vec<WorldSet>,
    pub applied: Vec<String>,
}

impl PartitionSequence {
    /// The final class `W_l`: the models of the conclusion theory in
    /// default mode, the thresholded population in threshold mode.
    pub fn final_context(&self) -> &WorldSet {
        self.classes.last().expect("sequence has at least two classes")
    }

    pub fn background_class(&self) -> &WorldSet {
        &self.classes[0]
    }

    /// The classes between `W_0` and `W_l`, paired with the rule applied.
    pub fn steps(&self) -> impl Iterator<Item = (&str, &WorldSet)> {
        self.applied
            .iter()
            .map(|s| s.as_str())
            .zip(self.classes[1..self.classes.len() - 1].iter())
    }

    /// Classes are pairwise disjoint and jointly cover all worlds.
    pub fn is_partition_of(&self, sig: &Signature) -> bool {
        let mut seen = WorldSet::empty();
        for class in &self.classes {
            if !seen.is_disjoint(class) {
                return false;
            }
            seen = seen.union(class);
        }
        seen == sig.all_worlds()
    }
}

/// Translate a normal default theory into partition rules. Errors if any
/// rule is not normal: the partition reading of semi-normal and general
/// rules is out of scope.
pub fn default_rules_of(theory: &DefaultTheory) -> Result<Vec<NmRule>> {
    if let Some(rule) = theory.first_non_normal() {
        return Err(Error::NonNormalRule(rule.name.clone()));
    }
    Ok(theory
        .defaults()
        .iter()
        .map(|r| NmRule {
            name: r.name.clone(),
            condition: RuleCondition::EstablishedAndConsistent {
                prerequisite: r.prerequisite.clone(),
            },
            result: r.consequent.clone(),
        })
        .collect())
}

/// Translate a threshold collection into partition rules, one per
/// candidate formula, named `t1..tn` in threshold order.
pub fn threshold_rules_of(
    collection: &ThresholdCollection,
    model: Arc<WorldModel>,
    params: &ThresholdParams,
) -> Result<Vec<NmRule>> {
    if collection.sig() != model.sig() {
        return Err(Error::SignatureMismatch);
    }
    let bound = params.bound();
    Ok(collection
        .thresholds()
        .iter()
        .enumerate()
        .map(|(i, f)| NmRule {
            name: format!("t{}", i + 1),
            condition: RuleCondition::ProportionAtLeast {
                bound: bound.clone(),
                model: Arc::clone(&model),
            },
            result: f.clone(),
        })
        .collect())
}

struct CompiledRule {
    result_models: WorldSet,
    condition: CompiledCondition,
}

enum CompiledCondition {
    Established { prereq_models: WorldSet },
    Proportion { bound: Rational, model: Arc<WorldModel> },
}

fn compile(rules: &[NmRule], sig: &Signature) -> Vec<CompiledRule> {
    rules
        .iter()
        .map(|r| CompiledRule {
            result_models: models_of_formula(&r.result, sig),
            condition: match &r.condition {
                RuleCondition::EstablishedAndConsistent { prerequisite } => {
                    CompiledCondition::Established {
                        prereq_models: models_of_formula(prerequisite, sig),
                    }
                }
                RuleCondition::ProportionAtLeast { bound, model } => {
                    CompiledCondition::Proportion {
                        bound: bound.clone(),
                        model: Arc::clone(model),
                    }
                }
            },
        })
        .collect()
}

fn condition_holds(rule: &CompiledRule, context: &WorldSet) -> bool {
    match &rule.condition {
        CompiledCondition::Established { prereq_models } => {
            context.is_subset(prereq_models)
                && !context.intersection(&rule.result_models).is_empty()
        }
        CompiledCondition::Proportion { bound, model } => {
            let total = model.mass(context);
            if total.is_zero() {
                return false;
            }
            model.mass(&context.intersection(&rule.result_models)) / total >= *bound
        }
    }
}

/// Run the process once, resolving every choice with `priority`: among the
/// applicable unapplied rules, the one earliest in `priority` fires.
/// `priority` must order every rule exactly once.
pub fn run_partition(
    sig: &Signature,
    background: &[Formula],
    rules: &[NmRule],
    priority: &[&str],
) -> Result<PartitionSequence> {
    let names: BTreeSet<&str> = rules.iter().map(|r| r.name.as_str()).collect();
    let given: BTreeSet<&str> = priority.iter().copied().collect();
    if names != given || priority.len() != rules.len() {
        return Err(Error::InvalidStrategy);
    }
    let compiled = compile(rules, sig);
    let rank = |name: &str| priority.iter().position(|p| *p == name).unwrap();

    let mut context = models_of(background, sig);
    let mut classes = vec![sig.all_worlds().difference(&context)];
    let mut applied_names = Vec::new();
    let mut applied = vec![false; rules.len()];
    loop {
        let choice = (0..rules.len())
            .filter(|&i| !applied[i] && condition_holds(&compiled[i], &context))
            .min_by_key(|&i| rank(&rules[i].name));
        match choice {
            None => break,
            Some(i) => {
                classes.push(context.difference(&compiled[i].result_models));
                context = context.intersection(&compiled[i].result_models);
                applied[i] = true;
                applied_names.push(rules[i].name.clone());
            }
        }
    }
    classes.push(context);
    Ok(PartitionSequence {
        classes,
        applied: applied_names,
    })
}

/// Every sequence reachable under some rule-choice order, deduplicated by
/// (class list, applied list) and canonically ordered.
pub fn enumerate_partition_sequences(
    sig: &Signature,
    background: &[Formula],
    rules: &[NmRule],
) -> Result<Vec<PartitionSequence>> {
    if rules.len() > RULE_ENUMERATION_CAP {
        return Err(Error::TooManyRules {
            count: rules.len(),
            cap: RULE_ENUMERATION_CAP,
        });
    }
    let compiled = compile(rules, sig);
    let initial = models_of(background, sig);
    let background_class = sig.all_worlds().difference(&initial);

    struct Search<'a> {
        rules: &'a [NmRule],
        compiled: &'a [CompiledRule],
        found: BTreeSet<PartitionSequence>,
    }

    impl Search<'_> {
        fn dfs(
            &mut self,
            context: &WorldSet,
            applied: &mut Vec<bool>,
            classes: &mut Vec<WorldSet>,
            names: &mut Vec<String>,
        ) {
            let eligible: Vec<usize> = (0..self.rules.len())
                .filter(|&i| !applied[i] && condition_holds(&self.compiled[i], context))
                .collect();
            if eligible.is_empty() {
                let mut all = classes.clone();
                all.push(context.clone());
                self.found.insert(PartitionSequence {
                    classes: all,
                    applied: names.clone(),
                });
                return;
            }
            for i in eligible {
                classes.push(context.difference(&self.compiled[i].result_models));
                names.push(self.rules[i].name.clone());
                applied[i] = true;
                let next = context.intersection(&self.compiled[i].result_models);
                self.dfs(&next, applied, classes, names);
                applied[i] = false;
                names.pop();
                classes.pop();
            }
        }
    }

    let mut search = Search {
        rules,
        compiled: &compiled,
        found: BTreeSet::new(),
    };
    search.dfs(
        &initial,
        &mut vec![false; rules.len()],
        &mut vec![background_class],
        &mut Vec::new(),
    );
    Ok(search.found.into_iter().collect())
}
