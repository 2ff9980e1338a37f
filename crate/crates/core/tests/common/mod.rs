//! Shared helpers for the integration suites: an independent truth-table
//! oracle (kept free of the library's world-id encoding), seeded random
//! generators for theories and threshold instances, and small conveniences.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nmr_core::{
    DefaultRule, DefaultTheory, Formula, Rational, Signature, ThresholdCollection, WorldModel,
};

pub fn sig(names: &[&str]) -> Signature {
    Signature::new(names.iter().map(|n| n.to_string()).collect()).unwrap()
}

pub fn fml(text: &str, sig: &Signature) -> Formula {
    nmr_core::parse_formula(text, sig).unwrap()
}

pub fn rat(text: &str) -> Rational {
    nmr_core::parse_rational(text).unwrap()
}

// ---------------------------------------------------------------------
// Independent truth-table oracle.
//
// Deliberately reimplements evaluation over explicit name->bool maps and
// enumerates assignments by recursive extension, sharing nothing with the
// library's bit-encoded worlds.
// ---------------------------------------------------------------------

pub type Assignment = BTreeMap<String, bool>;

pub fn oracle_evaluate(f: &Formula, assignment: &Assignment) -> bool {
    match f {
        Formula::Atom(name) => *assignment
            .get(name)
            .unwrap_or_else(|| panic!("oracle: unassigned atom `{name}`")),
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Not(x) => !oracle_evaluate(x, assignment),
        Formula::And(a, b) => oracle_evaluate(a, assignment) && oracle_evaluate(b, assignment),
        Formula::Or(a, b) => oracle_evaluate(a, assignment) || oracle_evaluate(b, assignment),
        Formula::Implies(a, b) => !oracle_evaluate(a, assignment) || oracle_evaluate(b, assignment),
        Formula::Iff(a, b) => oracle_evaluate(a, assignment) == oracle_evaluate(b, assignment),
    }
}

pub fn all_assignments(props: &[String]) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for p in props {
        let mut next = Vec::with_capacity(out.len() * 2);
        for asg in out {
            let mut with_false = asg.clone();
            with_false.insert(p.clone(), false);
            next.push(with_false);
            let mut with_true = asg;
            with_true.insert(p.clone(), true);
            next.push(with_true);
        }
        out = next;
    }
    out
}

pub fn oracle_entails(premises: &[Formula], conclusion: &Formula, props: &[String]) -> bool {
    all_assignments(props).iter().all(|asg| {
        !premises.iter().all(|p| oracle_evaluate(p, asg)) || oracle_evaluate(conclusion, asg)
    })
}

// ---------------------------------------------------------------------
// Seeded random instances.
// ---------------------------------------------------------------------

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_formula(rng: &mut ChaCha8Rng, props: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_range(0..10) < 3 {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => Formula::atom(props[rng.gen_range(0..props.len())].clone()),
        };
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(random_formula(rng, props, depth - 1)),
        1 => Formula::and(
            random_formula(rng, props, depth - 1),
            random_formula(rng, props, depth - 1),
        ),
        2 => Formula::or(
            random_formula(rng, props, depth - 1),
            random_formula(rng, props, depth - 1),
        ),
        3 => Formula::implies(
            random_formula(rng, props, depth - 1),
            random_formula(rng, props, depth - 1),
        ),
        _ => Formula::iff(
            random_formula(rng, props, depth - 1),
            random_formula(rng, props, depth - 1),
        ),
    }
}

const PROP_POOL: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn random_signature(rng: &mut ChaCha8Rng, max_props: usize) -> Signature {
    let n = rng.gen_range(1..=max_props);
    sig(&PROP_POOL[..n])
}

/// A random all-normal theory: up to two facts and up to four rules over
/// at most four propositions.
pub fn random_normal_theory(rng: &mut ChaCha8Rng) -> DefaultTheory {
    let signature = random_signature(rng, 4);
    let props = signature.props().to_vec();
    let fact_count = rng.gen_range(0..=2);
    let facts: Vec<Formula> = (0..fact_count)
        .map(|_| random_formula(rng, &props, 2))
        .collect();
    let rule_count = rng.gen_range(1..=4);
    let defaults: Vec<DefaultRule> = (0..rule_count)
        .map(|i| {
            let prerequisite = if rng.gen_bool(0.3) {
                Formula::Top
            } else {
                random_formula(rng, &props, 2)
            };
            let consequent = random_formula(rng, &props, 1);
            DefaultRule::normal(format!("d{}", i + 1), prerequisite, consequent)
        })
        .collect();
    DefaultTheory::new(signature, facts, defaults).unwrap()
}

/// A random weighted model: each world gets weight num/den with num in
/// 0..=6 (zero weights included on purpose) and den in 1..=4.
pub fn random_model(rng: &mut ChaCha8Rng, signature: &Signature) -> WorldModel {
    loop {
        let entries: Vec<(u64, Rational)> = (0..signature.world_count())
            .map(|id| {
                let num = rng.gen_range(0..=6);
                let den = rng.gen_range(1..=4);
                (id, nmr_core::ratio(num, den))
            })
            .collect();
        if let Ok(model) = WorldModel::build(signature.clone(), entries, nmr_core::ratio(0, 1)) {
            return model; // rejects only the all-zero draw
        }
    }
}

/// A random threshold collection over at most three propositions, with a
/// matching weighted model whose fact context has positive mass.
pub fn random_threshold_instance(rng: &mut ChaCha8Rng) -> (ThresholdCollection, WorldModel) {
    loop {
        let signature = random_signature(rng, 3);
        let props = signature.props().to_vec();
        let fact_count = rng.gen_range(0..=2);
        let facts: Vec<Formula> = (0..fact_count)
            .map(|_| random_formula(rng, &props, 2))
            .collect();
        let mut thresholds: Vec<Formula> = Vec::new();
        let want = rng.gen_range(1..=4);
        let mut attempts = 0;
        while thresholds.len() < want && attempts < 32 {
            let f = random_formula(rng, &props, 2);
            if !thresholds.contains(&f) {
                thresholds.push(f);
            }
            attempts += 1;
        }
        let model = random_model(rng, &signature);
        let fact_models = nmr_core::models_of(&facts, &signature);
        if model.mass(&fact_models) == nmr_core::ratio(0, 1) {
            continue;
        }
        let collection = ThresholdCollection::new(signature, facts, thresholds).unwrap();
        return (collection, model);
    }
}

/// Map a world id of `from` onto the corresponding id of `to` under a
/// proposition renaming.
pub fn map_world(
    from: &Signature,
    to: &Signature,
    rename: &BTreeMap<String, String>,
    id: u64,
) -> u64 {
    let mut out = 0u64;
    for (i, name) in from.props().iter().enumerate() {
        let target = rename.get(name).unwrap_or(name);
        let j = to
            .index_of(target)
            .unwrap_or_else(|| panic!("renamed proposition `{target}` missing"));
        if from.truth_in(id, i) {
            out |= 1 << j;
        }
    }
    out
}

/// Apply a proposition renaming to a formula.
pub fn rename_formula(f: &Formula, rename: &BTreeMap<String, String>) -> Formula {
    match f {
        Formula::Atom(name) => Formula::atom(
            rename
                .get(name)
                .cloned()
                .unwrap_or_else(|| name.clone()),
        ),
        Formula::Top => Formula::Top,
        Formula::Bottom => Formula::Bottom,
        Formula::Not(x) => Formula::not(rename_formula(x, rename)),
        Formula::And(a, b) => {
            Formula::and(rename_formula(a, rename), rename_formula(b, rename))
        }
        Formula::Or(a, b) => Formula::or(rename_formula(a, rename), rename_formula(b, rename)),
        Formula::Implies(a, b) => {
            Formula::implies(rename_formula(a, rename), rename_formula(b, rename))
        }
        Formula::Iff(a, b) => {
            Formula::iff(rename_formula(a, rename), rename_formula(b, rename))
        }
    }
}
