//! Sequential thresholding over a weighted world model.
//!
//! Given a threshold collection (a fact set plus an ordered set of
//! candidate formulas) and a slack parameter `epsilon`, a filtered sequence
//! accepts candidates one at a time: a candidate qualifies when its
//! probability, conditioned on the facts and everything accepted so far,
//! is at least `1 - epsilon`. Accepting a formula shrinks the effective
//! probability space, so acceptance order matters; a sequence is complete
//! (maximal) when no remaining candidate qualifies against the final
//! context.
//!
//! Because the final context depends only on the accepted *set*, the
//! enumeration collapses order variants of the same set to one canonical
//! witness by default; `all_orders` emits every acceptance order instead.
//! All comparisons are exact: the acceptance test uses `>=` and the
//! maximality test uses `<`, decided in rational arithmetic.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::model::WorldModel;
use crate::rational::{one_minus, Rational};
use crate::worlds::{models_of, models_of_formula, Signature, WorldSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdCollection {
    sig: Signature,
    facts: Vec<Formula>,
    thresholds: Vec<Formula>,
}

impl ThresholdCollection {
    /// Duplicate threshold formulas (syntactically, after parsing) are
    /// rejected.
    pub fn new(
        sig: Signature,
        facts: Vec<Formula>,
        thresholds: Vec<Formula>,
    ) -> Result<ThresholdCollection> {
        for f in facts.iter().chain(thresholds.iter()) {
            sig.check_formula(f)?;
        }
        for (i, t) in thresholds.iter().enumerate() {
            if thresholds[..i].contains(t) {
                return Err(Error::DuplicateThreshold(t.to_string()));
            }
        }
        Ok(ThresholdCollection {
            sig,
            facts,
            thresholds,
        })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn thresholds(&self) -> &[Formula] {
        &self.thresholds
    }
}

/// The sequential threshold parameter; `0 <= epsilon < 1`. `epsilon = 1`
/// is rejected because a threshold of 0 would accept zero-probability
/// formulas and void the conditioning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdParams {
    epsilon: Rational,
}

impl ThresholdParams {
    pub fn new(epsilon: Rational) -> Result<ThresholdParams> {
        let one = Rational::from_integer(1.into());
        if epsilon < Rational::zero() || epsilon >= one {
            return Err(Error::EpsilonOutOfRange(epsilon.to_string()));
        }
        Ok(ThresholdParams { epsilon })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    /// The acceptance bound `1 - epsilon`.
    pub fn bound(&self) -> Rational {
        one_minus(&self.epsilon)
    }
}

/// A maximal acceptance sequence: indices into the collection's threshold
/// list, with the conditional probability observed at each step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FilteredSequence {
    pub accepted: Vec<usize>,
    pub step_probabilities: Vec<Rational>,
}

impl FilteredSequence {
    pub fn formulas<'a>(&self, collection: &'a ThresholdCollection) -> Vec<&'a Formula> {
        self.accepted
            .iter()
            .map(|&i| &collection.thresholds()[i])
            .collect()
    }

    pub fn accepted_set(&self) -> BTreeSet<usize> {
        self.accepted.iter().copied().collect()
    }
}

fn same_signature(a: &Signature, b: &Signature) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SignatureMismatch)
    }
}

/// Probability of `candidate` conditioned on the facts plus an accepted
/// prefix. Errors when the conditioning set has zero mass.
pub fn step_probability(
    collection: &ThresholdCollection,
    model: &WorldModel,
    accepted: &[Formula],
    candidate: &Formula,
) -> Result<Rational> {
    same_signature(collection.sig(), model.sig())?;
    model.conditional_probability(candidate, collection.facts().iter().chain(accepted.iter()))
}

/// All maximal filtered sequences of the collection at the given
/// parameter. With `all_orders = false`, sequences whose accepted sets
/// coincide are collapsed to the lexicographically least witness order.
/// Results are canonically ordered.
pub fn enumerate_filtered_sequences(
    collection: &ThresholdCollection,
    model: &WorldModel,
    params: &ThresholdParams,
    all_orders: bool,
) -> Result<Vec<FilteredSequence>> {
    same_signature(collection.sig(), model.sig())?;
    let sig = collection.sig();
    let fact_ctx = models_of(collection.facts(), sig);
    let fact_mass = model.mass(&fact_ctx);
    if fact_mass.is_zero() {
        return Err(Error::ZeroMassContext);
    }
    let bound = params.bound();
    let target_models: Vec<WorldSet> = collection
        .thresholds()
        .iter()
        .map(|f| models_of_formula(f, sig))
        .collect();

    struct Search<'a> {
        model: &'a WorldModel,
        target_models: &'a [WorldSet],
        bound: &'a Rational,
        all_orders: bool,
        seen_sets: BTreeSet<BTreeSet<usize>>,
        out: Vec<FilteredSequence>,
    }

    impl Search<'_> {
        fn dfs(
            &mut self,
            ctx: &WorldSet,
            ctx_mass: &Rational,
            accepted: &mut Vec<usize>,
            probs: &mut Vec<Rational>,
        ) {
            let mut any = false;
            for i in 0..self.target_models.len() {
                if accepted.contains(&i) {
                    continue;
                }
                let sat = ctx.intersection(&self.target_models[i]);
                let sat_mass = self.model.mass(&sat);
                let p = &sat_mass / ctx_mass;
                if p < *self.bound {
                    continue;
                }
                any = true;
                accepted.push(i);
                probs.push(p);
                self.dfs(&sat, &sat_mass, accepted, probs);
                accepted.pop();
                probs.pop();
            }
            if !any {
                // maximal: no remaining candidate qualifies
                if !self.all_orders {
                    let key: BTreeSet<usize> = accepted.iter().copied().collect();
                    if !self.seen_sets.insert(key) {
                        return;
                    }
                }
                self.out.push(FilteredSequence {
                    accepted: accepted.clone(),
                    step_probabilities: probs.clone(),
                });
            }
        }
    }

    let mut search = Search {
        model,
        target_models: &target_models,
        bound: &bound,
        all_orders,
        seen_sets: BTreeSet::new(),
        out: Vec::new(),
    };
    search.dfs(&fact_ctx, &fact_mass, &mut Vec::new(), &mut Vec::new());
    let mut out = search.out;
    out.sort();
    Ok(out)
}

/// `Pr(query)` in the final context of the sequence: conditioned on the
/// facts plus every accepted formula.
pub fn threshold_probability(
    collection: &ThresholdCollection,
    model: &WorldModel,
    sequence: &FilteredSequence,
    query: &Formula,
) -> Result<Rational> {
    same_signature(collection.sig(), model.sig())?;
    let sig = collection.sig();
    let accepted = sequence.formulas(collection);
    let ctx = models_of(collection.facts().iter().chain(accepted), sig);
    model.proportion(query, &ctx)
}

/// Re-verify a sequence against the two defining clauses, independently of
/// the search: every step must meet the bound in its own context, and
/// every absent candidate must fall strictly below the bound in the final
/// context. Returns a description of the first violation, if any.
pub fn verify_filtered_sequence(
    collection: &ThresholdCollection,
    model: &WorldModel,
    params: &ThresholdParams,
    sequence: &FilteredSequence,
) -> std::result::Result<(), String> {
    let bound = params.bound();
    let mut prefix: Vec<Formula> = Vec::new();
    let mut seen = BTreeSet::new();
    for (step, &i) in sequence.accepted.iter().enumerate() {
        if i >= collection.thresholds().len() {
            return Err(format!("step {step} references threshold {i} out of range"));
        }
        if !seen.insert(i) {
            return Err(format!("threshold {i} accepted twice"));
        }
        let formula = &collection.thresholds()[i];
        let p = step_probability(collection, model, &prefix, formula)
            .map_err(|e| format!("step {step}: {e}"))?;
        if p < bound {
            return Err(format!(
                "step {step} ({formula}) has probability {p} below the bound {bound}"
            ));
        }
        if let Some(recorded) = sequence.step_probabilities.get(step) {
            if *recorded != p {
                return Err(format!(
                    "step {step} records probability {recorded}, recomputed {p}"
                ));
            }
        }
        prefix.push(formula.clone());
    }
    if sequence.step_probabilities.len() != sequence.accepted.len() {
        return Err("step probability list length mismatch".into());
    }
    for (i, formula) in collection.thresholds().iter().enumerate() {
        if seen.contains(&i) {
            continue;
        }
        let p = step_probability(collection, model, &prefix, formula)
            .map_err(|e| format!("maximality check: {e}"))?;
        if p >= bound {
            return Err(format!(
                "sequence is not maximal: {formula} still qualifies at {p}"
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::rational::ratio;

    fn sig3() -> Signature {
        Signature::new(vec!["a".into(), "a'".into(), "b".into()]).unwrap()
    }

    fn fml(text: &str, sig: &Signature) -> Formula {
        parse_formula(text, sig).unwrap()
    }

    fn two_candidate_collection() -> ThresholdCollection {
        let sig = sig3();
        let facts = vec![fml("a", &sig), fml("a'", &sig)];
        let thresholds = vec![fml("b", &sig), fml("!b", &sig)];
        ThresholdCollection::new(sig, facts, thresholds).unwrap()
    }

    fn skewed() -> WorldModel {
        WorldModel::build(
            sig3(),
            vec![(7, ratio(1, 1)), (3, ratio(99, 1))],
            ratio(1, 1),
        )
        .unwrap()
    }

    fn accepted_sets(seqs: &[FilteredSequence]) -> Vec<Vec<usize>> {
        seqs.iter().map(|s| s.accepted.clone()).collect()
    }

    #[test]
    fn epsilon_validation() {
        assert!(ThresholdParams::new(ratio(0, 1)).is_ok());
        assert!(ThresholdParams::new(ratio(99, 100)).is_ok());
        assert!(ThresholdParams::new(ratio(1, 1)).is_err());
        assert!(ThresholdParams::new(ratio(-1, 10)).is_err());
        assert!(ThresholdParams::new(ratio(3, 2)).is_err());
    }

    #[test]
    fn step_probabilities_evolve_with_the_prefix() {
        let c = two_candidate_collection();
        let sig = c.sig().clone();
        let m = WorldModel::uniform(sig.clone());
        let b = fml("b", &sig);
        let not_b = fml("!b", &sig);
        assert_eq!(step_probability(&c, &m, &[], &b).unwrap(), ratio(1, 2));
        assert_eq!(
            step_probability(&c, &m, std::slice::from_ref(&b), &not_b).unwrap(),
            ratio(0, 1)
        );
        assert_eq!(
            step_probability(&c, &m, std::slice::from_ref(&b), &b).unwrap(),
            ratio(1, 1)
        );
    }

    #[test]
    fn both_candidates_qualify_at_one_half() {
        let c = two_candidate_collection();
        let m = WorldModel::uniform(c.sig().clone());
        let p = ThresholdParams::new(ratio(1, 2)).unwrap();
        let seqs = enumerate_filtered_sequences(&c, &m, &p, false).unwrap();
        assert_eq!(accepted_sets(&seqs), vec![vec![0], vec![1]]);
        assert_eq!(seqs[0].step_probabilities, vec![ratio(1, 2)]);
    }

    #[test]
    fn neither_candidate_qualifies_at_one_quarter() {
        let c = two_candidate_collection();
        let m = WorldModel::uniform(c.sig().clone());
        let p = ThresholdParams::new(ratio(1, 4)).unwrap();
        let seqs = enumerate_filtered_sequences(&c, &m, &p, false).unwrap();
        assert_eq!(accepted_sets(&seqs), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn skewed_weights_select_the_heavy_candidate() {
        let c = two_candidate_collection();
        let m = skewed();
        let p = ThresholdParams::new(ratio(1, 10)).unwrap();
        let seqs = enumerate_filtered_sequences(&c, &m, &p, false).unwrap();
        assert_eq!(accepted_sets(&seqs), vec![vec![1]]);
        assert_eq!(seqs[0].step_probabilities, vec![ratio(99, 100)]);
    }

    #[test]
    fn threshold_probability_in_the_final_context() {
        let c = two_candidate_collection();
        let sig = c.sig().clone();
        let m = WorldModel::uniform(sig.clone());
        let p = ThresholdParams::new(ratio(1, 2)).unwrap();
        let seqs = enumerate_filtered_sequences(&c, &m, &p, false).unwrap();
        let accept_b = &seqs[0];
        assert_eq!(
            threshold_probability(&c, &m, accept_b, &fml("b", &sig)).unwrap(),
            ratio(1, 1)
        );
        assert_eq!(
            threshold_probability(&c, &m, accept_b, &fml("a", &sig)).unwrap(),
            ratio(1, 1)
        );
        // the empty sequence conditions on the facts alone
        let empty = FilteredSequence {
            accepted: vec![],
            step_probabilities: vec![],
        };
        assert_eq!(
            threshold_probability(&c, &m, &empty, &fml("b", &sig)).unwrap(),
            ratio(1, 2)
        );
    }

    #[test]
    fn all_orders_distinguishes_interleavings() {
        // facts entail a, so `a` is accepted with probability 1 at any
        // point; `b` sits at exactly the bound
        let sig = Signature::new(vec!["a".into(), "b".into()]).unwrap();
        let c = ThresholdCollection::new(
            sig.clone(),
            vec![fml("a", &sig)],
            vec![fml("a", &sig), fml("b", &sig)],
        )
        .unwrap();
        let m = WorldModel::uniform(sig);
        let p = ThresholdParams::new(ratio(1, 2)).unwrap();
        let collapsed = enumerate_filtered_sequences(&c, &m, &p, false).unwrap();
        assert_eq!(accepted_sets(&collapsed), vec![vec![0, 1]]);
        let every_order = enumerate_filtered_sequences(&c, &m, &p, true).unwrap();
        assert_eq!(accepted_sets(&every_order), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn zero_mass_fact_set_is_an_error() {
        let sig = sig3();
        let c = ThresholdCollection::new(
            sig.clone(),
            vec![fml("a & !a", &sig)],
            vec![fml("b", &sig)],
        )
        .unwrap();
        let m = WorldModel::uniform(sig);
        let p = ThresholdParams::new(ratio(1, 2)).unwrap();
        assert!(matches!(
            enumerate_filtered_sequences(&c, &m, &p, false),
            Err(Error::ZeroMassContext)
        ));
    }

    #[test]
    fn emitted_sequences_pass_the_independent_checker() {
        for eps in [ratio(0, 1), ratio(1, 10), ratio(1, 4), ratio(1, 2), ratio(3, 4)] {
            let c = two_candidate_collection();
            let m = skewed();
            let p = ThresholdParams::new(eps).unwrap();
            for seq in enumerate_filtered_sequences(&c, &m, &p, true).unwrap() {
                verify_filtered_sequence(&c, &m, &p, &seq).unwrap();
            }
        }
    }

    #[test]
    fn checker_rejects_doctored_sequences() {
        let c = two_candidate_collection();
        let m = WorldModel::uniform(c.sig().clone());
        let p = ThresholdParams::new(ratio(1, 4)).unwrap();
        // claims to accept b, which sits below the 3/4 bound
        let bogus = FilteredSequence {
            accepted: vec![0],
            step_probabilities: vec![ratio(1, 2)],
        };
        assert!(verify_filtered_sequence(&c, &m, &p, &bogus).is_err());
        // the empty sequence is not maximal at bound 1/2
        let p = ThresholdParams::new(ratio(1, 2)).unwrap();
        let empty = FilteredSequence {
            accepted: vec![],
            step_probabilities: vec![],
        };
        assert!(verify_filtered_sequence(&c, &m, &p, &empty).is_err());
    }

    #[test]
    fn scaling_the_model_leaves_sequences_unchanged() {
        let c = two_candidate_collection();
        let m = skewed();
        let p = ThresholdParams::new(ratio(1, 10)).unwrap();
        let base = enumerate_filtered_sequences(&c, &m, &p, true).unwrap();
        for factor in [ratio(2, 1), ratio(1, 3), ratio(1000000, 1)] {
            let scaled = m.scaled(&factor).unwrap();
            let got = enumerate_filtered_sequences(&c, &scaled, &p, true).unwrap();
            assert_eq!(base, got);
        }
    }

    #[test]
    fn duplicate_thresholds_are_rejected() {
        let sig = sig3();
        let err = ThresholdCollection::new(
            sig.clone(),
            vec![],
            vec![fml("b", &sig), fml("b", &sig)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateThreshold(_)));
    }
}
