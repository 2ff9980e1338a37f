//! Ranking extensions by the smallest threshold parameter that replays
//! them.
//!
//! For a normal theory, an extension can be rebuilt by sequential
//! thresholding: use the facts as the fact set and feed the generating
//! consequents through the threshold test in some grounded order. The
//! slack required by an order is the worst step improbability
//! `max_i (1 - Pr(consequent_i | facts + earlier consequents))`, and
//! `eps_min` is the minimum of that over all grounded orderings. A smaller
//! `eps_min` means every step of some replay stays closer to certainty, so
//! extensions are ranked ascending by it.
//!
//! An ordering that hits a step probability of exactly 0 can never pass
//! the threshold test at any valid parameter and is skipped; if every
//! ordering is skipped the extension is reported unrankable.

use num_traits::Zero;

use crate::defaults::{enumerate_extensions, grounded_orderings, DefaultTheory, Extension};
use crate::error::{Error, Result};
use crate::model::WorldModel;
use crate::rational::{one_minus, Rational};
use crate::worlds::{models_of, models_of_formula};

/// Cap on the generating-set size for exhaustive ordering search.
pub const GENERATING_ORDERING_CAP: usize = 8;

/// A scoring function over extensions; smaller scores rank earlier.
///
/// The shipped measure is [`MinReplaySlack`]; the trait exists so other
/// functionals of the replay behaviour can slot into the same ranking.
pub trait GoodnessMeasure {
    fn score(
        &self,
        theory: &DefaultTheory,
        model: &WorldModel,
        extension: &Extension,
    ) -> Result<Rational>;
}

/// Scores an extension by `eps_min`, the smallest threshold parameter
/// under which some grounded replay of its generating defaults succeeds.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinReplaySlack;

impl GoodnessMeasure for MinReplaySlack {
    fn score(
        &self,
        theory: &DefaultTheory,
        model: &WorldModel,
        extension: &Extension,
    ) -> Result<Rational> {
        epsilon_min(theory, model, extension).map(|scored| scored.eps_min)
    }
}

/// An extension scored by the minimum replay slack, with the ordering that
/// attains it and the step probabilities observed along that ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedExtension {
    pub extension: Extension,
    pub eps_min: Rational,
    pub witness_order: Vec<String>,
    pub witness_step_probs: Vec<Rational>,
}

/// The ranked extensions of a theory, ascending by `eps_min`, plus any
/// extensions that no valid parameter can replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    pub ranked: Vec<RankedExtension>,
    pub unrankable: Vec<Extension>,
}

impl Ranking {
    /// Dense display ranks: equal `eps_min` values share a rank.
    pub fn display_ranks(&self) -> Vec<usize> {
        let mut ranks = Vec::with_capacity(self.ranked.len());
        let mut rank = 0usize;
        for (i, entry) in self.ranked.iter().enumerate() {
            if i == 0 || entry.eps_min != self.ranked[i - 1].eps_min {
                rank += 1;
            }
            ranks.push(rank);
        }
        ranks
    }
}

fn check_preconditions(theory: &DefaultTheory, model: &WorldModel) -> Result<()> {
    if let Some(rule) = theory.first_non_normal() {
        return Err(Error::NonNormalRule(rule.name.clone()));
    }
    if theory.sig() != model.sig() {
        return Err(Error::SignatureMismatch);
    }
    if model.mass(&models_of(theory.facts(), theory.sig())).is_zero() {
        return Err(Error::ZeroMassContext);
    }
    Ok(())
}

/// Score one extension. The theory must be normal, the fact models must
/// have positive mass, and the generating set must fit the ordering cap.
pub fn epsilon_min(
    theory: &DefaultTheory,
    model: &WorldModel,
    extension: &Extension,
) -> Result<RankedExtension> {
    check_preconditions(theory, model)?;
    if extension.generating.len() > GENERATING_ORDERING_CAP {
        return Err(Error::TooManyGenerating {
            count: extension.generating.len(),
            cap: GENERATING_ORDERING_CAP,
        });
    }
    let sig = theory.sig();
    let fact_ctx = models_of(theory.facts(), sig);
    let fact_mass = model.mass(&fact_ctx);

    let mut best: Option<RankedExtension> = None;
    'orders: for order in grounded_orderings(theory, extension) {
        let mut ctx = fact_ctx.clone();
        let mut ctx_mass = fact_mass.clone();
        let mut worst = Rational::zero();
        let mut probs = Vec::with_capacity(order.len());
        for name in &order {
            let consequent = &theory.rule(name).expect("ordering names a theory rule").consequent;
            let sat = ctx.intersection(&models_of_formula(consequent, sig));
            let sat_mass = model.mass(&sat);
            if sat_mass.is_zero() {
                // this step can never clear a threshold below 1
                continue 'orders;
            }
            let p = &sat_mass / &ctx_mass;
            let slack = one_minus(&p);
            if slack > worst {
                worst = slack;
            }
            probs.push(p);
            ctx = sat;
            ctx_mass = sat_mass;
        }
        let better = match &best {
            None => true,
            Some(b) => worst < b.eps_min,
        };
        if better {
            best = Some(RankedExtension {
                extension: extension.clone(),
                eps_min: worst,
                witness_order: order,
                witness_step_probs: probs,
            });
        }
    }
    best.ok_or(Error::UnrankableExtension)
}

/// Score and sort every extension of the theory. Ties share a rank (see
/// [`Ranking::display_ranks`]); the sort is tie-broken by the canonical
/// model-set order for stable output.
pub fn rank_extensions(theory: &DefaultTheory, model: &WorldModel) -> Result<Ranking> {
    check_preconditions(theory, model)?;
    let mut ranked = Vec::new();
    let mut unrankable = Vec::new();
    for extension in enumerate_extensions(theory)? {
        match epsilon_min(theory, model, &extension) {
            Ok(entry) => ranked.push(entry),
            Err(Error::UnrankableExtension) => unrankable.push(extension),
            Err(other) => return Err(other),
        }
    }
    ranked.sort_by(|a, b| {
        a.eps_min
            .cmp(&b.eps_min)
            .then_with(|| a.extension.model_set.cmp(&b.extension.model_set))
    });
    Ok(Ranking { ranked, unrankable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defaults::DefaultRule;
    use crate::formula::Formula;
    use crate::parser::parse_formula;
    use crate::rational::ratio;
    use crate::threshold::{
        enumerate_filtered_sequences, ThresholdCollection, ThresholdParams,
    };
    use crate::worlds::Signature;

    fn sig3() -> Signature {
        Signature::new(vec!["a".into(), "a'".into(), "b".into()]).unwrap()
    }

    fn fml(text: &str, sig: &Signature) -> Formula {
        parse_formula(text, sig).unwrap()
    }

    fn two_rule_conflict() -> DefaultTheory {
        let sig = sig3();
        DefaultTheory::new(
            sig.clone(),
            vec![fml("a", &sig), fml("a'", &sig)],
            vec![
                DefaultRule::normal("d1", fml("a", &sig), fml("b", &sig)),
                DefaultRule::normal("d2", fml("a'", &sig), fml("!b", &sig)),
            ],
        )
        .unwrap()
    }

    fn skewed() -> WorldModel {
        WorldModel::build(
            sig3(),
            vec![(7, ratio(1, 1)), (3, ratio(99, 1))],
            ratio(1, 1),
        )
        .unwrap()
    }

    #[test]
    fn uniform_weights_tie_at_one_half() {
        let th = two_rule_conflict();
        let m = WorldModel::uniform(th.sig().clone());
        let ranking = rank_extensions(&th, &m).unwrap();
        assert_eq!(ranking.ranked.len(), 2);
        assert!(ranking.unrankable.is_empty());
        for entry in &ranking.ranked {
            assert_eq!(entry.eps_min, ratio(1, 2));
            assert_eq!(entry.witness_step_probs, vec![ratio(1, 2)]);
        }
        assert_eq!(ranking.display_ranks(), vec![1, 1]);
    }

    #[test]
    fn skewed_weights_prefer_the_heavy_extension() {
        let th = two_rule_conflict();
        let m = skewed();
        let ranking = rank_extensions(&th, &m).unwrap();
        assert_eq!(ranking.ranked.len(), 2);
        let first = &ranking.ranked[0];
        let second = &ranking.ranked[1];
        assert_eq!(first.eps_min, ratio(1, 100));
        assert_eq!(first.witness_order, vec!["d2"]);
        assert_eq!(first.witness_step_probs, vec![ratio(99, 100)]);
        // the !b extension is the singleton world {a, a', !b}
        assert_eq!(first.extension.model_set.ids(), vec![3]);
        assert_eq!(second.eps_min, ratio(99, 100));
        assert_eq!(ranking.display_ranks(), vec![1, 2]);
    }

    #[test]
    fn empty_generating_set_scores_zero() {
        let sig = sig3();
        let th = DefaultTheory::new(sig.clone(), vec![fml("a", &sig)], vec![]).unwrap();
        let m = WorldModel::uniform(sig);
        let ranking = rank_extensions(&th, &m).unwrap();
        assert_eq!(ranking.ranked.len(), 1);
        assert_eq!(ranking.ranked[0].eps_min, ratio(0, 1));
        assert_eq!(ranking.ranked[0].witness_order, Vec::<String>::new());
        assert_eq!(ranking.display_ranks(), vec![1]);
    }

    /// Two orderings of the same generating set give different worst
    /// steps; eps_min takes the better one.
    #[test]
    fn ordering_choice_matters() {
        // ids: 0={!a,!b} 1={a,!b} 2={!a,b} 3={a,b}, weights 1/2/1/4
        let (th, m) = order_sensitive_instance();
        let exts = enumerate_extensions(&th).unwrap();
        assert_eq!(exts.len(), 1);
        let scored = epsilon_min(&th, &m, &exts[0]).unwrap();
        // <da, db>: worst of {1 - 3/4, 1 - 2/3} = 1/3
        // <db, da>: worst of {1 - 5/8, 1 - 4/5} = 3/8
        assert_eq!(scored.eps_min, ratio(1, 3));
        assert_eq!(scored.witness_order, vec!["da", "db"]);
        assert_eq!(scored.witness_step_probs, vec![ratio(3, 4), ratio(2, 3)]);
    }

    fn order_sensitive_instance() -> (DefaultTheory, WorldModel) {
        let sig = Signature::new(vec!["a".into(), "b".into()]).unwrap();
        let th = DefaultTheory::new(
            sig.clone(),
            vec![],
            vec![
                DefaultRule::normal("da", Formula::Top, fml("a", &sig)),
                DefaultRule::normal("db", Formula::Top, fml("b", &sig)),
            ],
        )
        .unwrap();
        let m = WorldModel::build(
            sig,
            vec![(3, ratio(4, 1)), (1, ratio(2, 1))],
            ratio(1, 1),
        )
        .unwrap();
        (th, m)
    }

    fn replay_check(th: &DefaultTheory, m: &WorldModel) {
        let ranking = rank_extensions(th, m).unwrap();
        for entry in &ranking.ranked {
            let consequents: Vec<Formula> = entry
                .witness_order
                .iter()
                .map(|n| th.rule(n).unwrap().consequent.clone())
                .collect();
            let c = ThresholdCollection::new(
                th.sig().clone(),
                th.facts().to_vec(),
                consequents.clone(),
            )
            .unwrap();
            let at = ThresholdParams::new(entry.eps_min.clone()).unwrap();
            let seqs = enumerate_filtered_sequences(&c, m, &at, true).unwrap();
            let want: std::collections::BTreeSet<usize> = (0..consequents.len()).collect();
            assert!(
                seqs.iter().any(|s| s.accepted_set() == want),
                "witness set must be accepted at eps_min"
            );
            // strictly below eps_min no order reaches the full set
            let below = &entry.eps_min * ratio(99, 100);
            let at = ThresholdParams::new(below).unwrap();
            let seqs = enumerate_filtered_sequences(&c, m, &at, true).unwrap();
            assert!(
                seqs.iter().all(|s| s.accepted_set() != want),
                "witness set must be unreachable below eps_min"
            );
        }
    }

    /// Replaying the witness as a threshold collection succeeds exactly at
    /// eps_min and fails for any smaller parameter.
    #[test]
    fn witness_replays_at_eps_min_and_not_below() {
        let th = two_rule_conflict();
        replay_check(&th, &skewed());
        replay_check(&th, &WorldModel::uniform(th.sig().clone()));
        let (th, m) = order_sensitive_instance();
        replay_check(&th, &m);
    }

    #[test]
    fn non_normal_theories_are_refused() {
        let sig = Signature::new(vec!["p".into(), "q".into()]).unwrap();
        let th = DefaultTheory::new(
            sig.clone(),
            vec![],
            vec![DefaultRule::new(
                "s",
                fml("p", &sig),
                vec![fml("!p & q", &sig)],
                fml("q", &sig),
            )],
        )
        .unwrap();
        let m = WorldModel::uniform(sig);
        assert!(matches!(
            rank_extensions(&th, &m),
            Err(Error::NonNormalRule(_))
        ));
    }

    #[test]
    fn zero_probability_consequent_is_unrankable() {
        let sig = Signature::new(vec!["a".into()]).unwrap();
        let th = DefaultTheory::new(
            sig.clone(),
            vec![],
            vec![DefaultRule::normal("d", Formula::Top, fml("a", &sig))],
        )
        .unwrap();
        // the a-world exists but carries no mass
        let m = WorldModel::build(sig, vec![(1, ratio(0, 1))], ratio(1, 1)).unwrap();
        let ranking = rank_extensions(&th, &m).unwrap();
        // extensions: models(a) generated by d (unrankable), and none other
        assert_eq!(ranking.ranked.len(), 0);
        assert_eq!(ranking.unrankable.len(), 1);
    }

    #[test]
    fn trait_scores_match_the_detailed_ranking() {
        let th = two_rule_conflict();
        let m = skewed();
        for entry in rank_extensions(&th, &m).unwrap().ranked {
            assert_eq!(
                MinReplaySlack.score(&th, &m, &entry.extension).unwrap(),
                entry.eps_min
            );
        }
    }

    #[test]
    fn scaling_weights_leaves_the_ranking_unchanged() {
        let th = two_rule_conflict();
        let m = skewed();
        let base = rank_extensions(&th, &m).unwrap();
        for factor in [ratio(2, 1), ratio(1, 3), ratio(1000000, 1)] {
            let scaled = m.scaled(&factor).unwrap();
            assert_eq!(base, rank_extensions(&th, &scaled).unwrap());
        }
    }
}
