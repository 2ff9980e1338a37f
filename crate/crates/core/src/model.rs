//! Weighted possible-world models and exact conditional probability.
//!
//! Weights are nonnegative rationals; worlds not listed explicitly carry a
//! default weight (1 unless overridden), so the empty model is the uniform
//! one. Probabilities are weighted proportions of world sets, computed
//! exactly: a zero-mass context is a reportable error, never silently 0.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::rational::Rational;
use crate::worlds::{models_of, models_of_formula, Signature, WorldSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldModel {
    sig: Signature,
    default_weight: Rational,
    explicit: BTreeMap<u64, Rational>,
}

impl WorldModel {
    /// The uniform model: every world has weight 1.
    pub fn uniform(sig: Signature) -> WorldModel {
        WorldModel {
            sig,
            default_weight: Rational::from_integer(BigInt::from(1)),
            explicit: BTreeMap::new(),
        }
    }

    /// Build a model from explicit `(world id, weight)` entries; unlisted
    /// worlds get `default_weight`.
    pub fn build(
        sig: Signature,
        entries: Vec<(u64, Rational)>,
        default_weight: Rational,
    ) -> Result<WorldModel> {
        if default_weight.is_negative() {
            return Err(Error::NegativeWeight {
                world: "(default)".into(),
            });
        }
        let mut explicit = BTreeMap::new();
        for (id, weight) in entries {
            if weight.is_negative() {
                return Err(Error::NegativeWeight {
                    world: sig.world(id).to_string(),
                });
            }
            if explicit.insert(id, weight).is_some() {
                return Err(Error::DuplicateWeightEntry {
                    world: sig.world(id).to_string(),
                });
            }
        }
        let model = WorldModel {
            sig,
            default_weight,
            explicit,
        };
        if model.total_mass().is_zero() {
            return Err(Error::ZeroTotalMass);
        }
        Ok(model)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn weight(&self, world: u64) -> &Rational {
        self.explicit.get(&world).unwrap_or(&self.default_weight)
    }

    /// Sum of the weights of the worlds in `ws`.
    pub fn mass(&self, ws: &WorldSet) -> Rational {
        let mut listed = Rational::zero();
        let mut listed_count: usize = 0;
        if self.explicit.len() <= ws.len() {
            for (id, w) in &self.explicit {
                if ws.contains(*id) {
                    listed += w;
                    listed_count += 1;
                }
            }
        } else {
            for id in ws.iter() {
                if let Some(w) = self.explicit.get(&id) {
                    listed += w;
                    listed_count += 1;
                }
            }
        }
        let rest = BigInt::from(ws.len() - listed_count);
        listed + &self.default_weight * Rational::from_integer(rest)
    }

    pub fn total_mass(&self) -> Rational {
        self.mass(&self.sig.all_worlds())
    }

    /// Weighted proportion of `context` worlds that satisfy `f`.
    /// Errors if the context has zero total mass.
    pub fn proportion(&self, f: &Formula, context: &WorldSet) -> Result<Rational> {
        let denom = self.mass(context);
        if denom.is_zero() {
            return Err(Error::ZeroMassContext);
        }
        let sat = context.intersection(&models_of_formula(f, &self.sig));
        Ok(self.mass(&sat) / denom)
    }

    /// `Pr(f | given)`: the proportion of `f` among the models of `given`.
    pub fn conditional_probability<'a, I>(&self, f: &Formula, given: I) -> Result<Rational>
    where
        I: IntoIterator<Item = &'a Formula>,
    {
        self.proportion(f, &models_of(given, &self.sig))
    }

    /// The same model with every weight multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: &Rational) -> Result<WorldModel> {
        if !factor.is_positive() {
            return Err(Error::NegativeWeight {
                world: "(scale factor)".into(),
            });
        }
        Ok(WorldModel {
            sig: self.sig.clone(),
            default_weight: &self.default_weight * factor,
            explicit: self
                .explicit
                .iter()
                .map(|(id, w)| (*id, w * factor))
                .collect(),
        })
    }
}
