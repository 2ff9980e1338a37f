//! Nonmonotonic reasoning kernel over finite propositional signatures.
//!
//! The crate computes four related artifacts from a default theory or a
//! threshold collection, all by exhaustive possible-world enumeration in
//! exact rational arithmetic:
//!
//! * default-logic **extensions**: fixed points of the usual closure
//!   operator, found by searching the fact-plus-consequents candidate
//!   space ([`defaults`]);
//! * **filtered sequences** from sequential probabilistic thresholding
//!   over a weighted world model ([`threshold`]);
//! * possible-world **partition sequences**, one generic process that
//!   instantiates to either of the above and makes the evolving reasoning
//!   context explicit ([`partition`]);
//! * a **ranking** of competing extensions by the smallest threshold
//!   parameter that replays each one ([`ranking`]).
//!
//! Signatures are deliberately small (default cap of 20 propositions), so
//! every semantic question is settled by enumerating models. That keeps
//! the engines obviously correct and makes results bit-for-bit
//! reproducible, including at threshold boundaries where floating point
//! would misdecide `>=`.

pub mod defaults;
pub mod error;
pub mod files;
pub mod formula;
pub mod model;
pub mod parser;
pub mod partition;
pub mod ranking;
pub mod rational;
pub mod threshold;
pub mod worlds;

pub use defaults::{
    default_closure, enumerate_extensions, grounded_orderings, is_extension, DefaultRule,
    DefaultTheory, Extension, RuleKind, DEFAULT_ENUMERATION_CAP,
};
pub use error::{Error, Result, SyntaxError};
pub use files::{
    parse_theory_file, parse_theory_file_with_cap, parse_weights_file, TheoryFile,
};
pub use formula::Formula;
pub use model::WorldModel;
pub use parser::{parse_formula, parse_formula_inferring};
pub use partition::{
    default_rules_of, enumerate_partition_sequences, run_partition, threshold_rules_of, NmRule,
    PartitionSequence, RuleCondition, RULE_ENUMERATION_CAP,
};
pub use ranking::{
    epsilon_min, rank_extensions, GoodnessMeasure, MinReplaySlack, RankedExtension, Ranking,
    GENERATING_ORDERING_CAP,
};
pub use rational::{parse_rational, ratio, Rational};
pub use threshold::{
    enumerate_filtered_sequences, step_probability, threshold_probability,
    verify_filtered_sequence, FilteredSequence, ThresholdCollection, ThresholdParams,
};
pub use worlds::{
    entails, evaluate, models_of, models_of_formula, Signature, World, WorldSet,
    DEFAULT_PROP_CAP,
};
