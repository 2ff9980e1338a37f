//! Structured (JSON) report types.
//!
//! Reports are the machine-readable face of every subcommand: world sets
//! appear as canonical id lists alongside rendered assignments, and every
//! probability or weight is an exact rational string (`p/q`), never a
//! decimal. Re-parsing a report reproduces the same ids and rationals
//! bit-exactly.

use serde::{Deserialize, Serialize};

use nmr_core::{Extension, Signature, WorldSet};

pub fn world_strings(sig: &Signature, ws: &WorldSet) -> Vec<String> {
    ws.iter().map(|id| sig.world(id).to_string()).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExtensionReport {
    pub generating: Vec<String>,
    pub model_ids: Vec<u64>,
    pub models: Vec<String>,
    pub inconsistent: bool,
}

impl ExtensionReport {
    pub fn new(sig: &Signature, ext: &Extension) -> ExtensionReport {
        ExtensionReport {
            generating: ext.generating.iter().cloned().collect(),
            model_ids: ext.model_set.ids(),
            models: world_strings(sig, &ext.model_set),
            inconsistent: ext.inconsistent,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExtensionsReport {
    pub signature: Vec<String>,
    pub extensions: Vec<ExtensionReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct QueryReport {
    pub formula: String,
    pub probability: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SequenceReport {
    pub accepted: Vec<String>,
    pub step_probabilities: Vec<String>,
    pub final_ids: Vec<u64>,
    pub final_worlds: Vec<String>,
    pub queries: Vec<QueryReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThresholdReport {
    pub signature: Vec<String>,
    pub epsilon: String,
    pub bound: String,
    pub sequences: Vec<SequenceReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassReport {
    /// "background", "step", or "final".
    pub role: String,
    /// Rule that produced this class (steps only).
    pub applied: Option<String>,
    /// The rule's result formula (steps only).
    pub result: Option<String>,
    /// Weighted proportion of the result in the pre-step context
    /// (threshold mode steps only).
    pub proportion: Option<String>,
    pub ids: Vec<u64>,
    pub worlds: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PartitionSequenceReport {
    pub classes: Vec<ClassReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PartitionsReport {
    pub signature: Vec<String>,
    pub mode: String,
    pub epsilon: Option<String>,
    pub sequences: Vec<PartitionSequenceReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RankedReport {
    pub rank: usize,
    pub generating: Vec<String>,
    pub model_ids: Vec<u64>,
    pub models: Vec<String>,
    pub eps_min: String,
    pub witness_order: Vec<String>,
    pub witness_step_probs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RankReport {
    pub signature: Vec<String>,
    pub ranked: Vec<RankedReport>,
    pub unrankable: Vec<ExtensionReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Canonical model-set families from the two routes.
    pub extension_model_ids: Vec<Vec<u64>>,
    pub partition_final_ids: Vec<Vec<u64>>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThresholdEquivalenceReport {
    pub filtered_sequences: Vec<Vec<String>>,
    pub partition_sequences: Vec<Vec<String>>,
    /// Number of final-context probability identities verified.
    pub probability_checks: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckReport {
    pub signature: Vec<String>,
    pub default_partition: Option<EquivalenceReport>,
    pub threshold_partition: Option<ThresholdEquivalenceReport>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModelsReport {
    pub signature: Vec<String>,
    pub formula: String,
    pub ids: Vec<u64>,
    pub worlds: Vec<String>,
}
