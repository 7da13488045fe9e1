//! Sidon-type sets: membership checks, exact and greedy search, randomized
//! extraction and the dense core.

mod dense_core;
mod extract;
mod search;
mod verify;

pub use dense_core::{dense_core_extract, DenseCoreReport};
pub use extract::{
    certified_bound, extract_random, extract_trials, sampling_probability, trial_rng, ExtractionResult,
    TrialOutcome, TrialSummary,
};
pub use search::{sid_k_exact, sid_k_greedy, ExactResult, DEFAULT_EXACT_CAP};
pub use verify::{
    verify_bfamily, verify_bfamily_budget, verify_multiplicity, BFamilyParams, ViolationWitness, BFAMILY_BUDGET,
};
