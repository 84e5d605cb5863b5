use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::derivation::Derivation;
use super::trigger::{Trigger, Variant};
use crate::rules::KnowledgeBase;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Rules in ruleset order, then substitutions in their total order.
    Deterministic,
    /// The deterministic order shuffled per rank by a seeded ChaCha8 stream.
    Random(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaltReason {
    Terminated,
    DepthCap,
    StepCap,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HaltReason::Terminated => "terminated",
            HaltReason::DepthCap => "depth_cap",
            HaltReason::StepCap => "step_cap",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub policy: Policy,
    pub depth_cap: usize,
    pub step_cap: usize,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            policy: Policy::Deterministic,
            depth_cap: 100,
            step_cap: 10_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub derivation: Derivation,
    pub halt: HaltReason,
}

/// Unapplied triggers whose rank is exactly `rank`, in enumeration order.
pub(crate) fn rank_candidates(d: &Derivation, rank: usize) -> Vec<Trigger> {
    d.all_triggers()
        .into_iter()
        .filter(|t| !d.contains_trigger(t))
        .filter(|t| d.trigger_rank(t).expect("enumerated trigger embeds") == rank)
        .collect()
}

/// Builds one breadth-first derivation rank by rank.
///
/// The candidates of rank κ are fixed when the rank starts and re-checked
/// for applicability right before each application. The run stops as
/// terminated once a rank adds no atom, and with `DepthCap` as soon as a
/// trigger would add an atom of rank `depth_cap + 1` (that trigger is not
/// applied).
pub fn run_breadth_first(variant: Variant, kb: &KnowledgeBase, config: RunConfig) -> RunOutcome {
    let mut d = Derivation::new(variant, Arc::new(kb.ruleset.clone()), kb.factbase.clone());
    let mut rng = match config.policy {
        Policy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Policy::Deterministic => None,
    };
    let mut rank = 1;
    loop {
        let mut candidates = rank_candidates(&d, rank);
        if let Some(rng) = rng.as_mut() {
            candidates.shuffle(rng);
        }
        let mut grew = false;
        for t in candidates {
            if !d.is_applicable(&t).expect("candidate embeds") {
                continue;
            }
            if rank > config.depth_cap && !d.would_produce(&t).expect("candidate embeds").is_empty() {
                return RunOutcome {
                    derivation: d,
                    halt: HaltReason::DepthCap,
                };
            }
            if d.steps().len() >= config.step_cap {
                return RunOutcome {
                    derivation: d,
                    halt: HaltReason::StepCap,
                };
            }
            grew |= !d.apply_unchecked(t).produced.is_empty();
        }
        if !grew {
            return RunOutcome {
                derivation: d,
                halt: HaltReason::Terminated,
            };
        }
        rank += 1;
    }
}

/// Applies uniformly random applicable triggers of any rank until none is
/// left or `step_cap` steps were made. The result is exhaustive when the
/// returned flag is true, but in general not breadth-first.
pub fn run_unrestricted(variant: Variant, kb: &KnowledgeBase, seed: u64, step_cap: usize) -> (Derivation, bool) {
    let mut d = Derivation::new(variant, Arc::new(kb.ruleset.clone()), kb.factbase.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while d.steps().len() < step_cap {
        let applicable = d.applicable_triggers();
        let Some(t) = applicable.choose(&mut rng).cloned() else {
            return (d, true);
        };
        d.apply_unchecked(t);
    }
    let done = d.applicable_triggers().is_empty();
    (d, done)
}
