use std::collections::HashSet;

use serde::Serialize;

use super::derivation::Derivation;
use super::trigger::{Trigger, Variant};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub variant: Variant,
    pub steps: usize,
    pub depth: usize,
    pub is_valid_variant_derivation: bool,
    pub is_rank_compatible: bool,
    pub is_rank_exhaustive: bool,
    pub is_terminating: bool,
    pub first_violation: Option<String>,
}

impl VerifyReport {
    pub fn is_breadth_first(&self) -> bool {
        self.is_rank_compatible && self.is_rank_exhaustive
    }

    fn flag(&mut self, message: String) {
        if self.first_violation.is_none() {
            self.first_violation = Some(message);
        }
    }
}

/// Replays `d` from its initial factbase under `variant` and re-checks
/// every condition: applicability and uniqueness of each step, rank
/// compatibility, rank exhaustiveness at each last step of a rank, and
/// whether any trigger is still applicable at the end.
pub fn verify_derivation(variant: Variant, d: &Derivation) -> VerifyReport {
    let mut report = VerifyReport {
        variant,
        steps: d.steps().len(),
        depth: 0,
        is_valid_variant_derivation: true,
        is_rank_compatible: true,
        is_rank_exhaustive: true,
        is_terminating: false,
        first_violation: None,
    };
    let mut replay = Derivation::with_naming(variant, d.naming(), d.ruleset().clone(), d.initial().clone());
    let steps = d.steps();
    let last_of_rank: HashSet<usize> = {
        let mut out = HashSet::new();
        for (i, s) in steps.iter().enumerate() {
            if !steps[i + 1..].iter().any(|t| t.rank == s.rank) {
                out.insert(i);
            }
        }
        out
    };
    let mut seen: HashSet<&Trigger> = HashSet::new();
    let mut prev_rank = 0;
    for (i, step) in steps.iter().enumerate() {
        let n = i + 1;
        if !seen.insert(&step.trigger) {
            report.is_valid_variant_derivation = false;
            report.flag(format!("step {n}: trigger {} occurs twice", step.trigger));
            return report;
        }
        match replay.is_applicable(&step.trigger) {
            Ok(true) => {}
            Ok(false) => {
                report.is_valid_variant_derivation = false;
                report.flag(format!(
                    "step {n}: trigger {} is not {variant}-applicable",
                    step.trigger
                ));
            }
            Err(e) => {
                report.is_valid_variant_derivation = false;
                report.flag(format!("step {n}: {e}"));
                return report;
            }
        }
        let rank = replay.apply_unchecked(step.trigger.clone()).rank;
        if rank < prev_rank {
            report.is_rank_compatible = false;
            report.flag(format!("step {n}: rank {rank} follows rank {prev_rank}"));
        }
        prev_rank = prev_rank.max(rank);
        if last_of_rank.contains(&i) {
            for t in replay.applicable_triggers() {
                let r = replay.trigger_rank(&t).expect("applicable trigger embeds");
                if r != rank + 1 {
                    report.is_rank_exhaustive = false;
                    report.flag(format!(
                        "step {n}: last step of rank {rank}, but {t} of rank {r} is still {variant}-applicable"
                    ));
                    break;
                }
            }
        }
    }
    report.depth = replay.depth();
    report.is_terminating = replay.applicable_triggers().is_empty();
    report
}
