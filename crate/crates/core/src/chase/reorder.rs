//! Turning terminating derivations into rank-compatible or breadth-first ones.

use std::collections::HashSet;

use super::derivation::Derivation;
use super::trigger::{rule_triggers, Trigger, Variant};

/// Replays the triggers of `d` sorted by rank (stable), skipping those that
/// are not applicable at their new position.
pub fn rank_sorted_replay(variant: Variant, d: &Derivation) -> Derivation {
    let mut order: Vec<(usize, &Trigger)> = d.steps().iter().map(|s| (s.rank, &s.trigger)).collect();
    order.sort_by_key(|(rank, _)| *rank);
    let mut out = Derivation::with_naming(variant, d.naming(), d.ruleset().clone(), d.initial().clone());
    for (_, t) in order {
        let rule = out.rule(&t.rule).expect("trigger of the same ruleset");
        if t.body_image(rule).is_subset(out.factbase()) && out.is_applicable(t).unwrap_or(false) {
            out.apply_unchecked(t.clone());
        }
    }
    out
}

/// Rebuilds an SO-derivation level by level, replacing each pending trigger
/// by a frontier-equal trigger that is applicable on the levels built so far.
/// Frontier-keyed nulls make the replacement invisible to later triggers.
pub fn so_breadth_first_reorder(d: &Derivation) -> Derivation {
    let mut pending: Vec<Trigger> = d.steps().iter().map(|s| s.trigger.clone()).collect();
    let mut out = Derivation::new(Variant::SemiOblivious, d.ruleset().clone(), d.initial().clone());
    loop {
        let mut taken: HashSet<usize> = HashSet::new();
        let mut replacements: Vec<Trigger> = Vec::new();
        for (i, t) in pending.iter().enumerate() {
            let rule = out.rule(&t.rule).expect("trigger of the same ruleset").clone();
            let frontier = t.frontier_image(&rule);
            let found = rule_triggers(&rule, out.factbase()).into_iter().find(|u| {
                u.frontier_image(&rule) == frontier
                    && !replacements
                        .iter()
                        .any(|r| r.rule == u.rule && r.frontier_image(&rule) == frontier)
                    && out.is_applicable(u).unwrap_or(false)
            });
            if let Some(u) = found {
                taken.insert(i);
                replacements.push(u);
            }
        }
        if replacements.is_empty() {
            return out;
        }
        replacements.sort_by_key(|t| out.trigger_rank(t).expect("found on this factbase"));
        for t in replacements {
            if out.is_applicable(&t).unwrap_or(false) {
                out.apply_unchecked(t);
            }
        }
        pending = pending
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !taken.contains(i))
            .map(|(_, t)| t)
            .collect();
    }
}
