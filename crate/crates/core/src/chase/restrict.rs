use std::collections::HashSet;

use super::derivation::Derivation;
use super::runner::rank_candidates;
use super::trigger::{Trigger, Variant};
use crate::error::{Error, Result};
use crate::logic::AtomSet;

/// The restriction of `d` to `keep`: replay left to right and retain a step
/// iff its body image is already present. Applicability is not re-checked,
/// so the result is a plain derivation (an X-derivation for O, SO and R).
pub fn restrict(d: &Derivation, keep: &AtomSet) -> Result<Derivation> {
    if let Some(atom) = keep.iter().find(|a| !d.initial().contains(a)) {
        return Err(Error::KeepNotSubset(atom.clone()));
    }
    let mut out = Derivation::with_naming(d.variant(), d.naming(), d.ruleset().clone(), keep.clone());
    for step in d.steps() {
        let rule = d.rule(&step.trigger.rule)?;
        if step.trigger.body_image(rule).is_subset(out.factbase()) {
            out.apply_unchecked(step.trigger.clone());
        }
    }
    Ok(out)
}

/// Extends a restriction into a breadth-first derivation from the same
/// initial factbase. At each rank the retained triggers of that rank are
/// replayed first (when still applicable), then the rank is completed with
/// every other applicable trigger in enumeration order. Stops once the last
/// rank of the restriction has been completed.
pub fn breadth_first_completion(variant: Variant, restricted: &Derivation) -> Result<Derivation> {
    if variant == Variant::Equivalent {
        return Err(Error::VariantUnsupported("E".into()));
    }
    let mut out = Derivation::with_naming(
        variant,
        variant.naming_mode(),
        restricted.ruleset().clone(),
        restricted.initial().clone(),
    );
    let retained: Vec<Trigger> = restricted.steps().iter().map(|s| s.trigger.clone()).collect();
    let max_rank = restricted.steps().iter().map(|s| s.rank).max().unwrap_or(0);
    let mut placed: HashSet<usize> = HashSet::new();
    let mut rank = 1;
    while rank <= max_rank {
        for (i, t) in retained.iter().enumerate() {
            if placed.contains(&i) {
                continue;
            }
            let rule = out.rule(&t.rule)?;
            if !t.body_image(rule).is_subset(out.factbase()) {
                continue;
            }
            if out.trigger_rank(t)? == rank && out.is_applicable(t)? {
                out.apply_unchecked(t.clone());
                placed.insert(i);
            }
        }
        for t in rank_candidates(&out, rank) {
            if out.is_applicable(&t)? {
                out.apply_unchecked(t);
            }
        }
        rank += 1;
    }
    Ok(out)
}

/// True iff every trigger of `sub` occurs in `sup`, in the same relative order.
pub fn is_subderivation(sub: &Derivation, sup: &Derivation) -> bool {
    let mut it = sup.steps().iter();
    sub.steps().iter().all(|s| it.by_ref().any(|t| t.trigger == s.trigger))
}
