//! Reference decider: no isomorphism reduction, no Datalog deferral.

use std::collections::BTreeSet;

use super::{decide_over, enum_options, BoundedQuery, BoundednessVerdict};
use crate::error::{Error, Result};
use crate::logic::{Atom, AtomSet, Name, Term};
use crate::rules::RuleSet;

/// Every nonempty factbase with at most `max_atoms` atoms over the body
/// predicates, whose terms are rule constants or generic constants `o1..`
/// drawn from a pool of `pool` names. Generic names are numbered by first
/// occurrence along the order in which atoms are added, which only removes
/// duplicates that differ by a permutation of the pool; distinct factbases
/// that are isomorphic are all kept.
pub fn oracle_factbases(rs: &RuleSet, max_atoms: usize, pool: usize) -> Vec<AtomSet> {
    let predicates: Vec<(Name, usize)> = rs.body_predicates().into_iter().collect();
    if predicates.is_empty() {
        return vec![AtomSet::new()];
    }
    let fixed: Vec<Term> = rs.rule_constants().into_iter().collect();
    let taken: BTreeSet<String> = fixed.iter().map(|t| t.to_string()).collect();
    let mut prefix = String::from("o");
    while taken.iter().any(|c| c.starts_with(prefix.as_str())) {
        prefix.push('o');
    }
    let pool_term = |i: usize| Term::constant(&format!("{prefix}{i}"));

    let mut out = Vec::new();
    let mut level: BTreeSet<(AtomSet, usize)> = BTreeSet::from([(AtomSet::new(), 0)]);
    for _ in 0..max_atoms {
        let mut next: BTreeSet<(AtomSet, usize)> = BTreeSet::new();
        for (fb, used) in &level {
            for (pred, arity) in &predicates {
                // odometer over choices: fixed constants, then pool names 1..=used+1
                let mut choice = vec![0usize; *arity];
                loop {
                    let mut args = Vec::with_capacity(*arity);
                    let mut seen = *used;
                    let mut valid = true;
                    for &c in &choice {
                        if c < fixed.len() {
                            args.push(fixed[c].clone());
                        } else {
                            let i = c - fixed.len() + 1;
                            if i > seen + 1 || i > pool {
                                valid = false;
                                break;
                            }
                            seen = seen.max(i);
                            args.push(pool_term(i));
                        }
                    }
                    if valid {
                        let atom = Atom::new(pred, args);
                        if !fb.contains(&atom) {
                            let mut grown = fb.clone();
                            grown.insert(atom);
                            next.insert((grown, seen));
                        }
                    }
                    let limit = fixed.len() + used + arity;
                    let mut pos = 0;
                    loop {
                        if pos == choice.len() {
                            break;
                        }
                        choice[pos] += 1;
                        if choice[pos] < limit {
                            break;
                        }
                        choice[pos] = 0;
                        pos += 1;
                    }
                    if pos == choice.len() {
                        break;
                    }
                }
            }
        }
        let sets: BTreeSet<&AtomSet> = next.iter().map(|(fb, _)| fb).collect();
        out.extend(sets.into_iter().cloned());
        level = next;
    }
    out
}

/// The same decision as [`super::check_k_bounded`], computed over
/// [`oracle_factbases`] with `extended_pool` extra generic names and with
/// every within-rank order of Datalog triggers explored. Exact repeated
/// search states are still skipped.
pub fn oracle_check_k_bounded(q: &BoundedQuery, extended_pool: usize) -> Result<BoundednessVerdict> {
    if q.variant == crate::chase::Variant::Equivalent {
        return Err(Error::VariantUnsupported("E".into()));
    }
    let max_arity = q.ruleset.body_predicates().iter().map(|(_, a)| *a).max().unwrap_or(0);
    let pool = q.max_atoms() * max_arity + extended_pool;
    let factbases = oracle_factbases(&q.ruleset, q.max_atoms(), pool);
    decide_over(q, &factbases, &enum_options(&q.budget, true, false))
}
