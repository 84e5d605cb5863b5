//! Small factbases over the body predicates of a ruleset, one per
//! isomorphism class (rule constants are never renamed).

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use super::DecisionBudget;
use crate::error::{Error, Result};
use crate::logic::{canonicalize, Atom, AtomSet, Name, Term, DEFAULT_CANON_BUDGET};
use crate::rules::RuleSet;

const PREFIXES: [&str; 4] = ["c", "k", "g", "gen"];

/// A constant name prefix such that `prefix` followed by digits never
/// collides with a constant of the ruleset.
pub(crate) fn generic_prefix(rule_constants: &BTreeSet<Term>) -> String {
    let clashes = |prefix: &str| {
        rule_constants.iter().any(|t| match t {
            Term::Constant(c) => c
                .strip_prefix(prefix)
                .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|ch| ch.is_ascii_digit())),
            _ => false,
        })
    };
    for prefix in PREFIXES {
        if !clashes(prefix) {
            return prefix.to_string();
        }
    }
    let mut n = 0;
    loop {
        let prefix = format!("gen{n}x");
        if !clashes(&prefix) {
            return prefix;
        }
        n += 1;
    }
}

pub(crate) fn generic(prefix: &str, index: usize) -> Term {
    Term::constant(&format!("{prefix}{index}"))
}

/// Every argument tuple for an atom of the given arity whose terms are
/// `fixed`, one of the `used` generic constants, or new generic constants
/// numbered in order of first use.
pub(crate) fn argument_tuples(arity: usize, fixed: &[Term], used: usize, prefix: &str) -> Vec<Vec<Term>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(arity);
    fn go(arity: usize, fixed: &[Term], next: usize, prefix: &str, current: &mut Vec<Term>, out: &mut Vec<Vec<Term>>) {
        if current.len() == arity {
            out.push(current.clone());
            return;
        }
        for t in fixed {
            current.push(t.clone());
            go(arity, fixed, next, prefix, current, out);
            current.pop();
        }
        for i in 1..=next + 1 {
            current.push(generic(prefix, i));
            go(arity, fixed, next.max(i), prefix, current, out);
            current.pop();
        }
    }
    go(arity, fixed, used, prefix, &mut current, &mut out);
    out
}

fn check_budget(budget: &DecisionBudget, produced: usize) -> Result<()> {
    let over_count = budget.max_factbases.is_some_and(|m| produced as u64 > m);
    let over_time = budget.deadline.is_some_and(|d| Instant::now() >= d);
    if over_count || over_time {
        return Err(Error::BudgetExceeded {
            reason: if over_count {
                "factbase budget while enumerating representatives"
            } else {
                "time budget while enumerating representatives"
            }
            .into(),
            factbases_examined: 0,
            derivations_examined: 0,
        });
    }
    Ok(())
}

/// Representatives of all nonempty factbases with at most `max_atoms` atoms
/// over the body predicates of `rs`, up to isomorphism fixing the rule
/// constants. Generic terms are constants named by the canonical labelling,
/// so the output is deterministic. A ruleset without body predicates yields
/// only the empty factbase.
///
/// Each factbase of size n+1 is an n-atom representative plus one atom
/// whose terms are old or new, so growing every representative by every
/// such atom reaches every class.
pub fn enumerate_representative_factbases(
    rs: &RuleSet,
    max_atoms: usize,
    budget: &DecisionBudget,
) -> Result<Vec<AtomSet>> {
    let predicates: Vec<(Name, usize)> = rs.body_predicates().into_iter().collect();
    if predicates.is_empty() {
        return Ok(vec![AtomSet::new()]);
    }
    let constants = rs.rule_constants();
    let fixed: Vec<Term> = constants.iter().cloned().collect();
    let prefix = generic_prefix(&constants);
    let is_fixed = |t: &Term| constants.contains(t);

    let mut out = Vec::new();
    let mut level: Vec<(AtomSet, usize)> = vec![(AtomSet::new(), 0)];
    for _ in 0..max_atoms {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut next: Vec<(Vec<u8>, AtomSet, usize)> = Vec::new();
        for (fb, used) in &level {
            for (pred, arity) in &predicates {
                for args in argument_tuples(*arity, &fixed, *used, &prefix) {
                    let atom = Atom::new(pred, args);
                    if fb.contains(&atom) {
                        continue;
                    }
                    let mut grown = fb.clone();
                    grown.insert(atom);
                    let canon = canonicalize(&grown, &is_fixed, DEFAULT_CANON_BUDGET)?;
                    if !seen.insert(canon.encoding.clone()) {
                        continue;
                    }
                    check_budget(budget, out.len() + next.len() + 1)?;
                    let relabel = |t: &Term| match canon.labels.get(t) {
                        Some(l) => generic(&prefix, *l as usize + 1),
                        None => t.clone(),
                    };
                    let rep: AtomSet = grown
                        .iter()
                        .map(|a| Atom::new(&a.predicate, a.args.iter().map(relabel).collect()))
                        .collect();
                    next.push((canon.encoding, rep, canon.labels.len()));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(next.iter().map(|(_, fb, _)| fb.clone()));
        level = next.into_iter().map(|(_, fb, used)| (fb, used)).collect();
    }
    Ok(out)
}
