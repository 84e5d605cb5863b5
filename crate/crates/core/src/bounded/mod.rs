//! Deciding k-boundedness of a ruleset for the O, SO and R chases.
//!
//! A ruleset is X-k-bounded when every breadth-first X-derivation from every
//! factbase terminates within depth k. The decider looks for a witness: a
//! small factbase and a breadth-first derivation from it that creates an
//! atom of rank k+1. An atom of rank k+1 has at most b^(k+1) initial
//! ancestors (b is the largest rule body), so examining every factbase of
//! that size, up to isomorphism, is enough.

mod oracle;
mod representatives;
mod witness;

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use oracle::{oracle_check_k_bounded, oracle_factbases};
pub use representatives::enumerate_representative_factbases;
pub use witness::{check_witness_document, shrink_witness, Offending, Witness, WitnessDocument};

use crate::chase::{
    for_each_breadth_first_derivation, BranchOutcome, Budget, Derivation, EnumOptions, EnumStats, Trigger, Variant,
};
use crate::error::{Error, Result};
use crate::logic::AtomSet;
use crate::rules::RuleSet;

/// Size of the factbases the decider examines.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    /// At most b^k atoms.
    Paper,
    /// At most b^(k+1) atoms, enough for any atom of rank k+1.
    #[default]
    Safe,
}

impl std::str::FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<BoundMode> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(BoundMode::Paper),
            "safe" => Ok(BoundMode::Safe),
            _ => Err(Error::Validation(format!("unknown bound mode `{s}`"))),
        }
    }
}

/// Limits for one decision. `max_states` applies to the derivation search
/// of each factbase separately.
#[derive(Clone, Debug, Default)]
pub struct DecisionBudget {
    pub deadline: Option<Instant>,
    pub max_factbases: Option<u64>,
    pub max_states: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct BoundedQuery {
    pub ruleset: RuleSet,
    pub variant: Variant,
    pub k: usize,
    pub bound_mode: BoundMode,
    pub budget: DecisionBudget,
    /// Worker threads; 0 uses the global rayon pool.
    pub jobs: usize,
}

impl BoundedQuery {
    pub fn new(ruleset: RuleSet, variant: Variant, k: usize) -> BoundedQuery {
        BoundedQuery {
            ruleset,
            variant,
            k,
            bound_mode: BoundMode::Safe,
            budget: DecisionBudget::default(),
            jobs: 1,
        }
    }

    /// Largest factbase examined: b^k or b^(k+1) depending on the mode.
    pub fn max_atoms(&self) -> usize {
        let exp = match self.bound_mode {
            BoundMode::Paper => self.k,
            BoundMode::Safe => self.k + 1,
        };
        self.ruleset.b().saturating_pow(exp.min(u32::MAX as usize) as u32)
    }

    fn check_variant(&self) -> Result<()> {
        if self.variant == Variant::Equivalent {
            return Err(Error::VariantUnsupported("E".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BoundednessVerdict {
    pub bounded: bool,
    pub witness: Option<Witness>,
    pub factbases_examined: u64,
    pub derivations_examined: u64,
}

/// Outcome of searching one factbase for a derivation reaching rank k+1.
pub(crate) struct FactbaseSearch {
    pub found: Option<(Derivation, Trigger)>,
    pub stats: EnumStats,
}

/// Explores the breadth-first derivations from `factbase` up to depth `k`
/// and stops at the first one where a trigger of rank k+1 would add an atom.
pub(crate) fn search_factbase(
    ruleset: &Arc<RuleSet>,
    variant: Variant,
    k: usize,
    factbase: &AtomSet,
    opts: &EnumOptions,
) -> Result<FactbaseSearch> {
    let start = Derivation::new(variant, ruleset.clone(), factbase.clone());
    let mut stats = EnumStats::default();
    let mut found = None;
    let flow = for_each_breadth_first_derivation(start, k, opts, &mut stats, &mut |branch| match &branch.outcome {
        BranchOutcome::CapReached { trigger } => {
            found = Some((branch.derivation.clone(), trigger.clone()));
            ControlFlow::Break(())
        }
        BranchOutcome::Terminated => ControlFlow::Continue(()),
    })
    .map_err(|e| with_counters(e, 1, stats.branches))?;
    debug_assert_eq!(flow.is_break(), found.is_some());
    Ok(FactbaseSearch { found, stats })
}

fn with_counters(e: Error, factbases: u64, derivations: u64) -> Error {
    match e {
        Error::BudgetExceeded { reason, .. } => Error::BudgetExceeded {
            reason,
            factbases_examined: factbases,
            derivations_examined: derivations,
        },
        other => other,
    }
}

pub(crate) fn enum_options(budget: &DecisionBudget, memo: bool, defer_datalog: bool) -> EnumOptions {
    EnumOptions {
        memo,
        defer_datalog,
        budget: Budget {
            deadline: budget.deadline,
            max_states: budget.max_states,
        },
    }
}

/// Searches the factbases in parallel; the witness of the lowest index wins.
pub(crate) fn decide_over(q: &BoundedQuery, factbases: &[AtomSet], opts: &EnumOptions) -> Result<BoundednessVerdict> {
    let ruleset = Arc::new(q.ruleset.clone());
    let best = AtomicUsize::new(usize::MAX);
    let examined = AtomicU64::new(0);
    let derivations = AtomicU64::new(0);
    let work = || {
        factbases
            .par_iter()
            .enumerate()
            .map(|(i, fb)| {
                if i > best.load(Ordering::Relaxed) {
                    return Ok(None);
                }
                if q.budget.deadline.is_some_and(|d| Instant::now() >= d) {
                    return Err(Error::BudgetExceeded {
                        reason: "time budget".into(),
                        factbases_examined: 0,
                        derivations_examined: 0,
                    });
                }
                examined.fetch_add(1, Ordering::Relaxed);
                let result = search_factbase(&ruleset, q.variant, q.k, fb, opts);
                let searched = result.as_ref().map(|s| s.stats.branches).unwrap_or(0);
                derivations.fetch_add(searched, Ordering::Relaxed);
                let found = result?.found;
                if found.is_some() {
                    best.fetch_min(i, Ordering::Relaxed);
                }
                Ok(found.map(|f| (i, f)))
            })
            .collect::<Vec<Result<Option<(usize, (Derivation, Trigger))>>>>()
    };
    let results = if q.jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(q.jobs)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(work)
    };
    let factbases_examined = examined.load(Ordering::Relaxed);
    let derivations_examined = derivations.load(Ordering::Relaxed);
    let mut first_error = None;
    let mut first_found = None;
    for r in results {
        match r {
            Ok(Some(found)) => {
                first_found = Some(found);
                break;
            }
            Ok(None) => {}
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    if let Some((i, (derivation, trigger))) = first_found {
        let witness = Witness::build(q.variant, q.k, factbases[i].clone(), derivation, trigger)?;
        return Ok(BoundednessVerdict {
            bounded: false,
            witness: Some(witness),
            factbases_examined,
            derivations_examined,
        });
    }
    if let Some(e) = first_error {
        return Err(with_counters(e, factbases_examined, derivations_examined));
    }
    Ok(BoundednessVerdict {
        bounded: true,
        witness: None,
        factbases_examined,
        derivations_examined,
    })
}

/// Decides whether `q.ruleset` is `q.variant`-`q.k`-bounded.
///
/// Every representative factbase with at most [`BoundedQuery::max_atoms`]
/// atoms is searched for a breadth-first derivation that creates an atom of
/// rank k+1. The first one found, by factbase order, becomes the witness;
/// it is replayed and re-verified before being returned.
pub fn check_k_bounded(q: &BoundedQuery) -> Result<BoundednessVerdict> {
    q.check_variant()?;
    let factbases = enumerate_representative_factbases(&q.ruleset, q.max_atoms(), &q.budget)?;
    decide_over(q, &factbases, &enum_options(&q.budget, true, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_kb;

    fn query(text: &str, variant: Variant, k: usize) -> BoundedQuery {
        BoundedQuery::new(parse_kb(text).unwrap().kb.ruleset, variant, k)
    }

    #[test]
    fn equivalent_chase_is_rejected() {
        let q = query("[R] p(X) -> q(X).", Variant::Equivalent, 1);
        assert!(matches!(check_k_bounded(&q), Err(Error::VariantUnsupported(_))));
    }

    #[test]
    fn empty_ruleset_is_bounded() {
        let v = check_k_bounded(&query("", Variant::Restricted, 0)).unwrap();
        assert!(v.bounded);
        assert_eq!(v.factbases_examined, 1);
    }

    #[test]
    fn single_datalog_step_is_one_bounded() {
        let q = query("[R] p(X) -> q(X).", Variant::Oblivious, 1);
        assert!(check_k_bounded(&q).unwrap().bounded);
        let q0 = query("[R] p(X) -> q(X).", Variant::Oblivious, 0);
        let v = check_k_bounded(&q0).unwrap();
        assert!(!v.bounded);
        let w = v.witness.unwrap();
        assert_eq!(w.minimized_factbase.len(), 1);
        assert_eq!(w.derivation.rank_of(&w.offending_atom), Some(1));
    }

    #[test]
    fn max_atoms_by_mode() {
        let mut q = query("[R] p(X,Y), p(Y,Z) -> p(X,Z).", Variant::Restricted, 1);
        assert_eq!(q.max_atoms(), 4);
        q.bound_mode = BoundMode::Paper;
        assert_eq!(q.max_atoms(), 2);
    }

    #[test]
    fn state_budget_withholds_the_verdict() {
        let mut q = query("[R] p(X,Y) -> p(Y,Z).", Variant::Oblivious, 3);
        q.budget.max_states = Some(1);
        assert!(matches!(check_k_bounded(&q), Err(Error::BudgetExceeded { .. })));
    }
}
