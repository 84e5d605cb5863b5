//! Exhaustive search over breadth-first derivations up to a depth target.
//!
//! For O and SO the order inside a rank does not change the outcome, so a
//! single canonical order is followed. For R and E every order is explored.
//! Under R, Datalog triggers of a rank can optionally be deferred to the end
//! of the rank, and states already seen can be skipped.

use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;
use std::sync::Arc;
use std::time::Instant;

use super::derivation::Derivation;
use super::runner::rank_candidates;
use super::trigger::{Trigger, Variant};
use crate::error::{Error, Result};
use crate::logic::Atom;
use crate::rules::KnowledgeBase;

#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub max_states: Option<u64>,
}

/// Search reductions. Both are off by default, so every within-rank order
/// is visited and every branch is reported.
#[derive(Clone, Debug, Default)]
pub struct EnumOptions {
    /// Skip search states (factbase with ranks, current rank, pending
    /// triggers) that were already explored. Branches ending in a state
    /// seen before are not reported again.
    pub memo: bool,
    /// Under R, apply the Datalog triggers of a rank after all the others,
    /// in one fixed order. Only orders of that shape are visited.
    pub defer_datalog: bool,
    pub budget: Budget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchOutcome {
    /// A rank added no atom: the derivation is terminating within the target.
    Terminated,
    /// `trigger` is applicable at rank target+1 and would add an atom.
    CapReached { trigger: Trigger },
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub derivation: Derivation,
    pub outcome: BranchOutcome,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub states: u64,
    pub branches: u64,
}

/// Result of a collecting enumeration. `truncated` holds the budget error
/// when the search stopped early; `branches` are the ones found until then.
#[derive(Debug)]
pub struct Enumeration {
    pub branches: Vec<Branch>,
    pub stats: EnumStats,
    pub truncated: Option<Error>,
}

type StateKey = (Vec<(Atom, usize)>, usize, Vec<Trigger>);

struct Search<'a> {
    target: usize,
    opts: &'a EnumOptions,
    stats: &'a mut EnumStats,
    seen: HashSet<StateKey>,
    visit: &'a mut dyn FnMut(&Branch) -> ControlFlow<()>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.stats.states += 1;
        let over_states = self.opts.budget.max_states.is_some_and(|m| self.stats.states > m);
        let over_time = self.opts.budget.deadline.is_some_and(|d| Instant::now() >= d);
        if over_states || over_time {
            return Err(Error::BudgetExceeded {
                reason: if over_states { "state budget" } else { "time budget" }.into(),
                factbases_examined: 0,
                derivations_examined: self.stats.branches,
            });
        }
        Ok(())
    }

    fn emit(&mut self, derivation: Derivation, outcome: BranchOutcome) -> ControlFlow<()> {
        self.stats.branches += 1;
        (self.visit)(&Branch { derivation, outcome })
    }

    fn start_rank(&mut self, d: Derivation, rank: usize) -> Result<ControlFlow<()>> {
        self.tick()?;
        let candidates = rank_candidates(&d, rank);
        if rank > self.target {
            for t in candidates {
                if d.is_applicable(&t)? && !d.would_produce(&t)?.is_empty() {
                    return Ok(self.emit(d, BranchOutcome::CapReached { trigger: t }));
                }
            }
            return Ok(self.emit(d, BranchOutcome::Terminated));
        }
        match d.variant() {
            Variant::Oblivious | Variant::SemiOblivious => {
                let mut d = d;
                let mut grew = false;
                for t in candidates {
                    if d.is_applicable(&t)? {
                        grew |= !d.apply_unchecked(t).produced.is_empty();
                    }
                }
                self.finish_rank(d, rank, grew)
            }
            Variant::Restricted | Variant::Equivalent => {
                let defer = self.opts.defer_datalog && d.variant() == Variant::Restricted;
                let (deferred, pool): (Vec<Trigger>, Vec<Trigger>) = candidates
                    .into_iter()
                    .partition(|t| defer && d.rule(&t.rule).map(|r| r.is_datalog()).unwrap_or(false));
                self.choose(d, rank, pool, &deferred, false)
            }
        }
    }

    fn finish_rank(&mut self, d: Derivation, rank: usize, grew: bool) -> Result<ControlFlow<()>> {
        if grew {
            self.start_rank(d, rank + 1)
        } else {
            Ok(self.emit(d, BranchOutcome::Terminated))
        }
    }

    fn choose(
        &mut self,
        d: Derivation,
        rank: usize,
        pool: Vec<Trigger>,
        deferred: &[Trigger],
        grew: bool,
    ) -> Result<ControlFlow<()>> {
        self.tick()?;
        let restricted = d.variant() == Variant::Restricted;
        let mut applicable = Vec::new();
        let mut kept = Vec::new();
        for t in pool {
            if d.is_applicable(&t)? {
                applicable.push(t.clone());
                kept.push(t);
            } else if !restricted {
                // E-applicability is not monotone, keep it for later checks
                kept.push(t);
            }
        }
        if self.opts.memo {
            let ranks: BTreeMap<Atom, usize> = d
                .factbase()
                .iter()
                .map(|a| (a.clone(), d.rank_of(a).unwrap()))
                .collect();
            let key = (ranks.into_iter().collect(), rank, kept.clone());
            if !self.seen.insert(key) {
                return Ok(ControlFlow::Continue(()));
            }
        }
        if applicable.is_empty() {
            let mut d = d;
            let mut grew = grew;
            for t in deferred {
                if d.is_applicable(t)? {
                    grew |= !d.apply_unchecked(t.clone()).produced.is_empty();
                }
            }
            return self.finish_rank(d, rank, grew);
        }
        for t in applicable {
            let mut next = d.clone();
            let produced = !next.apply_unchecked(t.clone()).produced.is_empty();
            let rest: Vec<Trigger> = kept.iter().filter(|u| **u != t).cloned().collect();
            if self.choose(next, rank, rest, deferred, grew || produced)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Visits every breadth-first continuation of `start` (which must be at a
/// rank boundary; usually the empty derivation) up to `target`.
pub fn for_each_breadth_first_derivation(
    start: Derivation,
    target: usize,
    opts: &EnumOptions,
    stats: &mut EnumStats,
    visit: &mut dyn FnMut(&Branch) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    let rank = start.steps().last().map(|s| s.rank + 1).unwrap_or(1);
    let mut search = Search {
        target,
        opts,
        stats,
        seen: HashSet::new(),
        visit,
    };
    search.start_rank(start, rank)
}

pub fn enumerate_breadth_first_derivations(
    variant: Variant,
    kb: &KnowledgeBase,
    target: usize,
    opts: &EnumOptions,
) -> Enumeration {
    let start = Derivation::new(variant, Arc::new(kb.ruleset.clone()), kb.factbase.clone());
    let mut branches = Vec::new();
    let mut stats = EnumStats::default();
    let result = for_each_breadth_first_derivation(start, target, opts, &mut stats, &mut |b| {
        branches.push(b.clone());
        ControlFlow::Continue(())
    });
    Enumeration {
        branches,
        stats,
        truncated: result.err(),
    }
}
