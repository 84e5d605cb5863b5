use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use super::trigger::{enumerate_triggers, fresh_nulls, safe_extension, NamingMode, Trigger, Variant};
use crate::error::{Error, Result};
use crate::logic::{find_homomorphism_where, Atom, AtomSet, Name, Term};
use crate::rules::{Rule, RuleSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub trigger: Trigger,
    /// Atoms of π^s(H) that were not present before this step.
    pub produced: AtomSet,
    pub factbase_size: usize,
    pub rank: usize,
}

/// A finite derivation with rank and provenance bookkeeping.
///
/// Steps are appended through [`Derivation::extend`], which checks
/// applicability under the derivation's variant.
#[derive(Clone)]
pub struct Derivation {
    variant: Variant,
    naming: NamingMode,
    ruleset: Arc<RuleSet>,
    initial: AtomSet,
    steps: Vec<Step>,
    current: AtomSet,
    atom_rank: HashMap<Atom, usize>,
    producer: HashMap<Atom, usize>,
    applied: HashSet<Trigger>,
    frontier_seen: HashSet<(Name, Vec<Term>)>,
}

impl Derivation {
    pub fn new(variant: Variant, ruleset: Arc<RuleSet>, initial: AtomSet) -> Derivation {
        Derivation::with_naming(variant, variant.naming_mode(), ruleset, initial)
    }

    pub fn with_naming(variant: Variant, naming: NamingMode, ruleset: Arc<RuleSet>, initial: AtomSet) -> Derivation {
        let atom_rank = initial.iter().map(|a| (a.clone(), 0)).collect();
        Derivation {
            variant,
            naming,
            ruleset,
            current: initial.clone(),
            initial,
            steps: Vec::new(),
            atom_rank,
            producer: HashMap::new(),
            applied: HashSet::new(),
            frontier_seen: HashSet::new(),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn naming(&self) -> NamingMode {
        self.naming
    }

    pub fn ruleset(&self) -> &Arc<RuleSet> {
        &self.ruleset
    }

    pub fn initial(&self) -> &AtomSet {
        &self.initial
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn factbase(&self) -> &AtomSet {
        &self.current
    }

    pub fn rank_of(&self, atom: &Atom) -> Option<usize> {
        self.atom_rank.get(atom).copied()
    }

    /// Index of the step that first produced `atom`; `None` for initial atoms.
    pub fn producer(&self, atom: &Atom) -> Option<usize> {
        self.producer.get(atom).copied()
    }

    pub fn contains_trigger(&self, trigger: &Trigger) -> bool {
        self.applied.contains(trigger)
    }

    /// Maximal atom rank, 0 for an empty derivation.
    pub fn depth(&self) -> usize {
        self.atom_rank.values().copied().max().unwrap_or(0)
    }

    /// Atoms grouped by rank, each group in atom order.
    pub fn atoms_by_rank(&self) -> Vec<AtomSet> {
        let mut levels = vec![AtomSet::new(); self.depth() + 1];
        for (atom, rank) in &self.atom_rank {
            levels[*rank].insert(atom.clone());
        }
        levels
    }

    pub fn rule(&self, id: &str) -> Result<&Rule> {
        self.ruleset.rule(id).ok_or_else(|| Error::UnknownRule(id.to_string()))
    }

    /// Checks that π maps exactly the body variables into the current factbase.
    fn check_embedding(&self, trigger: &Trigger) -> Result<&Rule> {
        let rule = self.rule(&trigger.rule)?;
        let unknown = || Error::UnknownTrigger {
            rule: trigger.rule.to_string(),
            substitution: trigger.pi.to_string(),
        };
        let domain: BTreeSet<&Term> = trigger.pi.domain().collect();
        if domain.len() != rule.body_variables().len() || !rule.body_variables().iter().all(|v| domain.contains(v)) {
            return Err(unknown());
        }
        if !rule
            .body
            .iter()
            .all(|a| self.current.contains(&trigger.pi.apply_atom(a)))
        {
            return Err(unknown());
        }
        Ok(rule)
    }

    /// 1 + the maximal rank of the body image. The body image must be present.
    pub fn trigger_rank(&self, trigger: &Trigger) -> Result<usize> {
        let rule = self.check_embedding(trigger)?;
        Ok(self.rank_unchecked(trigger, rule))
    }

    fn rank_unchecked(&self, trigger: &Trigger, rule: &Rule) -> usize {
        1 + rule
            .body
            .iter()
            .map(|a| self.atom_rank[&trigger.pi.apply_atom(a)])
            .max()
            .unwrap_or(0)
    }

    /// π^s(H) under this derivation's naming mode.
    pub fn head_image(&self, trigger: &Trigger) -> Result<AtomSet> {
        let rule = self.rule(&trigger.rule)?;
        Ok(safe_extension(trigger, rule, self.naming).apply(&rule.head))
    }

    /// Atoms that applying `trigger` would add.
    pub fn would_produce(&self, trigger: &Trigger) -> Result<AtomSet> {
        Ok(self.head_image(trigger)?.difference(&self.current))
    }

    /// Every trigger on the current factbase, applied or not.
    pub fn all_triggers(&self) -> Vec<Trigger> {
        enumerate_triggers(&self.current, &self.ruleset)
    }

    /// Whether `trigger` may extend this derivation under its variant.
    /// Already applied triggers are never applicable.
    pub fn is_applicable(&self, trigger: &Trigger) -> Result<bool> {
        let rule = self.check_embedding(trigger)?;
        if self.applied.contains(trigger) {
            return Ok(false);
        }
        Ok(self.condition_holds(trigger, rule))
    }

    fn condition_holds(&self, trigger: &Trigger, rule: &Rule) -> bool {
        match self.variant {
            Variant::Oblivious => true,
            Variant::SemiOblivious => !self
                .frontier_seen
                .contains(&(rule.id.clone(), trigger.frontier_image(rule))),
            Variant::Restricted => !self.head_folds(trigger, rule),
            Variant::Equivalent => {
                if self.head_folds(trigger, rule) {
                    return false;
                }
                let head = safe_extension(trigger, rule, self.naming).apply(&rule.head);
                let source: AtomSet = self.current.union(&head);
                find_homomorphism_where(source.iter(), &self.current, &|_| true).is_none()
            }
        }
    }

    /// True iff π^s(H) maps into the factbase moving only the fresh nulls.
    fn head_folds(&self, trigger: &Trigger, rule: &Rule) -> bool {
        let head = safe_extension(trigger, rule, self.naming).apply(&rule.head);
        let fresh: HashSet<Term> = fresh_nulls(trigger, rule, self.naming).into_iter().collect();
        find_homomorphism_where(head.iter(), &self.current, &|t| fresh.contains(t)).is_some()
    }

    /// Applicable triggers on the current state, in enumeration order.
    pub fn applicable_triggers(&self) -> Vec<Trigger> {
        self.all_triggers()
            .into_iter()
            .filter(|t| !self.applied.contains(t))
            .filter(|t| {
                let rule = self.ruleset.rule(&t.rule).expect("enumerated from the ruleset");
                self.condition_holds(t, rule)
            })
            .collect()
    }

    /// Appends `trigger` after checking applicability.
    pub fn extend(&mut self, trigger: Trigger) -> Result<&Step> {
        if !self.is_applicable(&trigger)? {
            return Err(Error::NotApplicable {
                rule: trigger.rule.to_string(),
                substitution: trigger.pi.to_string(),
                variant: self.variant.to_string(),
            });
        }
        Ok(self.apply_unchecked(trigger))
    }

    /// Appends `trigger` without the variant check. The body image must be
    /// present and the trigger new; both are asserted.
    pub(crate) fn apply_unchecked(&mut self, trigger: Trigger) -> &Step {
        let rule = self
            .check_embedding(&trigger)
            .expect("trigger body must embed in the factbase")
            .clone();
        assert!(!self.applied.contains(&trigger), "trigger {trigger} applied twice");
        let rank = self.rank_unchecked(&trigger, &rule);
        let head = safe_extension(&trigger, &rule, self.naming).apply(&rule.head);
        let index = self.steps.len();
        let mut produced = AtomSet::new();
        for atom in head {
            if self.current.insert(atom.clone()) {
                self.atom_rank.insert(atom.clone(), rank);
                self.producer.insert(atom.clone(), index);
                produced.insert(atom);
            }
        }
        self.frontier_seen
            .insert((rule.id.clone(), trigger.frontier_image(&rule)));
        self.applied.insert(trigger.clone());
        self.steps.push(Step {
            trigger,
            produced,
            factbase_size: self.current.len(),
            rank,
        });
        self.steps.last().expect("just pushed")
    }

    /// Body image of the step that produced `atom` (empty for initial atoms).
    pub fn direct_ancestors(&self, atom: &Atom) -> Result<AtomSet> {
        if !self.current.contains(atom) {
            return Err(Error::UnknownTarget(atom.to_string()));
        }
        match self.producer.get(atom) {
            None => Ok(AtomSet::new()),
            Some(&i) => {
                let trigger = &self.steps[i].trigger;
                Ok(trigger.pi.apply(&self.rule(&trigger.rule)?.body))
            }
        }
    }

    /// Transitive closure of the direct-ancestor relation.
    pub fn ancestors(&self, atom: &Atom) -> Result<AtomSet> {
        let direct = self.direct_ancestors(atom)?;
        Ok(self.close_ancestors(direct))
    }

    /// Body image of the trigger plus all ancestors of those atoms. The
    /// trigger's body must embed in the current factbase.
    pub fn trigger_ancestors(&self, trigger: &Trigger) -> Result<AtomSet> {
        let rule = self
            .check_embedding(trigger)
            .map_err(|_| Error::UnknownTarget(trigger.to_string()))?;
        Ok(self.close_ancestors(trigger.pi.apply(&rule.body)))
    }

    fn close_ancestors(&self, seed: AtomSet) -> AtomSet {
        let mut out = AtomSet::new();
        let mut stack: Vec<Atom> = seed.into_iter().collect();
        while let Some(atom) = stack.pop() {
            if !out.insert(atom.clone()) {
                continue;
            }
            if let Some(&i) = self.producer.get(&atom) {
                let trigger = &self.steps[i].trigger;
                let rule = self.ruleset.rule(&trigger.rule).expect("recorded trigger");
                stack.extend(rule.body.iter().map(|a| trigger.pi.apply_atom(a)));
            }
        }
        out
    }

    /// Triggers of earlier steps that produced a direct ancestor of step `index`.
    pub fn direct_trigger_ancestors(&self, index: usize) -> Vec<usize> {
        let step = &self.steps[index];
        let rule = self.ruleset.rule(&step.trigger.rule).expect("recorded trigger");
        let mut out: Vec<usize> = rule
            .body
            .iter()
            .filter_map(|a| self.producer.get(&step.trigger.pi.apply_atom(a)).copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Derivation) -> bool {
        self.variant == other.variant
            && self.naming == other.naming
            && self.ruleset == other.ruleset
            && self.initial == other.initial
            && self.steps == other.steps
    }
}

impl std::fmt::Debug for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}-derivation from {}", self.variant, self.initial)?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "  {}: {} rank {} -> {}", i + 1, s.trigger, s.rank, s.produced)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::name;

    fn c(s: &str) -> Term {
        Term::constant(s)
    }

    fn v(s: &str) -> Term {
        Term::variable(s)
    }

    fn human_kb() -> (Arc<RuleSet>, AtomSet) {
        let body: AtomSet = [Atom::new("human", vec![v("X")])].into_iter().collect();
        let head: AtomSet = [
            Atom::new("parentOf", vec![v("Y"), v("X")]),
            Atom::new("human", vec![v("Y")]),
        ]
        .into_iter()
        .collect();
        let rs = RuleSet::new(vec![Rule::new("R", body, head).unwrap()]).unwrap();
        let f = [Atom::new("human", vec![c("alice")])].into_iter().collect();
        (Arc::new(rs), f)
    }

    #[test]
    fn first_step_adds_parent_at_rank_one() {
        let (rs, f) = human_kb();
        let mut d = Derivation::new(Variant::Oblivious, rs, f);
        let t = d.applicable_triggers().remove(0);
        let step = d.extend(t).unwrap().clone();
        assert_eq!(step.produced.len(), 2);
        assert_eq!(step.rank, 1);
        assert_eq!(d.depth(), 1);
        for atom in &step.produced {
            assert_eq!(d.rank_of(atom), Some(1));
            assert_eq!(d.ancestors(atom).unwrap().len(), 1);
        }
        let again = d.steps()[0].trigger.clone();
        assert!(!d.is_applicable(&again).unwrap());
        assert!(matches!(d.extend(again), Err(Error::NotApplicable { .. })));
    }

    #[test]
    fn unknown_trigger_is_rejected() {
        let (rs, f) = human_kb();
        let d = Derivation::new(Variant::Restricted, rs, f);
        let bogus = Trigger::new(name("R"), [(v("X"), c("bob"))].into_iter().collect());
        assert!(matches!(d.is_applicable(&bogus), Err(Error::UnknownTrigger { .. })));
        let no_rule = Trigger::new(name("Q"), [(v("X"), c("alice"))].into_iter().collect());
        assert!(matches!(d.is_applicable(&no_rule), Err(Error::UnknownRule(_))));
    }

    #[test]
    fn empty_derivation_has_depth_zero() {
        let (rs, _) = human_kb();
        let d = Derivation::new(Variant::Equivalent, rs, AtomSet::new());
        assert_eq!(d.depth(), 0);
        assert!(d.applicable_triggers().is_empty());
    }
}
