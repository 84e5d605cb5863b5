//! Backtracking homomorphism search between atom sets.
//!
//! Constants are always frozen. Variables and nulls are mappable unless the
//! caller freezes them. Source atoms are matched in order of selectivity
//! (fewest candidate target atoms first, ties broken by the atom order), and
//! candidates are tried in target order, so enumeration order is stable.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::ops::ControlFlow;

use super::atom::{Atom, AtomSet};
use super::subst::Substitution;
use super::term::{Name, Term};

struct Search<'a> {
    mappable: &'a dyn Fn(&Term) -> bool,
    injective: bool,
    image_ok: Option<&'a dyn Fn(&Term) -> bool>,
    plan: Vec<(&'a Atom, Vec<&'a Atom>)>,
    binding: HashMap<Term, Term>,
    used_images: HashSet<Term>,
}

impl<'a> Search<'a> {
    fn new(
        source: impl IntoIterator<Item = &'a Atom>,
        target: &'a AtomSet,
        mappable: &'a dyn Fn(&Term) -> bool,
        injective: bool,
        image_ok: Option<&'a dyn Fn(&Term) -> bool>,
    ) -> Option<Search<'a>> {
        let mut index: HashMap<(&Name, usize), Vec<&Atom>> = HashMap::new();
        for atom in target {
            index.entry((&atom.predicate, atom.arity())).or_default().push(atom);
        }
        let mut plan = Vec::new();
        for atom in source {
            let candidates: Vec<&Atom> = index
                .get(&(&atom.predicate, atom.arity()))
                .map(|v| {
                    v.iter()
                        .copied()
                        .filter(|cand| {
                            // prefilter on frozen positions
                            atom.args.iter().zip(&cand.args).all(|(s, t)| mappable(s) || s == t)
                        })
                        .collect()
                })
                .unwrap_or_default();
            if candidates.is_empty() {
                return None;
            }
            plan.push((atom, candidates));
        }
        plan.sort_by(|(a, ca), (b, cb)| ca.len().cmp(&cb.len()).then_with(|| a.cmp(b)));
        plan.dedup_by(|x, y| x.0 == y.0);
        Some(Search {
            mappable,
            injective,
            image_ok,
            plan,
            binding: HashMap::new(),
            used_images: HashSet::new(),
        })
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&HashMap<Term, Term>) -> ControlFlow<()>) -> ControlFlow<()> {
        if depth == self.plan.len() {
            return visit(&self.binding);
        }
        let atom = self.plan[depth].0;
        for i in 0..self.plan[depth].1.len() {
            let cand = self.plan[depth].1[i];
            let mut pushed: Vec<Term> = Vec::new();
            let mut ok = true;
            for (s, t) in atom.args.iter().zip(&cand.args) {
                if !(self.mappable)(s) {
                    if s != t {
                        ok = false;
                        break;
                    }
                    continue;
                }
                match self.binding.get(s) {
                    Some(bound) => {
                        if bound != t {
                            ok = false;
                            break;
                        }
                    }
                    None => {
                        if let Some(image_ok) = self.image_ok {
                            if !image_ok(t) {
                                ok = false;
                                break;
                            }
                        }
                        if self.injective && self.used_images.contains(t) {
                            ok = false;
                            break;
                        }
                        self.binding.insert(s.clone(), t.clone());
                        if self.injective {
                            self.used_images.insert(t.clone());
                        }
                        pushed.push(s.clone());
                    }
                }
            }
            if ok {
                self.run(depth + 1, visit)?;
            }
            for s in pushed {
                if let Some(t) = self.binding.remove(&s) {
                    if self.injective {
                        self.used_images.remove(&t);
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }
}

fn debug_check(source: &[&Atom], target: &AtomSet, sigma: &Substitution, mappable: &dyn Fn(&Term) -> bool) {
    if cfg!(debug_assertions) {
        for atom in source {
            debug_assert!(target.contains(&sigma.apply_atom(atom)), "unsound homomorphism");
        }
        for (k, _) in sigma.iter() {
            debug_assert!(mappable(k), "homomorphism moved a frozen term");
        }
    }
}

/// Visits every homomorphism from `source` into `target` that only moves
/// terms accepted by `mappable` (constants are never moved).
pub fn for_each_homomorphism<'a>(
    source: impl IntoIterator<Item = &'a Atom>,
    target: &AtomSet,
    mappable: &dyn Fn(&Term) -> bool,
    mut visit: impl FnMut(&Substitution) -> ControlFlow<()>,
) {
    let source: Vec<&Atom> = source.into_iter().collect();
    let guarded = |t: &Term| !t.is_constant() && mappable(t);
    let Some(mut search) = Search::new(source.iter().copied(), target, &guarded, false, None) else {
        return;
    };
    let _ = search.run(0, &mut |binding| {
        let sigma: Substitution = binding.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        debug_check(&source, target, &sigma, &guarded);
        visit(&sigma)
    });
}

pub fn find_homomorphism_where<'a>(
    source: impl IntoIterator<Item = &'a Atom>,
    target: &AtomSet,
    mappable: &dyn Fn(&Term) -> bool,
) -> Option<Substitution> {
    let mut found = None;
    for_each_homomorphism(source, target, mappable, |sigma| {
        found = Some(sigma.clone());
        ControlFlow::Break(())
    });
    found
}

pub fn all_homomorphisms_where<'a>(
    source: impl IntoIterator<Item = &'a Atom>,
    target: &AtomSet,
    mappable: &dyn Fn(&Term) -> bool,
) -> Vec<Substitution> {
    let mut out = Vec::new();
    for_each_homomorphism(source, target, mappable, |sigma| {
        out.push(sigma.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Some σ with σ(source) ⊆ target that is the identity on `frozen` and on constants.
pub fn find_homomorphism(source: &AtomSet, target: &AtomSet, frozen: &BTreeSet<Term>) -> Option<Substitution> {
    find_homomorphism_where(source, target, &|t| !frozen.contains(t))
}

/// Every such σ, each exactly once, in a deterministic order.
pub fn all_homomorphisms(source: &AtomSet, target: &AtomSet, frozen: &BTreeSet<Term>) -> Vec<Substitution> {
    all_homomorphisms_where(source, target, &|t| !frozen.contains(t))
}

pub fn maps_into(source: &AtomSet, target: &AtomSet) -> bool {
    find_homomorphism_where(source, target, &|_| true).is_some()
}

/// Homomorphic equivalence, constants fixed.
pub fn equivalent(a: &AtomSet, b: &AtomSet) -> bool {
    maps_into(a, b) && maps_into(b, a)
}

/// Injective search used by the isomorphism test: non-fixed terms map
/// bijectively onto non-fixed terms. Constants may be renamed here, so the
/// result is a plain map rather than a [`Substitution`].
pub(crate) fn find_renaming(a: &AtomSet, b: &AtomSet, fixed: &dyn Fn(&Term) -> bool) -> Option<BTreeMap<Term, Term>> {
    let mappable = |t: &Term| !fixed(t);
    let image_ok = |t: &Term| !fixed(t);
    let mut search = Search::new(a.iter(), b, &mappable, true, Some(&image_ok))?;
    let mut found = None;
    let _ = search.run(0, &mut |binding| {
        found = Some(binding.iter().map(|(k, v)| (k.clone(), v.clone())).collect());
        ControlFlow::Break(())
    });
    found
}
