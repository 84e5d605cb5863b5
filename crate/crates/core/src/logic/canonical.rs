//! Isomorphism test and canonical encodings of small atom sets.
//!
//! The canonical form is the lexicographically smallest sequence of atoms
//! obtainable by ordering the set and numbering non-fixed terms by first
//! occurrence. It is found by a greedy search that only branches on ties,
//! which stays cheap at the sizes the decider works with.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::atom::{Atom, AtomSet};
use super::homomorphism::find_renaming;
use super::term::{Name, Term};
use crate::error::{Error, Result};

/// Default number of search nodes allowed for one canonical form.
pub const DEFAULT_CANON_BUDGET: usize = 2_000_000;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Slot {
    Label(u32),
    Fixed(Term),
}

type Encoded = (Name, Vec<Slot>);

/// Result of canonicalization: the encoding plus the relabeling that produced it.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub encoding: Vec<u8>,
    /// Non-fixed term ↦ its canonical label (0-based, by first occurrence).
    pub labels: BTreeMap<Term, u32>,
}

/// True iff a renaming that is the identity on `fixed` maps `a` onto `b`.
/// Every term outside `fixed` (constants included) may be renamed.
pub fn is_isomorphic(a: &AtomSet, b: &AtomSet, fixed: &BTreeSet<Term>) -> bool {
    is_isomorphic_where(a, b, &|t| fixed.contains(t))
}

/// Isomorphism up to renaming of nulls and variables; constants stay put.
pub fn is_isomorphic_up_to_nulls(a: &AtomSet, b: &AtomSet) -> bool {
    is_isomorphic_where(a, b, &Term::is_constant)
}

pub fn is_isomorphic_where(a: &AtomSet, b: &AtomSet, fixed: &dyn Fn(&Term) -> bool) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (ta, tb) = (a.terms(), b.terms());
    if ta.len() != tb.len() {
        return false;
    }
    let fixed_a: BTreeSet<&Term> = ta.iter().filter(|t| fixed(t)).collect();
    let fixed_b: BTreeSet<&Term> = tb.iter().filter(|t| fixed(t)).collect();
    if fixed_a != fixed_b || a.predicates() != b.predicates() {
        return false;
    }
    find_renaming(a, b, fixed).is_some()
}

pub fn canonical_form(a: &AtomSet, fixed: &BTreeSet<Term>) -> Result<Vec<u8>> {
    canonicalize(a, &|t| fixed.contains(t), DEFAULT_CANON_BUDGET).map(|c| c.encoding)
}

pub fn canonicalize(a: &AtomSet, fixed: &dyn Fn(&Term) -> bool, budget: usize) -> Result<Canonical> {
    let atoms: Vec<&Atom> = a.iter().collect();
    let mut search = CanonSearch {
        fixed,
        budget,
        nodes: 0,
        best: None,
        best_labels: HashMap::new(),
    };
    let mut used = vec![false; atoms.len()];
    let mut labels = HashMap::new();
    let mut prefix = Vec::with_capacity(atoms.len());
    search.descend(&atoms, &mut used, &mut labels, &mut prefix)?;
    let best = search.best.unwrap_or_default();
    Ok(Canonical {
        encoding: serialize(&best).into_bytes(),
        labels: search.best_labels.into_iter().collect(),
    })
}

struct CanonSearch<'a> {
    fixed: &'a dyn Fn(&Term) -> bool,
    budget: usize,
    nodes: usize,
    best: Option<Vec<Encoded>>,
    best_labels: HashMap<Term, u32>,
}

impl CanonSearch<'_> {
    fn encode(&self, atom: &Atom, labels: &HashMap<Term, u32>) -> Encoded {
        let mut next = labels.len() as u32;
        let mut local: Vec<(&Term, u32)> = Vec::new();
        let slots = atom
            .args
            .iter()
            .map(|t| {
                if (self.fixed)(t) {
                    return Slot::Fixed(t.clone());
                }
                if let Some(l) = labels.get(t) {
                    return Slot::Label(*l);
                }
                if let Some((_, l)) = local.iter().find(|(u, _)| *u == t) {
                    return Slot::Label(*l);
                }
                local.push((t, next));
                next += 1;
                Slot::Label(next - 1)
            })
            .collect();
        (atom.predicate.clone(), slots)
    }

    fn descend(
        &mut self,
        atoms: &[&Atom],
        used: &mut [bool],
        labels: &mut HashMap<Term, u32>,
        prefix: &mut Vec<Encoded>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceCap(format!(
                "canonical form search exceeded {} nodes",
                self.budget
            )));
        }
        let depth = prefix.len();
        if depth == atoms.len() {
            if self
                .best
                .as_ref()
                .is_none_or(|best| prefix.as_slice() < best.as_slice())
            {
                self.best = Some(prefix.clone());
                self.best_labels = labels.clone();
            }
            return Ok(());
        }
        let mut min: Option<Encoded> = None;
        let mut ties: Vec<usize> = Vec::new();
        for (i, atom) in atoms.iter().enumerate() {
            if used[i] {
                continue;
            }
            let enc = self.encode(atom, labels);
            match min.as_ref().map(|m| enc.cmp(m)) {
                None | Some(Ordering::Less) => {
                    min = Some(enc);
                    ties.clear();
                    ties.push(i);
                }
                Some(Ordering::Equal) => ties.push(i),
                Some(Ordering::Greater) => {}
            }
        }
        let min = min.expect("at least one unused atom");
        prefix.push(min);
        for i in ties {
            // a sibling may have improved the best since the last check
            if let Some(best) = &self.best {
                if prefix.as_slice() > &best[..=depth] {
                    break;
                }
            }
            used[i] = true;
            let mut added = Vec::new();
            for t in &atoms[i].args {
                if !(self.fixed)(t) && !labels.contains_key(t) {
                    labels.insert(t.clone(), labels.len() as u32);
                    added.push(t.clone());
                }
            }
            let result = self.descend(atoms, used, labels, prefix);
            for t in added {
                labels.remove(&t);
            }
            used[i] = false;
            if let Err(e) = result {
                prefix.pop();
                return Err(e);
            }
        }
        prefix.pop();
        Ok(())
    }
}

fn serialize(encoded: &[Encoded]) -> String {
    let mut out = String::new();
    for (i, (pred, slots)) in encoded.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        out.push_str(pred);
        out.push('(');
        for (j, s) in slots.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            match s {
                Slot::Label(l) => {
                    out.push('#');
                    out.push_str(&l.to_string());
                }
                Slot::Fixed(t) => out.push_str(&t.to_string()),
            }
        }
        out.push(')');
    }
    out
}
