use std::collections::BTreeMap;
use std::fmt;

use super::atom::{Atom, AtomSet};
use super::term::Term;

/// A finite mapping from variables and nulls to terms. Terms outside the
/// domain are left untouched; constants are never part of the domain.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<Term, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    /// Panics if `from` is a constant.
    pub fn bind(&mut self, from: Term, to: Term) -> Option<Term> {
        assert!(!from.is_constant(), "constants cannot be substituted");
        self.map.insert(from, to)
    }

    pub fn get(&self, term: &Term) -> Option<&Term> {
        self.map.get(term)
    }

    pub fn apply_term(&self, term: &Term) -> Term {
        self.map.get(term).cloned().unwrap_or_else(|| term.clone())
    }

    pub fn apply_atom(&self, atom: &Atom) -> Atom {
        Atom {
            predicate: atom.predicate.clone(),
            args: atom.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply(&self, atoms: &AtomSet) -> AtomSet {
        atoms.iter().map(|a| self.apply_atom(a)).collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Term> {
        self.map.keys()
    }

    /// Restriction to the given terms, in their order.
    pub fn restrict<'a>(&self, terms: impl IntoIterator<Item = &'a Term>) -> Substitution {
        terms
            .into_iter()
            .filter_map(|t| self.map.get(t).map(|v| (t.clone(), v.clone())))
            .collect()
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out: BTreeMap<Term, Term> = self.map.iter().map(|(k, v)| (k.clone(), other.apply_term(v))).collect();
        for (k, v) in &other.map {
            out.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Substitution { map: out }
    }
}

impl FromIterator<(Term, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Term, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (k, v) in iter {
            s.bind(k, v);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}\u{21a6}{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
