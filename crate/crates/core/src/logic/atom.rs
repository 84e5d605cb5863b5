use std::collections::BTreeSet;
use std::fmt;

use super::term::{Name, Term};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: Name,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Atom {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.args.iter()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite set of atoms. Iteration order is the total order on atoms, so
/// everything built on top of it is deterministic.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomSet {
    atoms: BTreeSet<Atom>,
}

impl AtomSet {
    pub fn new() -> AtomSet {
        AtomSet::default()
    }

    /// Returns false when the atom was already present.
    pub fn insert(&mut self, atom: Atom) -> bool {
        self.atoms.insert(atom)
    }

    pub fn remove(&mut self, atom: &Atom) -> bool {
        self.atoms.remove(atom)
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.atoms.is_subset(&other.atoms)
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        self.atoms.union(&other.atoms).cloned().collect()
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        self.atoms.intersection(&other.atoms).cloned().collect()
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        self.atoms.difference(&other.atoms).cloned().collect()
    }

    pub fn terms(&self) -> BTreeSet<Term> {
        self.atoms.iter().flat_map(|a| a.args.iter().cloned()).collect()
    }

    pub fn variables(&self) -> BTreeSet<Term> {
        self.terms().into_iter().filter(Term::is_variable).collect()
    }

    pub fn nulls(&self) -> BTreeSet<Term> {
        self.terms().into_iter().filter(Term::is_null).collect()
    }

    pub fn constants(&self) -> BTreeSet<Term> {
        self.terms().into_iter().filter(Term::is_constant).collect()
    }

    pub fn predicates(&self) -> BTreeSet<(Name, usize)> {
        self.atoms.iter().map(|a| (a.predicate.clone(), a.arity())).collect()
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        AtomSet {
            atoms: iter.into_iter().collect(),
        }
    }
}

impl Extend<Atom> for AtomSet {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        self.atoms.extend(iter)
    }
}

impl IntoIterator for AtomSet {
    type Item = Atom;
    type IntoIter = std::collections::btree_set::IntoIter<Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.atoms.into_iter()
    }
}

impl<'a> IntoIterator for &'a AtomSet {
    type Item = &'a Atom;
    type IntoIter = std::collections::btree_set::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.atoms.iter()
    }
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
