//! Terms, atoms, substitutions and the homomorphism machinery everything else builds on.

mod atom;
mod canonical;
mod core;
mod homomorphism;
mod subst;
mod term;

pub use self::core::{core, core_fixing, is_core};
pub use atom::{Atom, AtomSet};
pub use canonical::{
    canonical_form, canonicalize, is_isomorphic, is_isomorphic_up_to_nulls, is_isomorphic_where, Canonical,
    DEFAULT_CANON_BUDGET,
};
pub use homomorphism::{
    all_homomorphisms, all_homomorphisms_where, equivalent, find_homomorphism, find_homomorphism_where,
    for_each_homomorphism, maps_into,
};
pub use subst::Substitution;
pub(crate) use term::is_identifier;
pub use term::{name, FreshNull, Name, Null, NullKey, Term};
