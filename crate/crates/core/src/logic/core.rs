use super::atom::AtomSet;
use super::homomorphism::find_homomorphism_where;
use super::term::Term;

/// Computes a core of `atoms` by repeatedly folding the set into itself minus
/// one atom. A set with no homomorphism into any `A \ {a}` has none into a
/// strict subset, so the fixpoint is a core. Constants are never moved.
pub fn core(atoms: &AtomSet) -> AtomSet {
    core_fixing(atoms, &|_| false)
}

/// Same as [`core`], additionally keeping every term accepted by `fixed` in place.
pub fn core_fixing(atoms: &AtomSet, fixed: &dyn Fn(&Term) -> bool) -> AtomSet {
    let mut current = atoms.clone();
    let mappable = |t: &Term| !fixed(t);
    'outer: loop {
        let candidates: Vec<_> = current.iter().cloned().collect();
        for atom in candidates {
            let mut smaller = current.clone();
            smaller.remove(&atom);
            if let Some(sigma) = find_homomorphism_where(current.iter(), &smaller, &mappable) {
                current = sigma.apply(&current);
                continue 'outer;
            }
        }
        return current;
    }
}

pub fn is_core(atoms: &AtomSet) -> bool {
    atoms.iter().all(|atom| {
        let mut smaller = atoms.clone();
        smaller.remove(atom);
        find_homomorphism_where(atoms.iter(), &smaller, &|_| true).is_none()
    })
}
