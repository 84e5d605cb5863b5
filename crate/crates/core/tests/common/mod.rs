#![allow(dead_code)]

use std::path::PathBuf;

use chasebound::chase::Trigger;
use chasebound::io::{parse_kb, parse_term};
use chasebound::logic::{name, Atom, AtomSet, Substitution, Term};
use chasebound::rules::{KnowledgeBase, Rule, RuleSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(file)
}

pub fn fixture(file: &str) -> KnowledgeBase {
    let text = std::fs::read_to_string(fixture_path(file)).expect("fixture exists");
    parse_kb(&text).expect("fixture parses").kb
}

pub fn atoms(list: &[&str]) -> AtomSet {
    list.iter().map(|a| chasebound::io::parse_atom(a).unwrap()).collect()
}

/// A trigger written with the variable names of the source text; renamed
/// variables are translated through the ruleset's renaming table.
pub fn trigger(rs: &RuleSet, rule: &str, pairs: &[(&str, &str)]) -> Trigger {
    let pi: Substitution = pairs
        .iter()
        .map(|(v, t)| {
            let from = Term::variable(v);
            let var = rs
                .renamings()
                .iter()
                .find(|r| &*r.rule == rule && r.from == from)
                .map(|r| r.to.clone())
                .unwrap_or(from);
            (var, parse_term(t).unwrap())
        })
        .collect();
    Trigger::new(name(rule), pi)
}

const PREDICATES: [(&str, usize); 4] = [("p", 2), ("q", 2), ("r", 1), ("s", 1)];

fn random_atom(rng: &mut impl Rng, terms: &[Term]) -> Atom {
    let (pred, arity) = PREDICATES[rng.gen_range(0..PREDICATES.len())];
    Atom::new(pred, (0..arity).map(|_| terms.choose(rng).unwrap().clone()).collect())
}

/// A random rule with at most `max_body` body atoms over p/2, q/2, r/1, s/1.
pub fn random_rule(rng: &mut impl Rng, id: &str, max_body: usize) -> Rule {
    let vars: Vec<Term> = ["X", "Y", "Z"]
        .iter()
        .map(|v| Term::variable(&format!("{v}{id}")))
        .collect();
    let existentials: Vec<Term> = ["U", "W"].iter().map(|v| Term::variable(&format!("{v}{id}"))).collect();
    let body: AtomSet = (0..rng.gen_range(1..=max_body))
        .map(|_| random_atom(rng, &vars))
        .collect();
    let body_vars: Vec<Term> = body.variables().into_iter().collect();
    let mut head_terms = body_vars.clone();
    if rng.gen_bool(0.5) {
        head_terms.extend(existentials[..rng.gen_range(1..=2)].iter().cloned());
    }
    let head: AtomSet = (0..rng.gen_range(1..=2))
        .map(|_| random_atom(rng, &head_terms))
        .collect();
    Rule::new(id, body, head).unwrap()
}

/// A random knowledge base: up to 3 rules with up to 2 body atoms, arity at
/// most 2, up to 3 initial atoms over constants a, b, c.
pub fn random_kb(rng: &mut impl Rng) -> KnowledgeBase {
    let rules: Vec<Rule> = (0..rng.gen_range(1..=3))
        .map(|i| random_rule(rng, &format!("R{}", i + 1), 2))
        .collect();
    let constants: Vec<Term> = ["a", "b", "c"].iter().map(|c| Term::constant(c)).collect();
    let facts: AtomSet = (0..rng.gen_range(1..=3))
        .map(|_| random_atom(rng, &constants))
        .collect();
    KnowledgeBase::new(facts, RuleSet::new(rules).unwrap())
}

/// True iff every term of the derivation prints in at most `limit` bytes.
/// Trigger-keyed null names can double in length per step, so long
/// unrestricted runs may be too large to serialize.
pub fn printable(d: &chasebound::chase::Derivation, limit: usize) -> bool {
    d.factbase().terms().iter().all(|t| t.display_len() <= limit)
}
