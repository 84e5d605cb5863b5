//! Existential rules, rulesets and knowledge bases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{is_identifier, name, AtomSet, Name, Substitution, Term};

/// `body -> ∃ existentials. head`. Frontier and existentials are derived
/// from the atom sets and kept sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: Name,
    pub body: AtomSet,
    pub head: AtomSet,
    frontier: Vec<Term>,
    existentials: Vec<Term>,
    body_variables: Vec<Term>,
}

impl Rule {
    pub fn new(id: &str, body: AtomSet, head: AtomSet) -> Result<Rule> {
        if !is_identifier(id) {
            return Err(Error::Validation(format!("rule id {id:?} is not an identifier")));
        }
        if body.is_empty() {
            return Err(Error::Validation(format!("rule {id} has an empty body")));
        }
        if head.is_empty() {
            return Err(Error::Validation(format!("rule {id} has an empty head")));
        }
        if let Some(atom) = body
            .iter()
            .chain(head.iter())
            .find(|a| a.args.iter().any(Term::is_null))
        {
            return Err(Error::Validation(format!("rule {id} mentions a null in {atom}")));
        }
        let body_vars = body.variables();
        let head_vars = head.variables();
        let malformed = |v: &&Term| matches!(v, Term::Variable(n) if !is_identifier(n));
        if let Some(bad) = body_vars.iter().chain(&head_vars).find(malformed) {
            return Err(Error::Validation(format!(
                "rule {id}: variable {bad} is not an identifier"
            )));
        }
        Ok(Rule {
            id: name(id),
            frontier: body_vars.intersection(&head_vars).cloned().collect(),
            existentials: head_vars.difference(&body_vars).cloned().collect(),
            body_variables: body_vars.into_iter().collect(),
            body,
            head,
        })
    }

    pub fn frontier(&self) -> &[Term] {
        &self.frontier
    }

    pub fn existentials(&self) -> &[Term] {
        &self.existentials
    }

    pub fn body_variables(&self) -> &[Term] {
        &self.body_variables
    }

    pub fn is_datalog(&self) -> bool {
        self.existentials.is_empty()
    }

    pub fn constants(&self) -> BTreeSet<Term> {
        self.body.constants().into_iter().chain(self.head.constants()).collect()
    }

    fn rename(&self, renaming: &Substitution) -> Rule {
        Rule::new(&self.id, renaming.apply(&self.body), renaming.apply(&self.head))
            .expect("renaming preserves well-formedness")
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |set: &AtomSet| set.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "[{}] {} -> {}", self.id, join(&self.body), join(&self.head))
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A variable renamed while putting a ruleset into disjoint namespaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    pub rule: Name,
    pub from: Term,
    pub to: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulesetStats {
    pub b: usize,
    pub body_predicates: BTreeSet<(Name, usize)>,
    pub rule_constants: BTreeSet<Term>,
}

/// An ordered list of rules with pairwise disjoint variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
    renamings: Vec<Renaming>,
}

impl RuleSet {
    /// Builds a ruleset, renaming variables apart where two rules share a
    /// name (`X` in rule `R2` becomes `X_R2`). Duplicate ids are an error.
    pub fn new(rules: Vec<Rule>) -> Result<RuleSet> {
        let mut seen_ids = BTreeSet::new();
        let mut used: BTreeSet<Term> = BTreeSet::new();
        let mut out = Vec::with_capacity(rules.len());
        let mut renamings = Vec::new();
        for rule in rules {
            if !seen_ids.insert(rule.id.clone()) {
                return Err(Error::Validation(format!("duplicate rule id {}", rule.id)));
            }
            let vars: BTreeSet<Term> = rule.body.variables().into_iter().chain(rule.head.variables()).collect();
            let mut renaming = Substitution::new();
            for v in vars.iter().filter(|v| used.contains(*v)) {
                let Term::Variable(base) = v else { unreachable!() };
                let mut candidate = Term::variable(&format!("{base}_{}", rule.id));
                let mut n = 2;
                while used.contains(&candidate) || vars.contains(&candidate) {
                    candidate = Term::variable(&format!("{base}_{}_{n}", rule.id));
                    n += 1;
                }
                renamings.push(Renaming {
                    rule: rule.id.clone(),
                    from: v.clone(),
                    to: candidate.clone(),
                });
                renaming.bind(v.clone(), candidate);
            }
            let rule = if renaming.is_empty() {
                rule
            } else {
                rule.rename(&renaming)
            };
            used.extend(rule.body.variables());
            used.extend(rule.head.variables());
            out.push(rule);
        }
        Ok(RuleSet { rules: out, renamings })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| &*r.id == id)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn renamings(&self) -> &[Renaming] {
        &self.renamings
    }

    /// Maximum body size; 1 for an empty ruleset so that `b^k` stays meaningful.
    pub fn b(&self) -> usize {
        self.rules.iter().map(|r| r.body.len()).max().unwrap_or(1)
    }

    pub fn body_predicates(&self) -> BTreeSet<(Name, usize)> {
        self.rules.iter().flat_map(|r| r.body.predicates()).collect()
    }

    pub fn rule_constants(&self) -> BTreeSet<Term> {
        self.rules.iter().flat_map(|r| r.constants()).collect()
    }

    pub fn stats(&self) -> RulesetStats {
        RulesetStats {
            b: self.b(),
            body_predicates: self.body_predicates(),
            rule_constants: self.rule_constants(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub factbase: AtomSet,
    pub ruleset: RuleSet,
}

impl KnowledgeBase {
    pub fn new(factbase: AtomSet, ruleset: RuleSet) -> KnowledgeBase {
        KnowledgeBase { factbase, ruleset }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Info,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Info => "info",
            Severity::Error => "error",
        };
        write!(f, "{level}: {}", self.message)
    }
}

/// Arity conflicts and factbase variables are errors; variables renamed
/// apart are reported as information.
pub fn validate_kb(kb: &KnowledgeBase) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut arities: BTreeMap<Name, BTreeSet<usize>> = BTreeMap::new();
    let rule_atoms = kb
        .ruleset
        .rules()
        .iter()
        .flat_map(|r| r.body.iter().chain(r.head.iter()));
    for atom in kb.factbase.iter().chain(rule_atoms) {
        arities.entry(atom.predicate.clone()).or_default().insert(atom.arity());
    }
    for (pred, set) in &arities {
        if set.len() > 1 {
            let list: Vec<String> = set.iter().map(|n| n.to_string()).collect();
            out.push(Diagnostic {
                severity: Severity::Error,
                message: format!("predicate {pred} used with arities {}", list.join(" and ")),
            });
        }
    }
    for atom in kb.factbase.iter().filter(|a| a.args.iter().any(Term::is_variable)) {
        out.push(Diagnostic {
            severity: Severity::Error,
            message: format!("fact {atom} contains a variable"),
        });
    }
    for r in kb.ruleset.renamings() {
        out.push(Diagnostic {
            severity: Severity::Info,
            message: format!("variable {} of rule {} renamed to {}", r.from, r.rule, r.to),
        });
    }
    out
}

/// Checks that no Error-level diagnostic is present.
pub fn check_kb(kb: &KnowledgeBase) -> Result<()> {
    let errors: Vec<String> = validate_kb(kb)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| d.message)
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(errors.join("; ")))
    }
}
