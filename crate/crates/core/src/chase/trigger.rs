use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::logic::{all_homomorphisms_where, AtomSet, Name, NullKey, Substitution, Term};
use crate::rules::{Rule, RuleSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "O")]
    Oblivious,
    #[serde(rename = "SO")]
    SemiOblivious,
    #[serde(rename = "R")]
    Restricted,
    #[serde(rename = "E")]
    Equivalent,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Oblivious,
        Variant::SemiOblivious,
        Variant::Restricted,
        Variant::Equivalent,
    ];

    /// SO uses frontier-keyed nulls so frontier-equal triggers coincide.
    pub fn naming_mode(self) -> NamingMode {
        match self {
            Variant::SemiOblivious => NamingMode::FrontierKey,
            _ => NamingMode::TriggerKey,
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Variant::Oblivious => "O",
            Variant::SemiOblivious => "SO",
            Variant::Restricted => "R",
            Variant::Equivalent => "E",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant, Error> {
        match s.to_ascii_lowercase().as_str() {
            "o" | "oblivious" => Ok(Variant::Oblivious),
            "so" | "semi-oblivious" => Ok(Variant::SemiOblivious),
            "r" | "restricted" => Ok(Variant::Restricted),
            "e" | "equivalent" => Ok(Variant::Equivalent),
            _ => Err(Error::Format(format!("unknown chase variant {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamingMode {
    TriggerKey,
    FrontierKey,
}

/// A rule together with a substitution of its body variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trigger {
    pub rule: Name,
    pub pi: Substitution,
}

impl Trigger {
    pub fn new(rule: Name, pi: Substitution) -> Trigger {
        Trigger { rule, pi }
    }

    pub fn body_image(&self, rule: &Rule) -> AtomSet {
        self.pi.apply(&rule.body)
    }

    pub fn frontier_image(&self, rule: &Rule) -> Vec<Term> {
        rule.frontier().iter().map(|v| self.pi.apply_term(v)).collect()
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rule, self.pi)
    }
}

impl fmt::Debug for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn var_name(t: &Term) -> Name {
    match t {
        Term::Variable(n) => n.clone(),
        other => panic!("expected a variable, found {other}"),
    }
}

/// Extends the trigger's substitution with one deterministic null per
/// existential variable.
pub fn safe_extension(trigger: &Trigger, rule: &Rule, mode: NamingMode) -> Substitution {
    let mut ext = trigger.pi.clone();
    if rule.is_datalog() {
        return ext;
    }
    let key = match mode {
        NamingMode::TriggerKey => NullKey::Trigger(
            rule.body_variables()
                .iter()
                .map(|v| (var_name(v), trigger.pi.apply_term(v)))
                .collect(),
        ),
        NamingMode::FrontierKey => NullKey::Frontier(trigger.frontier_image(rule)),
    };
    for z in rule.existentials() {
        ext.bind(z.clone(), Term::fresh_null(rule.id.clone(), key.clone(), var_name(z)));
    }
    ext
}

/// The fresh nulls the safe extension introduces, in existential order.
pub fn fresh_nulls(trigger: &Trigger, rule: &Rule, mode: NamingMode) -> Vec<Term> {
    let ext = safe_extension(trigger, rule, mode);
    rule.existentials().iter().map(|z| ext.apply_term(z)).collect()
}

/// Every trigger of one rule on `factbase`, ordered by substitution.
pub fn rule_triggers(rule: &Rule, factbase: &AtomSet) -> Vec<Trigger> {
    let mut pis = all_homomorphisms_where(rule.body.iter(), factbase, &|_| true);
    pis.sort();
    pis.into_iter().map(|pi| Trigger::new(rule.id.clone(), pi)).collect()
}

/// Every trigger on `factbase`: rules in ruleset order, then by substitution.
pub fn enumerate_triggers(factbase: &AtomSet, rs: &RuleSet) -> Vec<Trigger> {
    rs.rules().iter().flat_map(|r| rule_triggers(r, factbase)).collect()
}
