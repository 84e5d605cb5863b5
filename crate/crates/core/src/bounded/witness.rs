//! Witnesses of unboundedness and their self-contained JSON form.

use serde::{Deserialize, Serialize};

use crate::chase::{verify_derivation, Derivation, Trigger, Variant};
use crate::error::{Error, Result};
use crate::io::{parse_atom, TraceDocument};
use crate::logic::{Atom, AtomSet};

pub const WITNESS_FORMAT_VERSION: u32 = 1;

/// A factbase together with a breadth-first derivation from it that
/// contains an atom of rank k+1.
#[derive(Clone, Debug)]
pub struct Witness {
    pub variant: Variant,
    pub k: usize,
    pub factbase: AtomSet,
    pub derivation: Derivation,
    pub offending_trigger: Trigger,
    pub offending_atom: Atom,
    pub minimized_factbase: AtomSet,
}

#[derive(Clone, Debug)]
pub enum Offending {
    Trigger(Trigger),
    Atom(Atom),
}

/// The initial atoms among the ancestors of `offending`.
pub fn shrink_witness(factbase: &AtomSet, derivation: &Derivation, offending: &Offending) -> Result<AtomSet> {
    let ancestors = match offending {
        Offending::Trigger(t) => {
            if !derivation.contains_trigger(t) {
                return Err(Error::UnknownTarget(t.to_string()));
            }
            derivation.trigger_ancestors(t)?
        }
        Offending::Atom(a) => {
            let mut anc = derivation.ancestors(a)?;
            if derivation.producer(a).is_none() {
                anc.insert(a.clone());
            }
            anc
        }
    };
    Ok(factbase.intersection(&ancestors))
}

fn certificate_error(reason: String) -> Error {
    Error::ReplayFailure { step: 0, reason }
}

impl Witness {
    /// Turns a search result into a witness: applies `trigger` (of rank
    /// k+1) to the branch, completes rank k+1 so the derivation stays
    /// breadth-first, and checks the certificate.
    pub(crate) fn build(
        variant: Variant,
        k: usize,
        factbase: AtomSet,
        branch: Derivation,
        trigger: Trigger,
    ) -> Result<Witness> {
        let mut d = branch;
        let offending_atom = d
            .extend(trigger.clone())?
            .produced
            .iter()
            .next()
            .cloned()
            .ok_or_else(|| certificate_error(format!("{trigger} adds no atom")))?;
        for t in crate::chase::rank_candidates(&d, k + 1) {
            if d.is_applicable(&t)? {
                d.extend(t)?;
            }
        }
        let minimized_factbase = shrink_witness(&factbase, &d, &Offending::Trigger(trigger.clone()))?;
        let witness = Witness {
            variant,
            k,
            factbase,
            derivation: d,
            offending_trigger: trigger,
            offending_atom,
            minimized_factbase,
        };
        witness.check()?;
        Ok(witness)
    }

    /// Re-verifies the certificate from scratch: the derivation replays
    /// from the factbase as a breadth-first derivation, the offending atom
    /// has rank k+1, and the minimized factbase is the ancestor set.
    pub fn check(&self) -> Result<()> {
        let d = &self.derivation;
        if d.initial() != &self.factbase {
            return Err(certificate_error("derivation does not start from the factbase".into()));
        }
        let report = verify_derivation(self.variant, d);
        if !report.is_valid_variant_derivation || !report.is_breadth_first() {
            return Err(certificate_error(
                report.first_violation.unwrap_or_else(|| "not breadth-first".into()),
            ));
        }
        if d.rank_of(&self.offending_atom) != Some(self.k + 1) {
            return Err(certificate_error(format!(
                "{} does not have rank {}",
                self.offending_atom,
                self.k + 1
            )));
        }
        if !d.contains_trigger(&self.offending_trigger) {
            return Err(certificate_error(format!("{} is not applied", self.offending_trigger)));
        }
        let expected = shrink_witness(&self.factbase, d, &Offending::Trigger(self.offending_trigger.clone()))?;
        if expected != self.minimized_factbase {
            return Err(certificate_error("minimized factbase is not the ancestor set".into()));
        }
        Ok(())
    }

    pub fn to_document(&self) -> WitnessDocument {
        WitnessDocument {
            format_version: WITNESS_FORMAT_VERSION,
            variant: self.variant,
            k: self.k,
            factbase: self.factbase.iter().map(|a| a.to_string()).collect(),
            minimized_factbase: self.minimized_factbase.iter().map(|a| a.to_string()).collect(),
            offending_atom: self.offending_atom.to_string(),
            offending_rule: self.offending_trigger.rule.to_string(),
            offending_substitution: self
                .offending_trigger
                .pi
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            trace: TraceDocument::from_derivation(&self.derivation, None),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("witness documents always serialize") + "\n"
    }
}

/// Witness file: the verdict's certificate with the full replayable trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub format_version: u32,
    pub variant: Variant,
    pub k: usize,
    pub factbase: Vec<String>,
    pub minimized_factbase: Vec<String>,
    pub offending_atom: String,
    pub offending_rule: String,
    pub offending_substitution: Vec<(String, String)>,
    pub trace: TraceDocument,
}

/// Replays a witness document and checks its certificate.
pub fn check_witness_document(doc: &WitnessDocument) -> Result<Witness> {
    if doc.format_version != WITNESS_FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: doc.format_version,
            expected: WITNESS_FORMAT_VERSION,
        });
    }
    let derivation = doc.trace.replay()?;
    let atoms = |v: &[String]| v.iter().map(|a| parse_atom(a)).collect::<Result<AtomSet>>();
    let offending_trigger = doc.trace.trigger(&doc.offending_rule, &doc.offending_substitution)?;
    let witness = Witness {
        variant: doc.variant,
        k: doc.k,
        factbase: atoms(&doc.factbase)?,
        derivation,
        offending_trigger,
        offending_atom: parse_atom(&doc.offending_atom)?,
        minimized_factbase: atoms(&doc.minimized_factbase)?,
    };
    witness.check()?;
    Ok(witness)
}
