//! Versioned JSON traces of derivations. Loading a trace replays it and
//! rejects any step whose recorded effect differs from the replay.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::parser::{parse_atom, parse_kb, parse_term, serialize_rule};
use crate::chase::{Derivation, HaltReason, NamingMode, Trigger, Variant};
use crate::error::{Error, Result};
use crate::logic::{name, AtomSet, Substitution};

pub const TRACE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    pub substitution: Vec<(String, String)>,
    pub produced: Vec<String>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub format_version: u32,
    pub variant: Variant,
    pub naming_mode: NamingMode,
    pub rules: Vec<String>,
    pub initial: Vec<String>,
    pub steps: Vec<TraceStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halt_reason: Option<HaltReason>,
}

impl TraceDocument {
    pub fn from_derivation(d: &Derivation, halt: Option<HaltReason>) -> TraceDocument {
        TraceDocument {
            format_version: TRACE_FORMAT_VERSION,
            variant: d.variant(),
            naming_mode: d.naming(),
            rules: d.ruleset().rules().iter().map(serialize_rule).collect(),
            initial: d.initial().iter().map(|a| a.to_string()).collect(),
            steps: d
                .steps()
                .iter()
                .map(|s| TraceStep {
                    rule: s.trigger.rule.to_string(),
                    substitution: s
                        .trigger
                        .pi
                        .iter()
                        .map(|(k, v)| (k.to_string(), v.to_string()))
                        .collect(),
                    produced: s.produced.iter().map(|a| a.to_string()).collect(),
                    rank: s.rank,
                })
                .collect(),
            halt_reason: halt,
        }
    }

    /// Parses a trigger written as a rule id and name/term pairs.
    pub fn trigger(&self, rule: &str, substitution: &[(String, String)]) -> Result<Trigger> {
        let pi: Substitution = substitution
            .iter()
            .map(|(k, v)| Ok((parse_term(k)?, parse_term(v)?)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .collect();
        Ok(Trigger::new(name(rule), pi))
    }

    /// Rebuilds the derivation by replaying every step.
    pub fn replay(&self) -> Result<Derivation> {
        if self.format_version != TRACE_FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: self.format_version,
                expected: TRACE_FORMAT_VERSION,
            });
        }
        let rules = parse_kb(&self.rules.join("\n"))?.kb.ruleset;
        let initial: AtomSet = self.initial.iter().map(|a| parse_atom(a)).collect::<Result<_>>()?;
        let mut d = Derivation::with_naming(self.variant, self.naming_mode, Arc::new(rules), initial);
        for (i, step) in self.steps.iter().enumerate() {
            let n = i + 1;
            let fail = |reason: String| Error::ReplayFailure { step: n, reason };
            let trigger = self.trigger(&step.rule, &step.substitution)?;
            if d.contains_trigger(&trigger) {
                return Err(fail(format!("trigger {trigger} occurs twice")));
            }
            d.trigger_rank(&trigger).map_err(|e| fail(e.to_string()))?;
            let recorded: AtomSet = step.produced.iter().map(|a| parse_atom(a)).collect::<Result<_>>()?;
            let applied = d.apply_unchecked(trigger);
            if applied.produced != recorded {
                return Err(fail(format!(
                    "produced {} but the trace records {}",
                    applied.produced, recorded
                )));
            }
            if applied.rank != step.rank {
                return Err(fail(format!(
                    "rank {} but the trace records {}",
                    applied.rank, step.rank
                )));
            }
        }
        Ok(d)
    }
}

pub fn serialize_trace(d: &Derivation, halt: Option<HaltReason>) -> String {
    let doc = TraceDocument::from_derivation(d, halt);
    serde_json::to_string_pretty(&doc).expect("trace documents always serialize") + "\n"
}

pub fn deserialize_trace(text: &str) -> Result<(Derivation, Option<HaltReason>)> {
    let doc: TraceDocument = serde_json::from_str(text)?;
    let d = doc.replay()?;
    Ok((d, doc.halt_reason))
}
