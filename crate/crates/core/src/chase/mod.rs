//! Triggers, chase variants, derivations and the operations built on them.

mod derivation;
mod enumerate;
mod reorder;
mod restrict;
mod runner;
mod trigger;
mod verify;

pub use derivation::{Derivation, Step};
pub use enumerate::{
    enumerate_breadth_first_derivations, for_each_breadth_first_derivation, Branch, BranchOutcome, Budget, EnumOptions,
    EnumStats, Enumeration,
};
pub use reorder::{rank_sorted_replay, so_breadth_first_reorder};
pub use restrict::{breadth_first_completion, is_subderivation, restrict};
pub(crate) use runner::rank_candidates;
pub use runner::{run_breadth_first, run_unrestricted, HaltReason, Policy, RunConfig, RunOutcome};
pub use trigger::{enumerate_triggers, fresh_nulls, rule_triggers, safe_extension, NamingMode, Trigger, Variant};
pub use verify::{verify_derivation, VerifyReport};
