//! Hazard analysis and risk assessment (HARA) workbench core.
//!
//! The crate covers the whole document life cycle: the domain model, the
//! S/E/C to ASIL risk graph, HAZOP-style candidate enumeration with coverage
//! accounting, the `.item`/`.hara` text formats and the semicolon CSV
//! table, a rule-based validator, revision diffing and report rendering.
//! A reconstructed corpus for an unmanned protective vehicle is bundled in
//! [`corpus`].

pub mod asil;
pub mod corpus;
pub mod diff;
pub mod dsl;
pub mod generator;
pub mod model;
pub mod report;
pub mod validator;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

pub use asil::{aggregate_goal_asil, check_entry_consistency, determine_asil, propagate_to_elements};
pub use model::{
    AsilLevel, Controllability, EntryId, Exposure, FunctionId, GoalId, GuideWordId, HaraDocument, HazardEntry,
    ItemDefinition, ModeId, ModelError, RevisionHistory, RevisionKind, Severity,
};
