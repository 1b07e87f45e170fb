//! Domain types for hazard analysis documents and their identity rules.
//!
//! All types are plain values. Documents and item definitions expose their
//! fields so that tools can construct and mutate them; `check`/`finish`
//! enforce the invariants, and the parsers only ever hand out checked
//! values.

mod document;
mod ids;
mod item;
mod rating;

use thiserror::Error;

pub use document::{
    structural_issues, HaraDocument, HazardEntry, IssueKind, Location, Malfunction, RevisionHistory, RevisionKind,
    SafetyGoal, StructuralIssue, Triple, Waiver,
};
pub use ids::{
    compare_entry_ids, is_identifier, parse_entry_id, ElementId, EntryId, FunctionId, GoalId, GuideWordId, ModeId,
    ParamName, ScenarioId,
};
pub use item::{
    default_guide_words, ElementNode, FunctionDef, GuideWord, ItemDefinition, OperatingMode, OperationalScenario,
    Parameter, DEFAULT_GUIDE_WORDS,
};
pub use rating::{compare_asil, AsilLevel, Controllability, Exposure, Rating, RiskClass, Severity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),
    #[error("malformed entry id {0}")]
    InvalidEntryId(String),
    #[error("malformed safety goal id {0:?} (expected SG01..SG99)")]
    InvalidGoalId(String),
    #[error("unknown ASIL {0:?} (expected QM, A, B, C or D)")]
    InvalidAsil(String),
    #[error("malformed class {0:?}")]
    InvalidClass(String),
    #[error("class {class}{value} out of range {class}0..{class}{max}")]
    ClassOutOfRange { class: char, value: u8, max: u8 },
    #[error("{0} needs a rationale")]
    MissingRationale(String),
    #[error("invalid item definition: {0}")]
    InvalidItem(String),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("invalid revision history: {0}")]
    InvalidHistory(String),
}
