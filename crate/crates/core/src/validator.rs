//! Consistency rules over a document and, optionally, its revision history.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::asil::{aggregate_goal_asil, derived_asil};
use crate::diff::{reuse_finding, stem_reuses};
use crate::generator::coverage_report;
use crate::model::{structural_issues, HaraDocument, IssueKind, Location, RevisionHistory, RevisionKind};

/// The fixed rule catalog, ordered by number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingSeverity {
    Error,
    Warning,
}

impl fmt::Display for FindingSeverity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingSeverity::Error => "error",
            FindingSeverity::Warning => "warning",
        })
    }
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R8 => "R8",
            RuleId::R9 => "R9",
            RuleId::R10 => "R10",
        }
    }

    pub fn severity(&self) -> FindingSeverity {
        match self {
            RuleId::R7 | RuleId::R9 => FindingSeverity::Warning,
            _ => FindingSeverity::Error,
        }
    }

    pub fn explanation(&self) -> &'static str {
        match self {
            RuleId::R1 => {
                "R1 (error): entry and goal identifiers must be unique within a revision. Entry ids are the \
                 traceability anchor between revisions, so a duplicate makes every downstream reference ambiguous."
            }
            RuleId::R2 => {
                "R2 (error): every reference must resolve. Entries and waivers name a mode, function, guide word \
                 and operational scenario of the item, entries name a goal, and the mode must be one in which the \
                 function is active and to which the goal applies."
            }
            RuleId::R3 => {
                "R3 (error): an entry's stated ASIL must equal the ASIL derived from its severity, exposure and \
                 controllability classes by the ISO 26262-3 risk graph. Any class 0 derives QM."
            }
            RuleId::R4 => {
                "R4 (error): every hazardous scenario must be covered by a safety goal. Parsed documents always \
                 carry a goal link; the rule guards documents built programmatically."
            }
            RuleId::R5 => {
                "R5 (error): a safety goal carries the highest ASIL of the hazardous scenarios linked to it. When \
                 a goal states an ASIL, it must equal that maximum over its entries' stated ASILs. Goals without a \
                 stated ASIL are not checked."
            }
            RuleId::R6 => {
                "R6 (error): a nonzero severity, exposure or controllability class is a claim and needs a written \
                 rationale. Class 0 may be left unexplained."
            }
            RuleId::R7 => {
                "R7 (warning): every function, guide word and operating mode combination should be covered by an \
                 entry or by a waiver recording why it is not applicable. Completeness is an expert judgment, so \
                 gaps are warnings."
            }
            RuleId::R8 => {
                "R8 (error): discarded entry ids are retired. Reusing the stem of an id that an earlier revision \
                 dropped breaks traceability between revisions; refinements add suffixed ids such as 37a instead."
            }
            RuleId::R9 => {
                "R9 (warning): a safety goal with no linked hazardous scenario has no derived ASIL and is likely \
                 stale after a refinement."
            }
            RuleId::R10 => {
                "R10 (error): a safety refinement revisits hazardous scenarios and safety goals without touching \
                 the functional range. A revision marked safety-refinement whose function set differs from its \
                 base revision is an item refinement and must be marked as one."
            }
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for RuleId {
    type Err = ValidateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| ValidateError::UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub rule: RuleId,
    pub location: Location,
    pub severity: FindingSeverity,
    pub message: String,
}

impl Finding {
    pub fn new(rule: RuleId, location: Location, message: impl Into<String>) -> Self {
        Self { rule, location, severity: rule.severity(), message: message.into() }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.rule, self.location, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidateError {
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}

pub fn explain_rule(id: &str) -> Result<&'static str, ValidateError> {
    Ok(id.parse::<RuleId>()?.explanation())
}

/// Runs every rule. Findings are ordered by rule, then location, then
/// message. When a history is given, `doc` must be one of its revisions.
pub fn validate(doc: &HaraDocument, history: Option<&RevisionHistory>) -> Result<Vec<Finding>, ValidateError> {
    let position = match history {
        Some(h) => Some(h.position(doc).ok_or_else(|| {
            ValidateError::InconsistentInput(format!("revision {} is not part of the given history", doc.revision))
        })?),
        None => None,
    };

    let mut findings = Vec::new();
    for issue in structural_issues(doc) {
        let rule = match issue.kind {
            IssueKind::Duplicate => RuleId::R1,
            IssueKind::Reference => RuleId::R2,
            IssueKind::MissingGoal => RuleId::R4,
            IssueKind::MissingRationale => RuleId::R6,
        };
        findings.push(Finding::new(rule, issue.location, issue.message));
    }

    for e in &doc.entries {
        let derived = derived_asil(e);
        if e.asil != derived {
            findings.push(Finding::new(
                RuleId::R3,
                Location::Entry(e.id),
                format!(
                    "stated ASIL {} but {} {} {} derive {}",
                    e.asil, e.severity.class, e.exposure.class, e.controllability.class, derived
                ),
            ));
        }
    }

    for g in &doc.goals {
        let linked = doc.entries_for_goal(g.id);
        if linked.is_empty() {
            findings.push(Finding::new(
                RuleId::R9,
                Location::Goal(g.id),
                "no hazardous scenario is linked to this goal",
            ));
            continue;
        }
        if let (Some(stated), Ok(aggregate)) = (g.asil, aggregate_goal_asil(linked)) {
            if stated != aggregate {
                findings.push(Finding::new(
                    RuleId::R5,
                    Location::Goal(g.id),
                    format!("stated ASIL {stated} but linked entries aggregate to {aggregate}"),
                ));
            }
        }
    }

    for gap in coverage_report(doc) {
        findings.push(Finding::new(
            RuleId::R7,
            Location::Triple(gap.triple.clone()),
            format!("no entry or waiver covers {}", gap.triple),
        ));
    }

    if let (Some(h), Some(pos)) = (history, position) {
        let prefix: Vec<&HaraDocument> = h.revisions()[..=pos].iter().collect();
        findings.extend(stem_reuses(&prefix).into_iter().filter(|r| r.reused_in == doc.revision).map(reuse_finding));

        if doc.kind == RevisionKind::SafetyRefinement {
            if let Some(base) = doc.based_on.and_then(|b| h.revision(b)) {
                if base.item.functions != doc.item.functions {
                    findings.push(Finding::new(
                        RuleId::R10,
                        Location::Revision(doc.revision),
                        format!(
                            "marked safety-refinement but its function set differs from revision {}",
                            base.revision
                        ),
                    ));
                }
            }
        }
    }

    findings.sort();
    Ok(findings)
}
