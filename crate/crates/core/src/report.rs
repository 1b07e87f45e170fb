//! Safety-goal table, ASIL histogram and markdown/text renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::diff::{DiffReport, RefinementClass};
use crate::model::{AsilLevel, HaraDocument, ModeId, SafetyGoal};
use crate::validator::Finding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKind {
    /// Goals applying to every operating mode of the item.
    AllModes,
    /// Goals applying only to modes without automation.
    NonAutomated,
    /// Goals applying only to automated modes.
    Automated,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalGroup {
    pub kind: GroupKind,
    pub heading: String,
    /// Goals in document order.
    pub goals: Vec<SafetyGoal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalTable {
    pub title: String,
    pub revision: u32,
    /// Non-empty groups in [`GroupKind`] order.
    pub groups: Vec<GoalGroup>,
    pub warnings: Vec<String>,
}

impl GoalTable {
    pub fn group(&self, kind: GroupKind) -> Option<&GoalGroup> {
        self.groups.iter().find(|g| g.kind == kind)
    }
}

/// Groups goals by the operating modes they apply to. Membership depends
/// only on the item's automation flags, never on mode names.
pub fn safety_goal_table(doc: &HaraDocument) -> GoalTable {
    let item = &doc.item;
    let all: BTreeSet<&ModeId> = item.modes.iter().map(|m| &m.id).collect();
    let manual: BTreeSet<&ModeId> = item.modes.iter().filter(|m| !m.automated).map(|m| &m.id).collect();
    let automated: BTreeSet<&ModeId> = item.modes.iter().filter(|m| m.automated).map(|m| &m.id).collect();
    let names = |automated: bool| -> String {
        let names: Vec<&str> =
            item.modes.iter().filter(|m| m.automated == automated).map(|m| m.name.as_str()).collect();
        names.join(", ")
    };

    let mut buckets: BTreeMap<GroupKind, Vec<SafetyGoal>> = BTreeMap::new();
    let mut warnings = Vec::new();
    for g in &doc.goals {
        let modes: BTreeSet<&ModeId> = g.modes.iter().collect();
        let kind = if modes == all {
            GroupKind::AllModes
        } else if !modes.is_empty() && modes.is_subset(&manual) {
            GroupKind::NonAutomated
        } else if !modes.is_empty() && modes.is_subset(&automated) {
            GroupKind::Automated
        } else {
            warnings.push(format!("goal {} mixes automated and non-automated modes; listed under Other", g.id));
            GroupKind::Other
        };
        buckets.entry(kind).or_default().push(g.clone());
    }

    let groups = buckets
        .into_iter()
        .map(|(kind, goals)| {
            let heading = match kind {
                GroupKind::AllModes => "All operating modes".to_string(),
                GroupKind::NonAutomated => names(false),
                GroupKind::Automated => names(true),
                GroupKind::Other => "Other".to_string(),
            };
            GoalGroup { kind, heading, goals }
        })
        .collect();
    GoalTable { title: doc.title.clone(), revision: doc.revision, groups, warnings }
}

/// Entry count per stated ASIL; every level is present.
pub fn asil_histogram(doc: &HaraDocument) -> BTreeMap<AsilLevel, usize> {
    let mut counts: BTreeMap<AsilLevel, usize> = AsilLevel::ALL.into_iter().map(|a| (a, 0)).collect();
    for e in &doc.entries {
        *counts.entry(e.asil).or_default() += 1;
    }
    counts
}

fn cell(text: &str) -> String {
    text.replace('\\', "\\\\").replace('|', "\\|").replace("\r\n", "<br>").replace(['\n', '\r'], "<br>")
}

pub fn render_goal_table_markdown(table: &GoalTable) -> String {
    let mut out = format!("# {} (revision {})\n\n", cell(&table.title), table.revision);
    out.push_str("| ID | Safety goal | ASIL |\n|---|---|---|\n");
    for group in &table.groups {
        let _ = writeln!(out, "| | **{}** | |", cell(&group.heading));
        for g in &group.goals {
            let asil = g.asil.map(|a| a.to_string()).unwrap_or_default();
            let _ = writeln!(out, "| {} | {} | {} |", g.id, cell(&g.text), asil);
        }
    }
    for w in &table.warnings {
        let _ = write!(out, "\n> warning: {}\n", cell(w));
    }
    out
}

pub fn render_histogram_markdown(histogram: &BTreeMap<AsilLevel, usize>) -> String {
    let mut out = String::from("| ASIL | Entries |\n|---|---|\n");
    for (level, count) in histogram {
        let _ = writeln!(out, "| {} | {} |", level, count);
    }
    out
}

/// Goal table followed by the ASIL histogram of the entries.
pub fn render_document_markdown(doc: &HaraDocument) -> String {
    let mut out = render_goal_table_markdown(&safety_goal_table(doc));
    out.push_str("\n## Hazardous scenarios by ASIL\n\n");
    out.push_str(&render_histogram_markdown(&asil_histogram(doc)));
    out
}

pub fn render_findings_markdown(findings: &[Finding]) -> String {
    let mut out = String::from("| Rule | Severity | Location | Message |\n|---|---|---|---|\n");
    for f in findings {
        let _ =
            writeln!(out, "| {} | {} | {} | {} |", f.rule, f.severity, cell(&f.location.to_string()), cell(&f.message));
    }
    out
}

/// Plain text diff listing, one change per line.
pub fn render_diff_text(report: &DiffReport, class: RefinementClass) -> String {
    let mut out = format!("revision {} -> {}: {class}\n", report.base_revision, report.next_revision);
    if report.based_on_mismatch {
        let _ = writeln!(
            out,
            "warning: revision {} is not based on revision {}",
            report.next_revision, report.base_revision
        );
    }
    for f in &report.functions.added {
        let _ = writeln!(out, "function added {f}");
    }
    for f in &report.functions.removed {
        let _ = writeln!(out, "function removed {f}");
    }
    for f in &report.functions.changed {
        let _ = writeln!(out, "function changed {f}");
    }
    for m in &report.modes.added {
        let _ = writeln!(out, "mode added {m}");
    }
    for m in &report.modes.removed {
        let _ = writeln!(out, "mode removed {m}");
    }
    for m in &report.modes.changed {
        let _ = writeln!(out, "mode changed {m}");
    }
    for g in &report.added_goals {
        let _ = writeln!(out, "goal added {g}");
    }
    for g in &report.removed_goals {
        let _ = writeln!(out, "goal removed {g}");
    }
    for g in &report.modified_goals {
        for c in &g.changes {
            let _ = writeln!(out, "goal modified {}: {c}", g.id);
        }
    }
    for e in &report.added_entries {
        let goal = e.goal.map(|g| g.to_string()).unwrap_or_else(|| "none".into());
        let _ = writeln!(out, "entry added {} ({}, goal {goal})", e.id, e.asil.label());
    }
    for e in &report.removed_entries {
        let _ = writeln!(out, "entry removed {}", e.id);
    }
    for e in &report.modified_entries {
        for c in &e.changes {
            let _ = writeln!(out, "entry modified {}: {c}", e.id);
        }
    }
    for s in &report.splits {
        let children: Vec<String> = s.children.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "split {} -> [{}]", s.stem, children.join(", "));
    }
    for w in &report.added_waivers {
        let _ = writeln!(out, "waiver added {}", w.triple());
    }
    for w in &report.removed_waivers {
        let _ = writeln!(out, "waiver removed {}", w.triple());
    }
    for s in &report.reused_stems {
        let _ = writeln!(out, "error: discarded stem {s} reused");
    }
    out
}

pub fn render_diff_markdown(report: &DiffReport, class: RefinementClass) -> String {
    let mut out = format!(
        "# Revision {} to {}\n\nClassification: **{class}**\n\n| Change |\n|---|\n",
        report.base_revision, report.next_revision
    );
    for line in render_diff_text(report, class).lines().skip(1) {
        let _ = writeln!(out, "| {} |", cell(line));
    }
    out
}
