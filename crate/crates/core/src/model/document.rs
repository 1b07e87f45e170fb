use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{
    AsilLevel, Controllability, EntryId, Exposure, FunctionId, GoalId, GuideWordId, ItemDefinition, ModeId, ModelError,
    Rating, ScenarioId, Severity,
};

/// A deviation of one function under one guide word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Malfunction {
    pub function: FunctionId,
    pub guide_word: GuideWordId,
    pub description: String,
}

/// A (function, guide word, mode) combination: the unit of coverage.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub function: FunctionId,
    pub guide_word: GuideWordId,
    pub mode: ModeId,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.function, self.guide_word, self.mode)
    }
}

/// One hazardous scenario row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HazardEntry {
    pub id: EntryId,
    pub mode: ModeId,
    pub malfunction: Malfunction,
    pub scenario: ScenarioId,
    pub consequence: String,
    pub severity: Rating<Severity>,
    pub exposure: Rating<Exposure>,
    pub controllability: Rating<Controllability>,
    pub asil: AsilLevel,
    /// Always present in parsed documents; `None` is only reachable by
    /// programmatic construction and is reported by the validator.
    pub goal: Option<GoalId>,
}

impl HazardEntry {
    pub fn triple(&self) -> Triple {
        Triple {
            function: self.malfunction.function.clone(),
            guide_word: self.malfunction.guide_word.clone(),
            mode: self.mode.clone(),
        }
    }
}

/// Recorded judgment that a triple needs no hazardous scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Waiver {
    pub function: FunctionId,
    pub guide_word: GuideWordId,
    pub mode: ModeId,
    pub rationale: String,
}

impl Waiver {
    pub fn triple(&self) -> Triple {
        Triple { function: self.function.clone(), guide_word: self.guide_word.clone(), mode: self.mode.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SafetyGoal {
    pub id: GoalId,
    pub text: String,
    pub modes: Vec<ModeId>,
    /// ASIL recorded in the document, if any. The aggregate over linked
    /// entries is authoritative.
    pub asil: Option<AsilLevel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RevisionKind {
    Initial,
    ItemRefinement,
    SafetyRefinement,
}

impl RevisionKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            RevisionKind::Initial => "initial",
            RevisionKind::ItemRefinement => "item-refinement",
            RevisionKind::SafetyRefinement => "safety-refinement",
        }
    }
}

impl fmt::Display for RevisionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for RevisionKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "initial" => Ok(RevisionKind::Initial),
            "item-refinement" => Ok(RevisionKind::ItemRefinement),
            "safety-refinement" => Ok(RevisionKind::SafetyRefinement),
            _ => Err(ModelError::InvalidDocument(format!("unknown revision kind `{s}`"))),
        }
    }
}

/// Where a structural issue or validator finding points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Document,
    Entry(EntryId),
    Goal(GoalId),
    Waiver(Triple),
    Triple(Triple),
    Stem(u32),
    Revision(u32),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Document => f.write_str("document"),
            Location::Entry(id) => write!(f, "entry:{id}"),
            Location::Goal(id) => write!(f, "goal:{id}"),
            Location::Waiver(t) => write!(f, "waiver:{t}"),
            Location::Triple(t) => write!(f, "triple:{t}"),
            Location::Stem(s) => write!(f, "stem:{s}"),
            Location::Revision(r) => write!(f, "revision:{r}"),
        }
    }
}

/// Classes of referential problems a document may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueKind {
    Duplicate,
    Reference,
    MissingGoal,
    MissingRationale,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralIssue {
    pub kind: IssueKind,
    pub location: Location,
    pub message: String,
}

/// One revision of a hazard analysis bound to its item definition.
#[derive(Debug, Clone, PartialEq)]
pub struct HaraDocument {
    pub title: String,
    pub revision: u32,
    pub kind: RevisionKind,
    pub based_on: Option<u32>,
    pub item: Arc<ItemDefinition>,
    pub goals: Vec<SafetyGoal>,
    pub entries: Vec<HazardEntry>,
    pub waivers: Vec<Waiver>,
}

impl HaraDocument {
    /// Empty initial revision.
    pub fn new(title: impl Into<String>, revision: u32, item: Arc<ItemDefinition>) -> Self {
        Self {
            title: title.into(),
            revision,
            kind: RevisionKind::Initial,
            based_on: None,
            item,
            goals: Vec::new(),
            entries: Vec::new(),
            waivers: Vec::new(),
        }
    }

    /// Sorts goals by number, entries by id and waivers by triple.
    pub fn canonicalize(&mut self) {
        self.goals.sort_by_key(|g| g.id);
        self.entries.sort_by_key(|e| e.id);
        self.waivers.sort_by_key(|w| w.triple());
    }

    /// Canonicalizes and checks every invariant.
    pub fn finish(mut self) -> Result<Self, Vec<ModelError>> {
        self.canonicalize();
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<(), Vec<ModelError>> {
        let mut errors: Vec<ModelError> = structural_issues(self)
            .into_iter()
            .map(|i| ModelError::InvalidDocument(format!("{}: {}", i.location, i.message)))
            .collect();
        let mut bad = |msg: String| errors.push(ModelError::InvalidDocument(msg));
        if self.title.trim().is_empty() {
            bad("title is empty".into());
        }
        if self.revision == 0 {
            bad("revision numbers start at 1".into());
        }
        match (self.kind, self.based_on) {
            (RevisionKind::Initial, Some(b)) => bad(format!("initial revision cannot be based on {b}")),
            (kind, None) if kind != RevisionKind::Initial => bad(format!("{kind} revision needs based-on")),
            (_, Some(b)) if b >= self.revision => {
                bad(format!("revision {} cannot be based on later revision {b}", self.revision))
            }
            _ => {}
        }
        for g in &self.goals {
            if g.text.trim().is_empty() {
                bad(format!("goal {} has empty text", g.id));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn goal(&self, id: GoalId) -> Option<&SafetyGoal> {
        self.goals.iter().find(|g| g.id == id)
    }

    pub fn entry(&self, id: EntryId) -> Option<&HazardEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn entries_for_goal(&self, goal: GoalId) -> Vec<&HazardEntry> {
        self.entries.iter().filter(|e| e.goal == Some(goal)).collect()
    }

    pub fn stems(&self) -> BTreeSet<u32> {
        self.entries.iter().map(|e| e.id.stem()).collect()
    }
}

/// Duplicate ids, dangling or inapplicable references, missing goal links
/// and missing rationales.
pub fn structural_issues(doc: &HaraDocument) -> Vec<StructuralIssue> {
    let item = &doc.item;
    let mut issues = Vec::new();
    let mut push = |kind, location: Location, message: String| issues.push(StructuralIssue { kind, location, message });

    let mut seen_entries = BTreeSet::new();
    for e in &doc.entries {
        if !seen_entries.insert(e.id) {
            push(IssueKind::Duplicate, Location::Entry(e.id), format!("entry id {} is used more than once", e.id));
        }
    }
    let mut seen_goals = BTreeSet::new();
    for g in &doc.goals {
        if !seen_goals.insert(g.id) {
            push(IssueKind::Duplicate, Location::Goal(g.id), format!("goal id {} is used more than once", g.id));
        }
    }
    let mut seen_waivers = BTreeSet::new();
    for w in &doc.waivers {
        let t = w.triple();
        if !seen_waivers.insert(t.clone()) {
            push(IssueKind::Duplicate, Location::Waiver(t.clone()), format!("triple {t} is waived more than once"));
        }
    }

    let goals: BTreeMap<GoalId, &SafetyGoal> = doc.goals.iter().map(|g| (g.id, g)).collect();

    for g in &doc.goals {
        if g.modes.is_empty() {
            push(IssueKind::Reference, Location::Goal(g.id), format!("goal {} applies to no operating mode", g.id));
        }
        for m in &g.modes {
            if item.mode(m).is_none() {
                push(
                    IssueKind::Reference,
                    Location::Goal(g.id),
                    format!("goal {} references unknown mode `{m}`", g.id),
                );
            }
        }
    }

    for e in &doc.entries {
        let loc = || Location::Entry(e.id);
        let function = item.function(&e.malfunction.function);
        if item.mode(&e.mode).is_none() {
            push(IssueKind::Reference, loc(), format!("unknown mode `{}`", e.mode));
        }
        if function.is_none() {
            push(IssueKind::Reference, loc(), format!("unknown function `{}`", e.malfunction.function));
        }
        if item.guide_word(&e.malfunction.guide_word).is_none() {
            push(IssueKind::Reference, loc(), format!("unknown guide word `{}`", e.malfunction.guide_word));
        }
        if item.scenario(&e.scenario).is_none() {
            push(IssueKind::Reference, loc(), format!("unknown operational scenario `{}`", e.scenario));
        }
        if let Some(f) = function {
            if item.mode(&e.mode).is_some() && !f.modes.contains(&e.mode) {
                push(IssueKind::Reference, loc(), format!("function `{}` is not active in mode `{}`", f.id, e.mode));
            }
        }
        match e.goal {
            None => push(IssueKind::MissingGoal, loc(), "entry is not linked to a safety goal".into()),
            Some(g) => match goals.get(&g) {
                None => push(IssueKind::Reference, loc(), format!("unknown safety goal {g}")),
                Some(goal) => {
                    if item.mode(&e.mode).is_some() && !goal.modes.contains(&e.mode) {
                        push(
                            IssueKind::Reference,
                            loc(),
                            format!("safety goal {g} does not apply in mode `{}`", e.mode),
                        );
                    }
                }
            },
        }
        for (name, missing) in [
            ("severity", e.severity.lacks_rationale()),
            ("exposure", e.exposure.lacks_rationale()),
            ("controllability", e.controllability.lacks_rationale()),
        ] {
            if missing {
                push(IssueKind::MissingRationale, loc(), format!("{name} class above zero without rationale"));
            }
        }
    }

    for w in &doc.waivers {
        let loc = || Location::Waiver(w.triple());
        let function = item.function(&w.function);
        if function.is_none() {
            push(IssueKind::Reference, loc(), format!("unknown function `{}`", w.function));
        }
        if item.guide_word(&w.guide_word).is_none() {
            push(IssueKind::Reference, loc(), format!("unknown guide word `{}`", w.guide_word));
        }
        if item.mode(&w.mode).is_none() {
            push(IssueKind::Reference, loc(), format!("unknown mode `{}`", w.mode));
        } else if let Some(f) = function {
            if !f.modes.contains(&w.mode) {
                push(IssueKind::Reference, loc(), format!("function `{}` is not active in mode `{}`", f.id, w.mode));
            }
        }
        if w.rationale.trim().is_empty() {
            push(IssueKind::MissingRationale, loc(), "waiver without rationale".into());
        }
    }
    issues
}

/// Ordered revisions of one document.
#[derive(Debug, Clone, PartialEq)]
pub struct RevisionHistory {
    revisions: Vec<HaraDocument>,
}

impl RevisionHistory {
    /// Revisions must share a title, have strictly increasing numbers, and
    /// every revision after the first must be based on its predecessor.
    /// Stem reuse is not rejected here; it is reported as a finding.
    pub fn new(revisions: Vec<HaraDocument>) -> Result<Self, ModelError> {
        let Some(first) = revisions.first() else {
            return Err(ModelError::InvalidHistory("history is empty".into()));
        };
        for pair in revisions.windows(2) {
            let (prev, next) = (&pair[0], &pair[1]);
            if next.title != first.title {
                return Err(ModelError::InvalidHistory(format!(
                    "revision {} has title {:?}, expected {:?}",
                    next.revision, next.title, first.title
                )));
            }
            if next.revision <= prev.revision {
                return Err(ModelError::InvalidHistory(format!(
                    "revision {} follows revision {}",
                    next.revision, prev.revision
                )));
            }
            if next.based_on != Some(prev.revision) {
                return Err(ModelError::InvalidHistory(format!(
                    "revision {} must be based on revision {}",
                    next.revision, prev.revision
                )));
            }
        }
        Ok(Self { revisions })
    }

    pub fn revisions(&self) -> &[HaraDocument] {
        &self.revisions
    }

    pub fn revision(&self, number: u32) -> Option<&HaraDocument> {
        self.revisions.iter().find(|r| r.revision == number)
    }

    pub fn latest(&self) -> &HaraDocument {
        self.revisions.last().expect("history is never empty")
    }

    pub fn position(&self, doc: &HaraDocument) -> Option<usize> {
        self.revisions.iter().position(|r| r == doc)
    }
}
