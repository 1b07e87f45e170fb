//! Semantic comparison of two revisions and refinement classification.
//!
//! Entry identity is the [`EntryId`]; no rename detection is attempted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{
    AsilLevel, Controllability, EntryId, Exposure, FunctionId, GoalId, GuideWordId, HaraDocument, HazardEntry,
    Location, ModeId, Rating, ScenarioId, Severity, Triple, Waiver,
};
use crate::validator::{Finding, RuleId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition<T> {
    pub from: T,
    pub to: T,
}

impl<T> Transition<T> {
    pub fn reversed(self) -> Self {
        Transition { from: self.to, to: self.from }
    }
}

/// One changed field of an entry present in both revisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldChange {
    Mode(Transition<ModeId>),
    Function(Transition<FunctionId>),
    GuideWord(Transition<GuideWordId>),
    Malfunction(Transition<String>),
    Scenario(Transition<ScenarioId>),
    Consequence(Transition<String>),
    Severity(Transition<Rating<Severity>>),
    Exposure(Transition<Rating<Exposure>>),
    Controllability(Transition<Rating<Controllability>>),
    Asil(Transition<AsilLevel>),
    Goal(Transition<Option<GoalId>>),
}

impl FieldChange {
    pub fn reversed(self) -> Self {
        use FieldChange::*;
        match self {
            Mode(t) => Mode(t.reversed()),
            Function(t) => Function(t.reversed()),
            GuideWord(t) => GuideWord(t.reversed()),
            Malfunction(t) => Malfunction(t.reversed()),
            Scenario(t) => Scenario(t.reversed()),
            Consequence(t) => Consequence(t.reversed()),
            Severity(t) => Severity(t.reversed()),
            Exposure(t) => Exposure(t.reversed()),
            Controllability(t) => Controllability(t.reversed()),
            Asil(t) => Asil(t.reversed()),
            Goal(t) => Goal(t.reversed()),
        }
    }
}

fn goal_text(g: &Option<GoalId>) -> String {
    g.map_or_else(|| "none".to_string(), |g| g.to_string())
}

fn rating_text<C: fmt::Display>(r: &Rating<C>) -> String {
    if r.rationale.is_empty() {
        r.class.to_string()
    } else {
        format!("{} ({:?})", r.class, r.rationale)
    }
}

impl fmt::Display for FieldChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FieldChange::*;
        match self {
            Mode(t) => write!(f, "mode {} -> {}", t.from, t.to),
            Function(t) => write!(f, "function {} -> {}", t.from, t.to),
            GuideWord(t) => write!(f, "guide word {} -> {}", t.from, t.to),
            Malfunction(t) => write!(f, "malfunction {:?} -> {:?}", t.from, t.to),
            Scenario(t) => write!(f, "scenario {} -> {}", t.from, t.to),
            Consequence(t) => write!(f, "consequence {:?} -> {:?}", t.from, t.to),
            Severity(t) => write!(f, "severity {} -> {}", rating_text(&t.from), rating_text(&t.to)),
            Exposure(t) => write!(f, "exposure {} -> {}", rating_text(&t.from), rating_text(&t.to)),
            Controllability(t) => {
                write!(f, "controllability {} -> {}", rating_text(&t.from), rating_text(&t.to))
            }
            Asil(t) => write!(f, "ASIL {} -> {}", t.from, t.to),
            Goal(t) => write!(f, "goal {} -> {}", goal_text(&t.from), goal_text(&t.to)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryChange {
    pub id: EntryId,
    pub changes: Vec<FieldChange>,
}

impl EntryChange {
    pub fn asil(&self) -> Option<&Transition<AsilLevel>> {
        self.changes.iter().find_map(|c| match c {
            FieldChange::Asil(t) => Some(t),
            _ => None,
        })
    }
}

fn entry_changes(a: &HazardEntry, b: &HazardEntry) -> Vec<FieldChange> {
    let mut out = Vec::new();
    macro_rules! cmp {
        ($variant:ident, $($field:tt)+) => {
            if a.$($field)+ != b.$($field)+ {
                out.push(FieldChange::$variant(Transition { from: a.$($field)+.clone(), to: b.$($field)+.clone() }));
            }
        };
    }
    cmp!(Mode, mode);
    cmp!(Function, malfunction.function);
    cmp!(GuideWord, malfunction.guide_word);
    cmp!(Malfunction, malfunction.description);
    cmp!(Scenario, scenario);
    cmp!(Consequence, consequence);
    cmp!(Severity, severity);
    cmp!(Exposure, exposure);
    cmp!(Controllability, controllability);
    cmp!(Asil, asil);
    cmp!(Goal, goal);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalFieldChange {
    Text(Transition<String>),
    Modes(Transition<Vec<ModeId>>),
    Asil(Transition<Option<AsilLevel>>),
}

impl GoalFieldChange {
    pub fn reversed(self) -> Self {
        match self {
            GoalFieldChange::Text(t) => GoalFieldChange::Text(t.reversed()),
            GoalFieldChange::Modes(t) => GoalFieldChange::Modes(t.reversed()),
            GoalFieldChange::Asil(t) => GoalFieldChange::Asil(t.reversed()),
        }
    }
}

impl fmt::Display for GoalFieldChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let asil = |a: &Option<AsilLevel>| a.map_or_else(|| "unspecified".to_string(), |a| a.to_string());
        let modes = |m: &[ModeId]| m.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(", ");
        match self {
            GoalFieldChange::Text(t) => write!(f, "text {:?} -> {:?}", t.from, t.to),
            GoalFieldChange::Modes(t) => write!(f, "modes [{}] -> [{}]", modes(&t.from), modes(&t.to)),
            GoalFieldChange::Asil(t) => write!(f, "ASIL {} -> {}", asil(&t.from), asil(&t.to)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalChange {
    pub id: GoalId,
    pub changes: Vec<GoalFieldChange>,
}

/// New suffixed entries sharing a stem with the base revision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub stem: u32,
    pub children: Vec<EntryId>,
}

/// Additions, removals and in-place changes of a keyed set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDelta<K> {
    pub added: Vec<K>,
    pub removed: Vec<K>,
    pub changed: Vec<K>,
}

impl<K> Default for SetDelta<K> {
    fn default() -> Self {
        Self { added: Vec::new(), removed: Vec::new(), changed: Vec::new() }
    }
}

impl<K: Ord + Clone> SetDelta<K> {
    fn between<V: PartialEq>(base: &BTreeMap<K, V>, next: &BTreeMap<K, V>) -> Self {
        let mut delta = Self::default();
        for (k, v) in next {
            match base.get(k) {
                None => delta.added.push(k.clone()),
                Some(old) if old != v => delta.changed.push(k.clone()),
                Some(_) => {}
            }
        }
        delta.removed = base.keys().filter(|k| !next.contains_key(k)).cloned().collect();
        delta
    }

    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty() && self.changed.is_empty()
    }

    fn reversed(self) -> Self {
        Self { added: self.removed, removed: self.added, changed: self.changed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub base_revision: u32,
    pub next_revision: u32,
    /// The next revision does not declare itself based on the base.
    pub based_on_mismatch: bool,
    pub added_entries: Vec<HazardEntry>,
    pub removed_entries: Vec<HazardEntry>,
    pub modified_entries: Vec<EntryChange>,
    pub added_goals: Vec<GoalId>,
    pub removed_goals: Vec<GoalId>,
    pub modified_goals: Vec<GoalChange>,
    pub splits: Vec<Split>,
    /// A function counts as changed when its description or modes differ.
    pub functions: SetDelta<FunctionId>,
    pub modes: SetDelta<ModeId>,
    pub added_waivers: Vec<Waiver>,
    pub removed_waivers: Vec<Waiver>,
    /// Stems the next revision brings back after an earlier revision
    /// discarded them. Only filled by [`diff_in_history`].
    pub reused_stems: Vec<u32>,
}

impl DiffReport {
    /// True when no content changed. The based-on flag is metadata and
    /// does not count.
    pub fn is_empty(&self) -> bool {
        self.added_entries.is_empty()
            && self.removed_entries.is_empty()
            && self.modified_entries.is_empty()
            && self.added_goals.is_empty()
            && self.removed_goals.is_empty()
            && self.modified_goals.is_empty()
            && self.functions.is_empty()
            && self.modes.is_empty()
            && self.added_waivers.is_empty()
            && self.removed_waivers.is_empty()
            && self.reused_stems.is_empty()
    }

    pub fn modified(&self, id: EntryId) -> Option<&EntryChange> {
        self.modified_entries.iter().find(|c| c.id == id)
    }

    /// The report of the opposite direction, without split detection.
    pub fn reversed(self) -> Self {
        DiffReport {
            base_revision: self.next_revision,
            next_revision: self.base_revision,
            based_on_mismatch: self.based_on_mismatch,
            added_entries: self.removed_entries,
            removed_entries: self.added_entries,
            modified_entries: self
                .modified_entries
                .into_iter()
                .map(|c| EntryChange { id: c.id, changes: c.changes.into_iter().map(FieldChange::reversed).collect() })
                .collect(),
            added_goals: self.removed_goals,
            removed_goals: self.added_goals,
            modified_goals: self
                .modified_goals
                .into_iter()
                .map(|c| GoalChange {
                    id: c.id,
                    changes: c.changes.into_iter().map(GoalFieldChange::reversed).collect(),
                })
                .collect(),
            splits: Vec::new(),
            functions: self.functions.reversed(),
            modes: self.modes.reversed(),
            added_waivers: self.removed_waivers,
            removed_waivers: self.added_waivers,
            reused_stems: Vec::new(),
        }
    }
}

pub fn diff(base: &HaraDocument, next: &HaraDocument) -> DiffReport {
    let base_entries: BTreeMap<EntryId, &HazardEntry> = base.entries.iter().map(|e| (e.id, e)).collect();
    let next_entries: BTreeMap<EntryId, &HazardEntry> = next.entries.iter().map(|e| (e.id, e)).collect();

    let added_entries: Vec<HazardEntry> =
        next_entries.iter().filter(|(id, _)| !base_entries.contains_key(id)).map(|(_, e)| (*e).clone()).collect();
    let removed_entries: Vec<HazardEntry> =
        base_entries.iter().filter(|(id, _)| !next_entries.contains_key(id)).map(|(_, e)| (*e).clone()).collect();
    let modified_entries = next_entries
        .iter()
        .filter_map(|(id, b)| {
            let a = base_entries.get(id)?;
            let changes = entry_changes(a, b);
            (!changes.is_empty()).then_some(EntryChange { id: *id, changes })
        })
        .collect();

    let base_stems = base.stems();
    let mut splits: BTreeMap<u32, Vec<EntryId>> = BTreeMap::new();
    for e in &added_entries {
        if e.id.suffix().is_some() && base_stems.contains(&e.id.stem()) {
            splits.entry(e.id.stem()).or_default().push(e.id);
        }
    }

    let base_goals: BTreeMap<GoalId, _> = base.goals.iter().map(|g| (g.id, g)).collect();
    let next_goals: BTreeMap<GoalId, _> = next.goals.iter().map(|g| (g.id, g)).collect();
    let mut modified_goals = Vec::new();
    for (id, b) in &next_goals {
        let Some(a) = base_goals.get(id) else { continue };
        let mut changes = Vec::new();
        if a.text != b.text {
            changes.push(GoalFieldChange::Text(Transition { from: a.text.clone(), to: b.text.clone() }));
        }
        if a.modes != b.modes {
            changes.push(GoalFieldChange::Modes(Transition { from: a.modes.clone(), to: b.modes.clone() }));
        }
        if a.asil != b.asil {
            changes.push(GoalFieldChange::Asil(Transition { from: a.asil, to: b.asil }));
        }
        if !changes.is_empty() {
            modified_goals.push(GoalChange { id: *id, changes });
        }
    }

    let functions = |d: &HaraDocument| -> BTreeMap<FunctionId, _> {
        d.item.functions.iter().map(|f| (f.id.clone(), (f.description.clone(), f.modes.clone()))).collect()
    };
    let modes = |d: &HaraDocument| -> BTreeMap<ModeId, _> {
        d.item.modes.iter().map(|m| (m.id.clone(), (m.name.clone(), m.automated))).collect()
    };
    let waivers =
        |d: &HaraDocument| -> BTreeMap<Triple, Waiver> { d.waivers.iter().map(|w| (w.triple(), w.clone())).collect() };
    let (base_waivers, next_waivers) = (waivers(base), waivers(next));
    let mut added_waivers = Vec::new();
    let mut removed_waivers = Vec::new();
    for (t, w) in &next_waivers {
        if base_waivers.get(t) != Some(w) {
            added_waivers.push(w.clone());
        }
    }
    for (t, w) in &base_waivers {
        if next_waivers.get(t) != Some(w) {
            removed_waivers.push(w.clone());
        }
    }

    DiffReport {
        base_revision: base.revision,
        next_revision: next.revision,
        based_on_mismatch: next.based_on != Some(base.revision),
        added_entries,
        removed_entries,
        modified_entries,
        added_goals: next_goals.keys().filter(|g| !base_goals.contains_key(g)).copied().collect(),
        removed_goals: base_goals.keys().filter(|g| !next_goals.contains_key(g)).copied().collect(),
        modified_goals,
        splits: splits.into_iter().map(|(stem, children)| Split { stem, children }).collect(),
        functions: SetDelta::between(&functions(base), &functions(next)),
        modes: SetDelta::between(&modes(base), &modes(next)),
        added_waivers,
        removed_waivers,
        reused_stems: Vec::new(),
    }
}

/// Like [`diff`], additionally reporting stems of `next` that some
/// revision of `earlier` discarded.
pub fn diff_in_history(earlier: &[HaraDocument], base: &HaraDocument, next: &HaraDocument) -> DiffReport {
    let mut report = diff(base, next);
    let mut revisions: Vec<&HaraDocument> = earlier.iter().collect();
    revisions.push(next);
    let mut stems: Vec<u32> =
        stem_reuses(&revisions).into_iter().filter(|r| r.reused_in == next.revision).map(|r| r.stem).collect();
    stems.dedup();
    report.reused_stems = stems;
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RefinementClass {
    None,
    ItemRefinement,
    SafetyRefinement,
    Invalid,
}

impl fmt::Display for RefinementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RefinementClass::None => "none",
            RefinementClass::ItemRefinement => "item-refinement",
            RefinementClass::SafetyRefinement => "safety-refinement",
            RefinementClass::Invalid => "invalid",
        })
    }
}

pub fn classify_refinement(report: &DiffReport) -> RefinementClass {
    if !report.reused_stems.is_empty() {
        RefinementClass::Invalid
    } else if report.is_empty() {
        RefinementClass::None
    } else if report.functions.is_empty() && report.modes.is_empty() {
        RefinementClass::SafetyRefinement
    } else {
        RefinementClass::ItemRefinement
    }
}

/// A stem absent from some revision and present again later.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct StemReuse {
    pub stem: u32,
    pub discarded_in: u32,
    pub reused_in: u32,
}

/// Every reappearance of a discarded stem, in revision order.
pub fn stem_reuses(revisions: &[&HaraDocument]) -> Vec<StemReuse> {
    let mut seen = BTreeSet::new();
    let mut discarded: BTreeMap<u32, u32> = BTreeMap::new();
    let mut out = Vec::new();
    for doc in revisions {
        let stems = doc.stems();
        for s in &seen {
            if !stems.contains(s) {
                discarded.entry(*s).or_insert(doc.revision);
            }
        }
        for s in &stems {
            if let Some(discarded_in) = discarded.remove(s) {
                out.push(StemReuse { stem: *s, discarded_in, reused_in: doc.revision });
            }
        }
        seen.extend(stems);
    }
    out
}

/// One R8 finding per reappearance of a discarded stem.
pub fn check_id_stability(history: &crate::model::RevisionHistory) -> Vec<Finding> {
    let revisions: Vec<&HaraDocument> = history.revisions().iter().collect();
    stem_reuses(&revisions).into_iter().map(reuse_finding).collect()
}

pub(crate) fn reuse_finding(r: StemReuse) -> Finding {
    Finding::new(
        RuleId::R8,
        Location::Stem(r.stem),
        format!(
            "entry stem {} was discarded in revision {} and reused in revision {}",
            r.stem, r.discarded_in, r.reused_in
        ),
    )
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::{RevisionHistory, RevisionKind, SafetyGoal};
    use crate::testkit::{afas_like_item, entry_with_asil};

    fn goal(n: u8) -> GoalId {
        GoalId::new(n).unwrap()
    }

    fn doc_with(revision: u32, ids: &[&str]) -> HaraDocument {
        let item = Arc::new(afas_like_item());
        let mut doc = HaraDocument::new("T", revision, item.clone());
        if revision > 1 {
            doc.kind = RevisionKind::SafetyRefinement;
            doc.based_on = Some(revision - 1);
        }
        doc.goals.push(SafetyGoal {
            id: goal(1),
            text: "g".into(),
            modes: item.modes.iter().map(|m| m.id.clone()).collect(),
            asil: None,
        });
        for id in ids {
            let mut e = entry_with_asil(goal(1), AsilLevel::Qm);
            e.id = id.parse().unwrap();
            doc.entries.push(e);
        }
        doc
    }

    fn history(stems: &[&[&str]]) -> RevisionHistory {
        RevisionHistory::new(stems.iter().enumerate().map(|(i, ids)| doc_with(i as u32 + 1, ids)).collect()).unwrap()
    }

    #[test]
    fn identity_is_empty() {
        let d = doc_with(1, &["1", "2"]);
        let r = diff(&d, &d);
        assert!(r.is_empty());
        assert!(r.based_on_mismatch);
        assert_eq!(classify_refinement(&r), RefinementClass::None);
    }

    #[test]
    fn from_empty_base_everything_is_added() {
        let r = diff(&doc_with(1, &[]), &doc_with(2, &["1", "2", "3"]));
        assert_eq!(r.added_entries.len(), 3);
        assert!(!r.based_on_mismatch);
        assert_eq!(classify_refinement(&r), RefinementClass::SafetyRefinement);
    }

    #[test]
    fn splits_need_a_stem_in_the_base() {
        let r = diff(&doc_with(1, &["37", "40a"]), &doc_with(2, &["37", "37a", "41a", "40a", "40b"]));
        assert_eq!(
            r.splits,
            [
                Split { stem: 37, children: vec!["37a".parse().unwrap()] },
                Split { stem: 40, children: vec!["40b".parse().unwrap()] },
            ]
        );
        let r = diff(&doc_with(1, &["37"]), &doc_with(2, &["37a"]));
        assert_eq!(r.splits.len(), 1, "a removed parent still splits");
    }

    #[test]
    fn asil_transition_and_reversal() {
        let base = doc_with(1, &["37"]);
        let mut next = doc_with(2, &["37"]);
        next.entries[0].asil = AsilLevel::B;
        let r = diff(&base, &next);
        let t = r.modified("37".parse().unwrap()).unwrap().asil().unwrap();
        assert_eq!((t.from, t.to), (AsilLevel::Qm, AsilLevel::B));
        let back = diff(&next, &base);
        assert_eq!(back.modified_entries, r.clone().reversed().modified_entries);
    }

    #[test]
    fn function_change_is_item_refinement() {
        let base = doc_with(1, &["1"]);
        let mut next = doc_with(2, &["1"]);
        let mut item = (*next.item).clone();
        item.functions[0].description = "Operating mode display".into();
        next.item = Arc::new(item);
        let r = diff(&base, &next);
        assert_eq!(r.functions.changed.len(), 1);
        assert_eq!(classify_refinement(&r), RefinementClass::ItemRefinement);
    }

    #[test]
    fn id_stability() {
        assert!(check_id_stability(&history(&[&["1", "2", "3"], &["1", "3"], &["1", "3", "4"]])).is_empty());
        let findings = check_id_stability(&history(&[&["1", "2"], &["1"], &["1", "2"]]));
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].rule, RuleId::R8);
        assert_eq!(findings[0].location, Location::Stem(2));
        assert!(check_id_stability(&history(&[&["1"]])).is_empty());
        // A suffixed id keeps the stem alive.
        assert!(check_id_stability(&history(&[&["7"], &["7a"], &["7", "7a"]])).is_empty());
    }

    #[test]
    fn reuse_makes_a_diff_invalid() {
        let h = history(&[&["1", "2"], &["1"], &["1", "2"]]);
        let revs = h.revisions();
        let r = diff_in_history(&revs[..2], &revs[1], &revs[2]);
        assert_eq!(r.reused_stems, [2]);
        assert_eq!(classify_refinement(&r), RefinementClass::Invalid);
    }
}
