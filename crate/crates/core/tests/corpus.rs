use std::sync::Arc;

use haraforge_core::corpus::{corpus_manifest, load_corpus, Provenance};
use haraforge_core::diff::{classify_refinement, diff, RefinementClass};
use haraforge_core::model::{
    AsilLevel, EntryId, FunctionDef, GoalId, HaraDocument, Location, RevisionHistory, RevisionKind, ScenarioId,
};
use haraforge_core::report::{asil_histogram, render_goal_table_markdown, safety_goal_table, GroupKind};
use haraforge_core::validator::{validate, Finding, RuleId};

/// Goal ids and texts transcribed from the published safety goal table,
/// in table order.
const TABLE: [(&str, &[(&str, &str)]); 3] = [
    (
        "All operating modes",
        &[
            ("SG01", "Unintended and not permitted operating mode change must be prevented."),
            ("SG02", "Intended and permitted operating mode change must be ensured."),
            ("SG07", "Display of actual operating mode in HMI must be ensured."),
        ],
    ),
    (
        "Manual Mode",
        &[
            ("SG04", "Unintended anti-lock brake actuation must be prevented."),
            ("SG05", "Unintended acceleration must be prevented."),
            ("SG16", "Anti-lock functionality must be ensured."),
            ("SG17", "Unintended steering actuation must be prevented"),
        ],
    ),
    (
        "Follow Mode, Coupled Mode, Safe Halt",
        &[
            ("SG03", "Steering actuation beyond specification must be prevented."),
            ("SG06", "Detection of driver intervention must be ensured."),
            ("SG08", "Unintended slow acceleration must be prevented."),
            ("SG09", "Deceleration to standstill must be ensured."),
            ("SG10", "Leaving tolerance ranges must trigger operating mode change to Safe Halt."),
            ("SG11", "Maximum velocity must not be exceeded."),
            ("SG12", "Overrunning hard shoulder markings must be prevented."),
            (
                "SG13",
                "Detection of and reaction to (deceleration to standstill) relevant obstacles (humans, vehicles, etc.) must be ensured.",
            ),
            ("SG14", "Identification of leading vehicle must be ensured."),
            ("SG15", "Detection of missing leading vehicle and operating mode change to safe halt must be ensured."),
        ],
    ),
];

fn id(text: &str) -> EntryId {
    text.parse().unwrap()
}

fn goal(n: u8) -> GoalId {
    GoalId::new(n).unwrap()
}

fn latest() -> (RevisionHistory, HaraDocument) {
    let (_, history) = load_corpus();
    let doc = history.latest().clone();
    (history, doc)
}

#[test]
fn goals_match_the_published_table() {
    let (_, doc) = latest();
    assert_eq!(doc.goals.len(), 17);
    let table = safety_goal_table(&doc);
    assert_eq!(table.groups.len(), 3);
    assert!(table.warnings.is_empty());
    for (group, (heading, rows)) in table.groups.iter().zip(TABLE) {
        assert_eq!(group.heading, heading);
        let got: Vec<(String, &str)> = group.goals.iter().map(|g| (g.id.to_string(), g.text.as_str())).collect();
        let want: Vec<(String, &str)> = rows.iter().map(|(i, t)| (i.to_string(), *t)).collect();
        assert_eq!(got, want);
    }
    let kinds: Vec<_> = table.groups.iter().map(|g| g.kind).collect();
    assert_eq!(kinds, [GroupKind::AllModes, GroupKind::NonAutomated, GroupKind::Automated]);
    assert!(render_goal_table_markdown(&table)
        .contains("Unintended and not permitted operating mode change must be prevented."));
}

#[test]
fn stated_goal_asils() {
    let (_, doc) = latest();
    let stated: Vec<(u8, AsilLevel)> = doc.goals.iter().filter_map(|g| g.asil.map(|a| (g.id.number(), a))).collect();
    assert_eq!(stated, [(3, AsilLevel::D), (7, AsilLevel::A), (12, AsilLevel::B), (13, AsilLevel::Qm)]);
}

#[test]
fn both_revisions_validate_cleanly() {
    let (history, _) = latest();
    for doc in history.revisions() {
        assert_eq!(validate(doc, None).unwrap(), Vec::<Finding>::new(), "revision {}", doc.revision);
        assert_eq!(validate(doc, Some(&history)).unwrap(), Vec::<Finding>::new(), "revision {}", doc.revision);
    }
}

#[test]
fn histogram_recount() {
    let (_, doc) = latest();
    let h = asil_histogram(&doc);
    assert_eq!(h.values().sum::<usize>(), doc.entries.len());
    for level in AsilLevel::ALL {
        assert_eq!(h[&level], doc.entries.iter().filter(|e| e.asil == level).count());
    }
}

#[test]
fn manifest_covers_goals_and_entries() {
    let m = corpus_manifest();
    let (history, _) = latest();
    for doc in history.revisions() {
        for g in &doc.goals {
            assert_eq!(m.tag(&format!("rev{}:goal:{}.text", doc.revision, g.id)), Some(Provenance::SourceVerbatim));
        }
        for e in &doc.entries {
            assert_eq!(
                m.tag(&format!("rev{}:entry:{}.ratings", doc.revision, e.id)),
                Some(Provenance::SyntheticConsistent)
            );
        }
    }
}

#[test]
fn split_of_sg12() {
    let (history, next) = latest();
    let base = &history.revisions()[0];
    let report = diff(base, &next);

    let change = report.modified(id("37")).expect("37 is modified");
    let t = change.asil().expect("ASIL changed");
    assert_eq!((t.from, t.to), (AsilLevel::D, AsilLevel::B));
    let added = report.added_entries.iter().find(|e| e.id == id("37a")).expect("37a added");
    assert_eq!(added.asil, AsilLevel::D);
    assert_eq!(added.goal, Some(goal(3)));
    assert_eq!(report.splits.len(), 1);
    assert_eq!((report.splits[0].stem, report.splits[0].children.clone()), (37, vec![id("37a")]));
    assert_eq!(report.added_goals, [goal(3)]);
    assert!(!report.based_on_mismatch);
    assert_eq!(classify_refinement(&report), RefinementClass::SafetyRefinement);

    let mut item = (*next.item).clone();
    item.functions.push(FunctionDef {
        id: "RightLaneDriving".parse().unwrap(),
        description: "Drive on right lane".into(),
        modes: vec!["FollowMode".parse().unwrap()],
    });
    let mut mutated = next.clone();
    mutated.item = Arc::new(item);
    assert_eq!(classify_refinement(&diff(base, &mutated)), RefinementClass::ItemRefinement);
    let history = RevisionHistory::new(vec![base.clone(), mutated.clone()]).unwrap();
    let r10: Vec<_> =
        validate(&mutated, Some(&history)).unwrap().into_iter().filter(|f| f.rule == RuleId::R10).collect();
    assert_eq!(r10.len(), 1);
}

#[test]
fn flipped_sg12_entry_is_an_r3_finding() {
    let (history, _) = latest();
    let mut doc = history.revisions()[0].clone();
    let e = doc.entries.iter_mut().find(|e| e.id == id("37")).unwrap();
    assert_eq!(e.asil, AsilLevel::D);
    e.asil = AsilLevel::B;
    let findings = validate(&doc, None).unwrap();
    let r3: Vec<_> = findings.iter().filter(|f| f.rule == RuleId::R3).collect();
    assert_eq!(r3.len(), 1);
    assert_eq!(r3[0].location, Location::Entry(id("37")));
}

#[derive(Clone, Copy)]
enum Context {
    /// The mutated latest revision on its own.
    Alone,
    /// The mutated latest revision in place of the original in the history.
    Replacing,
    /// The mutated latest revision appended as revision 3. Stem reuse needs
    /// a present, absent, present sequence, which two revisions cannot show.
    Successor,
}

/// Applies one single-field mutation, validates, and returns the findings.
fn mutate(f: impl FnOnce(&mut HaraDocument), context: Context) -> Vec<Finding> {
    let (history, mut doc) = latest();
    f(&mut doc);
    let mut revisions = history.revisions().to_vec();
    match context {
        Context::Alone => return validate(&doc, None).unwrap(),
        Context::Replacing => *revisions.last_mut().unwrap() = doc.clone(),
        Context::Successor => {
            doc.revision = 3;
            doc.based_on = Some(2);
            revisions.push(doc.clone());
        }
    }
    validate(&doc, Some(&RevisionHistory::new(revisions).unwrap())).unwrap()
}

fn entry<'a>(doc: &'a mut HaraDocument, text: &str) -> &'a mut haraforge_core::model::HazardEntry {
    doc.entries.iter_mut().find(|e| e.id == id(text)).unwrap()
}

#[test]
fn each_rule_has_a_single_field_mutation() {
    type Mutation = Box<dyn FnOnce(&mut HaraDocument)>;
    let cases: Vec<(RuleId, Context, Mutation)> = vec![
        (RuleId::R1, Context::Alone, Box::new(|d| entry(d, "41").id = id("40"))),
        (RuleId::R2, Context::Alone, Box::new(|d| entry(d, "21").scenario = ScenarioId::new("Motorway").unwrap())),
        (RuleId::R3, Context::Alone, Box::new(|d| entry(d, "1").asil = AsilLevel::D)),
        (RuleId::R4, Context::Alone, Box::new(|d| entry(d, "2").goal = None)),
        (
            RuleId::R5,
            Context::Alone,
            Box::new(|d| d.goals.iter_mut().find(|g| g.id == goal(7)).unwrap().asil = Some(AsilLevel::B)),
        ),
        (RuleId::R6, Context::Alone, Box::new(|d| entry(d, "16").exposure.rationale.clear())),
        (
            RuleId::R7,
            Context::Alone,
            Box::new(|d| {
                d.waivers.remove(0);
            }),
        ),
        (RuleId::R8, Context::Successor, Box::new(|d| entry(d, "41").id = id("13"))),
        (RuleId::R9, Context::Alone, Box::new(|d| entry(d, "29").goal = Some(goal(14)))),
        (
            RuleId::R10,
            Context::Replacing,
            Box::new(|d| {
                let mut item = (*d.item).clone();
                item.functions[0].description = "Operating mode management and arbitration".into();
                d.item = Arc::new(item);
            }),
        ),
    ];
    for (rule, context, f) in cases {
        let findings = mutate(f, context);
        let rules: Vec<RuleId> = findings.iter().map(|f| f.rule).collect();
        assert_eq!(rules, [rule], "{findings:?}");
    }
}

#[test]
fn r8_mutation_is_not_a_safety_refinement_diff() {
    let (history, mut doc) = latest();
    entry(&mut doc, "41").id = id("13");
    doc.revision = 3;
    doc.based_on = Some(2);
    let report = haraforge_core::diff::diff_in_history(history.revisions(), history.latest(), &doc);
    assert_eq!(report.reused_stems, [13]);
    assert_eq!(classify_refinement(&report), RefinementClass::Invalid);
    assert_eq!(doc.kind, RevisionKind::SafetyRefinement);
}
