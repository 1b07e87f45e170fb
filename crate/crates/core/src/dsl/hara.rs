use std::collections::BTreeMap;
use std::sync::Arc;

use super::lexer::{statements, Cursor, Step};
use super::{Diagnostics, ParseDiagnostic, SourceLocation};
use crate::model::{
    structural_issues, AsilLevel, Controllability, EntryId, Exposure, FunctionId, GoalId, GuideWordId, HaraDocument,
    HazardEntry, IssueKind, ItemDefinition, Location, Malfunction, ModeId, Rating, RevisionKind, RiskClass, SafetyGoal,
    ScenarioId, Severity, Triple, Waiver,
};

struct Header {
    title: String,
    revision: u32,
    kind: RevisionKind,
    based_on: Option<u32>,
    at: SourceLocation,
}

/// Parses a HARA document against an already parsed item. Stated ASILs that
/// disagree with the risk graph are accepted; the validator reports them.
pub fn parse_hara_file(file: &str, text: &str, item: Arc<ItemDefinition>) -> Result<HaraDocument, Diagnostics> {
    let stmts = statements(file, text)?;
    let mut errors = Vec::new();
    let mut header: Option<Header> = None;
    let mut goals: Vec<(SafetyGoal, SourceLocation)> = Vec::new();
    let mut entries: Vec<(HazardEntry, SourceLocation)> = Vec::new();
    let mut waivers: Vec<(Waiver, SourceLocation)> = Vec::new();

    for stmt in &stmts {
        let mut cur = Cursor::new(file, stmt);
        let result = (|| -> Step<()> {
            let (keyword, head) = cur.word("a keyword")?;
            match keyword {
                "hara" => {
                    let h = parse_header(&mut cur)?;
                    if header.is_some() {
                        return Err(cur.error_at(head, "duplicate `hara` statement"));
                    }
                    header = Some(h);
                }
                "goal" => goals.push((parse_goal(&mut cur)?, cur.start())),
                "entry" => entries.push((parse_entry(&mut cur)?, cur.start())),
                "waive" => waivers.push((parse_waiver(&mut cur)?, cur.start())),
                other => return Err(cur.error_at(head, format!("unknown keyword `{other}`"))),
            }
            cur.finish()
        })();
        if let Err(e) = result {
            errors.push(e);
        }
    }
    if !errors.is_empty() {
        return Err(Diagnostics(errors));
    }

    let origin = SourceLocation {
        file: file.to_string(),
        line: stmts.first().map_or(1, |s| s.tokens[0].line),
        column: stmts.first().map_or(1, |s| s.tokens[0].column),
    };
    let Some(header) = header else {
        return Err(Diagnostics::single(origin, "missing `hara` statement"));
    };
    match (header.kind, header.based_on) {
        (RevisionKind::Initial, Some(_)) => {
            errors.push(ParseDiagnostic::error(header.at.clone(), "an initial revision has no `based-on`"))
        }
        (kind, None) if kind != RevisionKind::Initial => {
            errors.push(ParseDiagnostic::error(header.at.clone(), format!("a {kind} revision needs `based-on`")))
        }
        (_, Some(b)) if b >= header.revision => errors.push(ParseDiagnostic::error(
            header.at.clone(),
            format!("revision {} cannot be based on revision {b}", header.revision),
        )),
        _ => {}
    }

    let mut entry_at: BTreeMap<EntryId, SourceLocation> = BTreeMap::new();
    for (e, at) in &entries {
        if entry_at.insert(e.id, at.clone()).is_some() {
            errors.push(ParseDiagnostic::error(at.clone(), format!("duplicate entry id {}", e.id)));
        }
    }
    let mut goal_at: BTreeMap<GoalId, SourceLocation> = BTreeMap::new();
    for (g, at) in &goals {
        if goal_at.insert(g.id, at.clone()).is_some() {
            errors.push(ParseDiagnostic::error(at.clone(), format!("duplicate safety goal {}", g.id)));
        }
    }
    let mut waiver_at: BTreeMap<Triple, SourceLocation> = BTreeMap::new();
    for (w, at) in &waivers {
        if waiver_at.insert(w.triple(), at.clone()).is_some() {
            errors.push(ParseDiagnostic::error(at.clone(), format!("triple {} waived twice", w.triple())));
        }
    }

    let doc = HaraDocument {
        title: header.title,
        revision: header.revision,
        kind: header.kind,
        based_on: header.based_on,
        item,
        goals: goals.into_iter().map(|(g, _)| g).collect(),
        entries: entries.into_iter().map(|(e, _)| e).collect(),
        waivers: waivers.into_iter().map(|(w, _)| w).collect(),
    };
    for issue in structural_issues(&doc) {
        if issue.kind == IssueKind::Duplicate {
            continue;
        }
        let at = match &issue.location {
            Location::Entry(id) => entry_at.get(id),
            Location::Goal(id) => goal_at.get(id),
            Location::Waiver(t) => waiver_at.get(t),
            _ => None,
        };
        errors.push(ParseDiagnostic::error(at.cloned().unwrap_or_else(|| origin.clone()), issue.message));
    }
    if !errors.is_empty() {
        return Err(Diagnostics(errors));
    }
    doc.finish().map_err(|problems| {
        Diagnostics(problems.into_iter().map(|p| ParseDiagnostic::error(origin.clone(), p.to_string())).collect())
    })
}

fn parse_header(cur: &mut Cursor<'_>) -> Step<Header> {
    let at = cur.start();
    let title = cur.string("document title")?;
    if title.trim().is_empty() {
        return Err(ParseDiagnostic::error(at, "document title is empty"));
    }
    cur.keyword("revision")?;
    let (revision, t) = cur.parsed::<u32>("revision number")?;
    if revision == 0 {
        return Err(cur.error_at(t, "revision numbers start at 1"));
    }
    cur.keyword("kind")?;
    let (kind, _) = cur.parsed::<RevisionKind>("revision kind")?;
    let based_on = if cur.eat("based-on") { Some(cur.parsed::<u32>("revision number")?.0) } else { None };
    Ok(Header { title, revision, kind, based_on, at })
}

fn parse_goal(cur: &mut Cursor<'_>) -> Step<SafetyGoal> {
    let (id, t) = cur.parsed::<GoalId>("safety goal id")?;
    let text = cur.string("safety goal text")?;
    if text.trim().is_empty() {
        return Err(cur.error_at(t, format!("safety goal {id} has empty text")));
    }
    cur.keyword("modes")?;
    let modes: Vec<ModeId> = cur.list::<ModeId>("mode id")?.into_iter().map(|(m, _)| m).collect();
    if modes.is_empty() {
        return Err(cur.error_at(t, format!("safety goal {id} applies to no mode")));
    }
    let asil = if cur.eat("asil") { Some(cur.parsed::<AsilLevel>("ASIL")?.0) } else { None };
    Ok(SafetyGoal { id, text, modes, asil })
}

fn rating<C>(cur: &mut Cursor<'_>, what: &str) -> Step<Rating<C>>
where
    C: RiskClass + std::str::FromStr,
    C::Err: std::fmt::Display,
{
    let (class, t) = cur.parsed::<C>(&format!("{what} class"))?;
    let rationale = cur.string(&format!("{what} rationale"))?;
    Rating::new(class, rationale).map_err(|e| cur.error_at(t, e.to_string()))
}

fn parse_entry(cur: &mut Cursor<'_>) -> Step<HazardEntry> {
    let (id, _) = cur.parsed::<EntryId>("entry id")?;
    cur.keyword("mode")?;
    let (mode, _) = cur.parsed::<ModeId>("mode id")?;
    cur.keyword("function")?;
    let (function, _) = cur.parsed::<FunctionId>("function id")?;
    cur.keyword("guideword")?;
    let (guide_word, _) = cur.parsed::<GuideWordId>("guide word id")?;
    cur.keyword("malfunction")?;
    let description = cur.string("malfunction description")?;
    cur.keyword("scenario")?;
    let (scenario, _) = cur.parsed::<ScenarioId>("scenario id")?;
    cur.keyword("consequence")?;
    let consequence = cur.string("consequence")?;
    let severity = rating::<Severity>(cur, "severity")?;
    let exposure = rating::<Exposure>(cur, "exposure")?;
    let controllability = rating::<Controllability>(cur, "controllability")?;
    cur.keyword("asil")?;
    let (asil, _) = cur.parsed::<AsilLevel>("ASIL")?;
    cur.keyword("goal")?;
    let (goal, _) = cur.parsed::<GoalId>("safety goal id")?;
    Ok(HazardEntry {
        id,
        mode,
        malfunction: Malfunction { function, guide_word, description },
        scenario,
        consequence,
        severity,
        exposure,
        controllability,
        asil,
        goal: Some(goal),
    })
}

fn parse_waiver(cur: &mut Cursor<'_>) -> Step<Waiver> {
    cur.keyword("function")?;
    let (function, t) = cur.parsed::<FunctionId>("function id")?;
    cur.keyword("guideword")?;
    let (guide_word, _) = cur.parsed::<GuideWordId>("guide word id")?;
    cur.keyword("mode")?;
    let (mode, _) = cur.parsed::<ModeId>("mode id")?;
    cur.keyword("rationale")?;
    let rationale = cur.string("waiver rationale")?;
    if rationale.trim().is_empty() {
        return Err(cur.error_at(t, "waiver without rationale"));
    }
    Ok(Waiver { function, guide_word, mode, rationale })
}
