//! Semicolon separated hazard table, one row per entry.
//!
//! Cells: mode and function by display name, malfunction as `GUIDEWORD` or
//! `GUIDEWORD: description` (the bare form stands for the generated
//! description), hazardous scenario as `ScenarioId: consequence`, classes
//! as `S2`/`E3`/`C1`, ASIL as `QM`/`A`..`D`, goal as `SGnn`. Goals, waivers
//! and revision metadata are not representable and come from a frame
//! document.

use std::collections::BTreeMap;

use csv::{QuoteStyle, ReaderBuilder, StringRecord, Terminator, WriterBuilder};

use super::{Diagnostics, ParseDiagnostic, SourceLocation};
use crate::generator::malfunction_template;
use crate::model::{
    parse_entry_id, structural_issues, AsilLevel, Controllability, EntryId, Exposure, GoalId, HaraDocument,
    HazardEntry, IssueKind, ItemDefinition, Location, Malfunction, Rating, RiskClass, ScenarioId, Severity,
};

pub const CSV_HEADER: [&str; 13] = [
    "ID",
    "Operating Mode",
    "Function",
    "Malfunction",
    "Hazardous Scenario and Consequence",
    "S",
    "Rationale",
    "E",
    "Rationale",
    "C",
    "Rationale",
    "A",
    "SG",
];

fn malfunction_cell(item: &ItemDefinition, m: &Malfunction) -> String {
    let template = match (item.guide_word(&m.guide_word), item.function(&m.function)) {
        (Some(gw), Some(f)) => Some(malfunction_template(gw, &f.description)),
        _ => None,
    };
    if template.as_deref() == Some(m.description.as_str()) {
        m.guide_word.to_string()
    } else {
        format!("{}: {}", m.guide_word, m.description)
    }
}

/// Canonical table: header, then rows in entry id order, LF line endings,
/// fields quoted only when they contain `;`, `"` or a line break.
pub fn write_csv(doc: &HaraDocument) -> String {
    let item = &doc.item;
    let mut writer = WriterBuilder::new()
        .delimiter(b';')
        .terminator(Terminator::Any(b'\n'))
        .quote_style(QuoteStyle::Necessary)
        .from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("writing to memory");
    let mut entries: Vec<&HazardEntry> = doc.entries.iter().collect();
    entries.sort_by_key(|e| e.id);
    for e in entries {
        let mode = item.mode(&e.mode).map_or(e.mode.as_str(), |m| m.name.as_str());
        let function =
            item.function(&e.malfunction.function).map_or(e.malfunction.function.as_str(), |f| f.description.as_str());
        let record = [
            e.id.to_string(),
            mode.to_string(),
            function.to_string(),
            malfunction_cell(item, &e.malfunction),
            format!("{}: {}", e.scenario, e.consequence),
            e.severity.class.to_string(),
            e.severity.rationale.clone(),
            e.exposure.class.to_string(),
            e.exposure.rationale.clone(),
            e.controllability.class.to_string(),
            e.controllability.rationale.clone(),
            e.asil.to_string(),
            e.goal.map(|g| g.to_string()).unwrap_or_default(),
        ];
        writer.write_record(&record).expect("writing to memory");
    }
    let bytes = writer.into_inner().expect("flushing to memory");
    String::from_utf8(bytes).expect("input fields are UTF-8")
}

/// Parses a table into a copy of `frame` whose entries are replaced by the
/// table's rows.
pub fn parse_csv(file: &str, text: &str, frame: &HaraDocument) -> Result<HaraDocument, Diagnostics> {
    let loc = |line: u64| SourceLocation { file: file.to_string(), line: line.max(1) as usize, column: 1 };
    let mut reader =
        ReaderBuilder::new().delimiter(b';').has_headers(false).flexible(true).from_reader(text.as_bytes());

    let mut errors = Vec::new();
    let mut rows: Vec<(HazardEntry, SourceLocation)> = Vec::new();
    let mut saw_header = false;
    for result in reader.records() {
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(1, |p| p.line());
                errors.push(ParseDiagnostic::error(loc(line), format!("unreadable row: {e}")));
                continue;
            }
        };
        let at = loc(record.position().map_or(1, |p| p.line()));
        if !saw_header {
            saw_header = true;
            if record.iter().ne(CSV_HEADER.iter().copied()) {
                errors.push(ParseDiagnostic::error(at, format!("header must be `{}`", CSV_HEADER.join(";"))));
            }
            continue;
        }
        match parse_row(&frame.item, &record) {
            Ok(entry) => rows.push((entry, at)),
            Err(message) => errors.push(ParseDiagnostic::error(at, message)),
        }
    }
    if !saw_header {
        errors.push(ParseDiagnostic::error(loc(1), "missing header row"));
    }
    if !errors.is_empty() {
        return Err(Diagnostics(errors));
    }

    let mut row_at: BTreeMap<EntryId, SourceLocation> = BTreeMap::new();
    for (e, at) in &rows {
        if row_at.insert(e.id, at.clone()).is_some() {
            errors.push(ParseDiagnostic::error(at.clone(), format!("duplicate entry id {}", e.id)));
        }
    }
    let mut doc = frame.clone();
    doc.entries = rows.into_iter().map(|(e, _)| e).collect();
    for issue in structural_issues(&doc) {
        if let (IssueKind::Duplicate, Location::Entry(_)) = (issue.kind, &issue.location) {
            continue;
        }
        let at = match &issue.location {
            Location::Entry(id) => row_at.get(id).cloned(),
            _ => None,
        };
        errors.push(ParseDiagnostic::error(
            at.unwrap_or_else(|| loc(1)),
            format!("{}: {}", issue.location, issue.message),
        ));
    }
    if !errors.is_empty() {
        return Err(Diagnostics(errors));
    }
    doc.finish().map_err(|problems| {
        Diagnostics(problems.into_iter().map(|p| ParseDiagnostic::error(loc(1), p.to_string())).collect())
    })
}

fn class<C: RiskClass>(cell: &str) -> Result<C, String> {
    C::parse_code(cell).map_err(|e| format!("malformed class cell {cell:?}: {e}"))
}

fn rating<C: RiskClass>(class_cell: &str, rationale: &str) -> Result<Rating<C>, String> {
    Rating::new(class::<C>(class_cell)?, rationale).map_err(|e| e.to_string())
}

fn parse_row(item: &ItemDefinition, record: &StringRecord) -> Result<HazardEntry, String> {
    if record.len() != CSV_HEADER.len() {
        return Err(format!("expected {} columns, found {}", CSV_HEADER.len(), record.len()));
    }
    let cell = |i: usize| &record[i];
    let id = parse_entry_id(cell(0)).map_err(|e| e.to_string())?;

    let mode = item
        .modes
        .iter()
        .find(|m| m.name == cell(1))
        .or_else(|| item.modes.iter().find(|m| m.id.as_str() == cell(1)))
        .ok_or_else(|| format!("unknown operating mode {:?}", cell(1)))?;
    let function = item
        .functions
        .iter()
        .find(|f| f.description == cell(2))
        .or_else(|| item.functions.iter().find(|f| f.id.as_str() == cell(2)))
        .ok_or_else(|| format!("unknown function {:?}", cell(2)))?;

    let (gw_text, description) = match cell(3).split_once(':') {
        Some((gw, rest)) => {
            let rest = rest.strip_prefix(' ').ok_or_else(|| format!("malformed malfunction cell {:?}", cell(3)))?;
            (gw, Some(rest.to_string()))
        }
        None => (cell(3), None),
    };
    let gw = item
        .guide_words
        .iter()
        .find(|g| g.id.as_str() == gw_text)
        .ok_or_else(|| format!("unknown guide word {gw_text:?}"))?;
    let description = description.unwrap_or_else(|| malfunction_template(gw, &function.description));

    let (scenario, consequence) = cell(4)
        .split_once(": ")
        .ok_or_else(|| format!("hazardous scenario cell must read `ScenarioId: consequence`, found {:?}", cell(4)))?;
    let scenario = ScenarioId::new(scenario).map_err(|e| e.to_string())?;
    if item.scenario(&scenario).is_none() {
        return Err(format!("unknown operational scenario `{scenario}`"));
    }

    let asil: AsilLevel = cell(11).parse().map_err(|e| format!("malformed ASIL cell: {e}"))?;
    let goal: GoalId = cell(12).parse().map_err(|e| format!("malformed goal cell: {e}"))?;
    Ok(HazardEntry {
        id,
        mode: mode.id.clone(),
        malfunction: Malfunction { function: function.id.clone(), guide_word: gw.id.clone(), description },
        scenario,
        consequence: consequence.to_string(),
        severity: rating::<Severity>(cell(5), cell(6))?,
        exposure: rating::<Exposure>(cell(7), cell(8))?,
        controllability: rating::<Controllability>(cell(9), cell(10))?,
        asil,
        goal: Some(goal),
    })
}
