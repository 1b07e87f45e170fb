//! Systematic enumeration of candidate malfunctions and hazardous-scenario
//! triples, and the coverage check against a document's entries and
//! waivers.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{GuideWord, HaraDocument, ItemDefinition, Malfunction, Triple};

pub type CandidateTriple = Triple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("nothing to enumerate: item has no {0}")]
    NothingToEnumerate(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoverageReason {
    NoEntryNoWaiver,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverageFinding {
    pub triple: CandidateTriple,
    pub reason: CoverageReason,
}

/// Text used for a generated malfunction: `<interpretation> of <function>`.
pub fn malfunction_template(guide_word: &GuideWord, function_description: &str) -> String {
    format!("{} of {}", guide_word.interpretation, function_description)
}

fn require_inputs(item: &ItemDefinition) -> Result<(), GenerateError> {
    if item.functions.is_empty() {
        return Err(GenerateError::NothingToEnumerate("functions"));
    }
    if item.guide_words.is_empty() {
        return Err(GenerateError::NothingToEnumerate("guide words"));
    }
    Ok(())
}

/// One malfunction per function and guide word, ordered by (function id,
/// guide word id).
pub fn enumerate_malfunctions(item: &ItemDefinition) -> Result<Vec<Malfunction>, GenerateError> {
    require_inputs(item)?;
    let mut out = Vec::with_capacity(item.functions.len() * item.guide_words.len());
    for function in &item.functions {
        for gw in &item.guide_words {
            out.push(Malfunction {
                function: function.id.clone(),
                guide_word: gw.id.clone(),
                description: malfunction_template(gw, &function.description),
            });
        }
    }
    out.sort_by(|a, b| (&a.function, &a.guide_word).cmp(&(&b.function, &b.guide_word)));
    Ok(out)
}

/// Every (function, guide word, applicable mode) triple, sorted.
pub fn enumerate_candidates(item: &ItemDefinition) -> Result<Vec<CandidateTriple>, GenerateError> {
    require_inputs(item)?;
    if item.modes.is_empty() {
        return Err(GenerateError::NothingToEnumerate("operating modes"));
    }
    let mut out = BTreeSet::new();
    for function in &item.functions {
        for gw in &item.guide_words {
            for mode in &function.modes {
                out.insert(Triple { function: function.id.clone(), guide_word: gw.id.clone(), mode: mode.clone() });
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Candidate triples with neither a matching entry nor a waiver. An item
/// with nothing to enumerate has no gaps.
pub fn coverage_report(doc: &HaraDocument) -> Vec<CoverageFinding> {
    let Ok(candidates) = enumerate_candidates(&doc.item) else {
        return Vec::new();
    };
    let covered: BTreeSet<Triple> =
        doc.entries.iter().map(|e| e.triple()).chain(doc.waivers.iter().map(|w| w.triple())).collect();
    candidates
        .into_iter()
        .filter(|t| !covered.contains(t))
        .map(|triple| CoverageFinding { triple, reason: CoverageReason::NoEntryNoWaiver })
        .collect()
}
