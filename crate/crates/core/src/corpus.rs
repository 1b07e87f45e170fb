//! Bundled corpus: the automated unmanned protective vehicle of the aFAS
//! project. Goal ids and texts, the four stated goal ASILs, the operating
//! modes, elements and parameters come from the published analysis. Entry
//! ratings, scenarios, functions and waivers are synthetic and chosen so
//! the risk graph reproduces the published ASILs; [`corpus_manifest`]
//! tags every value accordingly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::dsl::{parse_hara_file, parse_item_file};
use crate::model::{GoalId, HaraDocument, ItemDefinition, RevisionHistory};

pub const ITEM_FILE: &str = "afas.item";
pub const ITEM_TEXT: &str = include_str!("../corpus/afas.item");

/// Revision files in history order.
pub const REVISION_FILES: [(&str, &str); 2] = [
    ("afas-rev1.hara", include_str!("../corpus/afas-rev1.hara")),
    ("afas-rev2.hara", include_str!("../corpus/afas-rev2.hara")),
];

/// Goals whose ASIL the published analysis states, as of the latest revision.
pub const STATED_GOAL_ASILS: [(u8, &str); 4] = [(3, "D"), (12, "B"), (7, "A"), (13, "QM")];

/// Entry ids named in the published analysis.
pub const PUBLISHED_ENTRY_IDS: [&str; 2] = ["37", "37a"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    /// Copied character for character.
    SourceVerbatim,
    /// Inferred from published text, such as group headings or prose.
    SourceDerived,
    /// Invented, consistent with the published results.
    SyntheticConsistent,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::SourceVerbatim => "source-verbatim",
            Provenance::SourceDerived => "source-derived",
            Provenance::SyntheticConsistent => "synthetic-consistent",
        })
    }
}

/// Provenance per fixture value, keyed `<kind>:<id>.<field>`, for example
/// `goal:SG03.text` or `entry:37a.ratings`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorpusManifest {
    tags: BTreeMap<String, Provenance>,
}

impl CorpusManifest {
    pub fn tag(&self, key: &str) -> Option<Provenance> {
        self.tags.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Provenance)> {
        self.tags.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    fn set(&mut self, key: String, tag: Provenance) {
        self.tags.insert(key, tag);
    }
}

/// Parses the bundled item definition.
pub fn corpus_item() -> ItemDefinition {
    parse_item_file(ITEM_FILE, ITEM_TEXT).expect("bundled item parses")
}

/// The item and its two-revision history: revision 1 before and
/// revision 2 after the SG12/SG03 split.
pub fn load_corpus() -> (ItemDefinition, RevisionHistory) {
    let item = Arc::new(corpus_item());
    let revisions = REVISION_FILES
        .iter()
        .map(|(name, text)| parse_hara_file(name, text, item.clone()).expect("bundled revision parses"))
        .collect();
    let history = RevisionHistory::new(revisions).expect("bundled history is ordered");
    ((*item).clone(), history)
}

pub fn corpus_manifest() -> CorpusManifest {
    use Provenance::*;
    let (item, history) = load_corpus();
    let mut m = CorpusManifest::default();

    m.set("item:name".into(), SourceDerived);
    for mode in &item.modes {
        m.set(format!("mode:{}.name", mode.id), SourceVerbatim);
        m.set(format!("mode:{}.automated", mode.id), SourceDerived);
    }
    for e in &item.elements {
        m.set(format!("element:{}", e.id), SourceDerived);
    }
    m.set("item:connections".into(), SourceDerived);
    for p in &item.parameters {
        m.set(format!("param:{}", p.name), SourceDerived);
    }
    for f in &item.functions {
        m.set(format!("function:{}", f.id), SyntheticConsistent);
    }
    for g in &item.guide_words {
        m.set(format!("guideword:{}", g.id), SyntheticConsistent);
    }
    for s in &item.scenarios {
        m.set(format!("scenario:{}", s.id), SyntheticConsistent);
    }

    let stated: BTreeMap<u8, &str> = STATED_GOAL_ASILS.into_iter().collect();
    for doc in history.revisions() {
        let r = doc.revision;
        m.set(format!("rev{r}:header"), SyntheticConsistent);
        for g in &doc.goals {
            m.set(format!("rev{r}:goal:{}.text", g.id), SourceVerbatim);
            m.set(format!("rev{r}:goal:{}.modes", g.id), SourceDerived);
            if g.asil.is_some() {
                let tag = if doc == history.latest() && stated.contains_key(&g.id.number()) {
                    SourceVerbatim
                } else {
                    // Earlier revision: the prose only says SG12 was rated higher before the split.
                    SourceDerived
                };
                m.set(format!("rev{r}:goal:{}.asil", g.id), tag);
            }
        }
        for e in &doc.entries {
            let id_tag = if PUBLISHED_ENTRY_IDS.contains(&e.id.to_string().as_str()) {
                SourceVerbatim
            } else {
                SyntheticConsistent
            };
            m.set(format!("rev{r}:entry:{}.id", e.id), id_tag);
            m.set(format!("rev{r}:entry:{}.content", e.id), SyntheticConsistent);
            m.set(format!("rev{r}:entry:{}.ratings", e.id), SyntheticConsistent);
        }
        for w in &doc.waivers {
            m.set(format!("rev{r}:waiver:{}", w.triple()), SyntheticConsistent);
        }
    }
    m
}

/// The corpus goal with the given number in the latest revision.
pub fn latest_goal(history: &RevisionHistory, number: u8) -> Option<&crate::model::SafetyGoal> {
    history.latest().goal(GoalId::new(number).ok()?)
}

/// Latest revision of the corpus.
pub fn latest_revision() -> HaraDocument {
    load_corpus().1.latest().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{serialize_document, serialize_item};

    #[test]
    fn files_are_canonical() {
        let (item, history) = load_corpus();
        assert_eq!(serialize_item(&item), ITEM_TEXT);
        for (doc, (name, text)) in history.revisions().iter().zip(REVISION_FILES) {
            assert_eq!(serialize_document(doc), text, "{name}");
        }
    }

    #[test]
    fn shape() {
        let (item, history) = load_corpus();
        assert_eq!(item.modes.len(), 4);
        assert_eq!(item.elements.len(), 5);
        assert_eq!(item.primary_element().unwrap().id.as_str(), "AFALogic");
        assert_eq!(history.revisions().len(), 2);
        assert_eq!(history.latest().goals.len(), 17);
        let sg13 = latest_goal(&history, 13).unwrap();
        assert_eq!(
            sg13.text,
            "Detection of and reaction to (deceleration to standstill) relevant obstacles (humans, vehicles, etc.) must be ensured."
        );
        let unit = |n: &str| item.parameter(n).map(|p| (p.value, p.unit.as_str()));
        assert_eq!(unit("max_speed"), Some((12.0, "km/h")));
        assert_eq!(unit("follow_distance"), Some((90.0, "m")));
        assert_eq!(unit("coupled_distance"), Some((10.0, "m")));
    }

    #[test]
    fn manifest_tags_every_value_once() {
        let m = corpus_manifest();
        assert_eq!(m.tag("rev2:goal:SG03.asil"), Some(Provenance::SourceVerbatim));
        assert_eq!(m.tag("rev2:entry:37a.id"), Some(Provenance::SourceVerbatim));
        assert_eq!(m.tag("rev2:entry:37a.ratings"), Some(Provenance::SyntheticConsistent));
        assert_eq!(m.tag("rev2:goal:SG01.asil"), None, "unstated goals carry no ASIL");
        let (_, history) = load_corpus();
        let latest = history.latest();
        for w in &latest.waivers {
            assert!(m.tag(&format!("rev2:waiver:{}", w.triple())).is_some());
        }
        let stated = latest.goals.iter().filter(|g| g.asil.is_some()).count();
        assert_eq!(stated, STATED_GOAL_ASILS.len());
    }
}
