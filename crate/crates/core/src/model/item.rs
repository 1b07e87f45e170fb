use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{ElementId, Exposure, FunctionId, GuideWordId, ModeId, ModelError, ParamName, ScenarioId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatingMode {
    pub id: ModeId,
    pub name: String,
    pub automated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionDef {
    pub id: FunctionId,
    pub description: String,
    /// Modes in which the function is active; never empty.
    pub modes: Vec<ModeId>,
}

/// A HAZOP guide word and the deviation it stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuideWord {
    pub id: GuideWordId,
    pub interpretation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperationalScenario {
    pub id: ScenarioId,
    pub description: String,
    pub exposure: Exposure,
    pub exposure_rationale: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementNode {
    pub id: ElementId,
    /// Marks the item under analysis.
    pub primary: bool,
}

/// Named numeric metadata such as a speed limit. Nothing is computed from it.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub name: ParamName,
    pub value: f64,
    pub unit: String,
}

/// Default HAZOP guide words applied when an item declares none.
pub const DEFAULT_GUIDE_WORDS: [(&str, &str); 8] = [
    ("LOSS", "Loss"),
    ("UNINTENDED", "Unintended activation"),
    ("MORE", "Excess"),
    ("LESS", "Shortfall"),
    ("REVERSE", "Reversal"),
    ("EARLY", "Premature activation"),
    ("LATE", "Delayed activation"),
    ("STUCK", "Freezing"),
];

pub fn default_guide_words() -> Vec<GuideWord> {
    DEFAULT_GUIDE_WORDS
        .iter()
        .map(|(id, interpretation)| GuideWord {
            id: GuideWordId::new(id).expect("valid identifier"),
            interpretation: interpretation.to_string(),
        })
        .collect()
}

/// The item under analysis: its element graph, operating modes, functions,
/// operational scenario catalog, guide words and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemDefinition {
    pub name: String,
    pub elements: Vec<ElementNode>,
    pub connections: Vec<(ElementId, ElementId)>,
    pub modes: Vec<OperatingMode>,
    pub functions: Vec<FunctionDef>,
    pub guide_words: Vec<GuideWord>,
    pub scenarios: Vec<OperationalScenario>,
    pub parameters: Vec<Parameter>,
}

impl ItemDefinition {
    pub fn mode(&self, id: &ModeId) -> Option<&OperatingMode> {
        self.modes.iter().find(|m| &m.id == id)
    }

    pub fn function(&self, id: &FunctionId) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| &f.id == id)
    }

    pub fn guide_word(&self, id: &GuideWordId) -> Option<&GuideWord> {
        self.guide_words.iter().find(|g| &g.id == id)
    }

    pub fn scenario(&self, id: &ScenarioId) -> Option<&OperationalScenario> {
        self.scenarios.iter().find(|s| &s.id == id)
    }

    pub fn element(&self, id: &ElementId) -> Option<&ElementNode> {
        self.elements.iter().find(|e| &e.id == id)
    }

    pub fn parameter(&self, name: &str) -> Option<&Parameter> {
        self.parameters.iter().find(|p| p.name.as_str() == name)
    }

    pub fn primary_element(&self) -> Option<&ElementNode> {
        self.elements.iter().find(|e| e.primary)
    }

    pub fn mode_ids(&self) -> BTreeSet<&ModeId> {
        self.modes.iter().map(|m| &m.id).collect()
    }

    pub fn function_ids(&self) -> BTreeSet<&FunctionId> {
        self.functions.iter().map(|f| &f.id).collect()
    }

    /// Checks every structural invariant, returning all violations found.
    pub fn check(&self) -> Result<(), Vec<ModelError>> {
        let mut errors = Vec::new();
        let mut bad = |msg: String| errors.push(ModelError::InvalidItem(msg));

        if self.name.trim().is_empty() {
            bad("item name is empty".into());
        }
        for (kind, ids) in [
            ("element", self.elements.iter().map(|e| e.id.as_str()).collect::<Vec<_>>()),
            ("mode", self.modes.iter().map(|m| m.id.as_str()).collect()),
            ("function", self.functions.iter().map(|f| f.id.as_str()).collect()),
            ("guide word", self.guide_words.iter().map(|g| g.id.as_str()).collect()),
            ("scenario", self.scenarios.iter().map(|s| s.id.as_str()).collect()),
            ("parameter", self.parameters.iter().map(|p| p.name.as_str()).collect()),
            // Table rows refer to modes and functions by display text.
            ("mode name", self.modes.iter().map(|m| m.name.as_str()).collect()),
            ("function description", self.functions.iter().map(|f| f.description.as_str()).collect()),
        ] {
            let mut seen = BTreeSet::new();
            for id in ids {
                if !seen.insert(id) {
                    bad(format!("duplicate {kind} `{id}`"));
                }
            }
        }

        let primaries = self.elements.iter().filter(|e| e.primary).count();
        if primaries != 1 {
            bad(format!("expected exactly one primary element, found {primaries}"));
        }
        for (a, b) in &self.connections {
            for end in [a, b] {
                if self.element(end).is_none() {
                    bad(format!("connection references unknown element `{end}`"));
                }
            }
            if a == b {
                bad(format!("element `{a}` connected to itself"));
            }
        }
        if let Some(primary) = self.primary_element() {
            let reached = self.reachable_from(&primary.id);
            for e in &self.elements {
                if !reached.contains(&e.id) {
                    bad(format!("element `{}` is not connected to `{}`", e.id, primary.id));
                }
            }
        }

        for f in &self.functions {
            if f.modes.is_empty() {
                bad(format!("function `{}` has no applicable modes", f.id));
            }
            let mut seen = BTreeSet::new();
            for m in &f.modes {
                if self.mode(m).is_none() {
                    bad(format!("function `{}` references unknown mode `{m}`", f.id));
                }
                if !seen.insert(m) {
                    bad(format!("function `{}` lists mode `{m}` twice", f.id));
                }
            }
        }
        for p in &self.parameters {
            if !p.value.is_finite() {
                bad(format!("parameter `{}` is not a finite number", p.name));
            }
            if p.unit.trim().is_empty() {
                bad(format!("parameter `{}` has no unit", p.name));
            }
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// Elements reachable from `start` over the undirected connections.
    pub fn reachable_from(&self, start: &ElementId) -> BTreeSet<ElementId> {
        let mut adjacency: BTreeMap<&ElementId, Vec<&ElementId>> = BTreeMap::new();
        for (a, b) in &self.connections {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            for next in adjacency.get(node).into_iter().flatten() {
                if seen.insert((*next).clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }
}
