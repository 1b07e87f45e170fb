use std::collections::BTreeMap;

use super::lexer::{locate, statements, Cursor, Step, Token};
use super::{Diagnostics, ParseDiagnostic, SourceLocation};
use crate::model::{
    default_guide_words, ElementId, ElementNode, Exposure, FunctionDef, FunctionId, GuideWord, GuideWordId,
    ItemDefinition, ModeId, OperatingMode, OperationalScenario, ParamName, Parameter, ScenarioId,
};

/// Parses an item definition. Item files that declare no guide words get
/// the default HAZOP set.
pub fn parse_item_file(file: &str, text: &str) -> Result<ItemDefinition, Diagnostics> {
    let stmts = statements(file, text)?;
    let mut p = ItemParser::default();
    let mut errors = Vec::new();
    for stmt in &stmts {
        let mut cur = Cursor::new(file, stmt);
        if let Err(e) = p.statement(&mut cur) {
            errors.push(e);
        }
    }
    if !errors.is_empty() {
        return Err(Diagnostics(errors));
    }
    p.resolve(file, stmts.first().map(|s| &s.tokens[0]))
}

struct Located<T> {
    value: T,
    at: SourceLocation,
}

#[derive(Default)]
struct ItemParser {
    name: Option<Located<String>>,
    elements: Vec<Located<ElementNode>>,
    connections: Vec<(Located<ElementId>, Located<ElementId>)>,
    modes: Vec<Located<OperatingMode>>,
    functions: Vec<(Located<FunctionDef>, Vec<SourceLocation>)>,
    guide_words: Vec<Located<GuideWord>>,
    scenarios: Vec<Located<OperationalScenario>>,
    parameters: Vec<Located<Parameter>>,
}

impl ItemParser {
    fn statement(&mut self, cur: &mut Cursor<'_>) -> Step<()> {
        let (keyword, head) = cur.word("a keyword")?;
        let file = cur.file();
        let at = |t: &Token| locate(file, t);
        match keyword {
            "item" => {
                let name = cur.string("item name")?;
                cur.finish()?;
                if self.name.is_some() {
                    return Err(cur.error_at(head, "duplicate `item` statement"));
                }
                self.name = Some(Located { value: name, at: at(head) });
            }
            "element" => {
                let (id, t) = cur.parsed::<ElementId>("element id")?;
                let primary = cur.eat("primary");
                cur.finish()?;
                self.elements.push(Located { value: ElementNode { id, primary }, at: at(t) });
            }
            "connect" => {
                let (a, ta) = cur.parsed::<ElementId>("element id")?;
                let (b, tb) = cur.parsed::<ElementId>("element id")?;
                cur.finish()?;
                self.connections.push((Located { value: a, at: at(ta) }, Located { value: b, at: at(tb) }));
            }
            "mode" => {
                let (id, t) = cur.parsed::<ModeId>("mode id")?;
                let name = cur.string("mode name")?;
                let automated = cur.eat("automated");
                cur.finish()?;
                self.modes.push(Located { value: OperatingMode { id, name, automated }, at: at(t) });
            }
            "function" => {
                let (id, t) = cur.parsed::<FunctionId>("function id")?;
                let description = cur.string("function description")?;
                cur.keyword("modes")?;
                let list = cur.list::<ModeId>("mode id")?;
                cur.finish()?;
                let refs = list.iter().map(|(_, t)| at(t)).collect();
                let modes = list.into_iter().map(|(m, _)| m).collect();
                self.functions.push((Located { value: FunctionDef { id, description, modes }, at: at(t) }, refs));
            }
            "guideword" => {
                let (id, t) = cur.parsed::<GuideWordId>("guide word id")?;
                let interpretation = cur.string("guide word interpretation")?;
                cur.finish()?;
                self.guide_words.push(Located { value: GuideWord { id, interpretation }, at: at(t) });
            }
            "scenario" => {
                let (id, t) = cur.parsed::<ScenarioId>("scenario id")?;
                let description = cur.string("scenario description")?;
                cur.keyword("exposure")?;
                let (exposure, _) = cur.parsed::<Exposure>("exposure class")?;
                cur.keyword("rationale")?;
                let exposure_rationale = cur.string("exposure rationale")?;
                cur.finish()?;
                self.scenarios.push(Located {
                    value: OperationalScenario { id, description, exposure, exposure_rationale },
                    at: at(t),
                });
            }
            "param" => {
                let (name, t) = cur.parsed::<ParamName>("parameter name")?;
                let (value, tv) = cur.parsed::<f64>("number")?;
                if !value.is_finite() {
                    return Err(cur.error_at(tv, "parameter value must be a finite number"));
                }
                let unit = cur.string("unit")?;
                if unit.trim().is_empty() {
                    return Err(cur.error_at(tv, format!("parameter `{name}` needs a unit")));
                }
                cur.finish()?;
                self.parameters.push(Located { value: Parameter { name, value, unit }, at: at(t) });
            }
            other => return Err(cur.error_at(head, format!("unknown keyword `{other}`"))),
        }
        Ok(())
    }

    fn resolve(self, file: &str, first: Option<&Token>) -> Result<ItemDefinition, Diagnostics> {
        let mut errors = Vec::new();
        let origin = SourceLocation {
            file: file.to_string(),
            line: first.map_or(1, |t| t.line),
            column: first.map_or(1, |t| t.column),
        };

        duplicates(&mut errors, "element", self.elements.iter().map(|e| (e.value.id.to_string(), &e.at)));
        duplicates(&mut errors, "mode", self.modes.iter().map(|m| (m.value.id.to_string(), &m.at)));
        duplicates(&mut errors, "mode name", self.modes.iter().map(|m| (m.value.name.clone(), &m.at)));
        duplicates(&mut errors, "function", self.functions.iter().map(|(f, _)| (f.value.id.to_string(), &f.at)));
        duplicates(
            &mut errors,
            "function description",
            self.functions.iter().map(|(f, _)| (f.value.description.clone(), &f.at)),
        );
        duplicates(&mut errors, "guide word", self.guide_words.iter().map(|g| (g.value.id.to_string(), &g.at)));
        duplicates(&mut errors, "scenario", self.scenarios.iter().map(|s| (s.value.id.to_string(), &s.at)));
        duplicates(&mut errors, "parameter", self.parameters.iter().map(|p| (p.value.name.to_string(), &p.at)));

        let name = match self.name {
            Some(n) => n.value,
            None => {
                errors.push(ParseDiagnostic::error(origin.clone(), "missing `item` statement"));
                String::new()
            }
        };

        let primaries: Vec<_> = self.elements.iter().filter(|e| e.value.primary).collect();
        match primaries.len() {
            0 => errors.push(ParseDiagnostic::error(origin.clone(), "no element is marked `primary`")),
            1 => {}
            _ => errors.push(ParseDiagnostic::error(primaries[1].at.clone(), "more than one primary element")),
        }

        for (a, b) in &self.connections {
            for end in [a, b] {
                if !self.elements.iter().any(|e| e.value.id == end.value) {
                    errors.push(ParseDiagnostic::error(end.at.clone(), format!("unknown element `{}`", end.value)));
                }
            }
            if a.value == b.value {
                errors.push(ParseDiagnostic::error(b.at.clone(), format!("element `{}` connected to itself", a.value)));
            }
        }

        for (f, refs) in &self.functions {
            if f.value.modes.is_empty() {
                errors.push(ParseDiagnostic::error(f.at.clone(), format!("function `{}` has no modes", f.value.id)));
            }
            let mut seen = BTreeMap::new();
            for (m, at) in f.value.modes.iter().zip(refs) {
                if !self.modes.iter().any(|mode| &mode.value.id == m) {
                    errors.push(ParseDiagnostic::error(at.clone(), format!("undeclared mode `{m}`")));
                }
                if seen.insert(m, ()).is_some() {
                    errors.push(ParseDiagnostic::error(at.clone(), format!("mode `{m}` listed twice")));
                }
            }
        }

        let guide_words = if self.guide_words.is_empty() {
            default_guide_words()
        } else {
            self.guide_words.into_iter().map(|g| g.value).collect()
        };
        let element_locs: Vec<SourceLocation> = self.elements.iter().map(|e| e.at.clone()).collect();
        let item = ItemDefinition {
            name,
            elements: self.elements.into_iter().map(|e| e.value).collect(),
            connections: self.connections.into_iter().map(|(a, b)| (a.value, b.value)).collect(),
            modes: self.modes.into_iter().map(|m| m.value).collect(),
            functions: self.functions.into_iter().map(|(f, _)| f.value).collect(),
            guide_words,
            scenarios: self.scenarios.into_iter().map(|s| s.value).collect(),
            parameters: self.parameters.into_iter().map(|p| p.value).collect(),
        };

        if errors.is_empty() {
            if let Some(primary) = item.primary_element() {
                let reached = item.reachable_from(&primary.id);
                for (e, at) in item.elements.iter().zip(&element_locs) {
                    if !reached.contains(&e.id) {
                        errors.push(ParseDiagnostic::error(
                            at.clone(),
                            format!("element `{}` is not connected to `{}`", e.id, primary.id),
                        ));
                    }
                }
            }
        }
        if errors.is_empty() {
            if let Err(problems) = item.check() {
                errors.extend(problems.into_iter().map(|p| ParseDiagnostic::error(origin.clone(), p.to_string())));
            }
        }
        if errors.is_empty() {
            Ok(item)
        } else {
            Err(Diagnostics(errors))
        }
    }
}

fn duplicates<'a>(
    errors: &mut Vec<ParseDiagnostic>,
    what: &str,
    keys: impl Iterator<Item = (String, &'a SourceLocation)>,
) {
    let mut seen = BTreeMap::new();
    for (key, at) in keys {
        if seen.insert(key.clone(), ()).is_some() {
            errors.push(ParseDiagnostic::error(at.clone(), format!("duplicate {what} `{key}`")));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "item \"Tiny\"\nelement Core primary\nmode Run \"Run\"\nfunction Go \"Go\" modes [Run]\n";

    #[test]
    fn minimal_item() {
        let item = parse_item_file("t.item", MINIMAL).unwrap();
        assert_eq!(item.name, "Tiny");
        assert_eq!(item.modes.len(), 1);
        assert_eq!(item.functions.len(), 1);
        assert_eq!(item.elements.len(), 1);
        assert_eq!(item.guide_words.len(), 8, "default guide words apply");
    }

    #[test]
    fn dangling_mode_reference_is_located() {
        let text = "item \"Tiny\"\nelement Core primary\nmode Run \"Run\"\nfunction Go \"Go\"\n  modes [Run, Fly]\n";
        let err = parse_item_file("t.item", text).unwrap_err();
        assert_eq!(err.len(), 1);
        let d = &err.0[0];
        assert_eq!((d.location.line, d.location.column), (5, 15));
        assert!(d.message.contains("Fly"));
    }

    #[test]
    fn reports_several_errors() {
        let text = "item \"A\"\nitem \"B\"\nbogus 1\nelement X primary\nelement X\nparam p 1 \"\"\nparam q inf \"m\"\n";
        let err = parse_item_file("t.item", text).unwrap_err();
        let lines: Vec<usize> = err.iter().map(|d| d.location.line).collect();
        assert_eq!(lines, [2, 3, 6, 7]);
        // Duplicates are only reported once statements parse cleanly.
        let err = parse_item_file("t.item", "item \"A\"\nelement X primary\nelement X\n").unwrap_err();
        assert_eq!(err.0[0].location.line, 3);
    }

    #[test]
    fn disconnected_element() {
        let text = format!("{MINIMAL}element Island\n");
        let err = parse_item_file("t.item", &text).unwrap_err();
        assert!(err.0[0].message.contains("not connected"));
        assert_eq!(err.0[0].location.line, 5);
    }

    #[test]
    fn missing_item_statement() {
        let err = parse_item_file("t.item", "").unwrap_err();
        assert!(err.iter().any(|d| d.message.contains("missing `item`")));
    }
}
