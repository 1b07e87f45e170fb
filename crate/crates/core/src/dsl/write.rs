use std::fmt::Write as _;

use crate::model::{HaraDocument, ItemDefinition, ModeId, Rating, RiskClass};

pub(super) fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn mode_list(modes: &[ModeId]) -> String {
    let names: Vec<&str> = modes.iter().map(|m| m.as_str()).collect();
    format!("[{}]", names.join(", "))
}

fn rating<C: RiskClass>(r: &Rating<C>) -> String {
    format!("{} {}", r.class, quote(&r.rationale))
}

/// Joins non-empty sections with one blank line between them.
fn sections(parts: Vec<String>) -> String {
    let parts: Vec<String> = parts.into_iter().filter(|p| !p.is_empty()).collect();
    parts.join("\n")
}

/// Canonical text of an item definition. Statements keep their declared
/// order within each keyword group.
pub fn serialize_item(item: &ItemDefinition) -> String {
    let mut elements = String::new();
    for e in &item.elements {
        let _ = writeln!(elements, "element {}{}", e.id, if e.primary { " primary" } else { "" });
    }
    for (a, b) in &item.connections {
        let _ = writeln!(elements, "connect {a} {b}");
    }
    let mut modes = String::new();
    for m in &item.modes {
        let _ = writeln!(modes, "mode {} {}{}", m.id, quote(&m.name), if m.automated { " automated" } else { "" });
    }
    let mut functions = String::new();
    for f in &item.functions {
        let _ = writeln!(functions, "function {} {}\n  modes {}", f.id, quote(&f.description), mode_list(&f.modes));
    }
    let mut guide_words = String::new();
    for g in &item.guide_words {
        let _ = writeln!(guide_words, "guideword {} {}", g.id, quote(&g.interpretation));
    }
    let mut scenarios = String::new();
    for s in &item.scenarios {
        let _ = writeln!(
            scenarios,
            "scenario {} {}\n  exposure {} rationale {}",
            s.id,
            quote(&s.description),
            s.exposure,
            quote(&s.exposure_rationale)
        );
    }
    let mut params = String::new();
    for p in &item.parameters {
        let _ = writeln!(params, "param {} {} {}", p.name, p.value, quote(&p.unit));
    }
    sections(vec![format!("item {}\n", quote(&item.name)), elements, modes, functions, guide_words, scenarios, params])
}

/// Canonical text of a document: header, goals by number, entries by id,
/// waivers by triple.
pub fn serialize_document(doc: &HaraDocument) -> String {
    let mut doc = doc.clone();
    doc.canonicalize();

    let mut header = format!("hara {} revision {} kind {}", quote(&doc.title), doc.revision, doc.kind);
    if let Some(b) = doc.based_on {
        let _ = write!(header, " based-on {b}");
    }
    header.push('\n');

    let mut goals = String::new();
    for g in &doc.goals {
        let _ = write!(goals, "goal {} {} modes {}", g.id, quote(&g.text), mode_list(&g.modes));
        if let Some(a) = g.asil {
            let _ = write!(goals, " asil {a}");
        }
        goals.push('\n');
    }

    let entries: Vec<String> = doc
        .entries
        .iter()
        .map(|e| {
            let mut s = format!(
                "entry {} mode {} function {} guideword {}\n",
                e.id, e.mode, e.malfunction.function, e.malfunction.guide_word
            );
            let _ = writeln!(s, "  malfunction {}", quote(&e.malfunction.description));
            let _ = writeln!(s, "  scenario {}", e.scenario);
            let _ = writeln!(s, "  consequence {}", quote(&e.consequence));
            let _ = writeln!(s, "  {}", rating(&e.severity));
            let _ = writeln!(s, "  {}", rating(&e.exposure));
            let _ = writeln!(s, "  {}", rating(&e.controllability));
            let _ = writeln!(s, "  asil {}", e.asil);
            // Entries without a goal cannot be expressed; parsed documents always have one.
            if let Some(g) = e.goal {
                let _ = writeln!(s, "  goal {g}");
            }
            s
        })
        .collect();

    let mut waivers = String::new();
    for w in &doc.waivers {
        let _ = writeln!(
            waivers,
            "waive function {} guideword {} mode {}\n  rationale {}",
            w.function,
            w.guide_word,
            w.mode,
            quote(&w.rationale)
        );
    }

    let mut parts = vec![header, goals];
    parts.extend(entries);
    parts.push(waivers);
    sections(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(quote("a\"b\\c\nd"), r#""a\"b\\c\nd""#);
    }
}
