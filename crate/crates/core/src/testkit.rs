//! Fixture builders and seeded random generators for tests.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::generator::malfunction_template;
use crate::model::*;

fn mode(id: &str, name: &str, automated: bool) -> OperatingMode {
    OperatingMode { id: ModeId::new(id).unwrap(), name: name.into(), automated }
}

/// Small item shaped like the protective-vehicle item: four modes, five
/// elements in a star around `AFALogic`, one scenario, default guide words.
pub fn afas_like_item() -> ItemDefinition {
    let el = |id: &str, primary| ElementNode { id: ElementId::new(id).unwrap(), primary };
    let hub = ElementId::new("AFALogic").unwrap();
    let others = ["Drivetrain", "Brakes", "Steering", "EnvironmentPerception"];
    ItemDefinition {
        name: "AFA Logic".into(),
        elements: std::iter::once(el("AFALogic", true)).chain(others.iter().map(|o| el(o, false))).collect(),
        connections: others.iter().map(|o| (hub.clone(), ElementId::new(o).unwrap())).collect(),
        modes: vec![
            mode("ManualMode", "Manual Mode", false),
            mode("FollowMode", "Follow Mode", true),
            mode("CoupledMode", "Coupled Mode", true),
            mode("SafeHalt", "Safe Halt", true),
        ],
        functions: vec![FunctionDef {
            id: FunctionId::new("ModeDisplay").unwrap(),
            description: "Mode display".into(),
            modes: vec![
                ModeId::new("ManualMode").unwrap(),
                ModeId::new("FollowMode").unwrap(),
                ModeId::new("CoupledMode").unwrap(),
                ModeId::new("SafeHalt").unwrap(),
            ],
        }],
        guide_words: default_guide_words(),
        scenarios: vec![OperationalScenario {
            id: ScenarioId::new("HardShoulder").unwrap(),
            description: "Driving on the hard shoulder".into(),
            exposure: Exposure::new(4).unwrap(),
            exposure_rationale: "Regular operation".into(),
        }],
        parameters: vec![],
    }
}

/// Entry on [`afas_like_item`] with classes S0/E0/C0 and the given ASIL.
pub fn entry_with_asil(goal: GoalId, asil: AsilLevel) -> HazardEntry {
    HazardEntry {
        id: EntryId::new(1, None).unwrap(),
        mode: ModeId::new("FollowMode").unwrap(),
        malfunction: Malfunction {
            function: FunctionId::new("ModeDisplay").unwrap(),
            guide_word: GuideWordId::new("LOSS").unwrap(),
            description: "Loss of mode display".into(),
        },
        scenario: ScenarioId::new("HardShoulder").unwrap(),
        consequence: "Wrong operator reaction".into(),
        severity: Rating { class: Severity::new(0).unwrap(), rationale: String::new() },
        exposure: Rating { class: Exposure::new(0).unwrap(), rationale: String::new() },
        controllability: Rating { class: Controllability::new(0).unwrap(), rationale: String::new() },
        asil,
        goal: Some(goal),
    }
}

const TEXT_ALPHABET: &[char] =
    &['a', 'b', 'c', 'x', 'Y', 'Z', ' ', ' ', ';', '"', '\\', ',', '\n', '#', '|', 'ä', '-', ':', '[', ']', '1'];

/// Random text starting with a letter; may contain separators, quotes,
/// backslashes and newlines.
pub fn random_text<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let mut s = String::from(*['A', 'k', 'Q'].choose(rng).unwrap());
    for _ in 0..rng.gen_range(0..max_len) {
        s.push(*TEXT_ALPHABET.choose(rng).unwrap());
    }
    s
}

fn pick_subset<R: Rng, T: Clone>(rng: &mut R, items: &[T]) -> Vec<T> {
    let mut out: Vec<T> = items.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    if out.is_empty() {
        out.push(items.choose(rng).unwrap().clone());
    }
    out
}

/// Random valid item with 1..=`max_functions` functions, 1..=`max_modes`
/// modes and 1..=`max_guide_words` guide words.
pub fn random_item<R: Rng>(
    rng: &mut R,
    max_functions: usize,
    max_modes: usize,
    max_guide_words: usize,
) -> ItemDefinition {
    let n_modes = rng.gen_range(1..=max_modes);
    let modes: Vec<OperatingMode> = (0..n_modes)
        .map(|i| OperatingMode {
            id: ModeId::new(&format!("M{i}")).unwrap(),
            name: format!("{} mode {i}", random_text(rng, 6)),
            automated: rng.gen_bool(0.5),
        })
        .collect();
    let mode_ids: Vec<ModeId> = modes.iter().map(|m| m.id.clone()).collect();
    let functions = (0..rng.gen_range(1..=max_functions))
        .map(|i| FunctionDef {
            id: FunctionId::new(&format!("F{i}")).unwrap(),
            description: format!("{} function {i}", random_text(rng, 8)),
            modes: pick_subset(rng, &mode_ids),
        })
        .collect();
    let guide_words = (0..rng.gen_range(1..=max_guide_words))
        .map(|i| GuideWord { id: GuideWordId::new(&format!("GW{i}")).unwrap(), interpretation: random_text(rng, 6) })
        .collect();
    let scenarios = (0..rng.gen_range(1..=3))
        .map(|i| OperationalScenario {
            id: ScenarioId::new(&format!("Sc{i}")).unwrap(),
            description: random_text(rng, 10),
            exposure: Exposure::new(rng.gen_range(0..=4)).unwrap(),
            exposure_rationale: random_text(rng, 10),
        })
        .collect();
    let n_elements = rng.gen_range(1..=4);
    let elements: Vec<ElementNode> = (0..n_elements)
        .map(|i| ElementNode { id: ElementId::new(&format!("El{i}")).unwrap(), primary: i == 0 })
        .collect();
    let connections = (1..n_elements)
        .map(|i| {
            let to = rng.gen_range(0..i);
            (elements[to].id.clone(), elements[i].id.clone())
        })
        .collect();
    let parameters = (0..rng.gen_range(0..=2))
        .map(|i| Parameter {
            name: ParamName::new(&format!("p{i}")).unwrap(),
            value: f64::from(rng.gen_range(-5000..5000)) / 8.0,
            unit: random_text(rng, 3),
        })
        .collect();
    let item = ItemDefinition {
        name: random_text(rng, 12),
        elements,
        connections,
        modes,
        functions,
        guide_words,
        scenarios,
        parameters,
    };
    item.check().expect("random item is valid");
    item
}

fn random_rating<R: Rng, C: RiskClass>(rng: &mut R) -> Rating<C> {
    let class = C::new(rng.gen_range(0..=C::MAX)).unwrap();
    let rationale = if class.value() == 0 && rng.gen_bool(0.5) { String::new() } else { random_text(rng, 12) };
    Rating { class, rationale }
}

/// Random valid document over `item` with at most `max_entries` entries.
pub fn random_document<R: Rng>(rng: &mut R, item: Arc<ItemDefinition>, max_entries: usize) -> HaraDocument {
    let mode_ids: Vec<ModeId> = item.modes.iter().map(|m| m.id.clone()).collect();
    let mut goal_numbers: Vec<u8> = (1..=99).collect();
    goal_numbers.shuffle(rng);
    let mut goals: Vec<SafetyGoal> = goal_numbers[..rng.gen_range(1..=5)]
        .iter()
        .map(|&n| SafetyGoal {
            id: GoalId::new(n).unwrap(),
            text: random_text(rng, 20),
            modes: pick_subset(rng, &mode_ids),
            asil: if rng.gen_bool(0.5) { Some(*AsilLevel::ALL.choose(rng).unwrap()) } else { None },
        })
        .collect();

    let mut ids = BTreeSet::new();
    while ids.len() < rng.gen_range(0..=max_entries) {
        let suffix = if rng.gen_bool(0.3) { Some((b'a' + rng.gen_range(0..3)) as char) } else { None };
        ids.insert(EntryId::new(rng.gen_range(1..=60), suffix).unwrap());
    }
    let mut ids: Vec<EntryId> = ids.into_iter().collect();
    ids.shuffle(rng);

    let mut entries = Vec::new();
    for id in ids {
        let function = item.functions.choose(rng).unwrap();
        let gw = item.guide_words.choose(rng).unwrap();
        let mode = function.modes.choose(rng).unwrap().clone();
        let goal_index = rng.gen_range(0..goals.len());
        if !goals[goal_index].modes.contains(&mode) {
            goals[goal_index].modes.push(mode.clone());
        }
        let description =
            if rng.gen_bool(0.4) { malfunction_template(gw, &function.description) } else { random_text(rng, 15) };
        entries.push(HazardEntry {
            id,
            mode,
            malfunction: Malfunction { function: function.id.clone(), guide_word: gw.id.clone(), description },
            scenario: item.scenarios.choose(rng).unwrap().id.clone(),
            consequence: random_text(rng, 25),
            severity: random_rating(rng),
            exposure: random_rating(rng),
            controllability: random_rating(rng),
            asil: *AsilLevel::ALL.choose(rng).unwrap(),
            goal: Some(goals[goal_index].id),
        });
    }

    let mut waivers = Vec::new();
    let mut waived = BTreeSet::new();
    for _ in 0..rng.gen_range(0..6) {
        let function = item.functions.choose(rng).unwrap();
        let gw = item.guide_words.choose(rng).unwrap();
        let mode = function.modes.choose(rng).unwrap();
        if waived.insert((function.id.clone(), gw.id.clone(), mode.clone())) {
            waivers.push(Waiver {
                function: function.id.clone(),
                guide_word: gw.id.clone(),
                mode: mode.clone(),
                rationale: random_text(rng, 15),
            });
        }
    }

    let revision = rng.gen_range(1..=9);
    let (kind, based_on) = match rng.gen_range(0..3) {
        _ if revision == 1 => (RevisionKind::Initial, None),
        0 => (RevisionKind::Initial, None),
        1 => (RevisionKind::ItemRefinement, Some(rng.gen_range(1..revision))),
        _ => (RevisionKind::SafetyRefinement, Some(revision - 1)),
    };
    HaraDocument { title: random_text(rng, 15), revision, kind, based_on, item, goals, entries, waivers }
        .finish()
        .expect("random document is valid")
}
