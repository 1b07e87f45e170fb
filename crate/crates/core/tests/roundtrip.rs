use std::sync::Arc;

use haraforge_core::corpus::{load_corpus, ITEM_TEXT, REVISION_FILES};
use haraforge_core::dsl::{parse_csv, parse_hara_file, parse_item_file, serialize_document, serialize_item, write_csv};
use haraforge_core::model::HaraDocument;
use haraforge_core::testkit::{random_document, random_item};
use haraforge_core::validator::validate;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_case(seed: u64) -> HaraDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let item = Arc::new(random_item(&mut rng, 5, 4, 8));
    random_document(&mut rng, item, 30)
}

/// A frame carrying everything the table cannot express.
fn frame(doc: &HaraDocument) -> HaraDocument {
    let mut frame = doc.clone();
    frame.entries.clear();
    frame
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dsl_round_trip(seed in any::<u64>()) {
        let doc = random_case(seed);
        let item_text = serialize_item(&doc.item);
        let item = parse_item_file("r.item", &item_text).map_err(|d| TestCaseError::fail(d.to_string()))?;
        prop_assert_eq!(&item, &*doc.item);
        let text = serialize_document(&doc);
        let back = parse_hara_file("r.hara", &text, Arc::new(item)).map_err(|d| TestCaseError::fail(d.to_string()))?;
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize_document(&back), text);
    }

    #[test]
    fn csv_round_trip(seed in any::<u64>()) {
        let doc = random_case(seed);
        let text = write_csv(&doc);
        let back = parse_csv("r.csv", &text, &frame(&doc)).map_err(|d| TestCaseError::fail(d.to_string()))?;
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(write_csv(&back), text);
    }

    #[test]
    fn findings_survive_a_round_trip(seed in any::<u64>()) {
        let doc = random_case(seed);
        let back = parse_hara_file("r.hara", &serialize_document(&doc), doc.item.clone()).unwrap();
        prop_assert_eq!(validate(&back, None).unwrap(), validate(&doc, None).unwrap());
    }
}

#[test]
fn corpus_files_are_fixpoints() {
    let item = parse_item_file("afas.item", ITEM_TEXT).unwrap();
    assert_eq!(serialize_item(&item), ITEM_TEXT);
    let item = Arc::new(item);
    for (name, text) in REVISION_FILES {
        let doc = parse_hara_file(name, text, item.clone()).unwrap();
        assert_eq!(serialize_document(&doc), text, "{name}");
        let csv = write_csv(&doc);
        let back = parse_csv("afas.csv", &csv, &frame(&doc)).unwrap();
        assert_eq!(back, doc);
        assert_eq!(write_csv(&back), csv);
    }
}

#[test]
fn clean_corpus_stays_clean_after_round_trip() {
    let (_, history) = load_corpus();
    let doc = history.latest();
    assert!(validate(doc, None).unwrap().is_empty());
    let back = parse_hara_file("x.hara", &serialize_document(doc), doc.item.clone()).unwrap();
    assert!(validate(&back, None).unwrap().is_empty());
}

#[test]
fn corpus_csv_has_the_expected_shape() {
    let (_, history) = load_corpus();
    let csv = write_csv(history.latest());
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("ID;Operating Mode;Function;Malfunction;Hazardous Scenario and Consequence;S;Rationale;E;Rationale;C;Rationale;A;SG")
    );
    assert_eq!(csv.lines().count(), history.latest().entries.len() + 1);
    assert!(!csv.contains('\r'));
    assert!(csv.contains("\n37a;Follow Mode;Steering;MORE;HardShoulder: "));
}
