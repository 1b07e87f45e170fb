use std::collections::BTreeSet;
use std::sync::Arc;

use haraforge_core::diff::{classify_refinement, diff, RefinementClass};
use haraforge_core::model::{HaraDocument, ItemDefinition};
use haraforge_core::testkit::{random_document, random_item};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two documents over the same or a slightly different item.
fn pair(seed: u64) -> (HaraDocument, HaraDocument) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let item = random_item(&mut rng, 5, 4, 8);
    let a = random_document(&mut rng, Arc::new(item.clone()), 20);
    let mut next_item: ItemDefinition = item;
    if rng.gen_bool(0.3) && next_item.functions.len() > 1 {
        next_item.functions.pop();
    }
    let mut b = random_document(&mut rng, Arc::new(next_item), 20);
    if rng.gen_bool(0.5) {
        // Share most of the base so modified entries show up.
        let keep: Vec<_> =
            a.entries.iter().filter(|e| b.item.function(&e.malfunction.function).is_some()).cloned().collect();
        b.entries = keep;
        b.goals = a.goals.clone();
        for e in b.entries.iter_mut() {
            if rng.gen_bool(0.3) {
                e.asil = haraforge_core::model::AsilLevel::ALL[rng.gen_range(0..5)];
            }
        }
    }
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn diffs_mirror_each_other(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let forward = diff(&a, &b);
        let backward = diff(&b, &a);
        prop_assert_eq!(&forward.added_entries, &backward.removed_entries);
        prop_assert_eq!(&forward.removed_entries, &backward.added_entries);
        let mirrored = forward.clone().reversed();
        prop_assert_eq!(&mirrored.modified_entries, &backward.modified_entries);
        prop_assert_eq!(&mirrored.modified_goals, &backward.modified_goals);
        prop_assert_eq!(&mirrored.functions, &backward.functions);

        let added: BTreeSet<_> = forward.added_entries.iter().map(|e| e.id).collect();
        let removed: BTreeSet<_> = forward.removed_entries.iter().map(|e| e.id).collect();
        let modified: BTreeSet<_> = forward.modified_entries.iter().map(|c| c.id).collect();
        prop_assert!(added.is_disjoint(&removed) && added.is_disjoint(&modified) && removed.is_disjoint(&modified));

        if classify_refinement(&forward) == RefinementClass::SafetyRefinement {
            prop_assert_eq!(&a.item.functions, &b.item.functions);
        }
    }

    #[test]
    fn self_diff_is_empty(seed in any::<u64>()) {
        let (a, _) = pair(seed);
        let report = diff(&a, &a);
        prop_assert!(report.is_empty());
        prop_assert_eq!(classify_refinement(&report), RefinementClass::None);
    }
}
