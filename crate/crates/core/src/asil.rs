//! S/E/C risk graph, goal-level aggregation and requirement inheritance.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{
    AsilLevel, Controllability, ElementId, Exposure, GoalId, HazardEntry, ItemDefinition, RiskClass, Severity,
};

use AsilLevel::{Qm, A, B, C, D};

/// Risk graph for nonzero classes, indexed `[S1..S3][E1..E4][C1..C3]`.
/// This table is authoritative; [`asil_by_class_sum`] must agree with it.
const RISK_GRAPH: [[[AsilLevel; 3]; 4]; 3] = [
    // S1
    [[Qm, Qm, Qm], [Qm, Qm, Qm], [Qm, Qm, A], [Qm, A, B]],
    // S2
    [[Qm, Qm, Qm], [Qm, Qm, A], [Qm, A, B], [A, B, C]],
    // S3
    [[Qm, Qm, A], [Qm, A, B], [A, B, C], [B, C, D]],
];

/// Determines the ASIL of a hazardous scenario. Any class 0 yields QM.
pub fn determine_asil(s: Severity, e: Exposure, c: Controllability) -> AsilLevel {
    if s.value() == 0 || e.value() == 0 || c.value() == 0 {
        return Qm;
    }
    RISK_GRAPH[usize::from(s.value() - 1)][usize::from(e.value() - 1)][usize::from(c.value() - 1)]
}

/// Closed form of the risk graph: class sum 10 is D, 9 C, 8 B, 7 A,
/// anything lower QM.
pub fn asil_by_class_sum(s: Severity, e: Exposure, c: Controllability) -> AsilLevel {
    if s.value() == 0 || e.value() == 0 || c.value() == 0 {
        return Qm;
    }
    match s.value() + e.value() + c.value() {
        10 => D,
        9 => C,
        8 => B,
        7 => A,
        _ => Qm,
    }
}

/// True iff the entry's stated ASIL equals the one its classes imply.
pub fn check_entry_consistency(entry: &HazardEntry) -> bool {
    entry.asil == derived_asil(entry)
}

pub fn derived_asil(entry: &HazardEntry) -> AsilLevel {
    determine_asil(entry.severity.class, entry.exposure.class, entry.controllability.class)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsilError {
    #[error("no hazardous scenarios linked to the goal")]
    NoLinkedScenarios,
    #[error("entries link to different goals ({0} and {1})")]
    MixedGoals(String, String),
    #[error("allocation to unknown element `{0}`")]
    UnknownElement(ElementId),
    #[error("allocation for goal {0} which has no ASIL")]
    UnknownGoal(GoalId),
    #[error("allocation for goal {0} lists no elements")]
    EmptyAllocation(GoalId),
}

/// Maximum stated ASIL over entries linked to one goal.
pub fn aggregate_goal_asil<'a, I>(entries: I) -> Result<AsilLevel, AsilError>
where
    I: IntoIterator<Item = &'a HazardEntry>,
{
    let mut entries = entries.into_iter();
    let first = entries.next().ok_or(AsilError::NoLinkedScenarios)?;
    let mut level = first.asil;
    for e in entries {
        if e.goal != first.goal {
            return Err(AsilError::MixedGoals(goal_label(first.goal), goal_label(e.goal)));
        }
        level = level.max(e.asil);
    }
    Ok(level)
}

fn goal_label(goal: Option<GoalId>) -> String {
    goal.map_or_else(|| "none".to_string(), |g| g.to_string())
}

/// Allocation of a safety goal to elements of the item's element graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalAllocation {
    pub goal: GoalId,
    pub elements: Vec<ElementId>,
}

/// Each allocated element inherits the highest level among the goals
/// allocated to it. One hop only: nothing flows further along connections.
pub fn propagate_to_elements(
    item: &ItemDefinition,
    goals: &BTreeMap<GoalId, AsilLevel>,
    allocations: &[GoalAllocation],
) -> Result<BTreeMap<ElementId, AsilLevel>, AsilError> {
    let mut levels: BTreeMap<ElementId, AsilLevel> = BTreeMap::new();
    for allocation in allocations {
        let level = *goals.get(&allocation.goal).ok_or(AsilError::UnknownGoal(allocation.goal))?;
        if allocation.elements.is_empty() {
            return Err(AsilError::EmptyAllocation(allocation.goal));
        }
        for element in &allocation.elements {
            if item.element(element).is_none() {
                return Err(AsilError::UnknownElement(element.clone()));
            }
            levels.entry(element.clone()).and_modify(|l| *l = (*l).max(level)).or_insert(level);
        }
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit;

    fn sec(s: u8, e: u8, c: u8) -> AsilLevel {
        determine_asil(Severity::new(s).unwrap(), Exposure::new(e).unwrap(), Controllability::new(c).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(sec(0, 4, 3), Qm);
        assert_eq!(sec(3, 4, 3), D);
        assert_eq!(sec(3, 2, 2), A);
        assert_eq!(sec(2, 3, 3), B);
    }

    #[test]
    fn table_matches_class_sum() {
        for s in Severity::all() {
            for e in Exposure::all() {
                for c in Controllability::all() {
                    assert_eq!(determine_asil(s, e, c), asil_by_class_sum(s, e, c), "{s} {e} {c}");
                }
            }
        }
    }

    #[test]
    fn aggregation() {
        let goal = GoalId::new(1).unwrap();
        let mk = |level| testkit::entry_with_asil(goal, level);
        assert_eq!(aggregate_goal_asil(&[mk(Qm)]), Ok(Qm));
        assert_eq!(aggregate_goal_asil(&[mk(A), mk(D), mk(B)]), Ok(D));
        assert_eq!(aggregate_goal_asil(&[]), Err(AsilError::NoLinkedScenarios));
        let other = testkit::entry_with_asil(GoalId::new(2).unwrap(), A);
        assert!(matches!(aggregate_goal_asil(&[mk(A), other]), Err(AsilError::MixedGoals(..))));
    }

    #[test]
    fn consistency() {
        let goal = GoalId::new(1).unwrap();
        let mut e = testkit::entry_with_asil(goal, Qm);
        e.severity.class = Severity::new(0).unwrap();
        e.exposure.class = Exposure::new(2).unwrap();
        e.controllability.class = Controllability::new(1).unwrap();
        assert!(check_entry_consistency(&e));
        e.severity.class = Severity::new(3).unwrap();
        e.exposure.class = Exposure::new(4).unwrap();
        e.controllability.class = Controllability::new(3).unwrap();
        e.asil = D;
        assert!(check_entry_consistency(&e));
        e.asil = B;
        assert!(!check_entry_consistency(&e));
    }

    #[test]
    fn propagation() {
        let item = testkit::afas_like_item();
        let x = GoalId::new(1).unwrap();
        let y = GoalId::new(2).unwrap();
        let el = |s: &str| ElementId::new(s).unwrap();
        let goals = BTreeMap::from([(x, D)]);
        let out = propagate_to_elements(
            &item,
            &goals,
            &[GoalAllocation { goal: x, elements: vec![el("Brakes"), el("Steering")] }],
        )
        .unwrap();
        assert_eq!(out, BTreeMap::from([(el("Brakes"), D), (el("Steering"), D)]));

        let goals = BTreeMap::from([(x, B), (y, D)]);
        let out = propagate_to_elements(
            &item,
            &goals,
            &[
                GoalAllocation { goal: x, elements: vec![el("AFALogic")] },
                GoalAllocation { goal: y, elements: vec![el("AFALogic")] },
            ],
        )
        .unwrap();
        assert_eq!(out, BTreeMap::from([(el("AFALogic"), D)]));

        assert!(propagate_to_elements(&item, &goals, &[]).unwrap().is_empty());
        assert_eq!(
            propagate_to_elements(&item, &goals, &[GoalAllocation { goal: x, elements: vec![el("Radio")] }]),
            Err(AsilError::UnknownElement(el("Radio")))
        );
        let z = GoalId::new(9).unwrap();
        assert_eq!(
            propagate_to_elements(&item, &goals, &[GoalAllocation { goal: z, elements: vec![el("Brakes")] }]),
            Err(AsilError::UnknownGoal(z))
        );
    }
}
