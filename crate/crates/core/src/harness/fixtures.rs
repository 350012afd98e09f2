//! Hand-built scenarios for the refinement loop and for replanning.

use crate::catalog::{Catalog, Category, GeneralLocation, Shelf, SpecificLocation};
use crate::error::Result;
use crate::preference::{Preference, Requirement};
use crate::world::{FridgeState, Placement};

use super::replan::{Mutation, MutationScript, ScriptStep};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub initial: FridgeState,
    pub task: Vec<String>,
    pub truth: Preference,
    pub script: MutationScript,
}

/// Ground truth with the given requirements and bottom-left for the rest.
fn preference(special: Vec<(Category, Requirement)>) -> Result<Preference> {
    let mut reqs: Vec<(Category, Requirement)> = Category::ALL
        .into_iter()
        .filter(|c| special.iter().all(|(s, _)| s != c))
        .map(|c| {
            (
                c,
                Requirement::Specific {
                    location: SpecificLocation::BOTTOM_LEFT,
                },
            )
        })
        .collect();
    reqs.extend(special);
    Preference::new(reqs)
}

fn state(items: &[(&str, Shelf, f64)], catalog: &Catalog) -> Result<FridgeState> {
    items.iter().try_fold(FridgeState::default(), |s, &(o, shelf, x)| {
        s.apply(Placement::new(catalog, o, shelf, x)?)
    })
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Two large fruits preferred on the right side. The top-right half has room
/// for only one of them, so the first semantic plan sends both there.
pub fn two_objects_one_slot(catalog: &Catalog) -> Result<Fixture> {
    Ok(Fixture {
        name: "two-objects-one-slot",
        initial: state(&[("lemonade", Shelf::Top, 35.0)], catalog)?,
        task: names(&["pineapple", "cantaloupe"]),
        truth: preference(vec![(
            Category::Fruits,
            Requirement::General {
                location: GeneralLocation::RightSideOfFridge,
            },
        )])?,
        script: MutationScript::default(),
    })
}

/// Vegetables go on the left. After the first one is put away, two drinks
/// appear in the top-left half and crowd it.
pub fn addition(catalog: &Catalog) -> Result<Fixture> {
    let add = |o: &str| Mutation::Add {
        object: o.into(),
        location: SpecificLocation::TOP_LEFT,
    };
    Ok(Fixture {
        name: "addition",
        initial: state(&[("yogurt", Shelf::Bottom, 45.0)], catalog)?,
        task: names(&["carrot", "spinach", "potato"]),
        truth: preference(vec![(
            Category::Vegetables,
            Requirement::General {
                location: GeneralLocation::LeftSideOfFridge,
            },
        )])?,
        script: MutationScript {
            steps: vec![ScriptStep {
                after_action: 1,
                mutations: vec![add("lemonade"), add("iced tea")],
            }],
            ..MutationScript::default()
        },
    })
}

/// Condiments fill the top-right half up to two, then go bottom-right. The
/// top-right half starts full; ketchup is taken out mid-task.
pub fn removal(catalog: &Catalog) -> Result<Fixture> {
    Ok(Fixture {
        name: "removal",
        initial: state(&[("ketchup", Shelf::Top, 36.0), ("mustard", Shelf::Top, 50.0)], catalog)?,
        task: names(&["apple", "relish"]),
        truth: preference(vec![(
            Category::Condiments,
            Requirement::Conditional {
                primary: SpecificLocation::TOP_RIGHT,
                capacity: 2,
                fallback: SpecificLocation::BOTTOM_RIGHT,
            },
        )])?,
        script: MutationScript {
            steps: vec![ScriptStep {
                after_action: 1,
                mutations: vec![Mutation::Remove {
                    object: "ketchup".into(),
                }],
            }],
            ..MutationScript::default()
        },
    })
}

/// Drinks stay together. After the first drink is put away, every drink is
/// moved to the top-right half.
pub fn relocation(catalog: &Catalog) -> Result<Fixture> {
    let mv = |o: &str| Mutation::Move {
        object: o.into(),
        location: SpecificLocation::TOP_RIGHT,
    };
    Ok(Fixture {
        name: "relocation",
        initial: state(&[("coke", Shelf::Top, 10.0)], catalog)?,
        task: names(&["sprite", "apple", "coconut water"]),
        truth: preference(vec![(Category::JuiceAndSoftDrinks, Requirement::Together)])?,
        script: MutationScript {
            steps: vec![ScriptStep {
                after_action: 1,
                mutations: vec![mv("coke"), mv("sprite")],
            }],
            ..MutationScript::default()
        },
    })
}

pub fn replan_fixtures(catalog: &Catalog) -> Result<Vec<Fixture>> {
    Ok(vec![addition(catalog)?, removal(catalog)?, relocation(catalog)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::replan::scenario_replan;
    use crate::planner::{plan_with_refinement, PlannerConfig};
    use crate::reward::reward;
    use crate::world::constraint;

    fn location_of(s: &FridgeState, o: &str) -> SpecificLocation {
        s.semantic_location(s.placement_of(o).unwrap())
    }

    #[test]
    fn one_slot_needs_a_second_attempt() {
        let cat = Catalog::default();
        let f = two_objects_one_slot(&cat).unwrap();
        let out = plan_with_refinement(&f.initial, &f.task, &f.truth, &PlannerConfig::default(), &cat).unwrap();
        assert!(out.trace.len() >= 2 && out.trace.len() <= 4, "{:?}", out.trace);
        assert!(out.trace[0].feedback.is_some());
        assert!(constraint(&f.initial, &out.plan).feasible());
        assert_eq!(reward(&out.plan, &f.truth, &cat).unwrap(), 1.0);
    }

    #[test]
    fn replan_fixtures_end_with_full_reward() {
        let cat = Catalog::default();
        for f in replan_fixtures(&cat).unwrap() {
            let out = scenario_replan(&f.script, &f.initial, &f.task, &f.truth, &PlannerConfig::default(), &cat).unwrap();
            assert_eq!(out.reward, 1.0, "{}", f.name);
            assert_eq!(out.plans.len(), 2, "{}", f.name);
            for o in &f.task {
                assert!(out.final_state.contains(o), "{}: {o}", f.name);
            }
        }
    }

    #[test]
    fn addition_moves_vegetables_down() {
        let cat = Catalog::default();
        let f = addition(&cat).unwrap();
        let out = scenario_replan(&f.script, &f.initial, &f.task, &f.truth, &PlannerConfig::default(), &cat).unwrap();
        assert_eq!(location_of(&out.final_state, "carrot"), SpecificLocation::TOP_LEFT);
        assert_ne!(location_of(&out.final_state, "potato"), SpecificLocation::TOP_LEFT);
    }

    #[test]
    fn removal_uses_freed_space() {
        let cat = Catalog::default();
        let f = removal(&cat).unwrap();
        let before = plan_with_refinement(&f.initial, &f.task, &f.truth, &PlannerConfig::default(), &cat).unwrap();
        assert_eq!(before.plan.actions[1].target, SpecificLocation::BOTTOM_RIGHT);
        let out = scenario_replan(&f.script, &f.initial, &f.task, &f.truth, &PlannerConfig::default(), &cat).unwrap();
        assert_eq!(location_of(&out.final_state, "relish"), SpecificLocation::TOP_RIGHT);
    }

    #[test]
    fn relocation_follows_the_new_anchor() {
        let cat = Catalog::default();
        let f = relocation(&cat).unwrap();
        let out = scenario_replan(&f.script, &f.initial, &f.task, &f.truth, &PlannerConfig::default(), &cat).unwrap();
        let last = out.plans.last().unwrap();
        let water = last.actions.iter().find(|a| a.object == "coconut water").unwrap();
        assert_eq!(water.target, SpecificLocation::TOP_RIGHT);
        for d in ["coke", "sprite", "coconut water"] {
            assert_eq!(location_of(&out.final_state, d), SpecificLocation::TOP_RIGHT, "{d}");
        }
    }
}
