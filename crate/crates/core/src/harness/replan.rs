//! Execution with external changes between actions and replanning.

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, SpecificLocation};
use crate::error::{Error, Result};
use crate::planner::{plan_with_refinement, PlannerConfig};
use crate::preference::Preference;
use crate::reward::{satisfies, Plan, PlanAction};
use crate::world::{FridgeState, Placement};

pub const SCRIPT_SCHEMA_VERSION: u32 = 1;

/// Candidate centers tried when a script adds an object to a location.
const ADD_SAMPLES: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Mutation {
    Add { object: String, location: SpecificLocation },
    Remove { object: String },
    Move { object: String, location: SpecificLocation },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScriptStep {
    /// Number of executed actions after which the mutations apply.
    pub after_action: usize,
    pub mutations: Vec<Mutation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MutationScript {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub steps: Vec<ScriptStep>,
}

fn schema_version() -> u32 {
    SCRIPT_SCHEMA_VERSION
}

impl Default for MutationScript {
    fn default() -> Self {
        Self {
            schema_version: SCRIPT_SCHEMA_VERSION,
            steps: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExecutedAction {
    pub action: PlanAction,
    /// Whether the target satisfied the preference when the action ran.
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplanOutcome {
    /// The initial plan followed by one plan per replanning point.
    pub plans: Vec<Plan>,
    pub executed: Vec<ExecutedAction>,
    pub final_state: FridgeState,
    /// Fraction of task objects whose action satisfied the preference when it ran.
    pub reward: f64,
}

fn bad(msg: String) -> Error {
    Error::MalformedScript(msg)
}

/// First collision-free sample point for `object` inside `location`.
fn put(state: &FridgeState, object: &str, location: SpecificLocation, catalog: &Catalog) -> Result<FridgeState> {
    let width = catalog.lookup(object)?.width;
    state
        .geometry()
        .sample_centers(location, width, ADD_SAMPLES)
        .into_iter()
        .map(|x| Placement {
            object: object.to_string(),
            shelf: location.shelf,
            x,
            width,
        })
        .find(|p| !state.collides(p))
        .map_or_else(
            || Err(bad(format!("no room for `{object}` at {location}"))),
            |p| state.apply(p),
        )
}

fn apply_mutation(state: &FridgeState, m: &Mutation, pending: &[String], catalog: &Catalog) -> Result<FridgeState> {
    let present = |o: &str| {
        if state.contains(o) {
            Ok(())
        } else {
            Err(bad(format!("`{o}` is not in the fridge")))
        }
    };
    match m {
        Mutation::Add { object, location } => {
            catalog.lookup(object).map_err(|_| bad(format!("unknown object `{object}`")))?;
            if state.contains(object) || pending.contains(object) {
                return Err(bad(format!("`{object}` is already in the fridge or the task")));
            }
            put(state, object, *location, catalog)
        }
        Mutation::Remove { object } => {
            present(object)?;
            state.remove(object)
        }
        Mutation::Move { object, location } => {
            present(object)?;
            put(&state.remove(object)?, object, *location, catalog)
        }
    }
}

fn validate(script: &MutationScript, task_len: usize) -> Result<()> {
    if script.schema_version != SCRIPT_SCHEMA_VERSION {
        return Err(bad(format!("unsupported schema version {}", script.schema_version)));
    }
    let mut last = 0;
    for step in &script.steps {
        if step.after_action == 0 || step.after_action > task_len {
            return Err(bad(format!("after_action {} outside 1..={task_len}", step.after_action)));
        }
        if step.after_action < last {
            return Err(bad("steps must be ordered by after_action".into()));
        }
        last = step.after_action;
    }
    Ok(())
}

/// Executes the plan one action at a time. After each action the script's
/// mutations for that point are applied and, if there were any, the
/// remaining task is replanned from the mutated state.
pub fn scenario_replan(
    script: &MutationScript,
    initial: &FridgeState,
    task: &[String],
    preference: &Preference,
    cfg: &PlannerConfig,
    catalog: &Catalog,
) -> Result<ReplanOutcome> {
    validate(script, task.len())?;
    let mut state = initial.clone();
    let first = plan_with_refinement(&state, task, preference, cfg, catalog)?.plan;
    let mut queue: Vec<PlanAction> = first.actions.clone();
    let mut plans = vec![first];
    let mut executed = Vec::with_capacity(task.len());
    let mut remaining: Vec<String> = task.to_vec();
    while !remaining.is_empty() {
        let action = queue.remove(0);
        let satisfied = satisfies(&action.object, action.target, preference, &state.semantic_view(), catalog)?;
        if let Some(p) = &action.placement {
            state = state.apply(p.clone())?;
        }
        remaining.retain(|o| *o != action.object);
        executed.push(ExecutedAction { action, satisfied });
        let done = executed.len();
        let mutations: Vec<&Mutation> = script
            .steps
            .iter()
            .filter(|s| s.after_action == done)
            .flat_map(|s| &s.mutations)
            .collect();
        if mutations.is_empty() {
            continue;
        }
        for m in mutations {
            state = apply_mutation(&state, m, &remaining, catalog)?;
        }
        if !remaining.is_empty() {
            let plan = plan_with_refinement(&state, &remaining, preference, cfg, catalog)?.plan;
            queue = plan.actions.clone();
            plans.push(plan);
        }
    }
    let reward = if executed.is_empty() {
        1.0
    } else {
        executed.iter().filter(|e| e.satisfied).count() as f64 / executed.len() as f64
    };
    Ok(ReplanOutcome {
        plans,
        executed,
        final_state: state,
        reward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Category, Shelf};
    use crate::preference::Requirement;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn fruits_top_left() -> Preference {
        Preference::new(Category::ALL.map(|c| (c, Requirement::Specific { location: SpecificLocation::TOP_LEFT }))).unwrap()
    }

    #[test]
    fn no_mutations_match_single_plan() {
        let cat = Catalog::default();
        let s0 = FridgeState::default();
        let task = names(&["apple", "lemon"]);
        let pref = fruits_top_left();
        let out = scenario_replan(&MutationScript::default(), &s0, &task, &pref, &PlannerConfig::default(), &cat).unwrap();
        let direct = plan_with_refinement(&s0, &task, &pref, &PlannerConfig::default(), &cat).unwrap().plan;
        assert_eq!(out.plans, vec![direct.clone()]);
        assert_eq!(out.final_state, direct.final_state().unwrap());
        assert_eq!(out.reward, 1.0);
    }

    #[test]
    fn rejects_bad_scripts() {
        let cat = Catalog::default();
        let s0 = FridgeState::default();
        let task = names(&["apple", "lemon"]);
        let pref = fruits_top_left();
        let cfg = PlannerConfig::default();
        let run = |steps: Vec<ScriptStep>| {
            scenario_replan(&MutationScript { schema_version: 1, steps }, &s0, &task, &pref, &cfg, &cat)
        };
        let remove = |o: &str| Mutation::Remove { object: o.into() };
        for steps in [
            vec![ScriptStep { after_action: 0, mutations: vec![] }],
            vec![ScriptStep { after_action: 3, mutations: vec![] }],
            vec![ScriptStep { after_action: 1, mutations: vec![remove("yogurt")] }],
            vec![ScriptStep {
                after_action: 1,
                mutations: vec![Mutation::Add { object: "lemon".into(), location: SpecificLocation::BOTTOM_LEFT }],
            }],
            vec![ScriptStep {
                after_action: 1,
                mutations: vec![Mutation::Add { object: "durian".into(), location: SpecificLocation::BOTTOM_LEFT }],
            }],
        ] {
            assert!(matches!(run(steps), Err(Error::MalformedScript(_))));
        }
    }

    #[test]
    fn removal_triggers_replan() {
        let cat = Catalog::default();
        let s0 = FridgeState::default()
            .apply(Placement::new(&cat, "yogurt", Shelf::Top, 5.0).unwrap())
            .unwrap();
        let task = names(&["apple", "lemon"]);
        let script = MutationScript {
            schema_version: 1,
            steps: vec![ScriptStep { after_action: 1, mutations: vec![Mutation::Remove { object: "yogurt".into() }] }],
        };
        let out = scenario_replan(&script, &s0, &task, &fruits_top_left(), &PlannerConfig::default(), &cat).unwrap();
        assert_eq!(out.plans.len(), 2);
        assert_eq!(out.plans[1].actions.len(), 1);
        assert!(!out.final_state.contains("yogurt"));
        assert_eq!(out.executed.len(), 2);
    }
}
