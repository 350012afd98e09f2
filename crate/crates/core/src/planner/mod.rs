//! Constraint-aware placement planner.
//!
//! A semantic pass picks a shelf half for every task object from the
//! preference's admissible locations. A beam search then grounds each choice
//! in a collision-free coordinate. Objects the best beam cannot place are
//! reported back, their failed (object, location) pairs are excluded, and the
//! whole pass is retried.

mod exhaustive;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

pub use exhaustive::{brute_force_optimal, DEFAULT_GRID_STEP, MAX_EXHAUSTIVE_OBJECTS};

use crate::catalog::{Catalog, SpecificLocation};
use crate::error::{Error, Result};
use crate::preference::Preference;
use crate::reward::{satisfaction, Plan, PlanAction};
use crate::world::{FridgeState, Placement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlannerConfig {
    pub beam_width: usize,
    pub samples_per_region: usize,
    pub max_refinements: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            beam_width: 10,
            samples_per_region: 10,
            max_refinements: 4,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beam_width == 0 || self.samples_per_region == 0 || self.max_refinements == 0 {
            return Err(Error::InvalidConfig(format!(
                "planner parameters must be >= 1: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Objects the geometric pass could not place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Feedback {
    pub infeasible_objects: Vec<String>,
    pub attempt: usize,
}

pub type Exclusions = BTreeMap<String, BTreeSet<SpecificLocation>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticPlan {
    pub steps: Vec<(String, SpecificLocation)>,
    /// Objects sent to a fallback location because every admissible one was excluded.
    pub sacrificed: Vec<String>,
}

/// Picks a location per task object: the first admissible location not
/// excluded for it, judged on the occupancy left by earlier choices.
pub fn semantic_plan(
    s0: &FridgeState,
    task: &[String],
    preference: &Preference,
    excluded: &Exclusions,
    catalog: &Catalog,
) -> Result<SemanticPlan> {
    let mut view = s0.semantic_view();
    let mut load: [f64; 6] = SpecificLocation::ALL.map(|l| s0.occupied_width(l));
    let mut steps = Vec::with_capacity(task.len());
    let mut sacrificed = Vec::new();
    let none = BTreeSet::new();
    for object in task {
        let width = catalog.lookup(object)?.width;
        let banned = excluded.get(object).unwrap_or(&none);
        let admissible = preference.admissible(object, &view, catalog)?;
        let chosen = match admissible.iter().find(|l| !banned.contains(l)) {
            Some(&loc) => loc,
            None => {
                sacrificed.push(object.clone());
                let pool: Vec<SpecificLocation> = SpecificLocation::ALL
                    .into_iter()
                    .filter(|l| !banned.contains(l))
                    .collect();
                let pool = if pool.is_empty() { SpecificLocation::ALL.to_vec() } else { pool };
                // least occupied; min_by keeps the first of equals
                pool.into_iter()
                    .min_by(|a, b| load[a.index()].total_cmp(&load[b.index()]))
                    .expect("nonempty")
            }
        };
        view.push(chosen, object.clone());
        load[chosen.index()] += width;
        steps.push((object.clone(), chosen));
    }
    Ok(SemanticPlan { steps, sacrificed })
}

#[derive(Clone)]
struct Beam {
    state: FridgeState,
    actions: Vec<PlanAction>,
    /// Grid position chosen per step, `None` when skipped.
    key: Vec<Option<i64>>,
    placed: usize,
    satisfied: usize,
    free_space: f64,
}

/// A scored extension of a beam, materialized only if it survives pruning.
struct Child {
    parent: usize,
    placement: Option<Placement>,
    placed: usize,
    satisfied: usize,
    free_space: f64,
}

/// Grounds a semantic plan in coordinates. Beams are ranked by objects
/// placed, then satisfied placements, then remaining contiguous free space.
pub fn beam_search(
    s0: &FridgeState,
    semantic: &SemanticPlan,
    preference: &Preference,
    cfg: &PlannerConfig,
    catalog: &Catalog,
) -> Result<(Plan, Option<Feedback>)> {
    cfg.validate()?;
    let skeleton = Plan {
        initial_state: s0.clone(),
        actions: semantic
            .steps
            .iter()
            .map(|(o, l)| PlanAction {
                object: o.clone(),
                target: *l,
                placement: None,
            })
            .collect(),
        sacrificed: semantic.sacrificed.clone(),
    };
    let sat = satisfaction(&skeleton, preference, catalog)?;

    let mut beams = vec![Beam {
        state: s0.clone(),
        actions: Vec::new(),
        key: Vec::new(),
        placed: 0,
        satisfied: 0,
        free_space: s0.free_space_with(None),
    }];
    for (step, (object, target)) in semantic.steps.iter().enumerate() {
        let width = catalog.lookup(object)?.width;
        let centers = s0
            .geometry()
            .sample_centers(*target, width, cfg.samples_per_region);
        let mut children = Vec::new();
        for (parent, beam) in beams.iter().enumerate() {
            for &x in &centers {
                let p = Placement {
                    object: object.clone(),
                    shelf: target.shelf,
                    x,
                    width,
                };
                if beam.state.collides(&p) {
                    continue;
                }
                children.push(Child {
                    parent,
                    free_space: beam.state.free_space_with(Some(&p)),
                    placement: Some(p),
                    placed: beam.placed + 1,
                    satisfied: beam.satisfied + usize::from(sat[step]),
                });
            }
            children.push(Child {
                parent,
                placement: None,
                placed: beam.placed,
                satisfied: beam.satisfied,
                free_space: beam.free_space,
            });
        }
        // stable sort keeps generation order among equal scores
        children.sort_by(|a, b| {
            b.placed
                .cmp(&a.placed)
                .then(b.satisfied.cmp(&a.satisfied))
                .then(b.free_space.total_cmp(&a.free_space))
        });
        let mut seen = HashSet::new();
        let mut next = Vec::with_capacity(cfg.beam_width);
        for child in children {
            if next.len() == cfg.beam_width {
                break;
            }
            let parent = &beams[child.parent];
            let mut key = parent.key.clone();
            key.push(child.placement.as_ref().map(|p| (p.x * 1e6).round() as i64));
            if !seen.insert(key.clone()) {
                continue;
            }
            let state = match &child.placement {
                Some(p) => parent.state.apply(p.clone())?,
                None => parent.state.clone(),
            };
            let mut actions = parent.actions.clone();
            actions.push(PlanAction {
                object: object.clone(),
                target: *target,
                placement: child.placement,
            });
            next.push(Beam {
                state,
                actions,
                key,
                placed: child.placed,
                satisfied: child.satisfied,
                free_space: child.free_space,
            });
        }
        beams = next;
    }

    let best = beams.into_iter().next().expect("at least the skip beam survives");
    let plan = Plan {
        initial_state: s0.clone(),
        actions: best.actions,
        sacrificed: semantic.sacrificed.clone(),
    };
    let unplaced = plan.unplaced();
    let feedback = (!unplaced.is_empty()).then_some(Feedback {
        infeasible_objects: unplaced,
        attempt: 0,
    });
    Ok((plan, feedback))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RefinementStep {
    pub attempt: usize,
    pub semantic: SemanticPlan,
    pub feedback: Option<Feedback>,
    pub placed: usize,
    pub satisfied: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanOutcome {
    pub plan: Plan,
    pub trace: Vec<RefinementStep>,
}

/// Semantic pass plus beam search, retried with exclusions until every
/// object is placed or the attempt budget runs out. Returns the best attempt.
pub fn plan_with_refinement(
    s0: &FridgeState,
    task: &[String],
    preference: &Preference,
    cfg: &PlannerConfig,
    catalog: &Catalog,
) -> Result<PlanOutcome> {
    cfg.validate()?;
    let mut excluded = Exclusions::new();
    let mut trace = Vec::new();
    let mut best: Option<(usize, usize, Plan)> = None;
    for attempt in 1..=cfg.max_refinements {
        let semantic = semantic_plan(s0, task, preference, &excluded, catalog)?;
        let (plan, feedback) = beam_search(s0, &semantic, preference, cfg, catalog)?;
        let feedback = feedback.map(|f| Feedback { attempt, ..f });
        let placed = plan.placed_count();
        let satisfied = satisfaction(&plan, preference, catalog)?
            .iter()
            .zip(&plan.actions)
            .filter(|(s, a)| **s && a.placement.is_some())
            .count();
        if best.as_ref().is_none_or(|(p, s, _)| (placed, satisfied) > (*p, *s)) {
            best = Some((placed, satisfied, plan.clone()));
        }
        trace.push(RefinementStep {
            attempt,
            semantic: semantic.clone(),
            feedback: feedback.clone(),
            placed,
            satisfied,
        });
        let Some(fb) = feedback else { break };
        for object in &fb.infeasible_objects {
            if let Some((_, loc)) = semantic.steps.iter().find(|(o, _)| o == object) {
                excluded.entry(object.clone()).or_default().insert(*loc);
            }
        }
    }
    let (_, _, plan) = best.expect("at least one attempt");
    Ok(PlanOutcome { plan, trace })
}
