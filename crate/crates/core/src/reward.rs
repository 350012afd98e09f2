//! Deterministic reward: the fraction of a plan's placements that satisfy a
//! preference, evaluated against the state as the plan executes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Category, SpecificLocation};
use crate::error::{Error, Result};
use crate::preference::{admissible_locations, Preference, Requirement};
use crate::world::{FridgeState, Placement, SemanticView};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanAction {
    pub object: String,
    pub target: SpecificLocation,
    /// Exact coordinate, absent when no collision-free spot was found.
    #[serde(default)]
    pub placement: Option<Placement>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Plan {
    pub initial_state: FridgeState,
    pub actions: Vec<PlanAction>,
    /// Objects whose target was chosen without regard to the preference.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sacrificed: Vec<String>,
}

impl Plan {
    pub fn placed_count(&self) -> usize {
        self.actions.iter().filter(|a| a.placement.is_some()).count()
    }

    pub fn unplaced(&self) -> Vec<String> {
        self.actions
            .iter()
            .filter(|a| a.placement.is_none())
            .map(|a| a.object.clone())
            .collect()
    }

    pub fn semantic(&self) -> Vec<(String, SpecificLocation)> {
        self.actions
            .iter()
            .map(|a| (a.object.clone(), a.target))
            .collect()
    }

    /// State after executing every placed action.
    pub fn final_state(&self) -> Result<FridgeState> {
        self.actions
            .iter()
            .filter_map(|a| a.placement.clone())
            .try_fold(self.initial_state.clone(), |s, p| s.apply(p))
    }
}

pub fn satisfies(
    object: &str,
    location: SpecificLocation,
    preference: &Preference,
    view: &SemanticView,
    catalog: &Catalog,
) -> Result<bool> {
    Ok(preference.admissible(object, view, catalog)?.contains(&location))
}

/// Per-action satisfaction, each judged on the state left by earlier actions.
pub fn satisfaction(plan: &Plan, preference: &Preference, catalog: &Catalog) -> Result<Vec<bool>> {
    let mut view = plan.initial_state.semantic_view();
    plan.actions
        .iter()
        .map(|a| {
            let ok = satisfies(&a.object, a.target, preference, &view, catalog)?;
            view.push(a.target, a.object.clone());
            Ok(ok)
        })
        .collect()
}

/// Fraction of satisfied actions; an empty plan scores 1.
pub fn reward(plan: &Plan, preference: &Preference, catalog: &Catalog) -> Result<f64> {
    let sat = satisfaction(plan, preference, catalog)?;
    if sat.is_empty() {
        return Ok(1.0);
    }
    Ok(sat.iter().filter(|&&s| s).count() as f64 / sat.len() as f64)
}

fn fully_satisfied(plan: &Plan, preference: &Preference, catalog: &Catalog) -> bool {
    satisfaction(plan, preference, catalog).is_ok_and(|s| s.iter().all(|&b| b))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Demonstration {
    pub before: FridgeState,
    pub after: FridgeState,
    pub put_away: Vec<String>,
}

impl Demonstration {
    pub fn validate(&self) -> Result<()> {
        for p in self.before.placements() {
            if self.after.placement_of(&p.object) != Some(p) {
                return Err(Error::InvalidDemonstration(format!(
                    "`{}` moved or vanished",
                    p.object
                )));
            }
        }
        let expected: BTreeSet<&str> = self
            .before
            .placements()
            .iter()
            .map(|p| p.object.as_str())
            .chain(self.put_away.iter().map(String::as_str))
            .collect();
        let got: BTreeSet<&str> = self
            .after
            .placements()
            .iter()
            .map(|p| p.object.as_str())
            .collect();
        if expected != got || expected.len() != self.after.placements().len() {
            return Err(Error::InvalidDemonstration(
                "after state is not before plus the put-away objects".into(),
            ));
        }
        Ok(())
    }

    /// The demonstration as a plan, actions ordered by location then name.
    pub fn to_plan(&self) -> Result<Plan> {
        self.validate()?;
        let mut actions: Vec<PlanAction> = self
            .put_away
            .iter()
            .map(|o| {
                let p = self
                    .after
                    .placement_of(o)
                    .ok_or_else(|| Error::InvalidDemonstration(format!("`{o}` not placed")))?;
                Ok(PlanAction {
                    object: o.clone(),
                    target: self.after.semantic_location(p),
                    placement: Some(p.clone()),
                })
            })
            .collect::<Result<_>>()?;
        actions.sort_by(|a, b| a.target.cmp(&b.target).then_with(|| a.object.cmp(&b.object)));
        Ok(Plan {
            initial_state: self.before.clone(),
            actions,
            sacrificed: Vec::new(),
        })
    }

    pub fn categories(&self, catalog: &Catalog) -> Result<BTreeSet<Category>> {
        self.after
            .placements()
            .iter()
            .map(|p| catalog.category_of(&p.object))
            .collect()
    }
}

pub fn consistent_with_demos(preference: &Preference, demos: &[Demonstration], catalog: &Catalog) -> bool {
    demos.iter().all(|d| {
        d.to_plan()
            .is_ok_and(|plan| fully_satisfied(&plan, preference, catalog))
    })
}

/// Whether every demonstrated placement of `category` satisfies `req`.
/// Demo plans must come from [`Demonstration::to_plan`].
pub fn requirement_consistent(req: &Requirement, category: Category, demo_plans: &[Plan], catalog: &Catalog) -> bool {
    demo_plans.iter().all(|plan| {
        let mut view = plan.initial_state.semantic_view();
        plan.actions.iter().all(|a| {
            let ok = match catalog.lookup(&a.object) {
                Ok(spec) if spec.category == category => {
                    admissible_locations(req, &spec.attributes, &view, category, catalog).contains(&a.target)
                }
                Ok(_) => true,
                Err(_) => false,
            };
            view.push(a.target, a.object.clone());
            ok
        })
    })
}

/// Accuracy test: the plan is optimal for both its own preference and the
/// ground truth.
pub fn preference_equivalent(candidate: &Preference, plan: &Plan, truth: &Preference, catalog: &Catalog) -> bool {
    fully_satisfied(plan, candidate, catalog) && fully_satisfied(plan, truth, catalog)
}
