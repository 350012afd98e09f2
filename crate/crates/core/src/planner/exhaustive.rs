//! Exhaustive reference planner for small instances.
//!
//! Enumerates object orderings and semantic locations with branch-and-bound
//! on the number of satisfied placements. Geometric feasibility of a
//! location assignment is decided per shelf: for every left-to-right order of
//! the shelf's new objects, each is pushed to the leftmost grid position that
//! clears obstacles and its predecessor. Leftmost-first is optimal for a fixed
//! order, so trying every order is exact on the grid.

use std::collections::HashMap;

use crate::catalog::{Catalog, Shelf, Side, SpecificLocation};
use crate::error::{Error, Result};
use crate::preference::{Preference, Requirement};
use crate::reward::{Plan, PlanAction};
use crate::world::{FridgeState, Placement, SemanticView};

pub const MAX_EXHAUSTIVE_OBJECTS: usize = 5;
pub const DEFAULT_GRID_STEP: f64 = 2.0;

const EPS: f64 = 1e-9;

type ShelfKey = (Shelf, Vec<(usize, Side)>);

struct Search<'a> {
    s0: &'a FridgeState,
    task: &'a [String],
    widths: Vec<f64>,
    preference: &'a Preference,
    catalog: &'a Catalog,
    grid: f64,
    fixed_order: bool,
    memo: HashMap<ShelfKey, Option<Vec<(usize, f64)>>>,
    best: Option<(usize, Vec<(usize, SpecificLocation)>)>,
}

impl Search<'_> {
    /// Leftmost grid left-edge >= `from` for an object of `width` on `side`
    /// that clears every obstacle, or None.
    fn leftmost(&self, obstacles: &[(f64, f64)], from: f64, width: f64, side: Side) -> Option<f64> {
        let g = self.s0.geometry();
        let (w_total, b, c) = (g.shelf_width, g.side_boundary(), g.clearance);
        let side_min = match side {
            Side::Left => 0.0,
            Side::Right => b - width / 2.0,
        };
        let start = from.max(side_min).max(0.0);
        let mut k = (start / self.grid - EPS).ceil().max(0.0) as i64;
        loop {
            let edge = k as f64 * self.grid;
            let center = edge + width / 2.0;
            if edge + width > w_total + EPS {
                return None;
            }
            if side == Side::Left && center >= b {
                return None;
            }
            let (lo, hi) = (edge - c, edge + width + c);
            if obstacles.iter().all(|&(a, z)| !(lo < z - EPS && a < hi - EPS)) {
                return Some(edge);
            }
            k += 1;
        }
    }

    fn shelf_feasible(&mut self, key: &ShelfKey) -> Option<Vec<(usize, f64)>> {
        if let Some(hit) = self.memo.get(key) {
            return hit.clone();
        }
        let (shelf, items) = key;
        let obstacles: Vec<(f64, f64)> = self
            .s0
            .placements()
            .iter()
            .filter(|p| p.shelf == *shelf)
            .map(|p| (p.lo(), p.hi()))
            .collect();
        let clearance = self.s0.geometry().clearance;
        let mut result = None;
        for perm in permutations(items.len()) {
            let mut placed: Vec<(usize, f64)> = Vec::with_capacity(items.len());
            let mut blocks = obstacles.clone();
            let mut cursor = 0.0;
            let mut ok = true;
            for &i in &perm {
                let (task_ix, side) = items[i];
                let w = self.widths[task_ix];
                match self.leftmost(&blocks, cursor, w, side) {
                    Some(edge) => {
                        blocks.push((edge, edge + w));
                        cursor = edge + w + clearance;
                        placed.push((task_ix, edge + w / 2.0));
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                placed.sort_by_key(|p| p.0);
                result = Some(placed);
                break;
            }
        }
        self.memo.insert(key.clone(), result.clone());
        result
    }

    fn assignment_feasible(&mut self, assignment: &[(usize, SpecificLocation)]) -> bool {
        Shelf::ALL.into_iter().all(|shelf| {
            let mut items: Vec<(usize, Side)> = assignment
                .iter()
                .filter(|(_, l)| l.shelf == shelf)
                .map(|&(i, l)| (i, l.side))
                .collect();
            if items.is_empty() {
                return true;
            }
            items.sort_unstable();
            self.shelf_feasible(&(shelf, items)).is_some()
        })
    }

    fn dfs(&mut self, view: &mut SemanticView, used: &mut Vec<bool>, assignment: &mut Vec<(usize, SpecificLocation)>, satisfied: usize) -> Result<()> {
        let n = self.task.len();
        if self.best.as_ref().is_some_and(|(b, _)| *b == n) {
            return Ok(());
        }
        let remaining = n - assignment.len();
        if self.best.as_ref().is_some_and(|(b, _)| satisfied + remaining <= *b) {
            return Ok(());
        }
        if remaining == 0 {
            self.best = Some((satisfied, assignment.clone()));
            return Ok(());
        }
        for i in 0..n {
            if used[i] {
                continue;
            }
            let object = &self.task[i];
            let admissible = self.preference.admissible(object, view, self.catalog)?;
            for loc in SpecificLocation::ALL {
                assignment.push((i, loc));
                if self.assignment_feasible(assignment) {
                    used[i] = true;
                    view.push(loc, object.clone());
                    let gain = usize::from(admissible.contains(&loc));
                    self.dfs(view, used, assignment, satisfied + gain)?;
                    view.remove(object);
                    used[i] = false;
                }
                assignment.pop();
            }
            if self.fixed_order {
                break;
            }
        }
        Ok(())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(k, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

fn state_dependent(req: &Requirement) -> bool {
    matches!(
        req,
        Requirement::Together | Requirement::SameShelfAs { .. } | Requirement::Conditional { .. }
    )
}

/// Highest-reward plan that places every task object collision-free, with
/// centers on a `grid_step` lattice of left edges. Ties resolve to the first
/// plan in (task order, canonical location order) enumeration.
pub fn brute_force_optimal(
    s0: &FridgeState,
    task: &[String],
    preference: &Preference,
    grid_step: f64,
    catalog: &Catalog,
) -> Result<Plan> {
    if task.len() > MAX_EXHAUSTIVE_OBJECTS {
        return Err(Error::IntractableInstance(task.len()));
    }
    if !(grid_step > 0.0) {
        return Err(Error::InvalidConfig(format!("grid step {grid_step} must be positive")));
    }
    let widths = task
        .iter()
        .map(|o| catalog.lookup(o).map(|s| s.width))
        .collect::<Result<Vec<_>>>()?;
    let fixed_order = task
        .iter()
        .map(|o| {
            let c = catalog.category_of(o)?;
            Ok(state_dependent(preference.get(c)?))
        })
        .collect::<Result<Vec<bool>>>()?
        .iter()
        .all(|d| !d);
    let mut search = Search {
        s0,
        task,
        widths,
        preference,
        catalog,
        grid: grid_step,
        fixed_order,
        memo: HashMap::new(),
        best: None,
    };
    let mut view = s0.semantic_view();
    search.dfs(&mut view, &mut vec![false; task.len()], &mut Vec::new(), 0)?;
    let (_, assignment) = search.best.clone().ok_or(Error::NoFeasiblePlan)?;

    let mut coords = vec![0.0; task.len()];
    for shelf in Shelf::ALL {
        let mut items: Vec<(usize, Side)> = assignment
            .iter()
            .filter(|(_, l)| l.shelf == shelf)
            .map(|&(i, l)| (i, l.side))
            .collect();
        if items.is_empty() {
            continue;
        }
        items.sort_unstable();
        for (i, x) in search.shelf_feasible(&(shelf, items)).expect("checked during search") {
            coords[i] = x;
        }
    }
    let actions = assignment
        .iter()
        .map(|&(i, loc)| PlanAction {
            object: task[i].clone(),
            target: loc,
            placement: Some(Placement {
                object: task[i].clone(),
                shelf: loc.shelf,
                x: coords[i],
                width: search.widths[i],
            }),
        })
        .collect();
    Ok(Plan {
        initial_state: s0.clone(),
        actions,
        sacrificed: Vec::new(),
    })
}
