//! Seeded benchmark generator: five preference families of twenty cases,
//! each with a ground truth, two demonstrations and a certified scenario.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Category, GeneralLocation, SpecificLocation};
use crate::error::{Error, Result};
use crate::oracle::consistent_requirements;
use crate::planner::{plan_with_refinement, PlannerConfig};
use crate::preference::{Preference, Requirement, MAX_CONDITIONAL_CAPACITY};
use crate::reward::{reward, satisfaction, Demonstration, Plan, PlanAction};
use crate::world::{constraint, FridgeState, Placement};

pub const SCHEMA_VERSION: u32 = 1;
pub const CASES_PER_FAMILY: usize = 20;
pub const DEMO_BEFORE: usize = 3;
pub const DEMO_PUT_AWAY: usize = 4;
pub const SCENARIO_BEFORE: usize = 4;
pub const SCENARIO_TASK: usize = 6;
/// Ceiling on the ground-truth reward of the best-separated alternative plan.
pub const DISCRIMINATION_REWARD: f64 = 0.5;

const CASE_ATTEMPTS: usize = 400;
const SCENARIO_ATTEMPTS: usize = 4;
const MAX_JITTER: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SpecificLocation,
    GeneralLocation,
    RelativePosition,
    SubcategoryException,
    Conditional,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::SpecificLocation,
        Family::GeneralLocation,
        Family::RelativePosition,
        Family::SubcategoryException,
        Family::Conditional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SpecificLocation => "specific-location",
            Family::GeneralLocation => "general-location",
            Family::RelativePosition => "relative-position",
            Family::SubcategoryException => "subcategory-exception",
            Family::Conditional => "conditional",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Scenario {
    pub initial: FridgeState,
    pub task: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestCase {
    pub schema_version: u32,
    pub id: usize,
    pub family: Family,
    pub seed: u64,
    pub ground_truth: Preference,
    pub demos: Vec<Demonstration>,
    pub scenario: Scenario,
}

impl TestCase {
    pub fn name(&self) -> String {
        format!("{:03}-{}", self.id, self.family)
    }

    /// Categories seen in the demonstrations.
    pub fn universe(&self, catalog: &Catalog) -> Result<BTreeSet<Category>> {
        let mut out = BTreeSet::new();
        for d in &self.demos {
            out.extend(d.categories(catalog)?);
        }
        Ok(out)
    }

    /// Checks the structural invariants and the feasibility certificate.
    pub fn validate(&self, catalog: &Catalog) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(format!("case {}: {m}", self.id)));
        if self.demos.len() != 2 {
            return bad(format!("{} demonstrations", self.demos.len()));
        }
        for d in &self.demos {
            d.validate()?;
            if d.before.placements().len() != DEMO_BEFORE || d.put_away.len() != DEMO_PUT_AWAY {
                return bad("demonstration size".into());
            }
            if !fully_satisfied(&d.to_plan()?, &self.ground_truth, catalog)? {
                return bad("demonstration violates the ground truth".into());
            }
        }
        if self.scenario.initial.placements().len() != SCENARIO_BEFORE || self.scenario.task.len() != SCENARIO_TASK {
            return bad("scenario size".into());
        }
        if certify(&self.scenario, &self.ground_truth, catalog)?.is_none() {
            return bad("scenario has no certified plan".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenConfig {
    pub seed: u64,
    pub families: Vec<Family>,
    /// Skip the requirement that the demonstrations leave several
    /// preferences consistent.
    pub allow_unambiguous: bool,
    /// Minimum number of distinct demo-consistent preferences.
    pub ambiguity_floor: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            families: Family::ALL.to_vec(),
            allow_unambiguous: false,
            ambiguity_floor: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub schema_version: u32,
    pub seed: u64,
    pub cases: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub id: usize,
    pub family: Family,
    pub file: String,
}

fn fully_satisfied(plan: &Plan, theta: &Preference, catalog: &Catalog) -> Result<bool> {
    Ok(satisfaction(plan, theta, catalog)?.into_iter().all(|s| s))
}

/// Planner output under the ground truth when it places every object,
/// collision-free, with reward 1.
pub fn certify(scenario: &Scenario, theta: &Preference, catalog: &Catalog) -> Result<Option<Plan>> {
    let out = plan_with_refinement(&scenario.initial, &scenario.task, theta, &PlannerConfig::default(), catalog)?;
    let ok = out.plan.placed_count() == scenario.task.len()
        && constraint(&scenario.initial, &out.plan).feasible()
        && reward(&out.plan, theta, catalog)? == 1.0;
    Ok(ok.then_some(out.plan))
}

fn random_loc(rng: &mut ChaCha8Rng) -> SpecificLocation {
    *SpecificLocation::ALL.choose(rng).expect("six locations")
}

fn other_loc(rng: &mut ChaCha8Rng, not: SpecificLocation) -> SpecificLocation {
    loop {
        let l = random_loc(rng);
        if l != not {
            return l;
        }
    }
}

/// Family-conformant ground truth. `specials` is the number of categories
/// with a non-trivial requirement (ignored for the specific family).
pub fn generate_ground_truth(family: Family, specials: usize, rng: &mut ChaCha8Rng, catalog: &Catalog) -> Preference {
    let mut cats = Category::ALL.to_vec();
    cats.shuffle(rng);
    let special: BTreeSet<Category> = match family {
        Family::SpecificLocation => BTreeSet::new(),
        _ => cats.iter().take(specials.clamp(1, 2)).copied().collect(),
    };
    let reqs = Category::ALL.map(|c| {
        let req = if !special.contains(&c) {
            Requirement::Specific {
                location: random_loc(rng),
            }
        } else {
            match family {
                Family::SpecificLocation => unreachable!("no special categories"),
                Family::GeneralLocation => Requirement::General {
                    location: *GeneralLocation::ALL.choose(rng).expect("five generals"),
                },
                Family::RelativePosition => Requirement::Together,
                Family::SubcategoryException => {
                    let vocab: Vec<&str> = catalog.attribute_vocabulary(c).collect();
                    let base = random_loc(rng);
                    Requirement::Exception {
                        base,
                        attribute: vocab.choose(rng).expect("attribute vocabulary").to_string(),
                        exception: other_loc(rng, base),
                    }
                }
                Family::Conditional => {
                    let primary = random_loc(rng);
                    Requirement::Conditional {
                        primary,
                        capacity: rng.gen_range(1..=MAX_CONDITIONAL_CAPACITY),
                        fallback: other_loc(rng, primary),
                    }
                }
            }
        };
        (c, req)
    });
    Preference::new(reqs).expect("generated requirements are well formed")
}

/// Object picker that never repeats a name within one fridge.
struct Picker<'a> {
    catalog: &'a Catalog,
    used: BTreeSet<String>,
}

impl<'a> Picker<'a> {
    fn new(catalog: &'a Catalog) -> Self {
        Self {
            catalog,
            used: BTreeSet::new(),
        }
    }

    fn pick(&mut self, rng: &mut ChaCha8Rng, filter: impl Fn(&crate::catalog::ObjectSpec) -> bool) -> Option<String> {
        let pool: Vec<&str> = self
            .catalog
            .objects()
            .iter()
            .filter(|o| !self.used.contains(&o.name) && filter(o))
            .map(|o| o.name.as_str())
            .collect();
        let name = pool.choose(rng)?.to_string();
        self.used.insert(name.clone());
        Some(name)
    }

    fn of(&mut self, rng: &mut ChaCha8Rng, c: Category) -> Option<String> {
        self.pick(rng, |o| o.category == c)
    }

    fn with_attr(&mut self, rng: &mut ChaCha8Rng, c: Category, attr: &str, has: bool) -> Option<String> {
        self.pick(rng, |o| o.category == c && o.has_attribute(attr) == has)
    }

    fn any(&mut self, rng: &mut ChaCha8Rng) -> Option<String> {
        self.pick(rng, |_| true)
    }
}

/// Candidate centers for `width` in `loc`: flush against the half's edges or
/// a neighbor, pushed out by a small random gap. Keeps fridges compact.
fn snug_centers(state: &FridgeState, loc: SpecificLocation, width: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let Some((a, b)) = state.geometry().center_range(loc, width) else {
        return Vec::new();
    };
    let c = state.geometry().clearance;
    let half = width / 2.0;
    let mut gap = || (rng.gen_range(0.0..MAX_JITTER) * 10.0).round() / 10.0;
    let mut xs = vec![a + gap(), b - gap()];
    for p in state.placements().iter().filter(|p| p.shelf == loc.shelf) {
        xs.push(p.hi() + c + half + gap());
        xs.push(p.lo() - c - half - gap());
    }
    xs.iter_mut().for_each(|x| *x = (*x * 10.0).round() / 10.0);
    xs.retain(|x| (a..=b).contains(x));
    xs.retain(|&x| {
        let p = Placement {
            object: String::new(),
            shelf: loc.shelf,
            x,
            width,
        };
        state.semantic_location(&p) == loc && !state.collides(&p)
    });
    xs
}

/// Places `objects` one by one at a random admissible location, next to
/// what is already there.
fn place_sequentially(
    state: FridgeState,
    objects: &[String],
    theta: &Preference,
    rng: &mut ChaCha8Rng,
    catalog: &Catalog,
) -> Option<FridgeState> {
    let mut state = state;
    for o in objects {
        let width = catalog.lookup(o).ok()?.width;
        let mut locs = theta.admissible(o, &state.semantic_view(), catalog).ok()?;
        locs.shuffle(rng);
        let placed = locs.into_iter().find_map(|loc| {
            let xs = snug_centers(&state, loc, width, rng);
            xs.choose(rng).map(|&x| Placement {
                object: o.clone(),
                shelf: loc.shelf,
                x,
                width,
            })
        })?;
        state = state.apply(placed).ok()?;
    }
    Some(state)
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Whether every execution order of the put-away objects satisfies `theta`.
fn order_independent(demo: &Demonstration, theta: &Preference, catalog: &Catalog) -> Result<bool> {
    for order in permutations(&demo.put_away) {
        let plan = Plan {
            initial_state: demo.before.clone(),
            actions: order
                .iter()
                .map(|o| {
                    let p = demo.after.placement_of(o).expect("validated demo");
                    PlanAction {
                        object: o.clone(),
                        target: demo.after.semantic_location(p),
                        placement: Some(p.clone()),
                    }
                })
                .collect(),
            sacrificed: Vec::new(),
        };
        if !fully_satisfied(&plan, theta, catalog)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn specials(theta: &Preference) -> Vec<(Category, Requirement)> {
    theta
        .iter()
        .filter(|(_, r)| !matches!(r, Requirement::Specific { .. }))
        .map(|(c, r)| (c, r.clone()))
        .collect()
}

/// Object lists `(before, put_away)` for demonstration `index` (0 or 1).
fn demo_objects(
    theta: &Preference,
    index: usize,
    covered: &BTreeSet<Category>,
    rng: &mut ChaCha8Rng,
    catalog: &Catalog,
) -> Option<(Vec<String>, Vec<String>)> {
    let mut pick = Picker::new(catalog);
    let mut before = Vec::new();
    let mut put = Vec::new();
    let special = specials(theta);
    // a lone special category gets a second put-away object
    let roomy = special.len() == 1;
    for (c, req) in special {
        match req {
            Requirement::General { .. } => {
                put.push(pick.of(rng, c)?);
                if roomy {
                    put.push(pick.of(rng, c)?);
                }
            }
            Requirement::Together => {
                before.push(pick.of(rng, c)?);
                put.push(pick.of(rng, c)?);
            }
            Requirement::Exception { ref attribute, .. } => {
                if roomy || index == 0 {
                    put.push(pick.with_attr(rng, c, attribute, true)?);
                }
                if roomy || index == 1 {
                    put.push(pick.with_attr(rng, c, attribute, false)?);
                }
            }
            Requirement::Conditional { capacity, .. } => {
                // the first demonstration starts at capacity, the second one below
                let seeded = if index == 0 { capacity } else { capacity - 1 };
                for _ in 0..seeded {
                    before.push(pick.of(rng, c)?);
                }
                put.push(pick.of(rng, c)?);
            }
            Requirement::Specific { .. } | Requirement::SameShelfAs { .. } => {}
        }
    }
    if before.len() > DEMO_BEFORE || put.len() > DEMO_PUT_AWAY {
        return None;
    }
    while before.len() < DEMO_BEFORE {
        before.push(pick.any(rng)?);
    }
    // favor categories no demonstration has put away yet
    let mut order = Category::ALL.to_vec();
    order.shuffle(rng);
    order.sort_by_key(|c| covered.contains(c));
    for c in order {
        if put.len() >= DEMO_PUT_AWAY {
            break;
        }
        if !put.iter().any(|o| catalog.category_of(o).is_ok_and(|k| k == c)) {
            put.push(pick.of(rng, c)?);
        }
    }
    while put.len() < DEMO_PUT_AWAY {
        put.push(pick.any(rng)?);
    }
    put.shuffle(rng);
    Some((before, put))
}

/// One demonstration satisfying `theta` in every execution order. Put-away
/// objects favor categories outside `covered`.
pub fn realize_demonstration(
    theta: &Preference,
    index: usize,
    covered: &BTreeSet<Category>,
    rng: &mut ChaCha8Rng,
    catalog: &Catalog,
) -> Result<Demonstration> {
    for _ in 0..CASE_ATTEMPTS {
        let Some((before_objs, put)) = demo_objects(theta, index, covered, rng, catalog) else {
            continue;
        };
        let Some(before) = place_sequentially(FridgeState::default(), &before_objs, theta, rng, catalog) else {
            continue;
        };
        let Some(after) = place_sequentially(before.clone(), &put, theta, rng, catalog) else {
            continue;
        };
        let demo = Demonstration {
            before,
            after,
            put_away: put,
        };
        if order_independent(&demo, theta, catalog)? {
            return Ok(demo);
        }
    }
    Err(Error::RealizationRetryExhausted(format!("demonstration {index} for {theta}")))
}

/// Tops `list` up to `n` objects, each from a least-represented category.
fn fill_spread(list: &mut Vec<String>, n: usize, pick: &mut Picker, rng: &mut ChaCha8Rng, catalog: &Catalog) -> Option<()> {
    while list.len() < n {
        let count = |c: Category| list.iter().filter(|o| catalog.category_of(o).is_ok_and(|k| k == c)).count();
        let least = Category::ALL.into_iter().map(count).min()?;
        let mut open: Vec<Category> = Category::ALL.into_iter().filter(|&c| count(c) == least).collect();
        open.shuffle(rng);
        let next = open.into_iter().find_map(|c| pick.of(rng, c))?;
        list.push(next);
    }
    Some(())
}

/// Scenario object lists `(before, task)`. Each special category puts three
/// objects in the task, two when its anchor sits in the fridge.
fn scenario_objects(theta: &Preference, rng: &mut ChaCha8Rng, catalog: &Catalog) -> Option<(Vec<String>, Vec<String>)> {
    let mut pick = Picker::new(catalog);
    let mut before = Vec::new();
    let mut task = Vec::new();
    for (c, req) in specials(theta) {
        match req {
            Requirement::Together => {
                before.push(pick.of(rng, c)?);
                task.push(pick.of(rng, c)?);
                task.push(pick.of(rng, c)?);
            }
            Requirement::Exception { ref attribute, .. } => {
                task.push(pick.with_attr(rng, c, attribute, true)?);
                task.push(pick.with_attr(rng, c, attribute, false)?);
                task.push(pick.of(rng, c)?);
            }
            Requirement::Conditional { capacity, .. } => {
                for _ in 1..capacity {
                    before.push(pick.of(rng, c)?);
                }
                task.push(pick.of(rng, c)?);
                task.push(pick.of(rng, c)?);
                task.push(pick.of(rng, c)?);
            }
            _ => {
                task.push(pick.of(rng, c)?);
                task.push(pick.of(rng, c)?);
                task.push(pick.of(rng, c)?);
            }
        }
    }
    if before.len() > SCENARIO_BEFORE || task.len() > SCENARIO_TASK {
        return None;
    }
    fill_spread(&mut before, SCENARIO_BEFORE, &mut pick, rng, catalog)?;
    fill_spread(&mut task, SCENARIO_TASK, &mut pick, rng, catalog)?;
    task.shuffle(rng);
    Some((before, task))
}

fn realize_scenario(theta: &Preference, rng: &mut ChaCha8Rng, catalog: &Catalog) -> Result<Option<Scenario>> {
    let Some((before, task)) = scenario_objects(theta, rng, catalog) else {
        return Ok(None);
    };
    let Some(initial) = place_sequentially(FridgeState::default(), &before, theta, rng, catalog) else {
        return Ok(None);
    };
    let scenario = Scenario { initial, task };
    Ok(certify(&scenario, theta, catalog)?.map(|_| scenario))
}

fn anchors(demo: &Demonstration, c: Category, catalog: &Catalog) -> BTreeSet<SpecificLocation> {
    demo.before
        .semantic_view()
        .iter()
        .filter(|(_, objs)| objs.iter().any(|o| catalog.category_of(o).is_ok_and(|k| k == c)))
        .map(|(l, _)| l)
        .collect()
}

/// Extra per-family checks that keep the special requirement observable.
fn demos_informative(theta: &Preference, demos: &[Demonstration], catalog: &Catalog) -> bool {
    specials(theta).iter().all(|(c, req)| match req {
        // differing anchors rule out a fixed location
        Requirement::Together => anchors(&demos[0], *c, catalog).is_disjoint(&anchors(&demos[1], *c, catalog)),
        _ => true,
    })
}

/// Whether swapping some special category's requirement for another
/// demo-consistent one yields a plan scoring at most [`DISCRIMINATION_REWARD`]
/// under the ground truth. Scenarios failing this leave the ambiguity moot.
fn discriminates(
    theta: &Preference,
    scenario: &Scenario,
    consistent: &BTreeMap<Category, Vec<Requirement>>,
    catalog: &Catalog,
) -> Result<bool> {
    for (c, own) in specials(theta) {
        for r in &consistent[&c] {
            if *r == own {
                continue;
            }
            let alt = theta.with(c, r.clone());
            let plan = plan_with_refinement(&scenario.initial, &scenario.task, &alt, &PlannerConfig::default(), catalog)?.plan;
            if reward(&plan, theta, catalog)? <= DISCRIMINATION_REWARD {
                return Ok(true);
            }
        }
    }
    Ok(specials(theta).is_empty())
}

/// Generates one case; deterministic in `(family, specials, seed)`.
pub fn generate_case(
    id: usize,
    family: Family,
    specials: usize,
    seed: u64,
    cfg: &GenConfig,
    catalog: &Catalog,
) -> Result<TestCase> {
    let mut rng = crate::rng(seed);
    for _ in 0..CASE_ATTEMPTS {
        let theta = generate_ground_truth(family, specials, &mut rng, catalog);
        let mut demos = Vec::with_capacity(2);
        let mut universe = BTreeSet::new();
        for i in 0..2 {
            match realize_demonstration(&theta, i, &universe, &mut rng, catalog) {
                Ok(d) => {
                    for o in &d.put_away {
                        universe.insert(catalog.category_of(o)?);
                    }
                    demos.push(d);
                }
                Err(Error::RealizationRetryExhausted(_)) => break,
                Err(e) => return Err(e),
            }
        }
        if demos.len() < 2 {
            continue;
        }
        if universe.len() != Category::ALL.len() || !demos_informative(&theta, &demos, catalog) {
            continue;
        }
        if !cfg.allow_unambiguous {
            let consistent = consistent_requirements(&demos, &universe, catalog)?;
            let count: f64 = consistent.values().map(|v| v.len() as f64).product();
            if count < cfg.ambiguity_floor.max(2) as f64 {
                continue;
            }
        }
        let consistent = consistent_requirements(&demos, &universe, catalog)?;
        let mut scenario = None;
        for _ in 0..SCENARIO_ATTEMPTS {
            scenario = realize_scenario(&theta, &mut rng, catalog)?;
            if let Some(sc) = &scenario {
                if discriminates(&theta, sc, &consistent, catalog)? {
                    break;
                }
                scenario = None;
            }
        }
        let Some(scenario) = scenario else {
            continue;
        };
        return Ok(TestCase {
            schema_version: SCHEMA_VERSION,
            id,
            family,
            seed,
            ground_truth: theta,
            demos,
            scenario,
        });
    }
    Err(Error::GenerationRetryExhausted(format!("case {id} ({family})")))
}

/// Twenty cases per requested family, ids assigned in family order. Within
/// each non-specific family the first half has one special category.
pub fn generate_dataset(cfg: &GenConfig, catalog: &Catalog) -> Result<Vec<TestCase>> {
    let jobs: Vec<(usize, Family, usize)> = Family::ALL
        .into_iter()
        .filter(|f| cfg.families.contains(f))
        .enumerate()
        .flat_map(|(fi, f)| {
            (0..CASES_PER_FAMILY).map(move |k| {
                let id = fi * CASES_PER_FAMILY + k;
                (id, f, if k < CASES_PER_FAMILY / 2 { 1 } else { 2 })
            })
        })
        .collect();
    jobs.par_iter()
        .map(|&(id, family, specials)| {
            generate_case(id, family, specials, crate::mix_seed(cfg.seed, id as u64), cfg, catalog)
        })
        .collect()
}

pub fn write_dataset(dir: &Path, cases: &[TestCase], seed: u64) -> Result<Manifest> {
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(cases.len());
    for case in cases {
        let file = format!("case-{}.json", case.name());
        std::fs::write(dir.join(&file), serde_json::to_string_pretty(case)? + "\n")?;
        entries.push(ManifestEntry {
            id: case.id,
            family: case.family,
            file,
        });
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        seed,
        cases: entries,
    };
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(manifest)
}

fn check_schema(found: u32, what: &str) -> Result<()> {
    if found != SCHEMA_VERSION {
        return Err(Error::InvalidConfig(format!(
            "{what} has schemaVersion {found}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

pub fn read_case(path: &Path) -> Result<TestCase> {
    let case: TestCase = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    check_schema(case.schema_version, &path.display().to_string())?;
    Ok(case)
}

pub fn read_dataset(dir: &Path) -> Result<Vec<TestCase>> {
    let manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json"))?)?;
    check_schema(manifest.schema_version, "manifest")?;
    manifest.cases.iter().map(|e| read_case(&dir.join(&e.file))).collect()
}
