//! The 2-D fridge world: one interval axis per shelf, semantic occupancy
//! derived from object centers, and the collision-based constraint check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Shelf, Side, SpecificLocation};
use crate::error::{Error, Result};
use crate::reward::Plan;

const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FridgeGeometry {
    pub shelf_width: f64,
    pub clearance: f64,
}

impl Default for FridgeGeometry {
    fn default() -> Self {
        Self {
            shelf_width: 60.0,
            clearance: 1.0,
        }
    }
}

impl FridgeGeometry {
    pub fn new(shelf_width: f64, clearance: f64) -> Result<Self> {
        let g = Self {
            shelf_width,
            clearance,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shelf_width > 0.0) || !(self.clearance >= 0.0) || self.clearance >= self.shelf_width / 4.0 {
            return Err(Error::InvalidState(format!(
                "geometry needs shelfWidth > 0 and 0 <= clearance < shelfWidth/4, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn side_boundary(&self) -> f64 {
        self.shelf_width / 2.0
    }

    /// Closed x-range `[lo, hi]` of a shelf half.
    pub fn region(&self, loc: SpecificLocation) -> (f64, f64) {
        let b = self.side_boundary();
        match loc.side {
            Side::Left => (0.0, b),
            Side::Right => (b, self.shelf_width),
        }
    }

    /// Admissible centers for an object of `width` lying wholly inside `loc`.
    pub fn center_range(&self, loc: SpecificLocation, width: f64) -> Option<(f64, f64)> {
        let (lo, hi) = self.region(loc);
        let (a, b) = (lo + width / 2.0, hi - width / 2.0);
        (a <= b + EPS).then_some((a, b.max(a)))
    }

    /// `n` evenly spaced centers spanning [`Self::center_range`], left to right.
    pub fn sample_centers(&self, loc: SpecificLocation, width: f64, n: usize) -> Vec<f64> {
        let Some((a, b)) = self.center_range(loc, width) else {
            return Vec::new();
        };
        match n {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..n)
                .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub object: String,
    pub shelf: Shelf,
    /// Center coordinate in cm.
    pub x: f64,
    pub width: f64,
}

impl Placement {
    pub fn new(catalog: &Catalog, object: &str, shelf: Shelf, x: f64) -> Result<Self> {
        let width = catalog.lookup(object)?.width;
        Ok(Self {
            object: object.to_string(),
            shelf,
            x,
            width,
        })
    }

    pub fn lo(&self) -> f64 {
        self.x - self.width / 2.0
    }

    pub fn hi(&self) -> f64 {
        self.x + self.width / 2.0
    }
}

/// Ordered object names per specific location, left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemanticView {
    slots: [Vec<String>; 6],
}

impl SemanticView {
    pub fn at(&self, loc: SpecificLocation) -> &[String] {
        &self.slots[loc.index()]
    }

    pub fn push(&mut self, loc: SpecificLocation, object: impl Into<String>) {
        self.slots[loc.index()].push(object.into());
    }

    pub fn remove(&mut self, object: &str) {
        for slot in &mut self.slots {
            slot.retain(|o| o != object);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpecificLocation, &[String])> {
        SpecificLocation::ALL
            .into_iter()
            .map(|loc| (loc, self.at(loc)))
    }

    pub fn location_of(&self, object: &str) -> Option<SpecificLocation> {
        self.iter()
            .find(|(_, objs)| objs.iter().any(|o| o == object))
            .map(|(loc, _)| loc)
    }

    pub fn len(&self) -> usize {
        self.slots.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Immutable fridge contents. Every mutating operation returns a new state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FridgeDoc", into = "FridgeDoc")]
pub struct FridgeState {
    geometry: FridgeGeometry,
    placements: Vec<Placement>,
}

impl Default for FridgeState {
    fn default() -> Self {
        Self::empty(FridgeGeometry::default())
    }
}

impl FridgeState {
    pub fn empty(geometry: FridgeGeometry) -> Self {
        Self {
            geometry,
            placements: Vec::new(),
        }
    }

    /// Builds a state by applying `placements` in order.
    pub fn from_placements(geometry: FridgeGeometry, placements: Vec<Placement>) -> Result<Self> {
        geometry.validate()?;
        placements
            .into_iter()
            .try_fold(Self::empty(geometry), |s, p| s.apply(p))
    }

    pub fn geometry(&self) -> &FridgeGeometry {
        &self.geometry
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn contains(&self, object: &str) -> bool {
        self.placements.iter().any(|p| p.object == object)
    }

    pub fn placement_of(&self, object: &str) -> Option<&Placement> {
        self.placements.iter().find(|p| p.object == object)
    }

    pub fn semantic_location(&self, p: &Placement) -> SpecificLocation {
        let side = if p.x < self.geometry.side_boundary() {
            Side::Left
        } else {
            Side::Right
        };
        SpecificLocation::new(p.shelf, side)
    }

    pub fn out_of_bounds(&self, p: &Placement) -> bool {
        p.lo() < -EPS || p.hi() > self.geometry.shelf_width + EPS
    }

    /// True when `candidate`, widened by the clearance on both sides, overlaps
    /// an occupied interval on its shelf, or leaves the shelf.
    pub fn collides(&self, candidate: &Placement) -> bool {
        if self.out_of_bounds(candidate) {
            return true;
        }
        let c = self.geometry.clearance;
        let (lo, hi) = (candidate.lo() - c, candidate.hi() + c);
        self.placements
            .iter()
            .filter(|p| p.shelf == candidate.shelf)
            .any(|p| lo < p.hi() - EPS && p.lo() < hi - EPS)
    }

    pub fn apply(&self, p: Placement) -> Result<FridgeState> {
        if self.contains(&p.object) || self.collides(&p) {
            return Err(Error::Collision { object: p.object });
        }
        let mut next = self.clone();
        next.placements.push(p);
        Ok(next)
    }

    pub fn remove(&self, object: &str) -> Result<FridgeState> {
        if !self.contains(object) {
            return Err(Error::UnknownObject(object.to_string()));
        }
        let mut next = self.clone();
        next.placements.retain(|p| p.object != object);
        Ok(next)
    }

    pub fn semantic_view(&self) -> SemanticView {
        let mut sorted: Vec<&Placement> = self.placements.iter().collect();
        sorted.sort_by(|a, b| a.x.total_cmp(&b.x).then_with(|| a.object.cmp(&b.object)));
        let mut view = SemanticView::default();
        for p in sorted {
            view.push(self.semantic_location(p), p.object.clone());
        }
        view
    }

    /// Sorted occupied intervals `(lo, hi)` on a shelf.
    fn intervals(&self, shelf: Shelf) -> Vec<(f64, f64)> {
        let mut v: Vec<_> = self
            .placements
            .iter()
            .filter(|p| p.shelf == shelf)
            .map(|p| (p.lo(), p.hi()))
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }

    /// Longest free stretch inside a shelf half, ignoring clearance.
    pub fn largest_gap(&self, loc: SpecificLocation) -> f64 {
        gap_in(self.geometry.region(loc), &self.intervals(loc.shelf))
    }

    /// Sum of [`Self::largest_gap`] over all six halves, as if `extra` were
    /// also placed.
    pub fn free_space_with(&self, extra: Option<&Placement>) -> f64 {
        Shelf::ALL
            .into_iter()
            .map(|shelf| {
                let mut iv = self.intervals(shelf);
                if let Some(p) = extra.filter(|p| p.shelf == shelf) {
                    iv.push((p.lo(), p.hi()));
                    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
                }
                [Side::Left, Side::Right]
                    .into_iter()
                    .map(|side| gap_in(self.geometry.region(SpecificLocation::new(shelf, side)), &iv))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Total occupied width per specific location (by center).
    pub fn occupied_width(&self, loc: SpecificLocation) -> f64 {
        self.placements
            .iter()
            .filter(|p| self.semantic_location(p) == loc)
            .map(|p| p.width)
            .sum()
    }

    pub fn to_doc(&self) -> FridgeDoc {
        FridgeDoc::from(self.clone())
    }
}

fn gap_in((lo, hi): (f64, f64), sorted: &[(f64, f64)]) -> f64 {
    let mut cursor = lo;
    let mut best: f64 = 0.0;
    for &(a, b) in sorted {
        if b <= lo || a >= hi {
            continue;
        }
        best = best.max(a.max(lo) - cursor);
        cursor = cursor.max(b.min(hi));
    }
    best.max(hi - cursor)
}

/// 0/1 feasibility indicator with the objects responsible for a violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintResult {
    pub value: u8,
    pub violators: Vec<String>,
}

impl ConstraintResult {
    pub fn feasible(&self) -> bool {
        self.value == 0
    }
}

/// Simulates the plan's placements in order against `state0`.
pub fn constraint(state0: &FridgeState, plan: &Plan) -> ConstraintResult {
    let mut state = state0.clone();
    let mut violators = Vec::new();
    for action in &plan.actions {
        match &action.placement {
            Some(p) => match state.apply(p.clone()) {
                Ok(next) => state = next,
                Err(_) => violators.push(action.object.clone()),
            },
            None => violators.push(action.object.clone()),
        }
    }
    ConstraintResult {
        value: u8::from(!violators.is_empty()),
        violators,
    }
}

/// JSON form of a fridge: shelf -> side -> object list, plus exact placements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FridgeDoc {
    #[serde(rename = "top shelf")]
    pub top: BTreeMap<String, Vec<String>>,
    #[serde(rename = "middle shelf")]
    pub middle: BTreeMap<String, Vec<String>>,
    #[serde(rename = "bottom shelf")]
    pub bottom: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placements: Option<Vec<Placement>>,
    #[serde(default)]
    pub geometry: FridgeGeometry,
}

impl FridgeDoc {
    fn shelf_map(&self, shelf: Shelf) -> &BTreeMap<String, Vec<String>> {
        match shelf {
            Shelf::Top => &self.top,
            Shelf::Middle => &self.middle,
            Shelf::Bottom => &self.bottom,
        }
    }

    fn listed(&self) -> Result<SemanticView> {
        let mut view = SemanticView::default();
        for shelf in Shelf::ALL {
            for (key, objs) in self.shelf_map(shelf) {
                let loc: SpecificLocation = key.parse()?;
                if loc.shelf != shelf {
                    return Err(Error::InvalidState(format!(
                        "`{key}` listed under {} shelf",
                        shelf.name()
                    )));
                }
                for o in objs {
                    view.push(loc, o.clone());
                }
            }
        }
        Ok(view)
    }

    /// Resolves the document into a state. Without explicit placements the
    /// listed objects are packed left to right inside their shelf half.
    pub fn into_state(self, catalog: &Catalog) -> Result<FridgeState> {
        if self.placements.is_some() {
            return FridgeState::try_from(self);
        }
        let geometry = self.geometry;
        geometry.validate()?;
        let mut state = FridgeState::empty(geometry);
        for (loc, objs) in self.listed()?.iter() {
            let (lo, hi) = geometry.region(loc);
            let mut cursor = lo;
            for name in objs {
                let width = catalog.lookup(name)?.width;
                let x = cursor + width / 2.0;
                if x + width / 2.0 > hi + EPS {
                    return Err(Error::InvalidState(format!("`{name}` does not fit at {loc}")));
                }
                state = state.apply(Placement {
                    object: name.clone(),
                    shelf: loc.shelf,
                    x,
                    width,
                })?;
                cursor += width + geometry.clearance;
            }
        }
        Ok(state)
    }
}

impl From<FridgeState> for FridgeDoc {
    fn from(state: FridgeState) -> Self {
        let view = state.semantic_view();
        let mut maps: [BTreeMap<String, Vec<String>>; 3] = Default::default();
        for (loc, objs) in view.iter() {
            let shelf_ix = loc.index() / 2;
            maps[shelf_ix].insert(loc.label(), objs.to_vec());
        }
        let [top, middle, bottom] = maps;
        FridgeDoc {
            top,
            middle,
            bottom,
            placements: Some(state.placements),
            geometry: state.geometry,
        }
    }
}

impl TryFrom<FridgeDoc> for FridgeState {
    type Error = Error;

    fn try_from(doc: FridgeDoc) -> Result<Self> {
        let listed = doc.listed()?;
        let placements = doc.placements.ok_or_else(|| {
            Error::InvalidState("placements required; resolve semantic-only states with a catalog".into())
        })?;
        let state = FridgeState::from_placements(doc.geometry, placements)?;
        if state.semantic_view() != listed {
            return Err(Error::InvalidState(
                "semantic listing disagrees with placements".into(),
            ));
        }
        Ok(state)
    }
}
