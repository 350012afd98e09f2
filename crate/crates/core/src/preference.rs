//! Structured placement preferences: one requirement per category, drawn
//! from a five-type grammar, and the admissible-location semantics that the
//! reward, planner, and oracle all share.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Category, GeneralLocation, SpecificLocation};
use crate::error::{Error, Result};
use crate::world::SemanticView;

pub const MAX_CONDITIONAL_CAPACITY: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Requirement {
    /// One shelf half.
    #[serde(rename = "specific-location")]
    Specific { location: SpecificLocation },
    /// Any half within a named region of the fridge.
    #[serde(rename = "general-location")]
    General { location: GeneralLocation },
    /// Together with existing objects of the same category.
    #[serde(rename = "together-same-category")]
    Together,
    /// Next to objects of another category.
    #[serde(rename = "same-shelf-as")]
    SameShelfAs { other: Category },
    /// `base`, except objects carrying `attribute` go to `exception`.
    #[serde(rename = "exception-for-attribute")]
    Exception {
        base: SpecificLocation,
        attribute: String,
        exception: SpecificLocation,
    },
    /// `primary` while it holds fewer than `capacity` objects of the
    /// category, else `fallback`.
    #[serde(rename = "conditional-on-space")]
    Conditional {
        primary: SpecificLocation,
        capacity: u32,
        fallback: SpecificLocation,
    },
}

/// Coarse grammar family, used for diversity weighting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RequirementKind {
    Specific,
    General,
    Relative,
    Exception,
    Conditional,
}

impl RequirementKind {
    pub const ALL: [RequirementKind; 5] = [
        RequirementKind::Specific,
        RequirementKind::General,
        RequirementKind::Relative,
        RequirementKind::Exception,
        RequirementKind::Conditional,
    ];
}

impl Requirement {
    pub fn kind(&self) -> RequirementKind {
        match self {
            Requirement::Specific { .. } => RequirementKind::Specific,
            Requirement::General { .. } => RequirementKind::General,
            Requirement::Together | Requirement::SameShelfAs { .. } => RequirementKind::Relative,
            Requirement::Exception { .. } => RequirementKind::Exception,
            Requirement::Conditional { .. } => RequirementKind::Conditional,
        }
    }

    /// Validates the requirement for `owner` and normalizes attribute tags.
    pub fn canonicalize(&self, owner: Category) -> Result<Requirement> {
        match self {
            Requirement::SameShelfAs { other } if *other == owner => Err(
                Error::MalformedRequirement(format!("{owner} cannot be placed next to itself")),
            ),
            Requirement::Exception {
                base,
                attribute,
                exception,
            } => {
                if base == exception {
                    return Err(Error::MalformedRequirement(format!(
                        "exception location equals base location {base}"
                    )));
                }
                let attribute = attribute.trim().to_lowercase();
                if attribute.is_empty() {
                    return Err(Error::MalformedRequirement("empty attribute".into()));
                }
                Ok(Requirement::Exception {
                    base: *base,
                    attribute,
                    exception: *exception,
                })
            }
            Requirement::Conditional {
                primary,
                capacity,
                fallback,
            } => {
                if primary == fallback {
                    return Err(Error::MalformedRequirement(format!(
                        "fallback equals primary location {primary}"
                    )));
                }
                if !(1..=MAX_CONDITIONAL_CAPACITY).contains(capacity) {
                    return Err(Error::MalformedRequirement(format!(
                        "capacity {capacity} outside 1..={MAX_CONDITIONAL_CAPACITY}"
                    )));
                }
                Ok(self.clone())
            }
            _ => Ok(self.clone()),
        }
    }

    /// Natural-language clause, e.g. "fruits on the left side of top shelf".
    pub fn describe(&self, owner: Category) -> String {
        let noun = owner.noun();
        match self {
            Requirement::Specific { location } => format!("{noun} on the {location}"),
            Requirement::General { location } => format!("{noun} on the {location}"),
            Requirement::Together => {
                format!("{noun} placed together next to existing {noun}, regardless of shelf")
            }
            Requirement::SameShelfAs { other } => {
                format!("{noun} placed on the same shelf next to {}", other.noun())
            }
            Requirement::Exception {
                base,
                attribute,
                exception,
            } => format!("{noun} on the {base}, but {attribute} {noun} on the {exception}"),
            Requirement::Conditional {
                primary,
                capacity,
                fallback,
            } => format!(
                "{noun} on the {primary} while it holds fewer than {capacity} {noun}, otherwise on the {fallback}"
            ),
        }
    }
}

fn holds_category(view: &SemanticView, loc: SpecificLocation, category: Category, catalog: &Catalog) -> bool {
    view.at(loc)
        .iter()
        .any(|o| catalog.category_of(o).is_ok_and(|c| c == category))
}

pub fn count_category(view: &SemanticView, loc: SpecificLocation, category: Category, catalog: &Catalog) -> usize {
    view.at(loc)
        .iter()
        .filter(|o| catalog.category_of(o).is_ok_and(|c| c == category))
        .count()
}

fn anchored(view: &SemanticView, category: Category, catalog: &Catalog) -> Vec<SpecificLocation> {
    let found: Vec<_> = SpecificLocation::ALL
        .into_iter()
        .filter(|&loc| holds_category(view, loc, category, catalog))
        .collect();
    if found.is_empty() {
        SpecificLocation::ALL.to_vec()
    } else {
        found
    }
}

/// Every location (canonical order) where placing an object of `category`
/// with `attributes` satisfies `req`, given the current occupancy `view`.
pub fn admissible_locations(
    req: &Requirement,
    attributes: &BTreeSet<String>,
    view: &SemanticView,
    category: Category,
    catalog: &Catalog,
) -> Vec<SpecificLocation> {
    match req {
        Requirement::Specific { location } => vec![*location],
        Requirement::General { location } => location.expand(),
        Requirement::Together => anchored(view, category, catalog),
        Requirement::SameShelfAs { other } => anchored(view, *other, catalog),
        Requirement::Exception {
            base,
            attribute,
            exception,
        } => {
            if attributes.contains(attribute) {
                vec![*exception]
            } else {
                vec![*base]
            }
        }
        Requirement::Conditional {
            primary,
            capacity,
            fallback,
        } => {
            if count_category(view, *primary, category, catalog) < *capacity as usize {
                vec![*primary]
            } else {
                vec![*fallback]
            }
        }
    }
}

/// A full preference: one requirement per covered category.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Preference {
    requirements: BTreeMap<Category, Requirement>,
}

impl Preference {
    pub fn new(requirements: impl IntoIterator<Item = (Category, Requirement)>) -> Result<Self> {
        Preference {
            requirements: requirements.into_iter().collect(),
        }
        .canonicalize()
    }

    /// Validated copy with normalized requirements. Idempotent.
    pub fn canonicalize(&self) -> Result<Self> {
        let requirements = self
            .requirements
            .iter()
            .map(|(c, r)| Ok((*c, r.canonicalize(*c)?)))
            .collect::<Result<_>>()?;
        Ok(Self { requirements })
    }

    pub fn get(&self, category: Category) -> Result<&Requirement> {
        self.requirements
            .get(&category)
            .ok_or(Error::UncoveredCategory(category))
    }

    pub fn covers(&self, category: Category) -> bool {
        self.requirements.contains_key(&category)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Category, &Requirement)> {
        self.requirements.iter().map(|(c, r)| (*c, r))
    }

    pub fn categories(&self) -> impl Iterator<Item = Category> + '_ {
        self.requirements.keys().copied()
    }

    pub fn with(&self, category: Category, req: Requirement) -> Self {
        let mut next = self.clone();
        next.requirements.insert(category, req);
        next
    }

    pub fn restricted_to(&self, categories: &BTreeSet<Category>) -> Self {
        Self {
            requirements: self
                .requirements
                .iter()
                .filter(|(c, _)| categories.contains(c))
                .map(|(c, r)| (*c, r.clone()))
                .collect(),
        }
    }

    /// Byte-stable JSON of the canonical form.
    pub fn canonical_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.canonicalize()?)?)
    }

    pub fn admissible(
        &self,
        object: &str,
        view: &SemanticView,
        catalog: &Catalog,
    ) -> Result<Vec<SpecificLocation>> {
        let spec = catalog.lookup(object)?;
        let req = self.get(spec.category)?;
        Ok(admissible_locations(
            req,
            &spec.attributes,
            view,
            spec.category,
            catalog,
        ))
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses: Vec<_> = self.iter().map(|(c, r)| r.describe(c)).collect();
        write!(f, "{}", clauses.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Shelf;
    use crate::world::{FridgeState, Placement};
    use proptest::prelude::*;

    fn state_with(cat: &Catalog, items: &[(&str, Shelf, f64)]) -> FridgeState {
        items.iter().fold(FridgeState::default(), |s, &(o, shelf, x)| {
            s.apply(Placement::new(cat, o, shelf, x).unwrap()).unwrap()
        })
    }

    #[test]
    fn specific_is_singleton() {
        let cat = Catalog::default();
        let req = Requirement::Specific {
            location: SpecificLocation::MIDDLE_LEFT,
        };
        let got = admissible_locations(
            &req,
            &BTreeSet::new(),
            &SemanticView::default(),
            Category::Fruits,
            &cat,
        );
        assert_eq!(got, vec![SpecificLocation::MIDDLE_LEFT]);
    }

    #[test]
    fn general_top_shelf() {
        let cat = Catalog::default();
        let req = Requirement::General {
            location: GeneralLocation::TopShelf,
        };
        let got = admissible_locations(
            &req,
            &BTreeSet::new(),
            &SemanticView::default(),
            Category::DairyProducts,
            &cat,
        );
        assert_eq!(
            got,
            vec![SpecificLocation::TOP_LEFT, SpecificLocation::TOP_RIGHT]
        );
    }

    #[test]
    fn conditional_switches_at_capacity() {
        let cat = Catalog::default();
        let req = Requirement::Conditional {
            primary: SpecificLocation::TOP_RIGHT,
            capacity: 2,
            fallback: SpecificLocation::MIDDLE_RIGHT,
        };
        let attrs = &cat.lookup("whole milk").unwrap().attributes;
        let one = state_with(&cat, &[("oat milk", Shelf::Top, 40.0)]);
        assert_eq!(
            admissible_locations(&req, attrs, &one.semantic_view(), Category::DairyProducts, &cat),
            vec![SpecificLocation::TOP_RIGHT]
        );
        let two = state_with(&cat, &[("oat milk", Shelf::Top, 40.0), ("whole milk", Shelf::Top, 53.0)]);
        assert_eq!(
            admissible_locations(
                &req,
                &cat.lookup("cheese").unwrap().attributes,
                &two.semantic_view(),
                Category::DairyProducts,
                &cat
            ),
            vec![SpecificLocation::MIDDLE_RIGHT]
        );
        // other categories at the primary do not count
        let mixed = state_with(&cat, &[("oat milk", Shelf::Top, 40.0), ("coke", Shelf::Top, 53.0)]);
        assert_eq!(
            admissible_locations(&req, attrs, &mixed.semantic_view(), Category::DairyProducts, &cat),
            vec![SpecificLocation::TOP_RIGHT]
        );
    }

    #[test]
    fn together_follows_existing_anchor() {
        let cat = Catalog::default();
        let s = state_with(&cat, &[("cucumber", Shelf::Middle, 36.0), ("carrot", Shelf::Middle, 45.0)]);
        let got = admissible_locations(
            &Requirement::Together,
            &BTreeSet::new(),
            &s.semantic_view(),
            Category::Vegetables,
            &cat,
        );
        assert_eq!(got, vec![SpecificLocation::MIDDLE_RIGHT]);
        let free = admissible_locations(
            &Requirement::Together,
            &BTreeSet::new(),
            &SemanticView::default(),
            Category::Vegetables,
            &cat,
        );
        assert_eq!(free, SpecificLocation::ALL.to_vec());
    }

    #[test]
    fn exception_dispatch() {
        let cat = Catalog::default();
        let req = Requirement::Exception {
            base: SpecificLocation::TOP_RIGHT,
            attribute: "cheese".into(),
            exception: SpecificLocation::MIDDLE_LEFT,
        };
        let v = SemanticView::default();
        let cheese = &cat.lookup("cheese").unwrap().attributes;
        let milk = &cat.lookup("whole milk").unwrap().attributes;
        assert_eq!(
            admissible_locations(&req, cheese, &v, Category::DairyProducts, &cat),
            vec![SpecificLocation::MIDDLE_LEFT]
        );
        assert_eq!(
            admissible_locations(&req, milk, &v, Category::DairyProducts, &cat),
            vec![SpecificLocation::TOP_RIGHT]
        );
    }

    #[test]
    fn canonicalize_rejects_malformed() {
        let bad = Preference {
            requirements: BTreeMap::from([(
                Category::DairyProducts,
                Requirement::Exception {
                    base: SpecificLocation::TOP_LEFT,
                    attribute: "cheese".into(),
                    exception: SpecificLocation::TOP_LEFT,
                },
            )]),
        };
        assert!(matches!(bad.canonicalize(), Err(Error::MalformedRequirement(_))));
        let self_ref = Preference::new([(
            Category::Fruits,
            Requirement::SameShelfAs {
                other: Category::Fruits,
            },
        )]);
        assert!(self_ref.is_err());
        let cap = Preference::new([(
            Category::Fruits,
            Requirement::Conditional {
                primary: SpecificLocation::TOP_LEFT,
                capacity: 4,
                fallback: SpecificLocation::TOP_RIGHT,
            },
        )]);
        assert!(cap.is_err());
    }

    #[test]
    fn order_independent_canonical_form() {
        let a = Requirement::Specific {
            location: SpecificLocation::TOP_LEFT,
        };
        let b = Requirement::Exception {
            base: SpecificLocation::TOP_RIGHT,
            attribute: " Cheese ".into(),
            exception: SpecificLocation::BOTTOM_LEFT,
        };
        let p1 = Preference::new([(Category::Fruits, a.clone()), (Category::DairyProducts, b.clone())]).unwrap();
        let p2 = Preference::new([(Category::DairyProducts, b), (Category::Fruits, a)]).unwrap();
        assert_eq!(p1.canonical_json().unwrap(), p2.canonical_json().unwrap());
        assert!(p1.canonical_json().unwrap().contains("\"attribute\":\"cheese\""));
    }

    #[test]
    fn json_tagged_encoding() {
        let p = Preference::new([(
            Category::Fruits,
            Requirement::Specific {
                location: SpecificLocation::TOP_LEFT,
            },
        )])
        .unwrap();
        assert_eq!(
            p.canonical_json().unwrap(),
            r#"{"fruits":{"type":"specific-location","location":"left side of top shelf"}}"#
        );
    }

    fn arb_loc() -> impl Strategy<Value = SpecificLocation> {
        (0usize..6).prop_map(|i| SpecificLocation::ALL[i])
    }

    fn arb_requirement() -> impl Strategy<Value = Requirement> {
        prop_oneof![
            arb_loc().prop_map(|location| Requirement::Specific { location }),
            (0usize..5).prop_map(|i| Requirement::General {
                location: GeneralLocation::ALL[i]
            }),
            Just(Requirement::Together),
            (arb_loc(), arb_loc(), prop::sample::select(vec!["cheese", "Milk", " big"])).prop_map(
                |(base, exception, a)| Requirement::Exception {
                    base,
                    attribute: a.to_string(),
                    exception
                }
            ),
            (arb_loc(), 1u32..=3, arb_loc()).prop_map(|(primary, capacity, fallback)| {
                Requirement::Conditional {
                    primary,
                    capacity,
                    fallback,
                }
            }),
        ]
    }

    proptest! {
        #[test]
        fn canonicalize_idempotent(reqs in prop::collection::vec(arb_requirement(), 5)) {
            let raw = Preference {
                requirements: Category::ALL.into_iter().zip(reqs).collect(),
            };
            if let Ok(c) = raw.canonicalize() {
                prop_assert_eq!(c.canonicalize().unwrap(), c.clone());
                let text = c.canonical_json().unwrap();
                let back: Preference = serde_json::from_str(&text).unwrap();
                prop_assert_eq!(back.canonical_json().unwrap(), text);
            }
        }

        #[test]
        fn general_is_union_of_members(g in 0usize..5) {
            let cat = Catalog::default();
            let loc = GeneralLocation::ALL[g];
            let general = admissible_locations(
                &Requirement::General { location: loc },
                &BTreeSet::new(), &SemanticView::default(), Category::Fruits, &cat);
            let mut union = Vec::new();
            for m in loc.expand() {
                let single = admissible_locations(
                    &Requirement::Specific { location: m },
                    &BTreeSet::new(), &SemanticView::default(), Category::Fruits, &cat);
                prop_assert!(single.len() < general.len());
                union.extend(single);
            }
            prop_assert_eq!(union, general);
        }
    }
}
