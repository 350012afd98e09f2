//! Object ontology and fridge location hierarchy.
//!
//! The fridge has three shelves split into a left and right half, giving six
//! specific locations. Five general locations group them by side or shelf.
//! Every object belongs to exactly one [`Category`] and carries a (possibly
//! empty) set of attribute tags drawn from its category's vocabulary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Fruits,
    Vegetables,
    Condiments,
    DairyProducts,
    JuiceAndSoftDrinks,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Fruits,
        Category::Vegetables,
        Category::Condiments,
        Category::DairyProducts,
        Category::JuiceAndSoftDrinks,
    ];

    /// Plural noun used when rendering questions.
    pub fn noun(self) -> &'static str {
        match self {
            Category::Fruits => "fruits",
            Category::Vegetables => "vegetables",
            Category::Condiments => "condiments",
            Category::DairyProducts => "dairy products",
            Category::JuiceAndSoftDrinks => "juice and soft drinks",
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Category::Fruits => "fruits",
            Category::Vegetables => "vegetables",
            Category::Condiments => "condiments",
            Category::DairyProducts => "dairy-products",
            Category::JuiceAndSoftDrinks => "juice-and-soft-drinks",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shelf {
    Top,
    Middle,
    Bottom,
}

impl Shelf {
    pub const ALL: [Shelf; 3] = [Shelf::Top, Shelf::Middle, Shelf::Bottom];

    pub fn name(self) -> &'static str {
        match self {
            Shelf::Top => "top",
            Shelf::Middle => "middle",
            Shelf::Bottom => "bottom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// One of the six shelf halves. The derived ordering is the canonical
/// location order used for every deterministic tie-break.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpecificLocation {
    pub shelf: Shelf,
    pub side: Side,
}

impl SpecificLocation {
    pub const fn new(shelf: Shelf, side: Side) -> Self {
        Self { shelf, side }
    }

    pub const TOP_LEFT: Self = Self::new(Shelf::Top, Side::Left);
    pub const TOP_RIGHT: Self = Self::new(Shelf::Top, Side::Right);
    pub const MIDDLE_LEFT: Self = Self::new(Shelf::Middle, Side::Left);
    pub const MIDDLE_RIGHT: Self = Self::new(Shelf::Middle, Side::Right);
    pub const BOTTOM_LEFT: Self = Self::new(Shelf::Bottom, Side::Left);
    pub const BOTTOM_RIGHT: Self = Self::new(Shelf::Bottom, Side::Right);

    pub const ALL: [SpecificLocation; 6] = [
        Self::TOP_LEFT,
        Self::TOP_RIGHT,
        Self::MIDDLE_LEFT,
        Self::MIDDLE_RIGHT,
        Self::BOTTOM_LEFT,
        Self::BOTTOM_RIGHT,
    ];

    pub fn index(self) -> usize {
        let shelf = match self.shelf {
            Shelf::Top => 0,
            Shelf::Middle => 1,
            Shelf::Bottom => 2,
        };
        shelf * 2 + usize::from(self.side == Side::Right)
    }

    pub fn label(self) -> String {
        format!("{} side of {} shelf", self.side.name(), self.shelf.name())
    }

    pub fn shelf_label(shelf: Shelf) -> String {
        format!("{} shelf", shelf.name())
    }
}

impl fmt::Display for SpecificLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for SpecificLocation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpecificLocation::ALL
            .into_iter()
            .find(|loc| loc.label() == s.trim())
            .ok_or_else(|| Error::MalformedRequirement(format!("unknown specific location `{s}`")))
    }
}

impl Serialize for SpecificLocation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for SpecificLocation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GeneralLocation {
    #[serde(rename = "left side of fridge")]
    LeftSideOfFridge,
    #[serde(rename = "right side of fridge")]
    RightSideOfFridge,
    #[serde(rename = "top shelf")]
    TopShelf,
    #[serde(rename = "middle shelf")]
    MiddleShelf,
    #[serde(rename = "bottom shelf")]
    BottomShelf,
}

impl GeneralLocation {
    pub const ALL: [GeneralLocation; 5] = [
        GeneralLocation::LeftSideOfFridge,
        GeneralLocation::RightSideOfFridge,
        GeneralLocation::TopShelf,
        GeneralLocation::MiddleShelf,
        GeneralLocation::BottomShelf,
    ];

    pub fn label(self) -> &'static str {
        match self {
            GeneralLocation::LeftSideOfFridge => "left side of fridge",
            GeneralLocation::RightSideOfFridge => "right side of fridge",
            GeneralLocation::TopShelf => "top shelf",
            GeneralLocation::MiddleShelf => "middle shelf",
            GeneralLocation::BottomShelf => "bottom shelf",
        }
    }

    pub fn contains(self, loc: SpecificLocation) -> bool {
        match self {
            GeneralLocation::LeftSideOfFridge => loc.side == Side::Left,
            GeneralLocation::RightSideOfFridge => loc.side == Side::Right,
            GeneralLocation::TopShelf => loc.shelf == Shelf::Top,
            GeneralLocation::MiddleShelf => loc.shelf == Shelf::Middle,
            GeneralLocation::BottomShelf => loc.shelf == Shelf::Bottom,
        }
    }

    /// Member specific locations in canonical order.
    pub fn expand(self) -> Vec<SpecificLocation> {
        SpecificLocation::ALL
            .into_iter()
            .filter(|loc| self.contains(*loc))
            .collect()
    }
}

impl fmt::Display for GeneralLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub name: String,
    pub category: Category,
    #[serde(default)]
    pub attributes: BTreeSet<String>,
    /// Footprint along the shelf, in cm.
    pub width: f64,
}

impl ObjectSpec {
    pub fn has_attribute(&self, tag: &str) -> bool {
        self.attributes.contains(tag)
    }
}

/// Immutable object ontology. Cheap to share across threads by reference.
#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    vocabulary: BTreeMap<Category, BTreeSet<String>>,
    objects: Vec<ObjectSpec>,
    index: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CatalogDoc {
    schema_version: u32,
    attributes: BTreeMap<Category, BTreeSet<String>>,
    objects: Vec<ObjectSpec>,
}

impl Catalog {
    pub fn new(
        vocabulary: BTreeMap<Category, BTreeSet<String>>,
        objects: Vec<ObjectSpec>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, obj) in objects.iter().enumerate() {
            if !(obj.width > 0.0) || !obj.width.is_finite() {
                return Err(Error::InvalidCatalog(format!(
                    "object `{}` has non-positive width",
                    obj.name
                )));
            }
            if index.insert(obj.name.clone(), i).is_some() {
                return Err(Error::InvalidCatalog(format!(
                    "duplicate object `{}`",
                    obj.name
                )));
            }
            let vocab = vocabulary.get(&obj.category);
            for tag in &obj.attributes {
                if !vocab.is_some_and(|v| v.contains(tag)) {
                    return Err(Error::InvalidCatalog(format!(
                        "attribute `{tag}` of `{}` is not in the {} vocabulary",
                        obj.name, obj.category
                    )));
                }
            }
        }
        Ok(Self {
            vocabulary,
            objects,
            index,
        })
    }

    pub fn lookup(&self, name: &str) -> Result<&ObjectSpec> {
        self.index
            .get(name)
            .map(|&i| &self.objects[i])
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn category_of(&self, name: &str) -> Result<Category> {
        self.lookup(name).map(|o| o.category)
    }

    pub fn objects(&self) -> &[ObjectSpec] {
        &self.objects
    }

    pub fn objects_in(&self, category: Category) -> impl Iterator<Item = &ObjectSpec> {
        self.objects.iter().filter(move |o| o.category == category)
    }

    pub fn attribute_vocabulary(&self, category: Category) -> impl Iterator<Item = &str> {
        self.vocabulary
            .get(&category)
            .into_iter()
            .flat_map(|v| v.iter().map(String::as_str))
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = CatalogDoc {
            schema_version: CATALOG_SCHEMA_VERSION,
            attributes: self.vocabulary.clone(),
            objects: self.objects.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CatalogDoc = serde_json::from_str(text)?;
        if doc.schema_version != CATALOG_SCHEMA_VERSION {
            return Err(Error::InvalidCatalog(format!(
                "unsupported schema version {}",
                doc.schema_version
            )));
        }
        Self::new(doc.attributes, doc.objects)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

// (name, width, attributes)
type Row = (&'static str, f64, &'static [&'static str]);

const FRUITS: &[Row] = &[
    ("apple", 8.0, &[]),
    ("orange", 8.0, &[]),
    ("peach", 8.0, &[]),
    ("banana", 12.0, &[]),
    ("lemon", 6.0, &["small"]),
    ("grapes", 10.0, &["small"]),
    ("pineapple", 15.0, &["big"]),
    ("cantaloupe", 15.0, &["big"]),
];

const VEGETABLES: &[Row] = &[
    ("cucumber", 8.0, &[]),
    ("bell pepper", 10.0, &[]),
    ("broccoli", 12.0, &[]),
    ("corn", 10.0, &[]),
    ("carrot", 6.0, &["root"]),
    ("potato", 8.0, &["root"]),
    ("spinach", 10.0, &["leafy"]),
    ("lettuce", 15.0, &["leafy"]),
];

const CONDIMENTS: &[Row] = &[
    ("relish", 6.0, &[]),
    ("hot sauce", 6.0, &[]),
    ("pickles", 10.0, &[]),
    ("salsa", 10.0, &[]),
    ("ketchup", 8.0, &["sauce"]),
    ("mustard", 6.0, &["sauce"]),
    ("mayonnaise", 8.0, &["spread"]),
    ("jam", 8.0, &["spread"]),
];

const DAIRY: &[Row] = &[
    ("yogurt", 8.0, &[]),
    ("butter", 8.0, &[]),
    ("sour cream", 8.0, &[]),
    ("kefir", 10.0, &[]),
    ("cheese", 10.0, &["cheese"]),
    ("cream cheese", 8.0, &["cheese"]),
    ("whole milk", 12.0, &["milk"]),
    ("oat milk", 12.0, &["milk"]),
];

const DRINKS: &[Row] = &[
    ("lemonade", 10.0, &[]),
    ("iced tea", 10.0, &[]),
    ("sparkling water", 8.0, &[]),
    ("coconut water", 8.0, &[]),
    ("coke", 8.0, &["soft-drink"]),
    ("sprite", 8.0, &["soft-drink"]),
    ("orange juice", 12.0, &["juice"]),
    ("apple juice", 12.0, &["juice"]),
];

impl Default for Catalog {
    /// The built-in catalog: eight objects per category, four of them
    /// attribute-bearing, widths from {6, 8, 10, 12, 15} cm.
    fn default() -> Self {
        let tables: [(Category, &[Row], &[&str]); 5] = [
            (Category::Fruits, FRUITS, &["big", "small"]),
            (Category::Vegetables, VEGETABLES, &["leafy", "root"]),
            (Category::Condiments, CONDIMENTS, &["sauce", "spread"]),
            (Category::DairyProducts, DAIRY, &["cheese", "milk"]),
            (Category::JuiceAndSoftDrinks, DRINKS, &["juice", "soft-drink"]),
        ];
        let mut vocabulary = BTreeMap::new();
        let mut objects = Vec::new();
        for (category, rows, vocab) in tables {
            vocabulary.insert(category, vocab.iter().map(|s| s.to_string()).collect());
            objects.extend(rows.iter().map(|&(name, width, attrs)| ObjectSpec {
                name: name.to_string(),
                category,
                attributes: attrs.iter().map(|s| s.to_string()).collect(),
                width,
            }));
        }
        Catalog::new(vocabulary, objects).expect("built-in catalog is valid")
    }
}
