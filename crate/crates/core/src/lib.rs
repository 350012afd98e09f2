//! Preference learning and placement planning for a two-dimensional fridge:
//! structured preferences, a collision-checked world model, a beam-search
//! planner, a Bayesian question-asking loop, benchmark generation and an
//! evaluation harness.

// `!(x > 0.0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod belief;
pub mod benchgen;
pub mod catalog;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod planner;
pub mod preference;
pub mod reward;
pub mod world;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use belief::{ActiveLearningResult, BeliefState, LearnerConfig, QueryPolicy};
pub use catalog::{Catalog, Category, GeneralLocation, ObjectSpec, Shelf, Side, SpecificLocation};
pub use error::{Error, Result};
pub use oracle::{Answer, AnswerModel, Question};
pub use planner::{plan_with_refinement, PlannerConfig};
pub use preference::{Preference, Requirement};
pub use reward::{reward, Demonstration, Plan, PlanAction};
pub use world::{FridgeGeometry, FridgeState, Placement};

/// Seeded generator used for every random choice in the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream seed from a base seed and an index.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
