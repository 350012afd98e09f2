//! Shared inputs for the criterion benchmarks.

use tidyfridge_core::belief::BeliefState;
use tidyfridge_core::benchgen::{generate_case, Family, GenConfig, TestCase};
use tidyfridge_core::harness::{prepare, EvalConfig};
use tidyfridge_core::oracle::question_pool;
use tidyfridge_core::Catalog;

/// A generated case with two special categories.
pub fn sample_case(family: Family, seed: u64, catalog: &Catalog) -> TestCase {
    generate_case(0, family, 2, seed, &GenConfig::default(), catalog).expect("case generation")
}

/// Belief over the candidates proposed for `case`, with its question pool.
pub fn sample_belief(case: &TestCase, catalog: &Catalog) -> BeliefState {
    let cfg = EvalConfig::default();
    let prepared = prepare(case, &cfg, 0, catalog).expect("proposal");
    let pool = question_pool(&prepared.proposal.candidates, cfg.learner.m).expect("question pool");
    BeliefState::new(prepared.proposal.candidates, prepared.plans, pool, catalog).expect("belief")
}
