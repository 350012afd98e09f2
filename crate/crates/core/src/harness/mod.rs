//! End-to-end evaluation: one run per (case, approach, seed), metrics,
//! regret bound checks and aggregate reports.

pub mod fixtures;
pub mod interactive;
pub mod replan;
pub mod report;

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{run_loop, ActiveLearningResult, BeliefState, EventSink, LearnerConfig, NullSink, QueryPolicy};
use crate::benchgen::{certify, Family, TestCase};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::oracle::{propose_candidates, question_pool, AnswerModel, Proposal, ProposalConfig, SimulatedUser};
use crate::planner::{brute_force_optimal, plan_with_refinement, PlannerConfig, DEFAULT_GRID_STEP, MAX_EXHAUSTIVE_OBJECTS};
use crate::preference::Preference;
use crate::reward::{preference_equivalent, reward, satisfaction, Plan};
use crate::world::FridgeState;
use interactive::JsonlSink;

pub const RECORD_SCHEMA_VERSION: u32 = 1;

/// Slack for floating-point comparisons against the bound.
const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Approach {
    /// Information-gain questions until the termination threshold.
    Active,
    /// No questions; the candidate with the largest proposal weight.
    NonInteractive,
    /// Random questions with the same stopping rule.
    RandomQuestion,
    /// Every question in the pool, then the best plan.
    ExhaustQuestions,
}

impl Approach {
    pub const ALL: [Approach; 4] = [
        Approach::Active,
        Approach::NonInteractive,
        Approach::RandomQuestion,
        Approach::ExhaustQuestions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Approach::Active => "active",
            Approach::NonInteractive => "non-interactive",
            Approach::RandomQuestion => "random-question",
            Approach::ExhaustQuestions => "exhaust-questions",
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Approach {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Approach::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown approach `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalConfig {
    pub learner: LearnerConfig,
    pub planner: PlannerConfig,
    /// Put the ground truth among the candidates.
    pub include_truth: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            learner: LearnerConfig::default(),
            planner: PlannerConfig::default(),
            include_truth: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Metrics {
    pub preference_accurate: bool,
    pub queries: usize,
    /// Task objects with a collision-free placement, as a fraction.
    pub feasible_pct: f64,
    /// Task objects placed at a location satisfying the ground truth.
    pub pref_satisfied_pct: f64,
    /// Reward of the chosen plan under the ground truth.
    pub reward: f64,
    /// Best achievable reward, when measurable.
    pub optimum: Option<f64>,
    pub regret: Option<f64>,
    /// Planner shortfall under the ground truth.
    pub planner_gap: Option<f64>,
    pub bound_rhs: Option<f64>,
    pub truth_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunRecord {
    pub schema_version: u32,
    pub case_id: usize,
    pub family: Family,
    pub approach: Approach,
    pub seed: u64,
    pub eta: f64,
    pub epsilon: f64,
    pub n: usize,
    pub include_truth: bool,
    /// Candidates were repeated because too few distinct ones exist.
    pub padded: bool,
    pub result: Option<ActiveLearningResult>,
    pub metrics: Option<Metrics>,
    pub error: Option<String>,
}

impl RunRecord {
    pub fn accurate(&self) -> bool {
        self.metrics.as_ref().is_some_and(|m| m.preference_accurate)
    }

    pub fn queries(&self) -> Option<usize> {
        self.metrics.as_ref().map(|m| m.queries)
    }
}

/// Candidates, their plans and the question pool shared by all approaches.
pub struct Prepared {
    pub proposal: Proposal,
    pub plans: Vec<Plan>,
    pub padded: bool,
}

fn case_seed(seed: u64, case: &TestCase) -> u64 {
    crate::mix_seed(seed, case.id as u64)
}

/// Proposes candidates for a case, padding by repetition when fewer than
/// `n` distinct ones are consistent with the demonstrations.
pub fn prepare(case: &TestCase, cfg: &EvalConfig, seed: u64, catalog: &Catalog) -> Result<Prepared> {
    let universe = case.universe(catalog)?;
    let pcfg = ProposalConfig {
        n: cfg.learner.n,
        include_truth: cfg.include_truth,
        seed: crate::mix_seed(case_seed(seed, case), 0),
    };
    let truth = Some(&case.ground_truth);
    let (mut proposal, padded) = match propose_candidates(&case.demos, &universe, truth, &pcfg, catalog) {
        Err(Error::InsufficientCandidates { found, .. }) if found > 0 => {
            let smaller = ProposalConfig { n: found, ..pcfg };
            (propose_candidates(&case.demos, &universe, truth, &smaller, catalog)?, true)
        }
        other => (other?, false),
    };
    let distinct = proposal.candidates.len();
    for i in distinct..cfg.learner.n {
        proposal.candidates.push(proposal.candidates[i % distinct].clone());
        proposal.weights.push(proposal.weights[i % distinct]);
    }
    let plans = proposal
        .candidates
        .par_iter()
        .map(|c| plan_with_refinement(&case.scenario.initial, &case.scenario.task, c, &cfg.planner, catalog).map(|o| o.plan))
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared { proposal, plans, padded })
}

/// Index of the largest weight; the first wins ties.
pub fn non_interactive_choice(weights: &[f64]) -> usize {
    let mut best = 0;
    for (i, w) in weights.iter().enumerate() {
        if *w > weights[best] {
            best = i;
        }
    }
    best
}

/// Best reward achievable under `truth`: 1 when the planner certifies the
/// scenario, otherwise exhaustive search on small tasks.
pub fn optimum(
    initial: &FridgeState,
    task: &[String],
    truth: &Preference,
    planner: &PlannerConfig,
    catalog: &Catalog,
) -> Result<(Option<f64>, f64)> {
    let planned = plan_with_refinement(initial, task, truth, planner, catalog)?.plan;
    let planned_reward = reward(&planned, truth, catalog)?;
    let scenario = crate::benchgen::Scenario {
        initial: initial.clone(),
        task: task.to_vec(),
    };
    if certify(&scenario, truth, catalog)?.is_some() {
        return Ok((Some(1.0), planned_reward));
    }
    if task.len() > MAX_EXHAUSTIVE_OBJECTS {
        return Ok((None, planned_reward));
    }
    match brute_force_optimal(initial, task, truth, DEFAULT_GRID_STEP, catalog) {
        Ok(best) => Ok((Some(reward(&best, truth, catalog)?.max(planned_reward)), planned_reward)),
        Err(Error::NoFeasiblePlan) => Ok((None, planned_reward)),
        Err(e) => Err(e),
    }
}

/// Right-hand side of the regret bound.
pub fn bound_rhs(n: usize, epsilon: f64, planner_gap: f64) -> f64 {
    n as f64 * epsilon + planner_gap
}

pub fn within_bound(regret: f64, rhs: f64) -> bool {
    regret <= rhs + BOUND_TOLERANCE
}

fn metrics(case: &TestCase, result: &ActiveLearningResult, cfg: &EvalConfig, truth_index: Option<usize>, catalog: &Catalog) -> Result<Metrics> {
    let truth = &case.ground_truth;
    let plan = &result.chosen_plan;
    let task = case.scenario.task.len().max(1) as f64;
    let sat = satisfaction(plan, truth, catalog)?;
    let placed = plan.placed_count();
    let placed_ok = plan
        .actions
        .iter()
        .zip(&sat)
        .filter(|(a, s)| a.placement.is_some() && **s)
        .count();
    let chosen_reward = reward(plan, truth, catalog)?;
    let (optimum, planned) = optimum(&case.scenario.initial, &case.scenario.task, truth, &cfg.planner, catalog)?;
    let planner_gap = optimum.map(|o| (o - planned).max(0.0));
    Ok(Metrics {
        preference_accurate: preference_equivalent(&result.chosen_preference, plan, truth, catalog),
        queries: result.query_count,
        feasible_pct: placed as f64 / task,
        pref_satisfied_pct: placed_ok as f64 / task,
        reward: chosen_reward,
        optimum,
        regret: optimum.map(|o| o - chosen_reward),
        planner_gap,
        bound_rhs: planner_gap.map(|g| bound_rhs(cfg.learner.n, cfg.learner.epsilon, g)),
        truth_index,
    })
}

/// Runs one approach on one case with a simulated user answering from the
/// ground truth. Events go to `sink`.
pub fn run_approach(
    case: &TestCase,
    approach: Approach,
    cfg: &EvalConfig,
    seed: u64,
    catalog: &Catalog,
    sink: &mut dyn EventSink,
) -> Result<(ActiveLearningResult, Prepared)> {
    cfg.learner.validate()?;
    let prepared = prepare(case, cfg, seed, catalog)?;
    let stream = case_seed(seed, case);
    if approach == Approach::NonInteractive {
        let k = non_interactive_choice(&prepared.proposal.weights);
        let n = prepared.plans.len();
        let result = ActiveLearningResult {
            chosen_index: k,
            chosen_plan: prepared.plans[k].clone(),
            chosen_preference: prepared.proposal.candidates[k].clone(),
            query_count: 0,
            forced: false,
            transcript: Vec::new(),
            prob_history: vec![vec![1.0 / n as f64; n]],
        };
        return Ok((result, prepared));
    }
    let pool = question_pool(&prepared.proposal.candidates, cfg.learner.m)?;
    let belief = BeliefState::new(prepared.proposal.candidates.clone(), prepared.plans.clone(), pool, catalog)?;
    let model = AnswerModel::new(cfg.learner.eta)?;
    let mut user = SimulatedUser::new(case.ground_truth.clone(), model, crate::mix_seed(stream, 1));
    let policy = match approach {
        Approach::Active => QueryPolicy::InfoGain,
        Approach::RandomQuestion => QueryPolicy::Random {
            seed: crate::mix_seed(stream, 2),
        },
        Approach::ExhaustQuestions => QueryPolicy::Exhaust,
        Approach::NonInteractive => unreachable!("handled above"),
    };
    let result = run_loop(belief, &cfg.learner, policy, &model, &mut user, sink)?;
    Ok((result, prepared))
}

/// One evaluation record. Errors become failed records.
pub fn evaluate_case(case: &TestCase, approach: Approach, cfg: &EvalConfig, seed: u64, catalog: &Catalog) -> RunRecord {
    evaluate_case_with(case, approach, cfg, seed, catalog, &mut NullSink)
}

/// [`evaluate_case`] with loop events sent to `sink`.
pub fn evaluate_case_with(
    case: &TestCase,
    approach: Approach,
    cfg: &EvalConfig,
    seed: u64,
    catalog: &Catalog,
    sink: &mut dyn EventSink,
) -> RunRecord {
    let mut record = RunRecord {
        schema_version: RECORD_SCHEMA_VERSION,
        case_id: case.id,
        family: case.family,
        approach,
        seed,
        eta: cfg.learner.eta,
        epsilon: cfg.learner.epsilon,
        n: cfg.learner.n,
        include_truth: cfg.include_truth,
        padded: false,
        result: None,
        metrics: None,
        error: None,
    };
    let outcome = run_approach(case, approach, cfg, seed, catalog, sink).and_then(|(result, prepared)| {
        let m = metrics(case, &result, cfg, prepared.proposal.truth_index, catalog)?;
        Ok((result, prepared.padded, m))
    });
    match outcome {
        Ok((result, padded, m)) => {
            record.padded = padded;
            record.result = Some(result);
            record.metrics = Some(m);
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Every (seed, approach, case) combination, in that nesting order.
pub fn run_benchmark(
    cases: &[TestCase],
    approaches: &[Approach],
    cfg: &EvalConfig,
    seeds: &[u64],
    catalog: &Catalog,
) -> Vec<RunRecord> {
    let jobs: Vec<(u64, Approach, &TestCase)> = seeds
        .iter()
        .flat_map(|&s| approaches.iter().flat_map(move |&a| cases.iter().map(move |c| (s, a, c))))
        .collect();
    jobs.par_iter()
        .map(|&(s, a, c)| evaluate_case(c, a, cfg, s, catalog))
        .collect()
}

/// File name of a run's event transcript.
pub fn transcript_name(approach: Approach, seed: u64, case: &TestCase) -> String {
    format!("{}-s{seed}-case-{}.jsonl", approach.name(), case.name())
}

/// [`run_benchmark`] that also writes each run's events as JSONL into `dir`.
pub fn run_benchmark_logged(
    cases: &[TestCase],
    approaches: &[Approach],
    cfg: &EvalConfig,
    seeds: &[u64],
    catalog: &Catalog,
    dir: &Path,
) -> Result<Vec<RunRecord>> {
    std::fs::create_dir_all(dir)?;
    let jobs: Vec<(u64, Approach, &TestCase)> = seeds
        .iter()
        .flat_map(|&s| approaches.iter().flat_map(move |&a| cases.iter().map(move |c| (s, a, c))))
        .collect();
    jobs.par_iter()
        .map(|&(s, a, c)| {
            let file = File::create(dir.join(transcript_name(a, s, c)))?;
            let mut sink = JsonlSink::new(BufWriter::new(file));
            Ok(evaluate_case_with(c, a, cfg, s, catalog, &mut sink))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundViolation {
    pub case_id: usize,
    pub approach: Approach,
    pub regret: f64,
    pub bound_rhs: f64,
    pub result: ActiveLearningResult,
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case {} ({}): regret {:.4} exceeds bound {:.4} after {} questions",
            self.case_id, self.approach, self.regret, self.bound_rhs, self.result.query_count
        )?;
        for ex in &self.result.transcript {
            write!(f, "\n  {} -> {}", ex.question.text, ex.answer)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum BoundCheck {
    Pass,
    /// Not include-truth mode, no termination rule, a failed run, or no known optimum.
    NotApplicable { reason: String },
    Fail(Box<BoundViolation>),
}

impl BoundCheck {
    pub fn failed(&self) -> bool {
        matches!(self, BoundCheck::Fail(_))
    }
}

pub fn validate_bound(record: &RunRecord) -> BoundCheck {
    let na = |reason: &str| BoundCheck::NotApplicable { reason: reason.into() };
    if !record.include_truth {
        return na("ground truth not among candidates");
    }
    if record.approach == Approach::NonInteractive {
        return na("no termination rule");
    }
    let (Some(result), Some(m)) = (&record.result, &record.metrics) else {
        return na("run failed");
    };
    let (Some(regret), Some(rhs)) = (m.regret, m.bound_rhs) else {
        return na("optimum unmeasured");
    };
    if within_bound(regret, rhs) {
        BoundCheck::Pass
    } else {
        BoundCheck::Fail(Box::new(BoundViolation {
            case_id: record.case_id,
            approach: record.approach,
            regret,
            bound_rhs: rhs,
            result: result.clone(),
        }))
    }
}
