//! Belief over candidate preferences: entropy, expected disadvantage,
//! termination, information-gain question selection, and posterior updates,
//! plus the query loop that ties them together.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::oracle::{Answer, Likelihood, Question, User};
use crate::preference::Preference;
use crate::reward::{reward, Plan};

/// Floor applied to unnormalized posteriors under noisy answers.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LearnerConfig {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub eta: f64,
    pub max_questions: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            n: 5,
            m: 2,
            epsilon: 0.07,
            eta: 0.0,
            max_questions: 20,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.m < 1 {
            return Err(Error::InvalidConfig("n and m must be positive".into()));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::InvalidConfig(format!("epsilon {} must be >= 0", self.epsilon)));
        }
        if !(0.0..0.5).contains(&self.eta) {
            return Err(Error::InvalidAnswerModel(self.eta));
        }
        Ok(())
    }
}

pub fn entropy(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Reward lost by plan `j` under candidate `i` relative to the best library plan.
pub fn disadvantage(rewards: &[Vec<f64>], j: usize, i: usize) -> f64 {
    let best = rewards[i].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    best - rewards[i][j]
}

pub fn expected_disadvantage(probs: &[f64], rewards: &[Vec<f64>], j: usize) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(i, p)| p * disadvantage(rewards, j, i))
        .sum()
}

/// Plan with the least expected disadvantage; the lowest index wins ties.
pub fn best_plan(probs: &[f64], rewards: &[Vec<f64>]) -> (usize, f64) {
    let n = rewards.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| (j, expected_disadvantage(probs, rewards, j)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

pub fn should_terminate(probs: &[f64], rewards: &[Vec<f64>], epsilon: f64) -> Option<usize> {
    let (j, value) = best_plan(probs, rewards);
    (value <= epsilon).then_some(j)
}

fn likelihoods(
    answer: Answer,
    q: &Question,
    candidates: &[Preference],
    model: &dyn Likelihood,
) -> Result<Vec<f64>> {
    candidates
        .iter()
        .map(|c| model.likelihood(answer, q, c))
        .collect()
}

/// Normalized Bayes update. Noisy models floor each term at [`PROB_FLOOR`].
pub fn posterior(
    probs: &[f64],
    candidates: &[Preference],
    q: &Question,
    answer: Answer,
    model: &dyn Likelihood,
) -> Result<Vec<f64>> {
    let lik = likelihoods(answer, q, candidates, model)?;
    let mut next: Vec<f64> = probs.iter().zip(&lik).map(|(p, l)| p * l).collect();
    if !model.noiseless() {
        next.iter_mut().for_each(|v| *v = v.max(PROB_FLOOR));
    }
    let z: f64 = next.iter().sum();
    if !(z > 0.0) {
        return Err(Error::DegeneratePosterior);
    }
    next.iter_mut().for_each(|v| *v /= z);
    Ok(next)
}

/// H(P) minus the answer-weighted posterior entropy.
pub fn expected_info_gain(
    q: &Question,
    probs: &[f64],
    candidates: &[Preference],
    model: &dyn Likelihood,
) -> Result<f64> {
    let mut expected = 0.0;
    for answer in [Answer::Yes, Answer::No] {
        let lik = likelihoods(answer, q, candidates, model)?;
        let joint: Vec<f64> = probs.iter().zip(&lik).map(|(p, l)| p * l).collect();
        let p_answer: f64 = joint.iter().sum();
        if p_answer > 0.0 {
            let post: Vec<f64> = joint.iter().map(|v| v / p_answer).collect();
            expected += p_answer * entropy(&post);
        }
    }
    Ok(entropy(probs) - expected)
}

/// Index of the most informative question; the earliest wins ties.
pub fn select_question(
    pool: &[Question],
    probs: &[f64],
    candidates: &[Preference],
    model: &dyn Likelihood,
) -> Result<usize> {
    if pool.is_empty() {
        return Err(Error::EmptyQuestionSet);
    }
    let gains = pool
        .par_iter()
        .map(|q| expected_info_gain(q, probs, candidates, model))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (k, g) in gains.iter().enumerate() {
        if *g > gains[best] + 1e-12 {
            best = k;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BeliefState {
    pub candidates: Vec<Preference>,
    pub probs: Vec<f64>,
    pub plans: Vec<Plan>,
    /// `rewards[i][j]`: reward of plan j under candidate i.
    pub rewards: Vec<Vec<f64>>,
    pub pool: Vec<Question>,
    pub asked: Vec<Question>,
}

impl BeliefState {
    /// Uniform prior over `candidates`, with the reward matrix of `plans`.
    pub fn new(
        candidates: Vec<Preference>,
        plans: Vec<Plan>,
        pool: Vec<Question>,
        catalog: &Catalog,
    ) -> Result<Self> {
        if candidates.is_empty() || candidates.len() != plans.len() {
            return Err(Error::InvalidConfig(format!(
                "{} candidates with {} plans",
                candidates.len(),
                plans.len()
            )));
        }
        let rewards = candidates
            .par_iter()
            .map(|c| plans.iter().map(|p| reward(p, c, catalog)).collect::<Result<Vec<f64>>>())
            .collect::<Result<Vec<_>>>()?;
        let n = candidates.len();
        Ok(Self {
            candidates,
            probs: vec![1.0 / n as f64; n],
            plans,
            rewards,
            pool,
            asked: Vec::new(),
        })
    }

    pub fn should_terminate(&self, epsilon: f64) -> Option<usize> {
        should_terminate(&self.probs, &self.rewards, epsilon)
    }

    /// Conditions on `answer` to pool question `k` and retires the question.
    pub fn update(&mut self, k: usize, answer: Answer, model: &dyn Likelihood) -> Result<()> {
        let q = self.pool.get(k).ok_or(Error::EmptyQuestionSet)?;
        self.probs = posterior(&self.probs, &self.candidates, q, answer, model)?;
        let q = self.pool.remove(k);
        self.asked.push(q);
        Ok(())
    }
}

/// How the loop picks questions and when it may stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryPolicy {
    /// Most informative question; stop as soon as the threshold is met.
    InfoGain,
    /// Uniformly random question; same stopping rule.
    Random { seed: u64 },
    /// Ask every question in information-gain order before choosing.
    Exhaust,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Exchange {
    pub question: Question,
    pub answer: Answer,
    pub posterior: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "payload", rename_all = "lowercase")]
pub enum Event {
    Propose {
        candidates: Vec<Preference>,
        probs: Vec<f64>,
        rewards: Vec<Vec<f64>>,
        pool: usize,
    },
    Question {
        index: usize,
        question: Question,
    },
    Answer {
        answer: Answer,
    },
    Update {
        probs: Vec<f64>,
    },
    Terminate {
        chosen: usize,
        expected_disadvantage: f64,
        forced: bool,
        queries: usize,
    },
}

/// Receives loop events as they happen.
pub trait EventSink {
    fn emit(&mut self, event: &Event) -> Result<()>;
}

impl EventSink for Vec<Event> {
    fn emit(&mut self, event: &Event) -> Result<()> {
        self.push(event.clone());
        Ok(())
    }
}

/// Discards events.
pub struct NullSink;

impl EventSink for NullSink {
    fn emit(&mut self, _: &Event) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ActiveLearningResult {
    pub chosen_index: usize,
    pub chosen_plan: Plan,
    pub chosen_preference: Preference,
    pub query_count: usize,
    pub forced: bool,
    pub transcript: Vec<Exchange>,
    /// Posterior of every step, starting with the prior.
    pub prob_history: Vec<Vec<f64>>,
}

/// Query loop: ask until some plan's expected disadvantage is within
/// `epsilon`, or questions run out, then return that plan.
pub fn run_loop(
    mut belief: BeliefState,
    cfg: &LearnerConfig,
    policy: QueryPolicy,
    model: &dyn Likelihood,
    user: &mut dyn User,
    sink: &mut dyn EventSink,
) -> Result<ActiveLearningResult> {
    cfg.validate()?;
    sink.emit(&Event::Propose {
        candidates: belief.candidates.clone(),
        probs: belief.probs.clone(),
        rewards: belief.rewards.clone(),
        pool: belief.pool.len(),
    })?;
    let mut rng = match policy {
        QueryPolicy::Random { seed } => Some(crate::rng(seed)),
        _ => None,
    };
    let mut transcript = Vec::new();
    let mut history = vec![belief.probs.clone()];
    let (chosen, forced) = loop {
        if policy != QueryPolicy::Exhaust {
            if let Some(j) = belief.should_terminate(cfg.epsilon) {
                break (j, false);
            }
        }
        if belief.pool.is_empty() || transcript.len() >= cfg.max_questions {
            break (best_plan(&belief.probs, &belief.rewards).0, policy != QueryPolicy::Exhaust);
        }
        let k = match rng.as_mut() {
            Some(r) => r.gen_range(0..belief.pool.len()),
            None => select_question(&belief.pool, &belief.probs, &belief.candidates, model)?,
        };
        let question = belief.pool[k].clone();
        sink.emit(&Event::Question {
            index: transcript.len(),
            question: question.clone(),
        })?;
        let answer = user.answer(&question)?;
        sink.emit(&Event::Answer { answer })?;
        belief.update(k, answer, model)?;
        sink.emit(&Event::Update {
            probs: belief.probs.clone(),
        })?;
        history.push(belief.probs.clone());
        transcript.push(Exchange {
            question,
            answer,
            posterior: belief.probs.clone(),
        });
    };
    sink.emit(&Event::Terminate {
        chosen,
        expected_disadvantage: expected_disadvantage(&belief.probs, &belief.rewards, chosen),
        forced,
        queries: transcript.len(),
    })?;
    Ok(ActiveLearningResult {
        chosen_index: chosen,
        chosen_plan: belief.plans[chosen].clone(),
        chosen_preference: belief.candidates[chosen].clone(),
        query_count: transcript.len(),
        forced,
        transcript,
        prob_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Category, SpecificLocation};
    use crate::oracle::{deterministic_answer, AnswerModel, SimulatedUser};
    use crate::preference::Requirement;
    use crate::world::FridgeState;
    use proptest::prelude::{prop, prop_assert, proptest, Just, Strategy};

    fn fruit_at(l: SpecificLocation) -> Preference {
        Preference::new([(Category::Fruits, Requirement::Specific { location: l })]).unwrap()
    }

    fn five() -> Vec<Preference> {
        SpecificLocation::ALL[..5].iter().map(|&l| fruit_at(l)).collect()
    }

    fn binary_entropy(p: f64) -> f64 {
        -(p * p.ln() + (1.0 - p) * (1.0 - p).ln())
    }

    /// Mutual information sum_i p_i sum_o L ln(L / P(o)); independent of the
    /// mixture-entropy form used in the library.
    fn mutual_information(q: &Question, probs: &[f64], cands: &[Preference], m: &AnswerModel) -> f64 {
        let mut total = 0.0;
        for o in [Answer::Yes, Answer::No] {
            let p_o: f64 = probs
                .iter()
                .zip(cands)
                .map(|(p, c)| p * m.likelihood(o, q, c).unwrap())
                .sum();
            for (p, c) in probs.iter().zip(cands) {
                let l = m.likelihood(o, q, c).unwrap();
                if p * l > 0.0 {
                    total += p * l * (l / p_o).ln();
                }
            }
        }
        total
    }

    #[test]
    fn entropy_values() {
        assert!((entropy(&[0.2; 5]) - 5f64.ln()).abs() <= 1e-12);
        assert_eq!(entropy(&[1.0, 0.0, 0.0]), 0.0);
        assert!((entropy(&[0.5, 0.5, 0.0, 0.0, 0.0]) - 2f64.ln()).abs() <= 1e-12);
    }

    #[test]
    fn disadvantage_values() {
        let r = vec![vec![1.0, 0.6], vec![0.3, 0.3]];
        assert_eq!(disadvantage(&r, 0, 0), 0.0);
        assert!((disadvantage(&r, 1, 0) - 0.4).abs() < 1e-15);
        assert_eq!(disadvantage(&r, 0, 1), 0.0);
        assert_eq!(disadvantage(&r, 1, 1), 0.0);
    }

    #[test]
    fn confident_prior_terminates_on_favored_plan() {
        let mut r = vec![vec![1.0; 5]; 5];
        r[0] = vec![1.0, 0.0, 0.0, 0.0, 0.0];
        for (i, row) in r.iter_mut().enumerate().skip(1) {
            row[0] = 0.0;
            row[i] = 1.0;
        }
        let probs = [0.98, 0.005, 0.005, 0.005, 0.005];
        assert!(expected_disadvantage(&probs, &r, 0) <= 0.02 + 1e-15);
        assert_eq!(should_terminate(&probs, &r, 0.07), Some(0));
    }

    /// Uniform prior; every plan loses `d` under exactly one candidate.
    fn ring(d: f64) -> Vec<Vec<f64>> {
        (0..5)
            .map(|i| (0..5).map(|j| if j == (i + 1) % 5 { 1.0 - d } else { 1.0 }).collect())
            .collect()
    }

    #[test]
    fn threshold_boundary() {
        let uniform = [0.2; 5];
        assert_eq!(should_terminate(&uniform, &ring(0.35), 0.07), Some(0));
        assert_eq!(should_terminate(&uniform, &ring(0.36), 0.07), None);
        let dominant = vec![vec![1.0; 3]; 3];
        assert_eq!(should_terminate(&[0.2, 0.3, 0.5], &dominant, 0.0), Some(0));
    }

    #[test]
    fn info_gain_binary_channel() {
        let cands = vec![fruit_at(SpecificLocation::TOP_LEFT), fruit_at(SpecificLocation::TOP_RIGHT)];
        let q = Question::new(Category::Fruits, cands[0].get(Category::Fruits).unwrap()).unwrap();
        let exact = AnswerModel::new(0.0).unwrap();
        let ig = expected_info_gain(&q, &[0.5, 0.5], &cands, &exact).unwrap();
        assert!((ig - 2f64.ln()).abs() <= 1e-12);
        let noisy = AnswerModel::new(0.1).unwrap();
        let ig = expected_info_gain(&q, &[0.5, 0.5], &cands, &noisy).unwrap();
        assert!((ig - (2f64.ln() - binary_entropy(0.1))).abs() <= 1e-9);
        assert!((ig - 0.3680).abs() < 1e-4);
        let same = Question::new(Category::Fruits, &Requirement::Together).unwrap();
        assert!(expected_info_gain(&same, &[0.5, 0.5], &cands, &exact).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn selection_prefers_discriminating_question() {
        let cands = vec![fruit_at(SpecificLocation::TOP_LEFT), fruit_at(SpecificLocation::TOP_RIGHT)];
        let useless = Question::new(Category::Fruits, &Requirement::Together).unwrap();
        let useful = Question::new(Category::Fruits, cands[1].get(Category::Fruits).unwrap()).unwrap();
        let exact = AnswerModel::new(0.0).unwrap();
        let pool = vec![useless.clone(), useful.clone()];
        assert_eq!(select_question(&pool, &[0.5, 0.5], &cands, &exact).unwrap(), 1);
        assert_eq!(select_question(&[useless], &[0.5, 0.5], &cands, &exact).unwrap(), 0);
        assert!(matches!(
            select_question(&[], &[0.5, 0.5], &cands, &exact),
            Err(Error::EmptyQuestionSet)
        ));
    }

    #[test]
    fn hand_bayes_update() {
        struct Fixed;
        impl Likelihood for Fixed {
            fn likelihood(&self, a: Answer, _: &Question, t: &Preference) -> Result<f64> {
                let yes = if t.get(Category::Fruits)? == &(Requirement::Specific { location: SpecificLocation::TOP_LEFT }) { 0.9 } else { 0.1 };
                Ok(if a == Answer::Yes { yes } else { 1.0 - yes })
            }
            fn noiseless(&self) -> bool {
                false
            }
        }
        let cands = vec![fruit_at(SpecificLocation::TOP_LEFT), fruit_at(SpecificLocation::TOP_RIGHT)];
        let q = Question::new(Category::Fruits, &Requirement::Together).unwrap();
        let post = posterior(&[0.5, 0.5], &cands, &q, Answer::Yes, &Fixed).unwrap();
        assert!((post[0] - 0.9).abs() < 1e-12 && (post[1] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn noiseless_mismatch_zeroes_and_all_zero_is_degenerate() {
        let cands = vec![fruit_at(SpecificLocation::TOP_LEFT), fruit_at(SpecificLocation::TOP_RIGHT)];
        let q = Question::new(Category::Fruits, cands[0].get(Category::Fruits).unwrap()).unwrap();
        let exact = AnswerModel::new(0.0).unwrap();
        let post = posterior(&[0.5, 0.5], &cands, &q, Answer::Yes, &exact).unwrap();
        assert_eq!(post, vec![1.0, 0.0]);
        assert!(matches!(
            posterior(&[0.0, 1.0], &cands, &q, Answer::Yes, &exact),
            Err(Error::DegeneratePosterior)
        ));
        let uninformative = Question::new(Category::Fruits, &Requirement::Together).unwrap();
        let same = posterior(&[0.3, 0.7], &cands, &uninformative, Answer::No, &exact).unwrap();
        assert!((same[0] - 0.3).abs() < 1e-15);
    }

    fn loop_belief(truth_ix: usize) -> (BeliefState, Preference) {
        let cat = Catalog::default();
        let cands = five();
        let task = ["apple".to_string()];
        let plans = cands
            .iter()
            .map(|c| {
                crate::planner::plan_with_refinement(&FridgeState::default(), &task, c, &Default::default(), &cat)
                    .unwrap()
                    .plan
            })
            .collect();
        let pool = crate::oracle::question_pool(&cands, 2).unwrap();
        let truth = cands[truth_ix].clone();
        (BeliefState::new(cands, plans, pool, &cat).unwrap(), truth)
    }

    #[test]
    fn loop_isolates_truth_and_stays_in_budget() {
        for t in 0..5 {
            let (b, truth) = loop_belief(t);
            let model = AnswerModel::new(0.0).unwrap();
            let mut user = SimulatedUser::new(truth.clone(), model, 0);
            let mut events = Vec::new();
            let res = run_loop(b, &LearnerConfig::default(), QueryPolicy::InfoGain, &model, &mut user, &mut events).unwrap();
            assert_eq!(res.chosen_preference, truth);
            assert!(res.query_count <= 20);
            assert_eq!(res.query_count, res.transcript.len());
            for w in res.prob_history.windows(2) {
                assert!(w[1][t] >= w[0][t]);
            }
            assert!(matches!(events.first(), Some(Event::Propose { .. })));
            assert!(matches!(events.last(), Some(Event::Terminate { .. })));
        }
    }

    #[test]
    fn exhaust_policy_asks_everything() {
        let (b, truth) = loop_belief(2);
        let pool = b.pool.len();
        let model = AnswerModel::new(0.0).unwrap();
        let mut user = SimulatedUser::new(truth, model, 0);
        let res = run_loop(b, &LearnerConfig::default(), QueryPolicy::Exhaust, &model, &mut user, &mut NullSink).unwrap();
        assert_eq!(res.query_count, pool.min(20));
    }

    #[test]
    fn dominating_plan_needs_no_questions() {
        let cat = Catalog::default();
        let cands = five();
        let plan = Plan {
            initial_state: FridgeState::default(),
            actions: vec![],
            sacrificed: vec![],
        };
        let pool = crate::oracle::question_pool(&cands, 2).unwrap();
        let b = BeliefState::new(cands.clone(), vec![plan; 5], pool, &cat).unwrap();
        let model = AnswerModel::new(0.0).unwrap();
        let mut user = SimulatedUser::new(cands[0].clone(), model, 0);
        let res = run_loop(b, &LearnerConfig::default(), QueryPolicy::InfoGain, &model, &mut user, &mut NullSink).unwrap();
        assert_eq!(res.query_count, 0);
        assert_eq!(res.chosen_index, 0);
    }

    proptest! {
        #[test]
        fn info_gain_matches_mutual_information(
            raw in prop::collection::vec(0.001f64..1.0, 5),
            eta in 0.0f64..0.45,
            k in 0usize..5,
        ) {
            let z: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|v| v / z).collect();
            let cands = five();
            let q = Question::new(Category::Fruits, cands[k].get(Category::Fruits).unwrap()).unwrap();
            let m = AnswerModel::new(eta).unwrap();
            let ig = expected_info_gain(&q, &probs, &cands, &m).unwrap();
            prop_assert!(ig >= -1e-12);
            prop_assert!((ig - mutual_information(&q, &probs, &cands, &m)).abs() < 1e-9);
        }

        #[test]
        fn termination_is_sound(
            raw in prop::collection::vec(0.001f64..1.0, 4),
            cells in prop::collection::vec(0.0f64..=1.0, 16),
            eps in 0.0f64..0.5,
        ) {
            let z: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|v| v / z).collect();
            let r: Vec<Vec<f64>> = cells.chunks(4).map(|c| c.to_vec()).collect();
            match should_terminate(&probs, &r, eps) {
                Some(j) => prop_assert!(expected_disadvantage(&probs, &r, j) <= eps),
                None => prop_assert!((0..4).all(|j| expected_disadvantage(&probs, &r, j) > eps)),
            }
        }

        #[test]
        fn noiseless_truth_never_loses_mass(truth in 0usize..5, order in Just((0..20).collect::<Vec<usize>>()).prop_shuffle()) {
            let cands = five();
            let pool = crate::oracle::question_pool(&cands, 2).unwrap();
            let m = AnswerModel::new(0.0).unwrap();
            let mut probs = vec![0.2; 5];
            for &k in order.iter().filter(|&&k| k < pool.len()) {
                let a = deterministic_answer(&pool[k], &cands[truth]).unwrap();
                let next = posterior(&probs, &cands, &pool[k], a, &m).unwrap();
                prop_assert!(next[truth] >= probs[truth]);
                probs = next;
            }
        }
    }

    #[test]
    fn normalization_over_many_updates() {
        let cands = five();
        let pool = crate::oracle::question_pool(&cands, 2).unwrap();
        let m = AnswerModel::new(0.2).unwrap();
        let mut rng = crate::rng(5);
        let mut probs = vec![0.2; 5];
        for _ in 0..10_000 {
            let q = &pool[rng.gen_range(0..pool.len())];
            let a = if rng.gen_bool(0.5) { Answer::Yes } else { Answer::No };
            probs = posterior(&probs, &cands, q, a, &m).unwrap();
            assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            assert!(probs.iter().all(|&p| p >= 0.0));
        }
    }
}
