//! Exact stand-ins for the language-model roles: candidate proposal from
//! demonstrations, pairwise question generation, and the answer model used
//! both as likelihood and as the simulated user.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Category, GeneralLocation, SpecificLocation};
use crate::error::{Error, Result};
use crate::preference::{Preference, Requirement, RequirementKind, MAX_CONDITIONAL_CAPACITY};
use crate::reward::{requirement_consistent, Demonstration, Plan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn flip(self) -> Self {
        match self {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
        })
    }
}

/// A yes/no question asserting one requirement for one category.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Question {
    pub category: Category,
    pub asserted: Requirement,
    pub text: String,
}

impl Question {
    pub fn new(category: Category, asserted: &Requirement) -> Result<Self> {
        let asserted = asserted.canonicalize(category)?;
        let text = format!("Do you prefer {}?", asserted.describe(category));
        Ok(Self {
            category,
            asserted,
            text,
        })
    }

    fn key(&self) -> (Category, &Requirement) {
        (self.category, &self.asserted)
    }
}

/// Every requirement of the grammar for `category`, in a fixed order.
pub fn enumerate_requirements(category: Category, catalog: &Catalog) -> Vec<Requirement> {
    let locs = SpecificLocation::ALL;
    let mut out: Vec<Requirement> = locs
        .iter()
        .map(|&location| Requirement::Specific { location })
        .collect();
    out.extend(
        GeneralLocation::ALL
            .iter()
            .map(|&location| Requirement::General { location }),
    );
    out.push(Requirement::Together);
    out.extend(
        Category::ALL
            .iter()
            .filter(|&&c| c != category)
            .map(|&other| Requirement::SameShelfAs { other }),
    );
    for attribute in catalog.attribute_vocabulary(category) {
        for &base in &locs {
            for &exception in locs.iter().filter(|&&l| l != base) {
                out.push(Requirement::Exception {
                    base,
                    attribute: attribute.to_string(),
                    exception,
                });
            }
        }
    }
    for capacity in 1..=MAX_CONDITIONAL_CAPACITY {
        for &primary in &locs {
            for &fallback in locs.iter().filter(|&&l| l != primary) {
                out.push(Requirement::Conditional {
                    primary,
                    capacity,
                    fallback,
                });
            }
        }
    }
    out
}

/// Per-category requirements consistent with every demonstration.
pub fn consistent_requirements(
    demos: &[Demonstration],
    universe: &BTreeSet<Category>,
    catalog: &Catalog,
) -> Result<BTreeMap<Category, Vec<Requirement>>> {
    let plans = demos.iter().map(Demonstration::to_plan).collect::<Result<Vec<Plan>>>()?;
    Ok(universe
        .iter()
        .map(|&c| {
            let reqs = enumerate_requirements(c, catalog)
                .into_iter()
                .filter(|r| requirement_consistent(r, c, &plans, catalog))
                .collect();
            (c, reqs)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProposalConfig {
    pub n: usize,
    pub include_truth: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Proposal {
    pub candidates: Vec<Preference>,
    /// Prior sampling weight of each candidate under the diversity sampler's
    /// first draw. Used by the non-interactive baseline.
    pub weights: Vec<f64>,
    /// Index of the inserted or already-present ground truth.
    pub truth_index: Option<usize>,
}

const SAMPLE_ATTEMPTS: usize = 500;

fn kind_groups(reqs: &[Requirement]) -> BTreeMap<RequirementKind, Vec<&Requirement>> {
    let mut groups: BTreeMap<RequirementKind, Vec<&Requirement>> = BTreeMap::new();
    for r in reqs {
        groups.entry(r.kind()).or_default().push(r);
    }
    groups
}

fn first_draw_weight(p: &Preference, consistent: &BTreeMap<Category, Vec<Requirement>>) -> f64 {
    p.iter()
        .map(|(c, r)| {
            let groups = kind_groups(&consistent[&c]);
            match groups.get(&r.kind()) {
                Some(g) if g.contains(&r) => 1.0 / (groups.len() as f64 * g.len() as f64),
                _ => 0.0,
            }
        })
        .product()
}

/// Samples `n` distinct demo-consistent preferences over `universe`. Each
/// category picks a requirement kind with weight 1/(1 + times that kind was
/// already chosen for the category), then a member of the kind uniformly.
pub fn propose_candidates(
    demos: &[Demonstration],
    universe: &BTreeSet<Category>,
    truth: Option<&Preference>,
    cfg: &ProposalConfig,
    catalog: &Catalog,
) -> Result<Proposal> {
    if demos.is_empty() {
        return Err(Error::InvalidDemonstration("no demonstrations".into()));
    }
    if cfg.n == 0 {
        return Err(Error::InvalidConfig("candidate count must be positive".into()));
    }
    let consistent = consistent_requirements(demos, universe, catalog)?;
    let distinct: f64 = consistent.values().map(|v| v.len() as f64).product();
    if distinct < cfg.n as f64 {
        return Err(Error::InsufficientCandidates {
            found: distinct as usize,
            needed: cfg.n,
        });
    }
    let groups: BTreeMap<Category, BTreeMap<RequirementKind, Vec<&Requirement>>> =
        consistent.iter().map(|(c, v)| (*c, kind_groups(v))).collect();

    let mut rng = crate::rng(cfg.seed);
    let mut chosen: Vec<Preference> = Vec::with_capacity(cfg.n);
    let mut seen = HashSet::new();
    let mut freq: BTreeMap<(Category, RequirementKind), usize> = BTreeMap::new();
    while chosen.len() < cfg.n {
        let mut accepted = None;
        for _ in 0..SAMPLE_ATTEMPTS {
            let mut reqs = Vec::with_capacity(groups.len());
            for (&c, kinds) in &groups {
                let options: Vec<(&RequirementKind, &Vec<&Requirement>)> = kinds.iter().collect();
                let weights: Vec<f64> = options
                    .iter()
                    .map(|(k, _)| 1.0 / (1.0 + *freq.get(&(c, **k)).unwrap_or(&0) as f64))
                    .collect();
                let total: f64 = weights.iter().sum();
                let mut u = rng.gen::<f64>() * total;
                let mut pick = options.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    if u < *w {
                        pick = i;
                        break;
                    }
                    u -= w;
                }
                let members = options[pick].1;
                reqs.push((c, (*members.choose(&mut rng).expect("kind groups are nonempty")).clone()));
            }
            let p = Preference::new(reqs)?;
            if seen.insert(p.clone()) {
                accepted = Some(p);
                break;
            }
        }
        let p = accepted.ok_or(Error::InsufficientCandidates {
            found: chosen.len(),
            needed: cfg.n,
        })?;
        for (c, r) in p.iter() {
            *freq.entry((c, r.kind())).or_default() += 1;
        }
        chosen.push(p);
    }

    let mut truth_index = None;
    if cfg.include_truth {
        let truth = truth
            .ok_or_else(|| Error::InvalidConfig("ground truth required in include mode".into()))?
            .restricted_to(universe)
            .canonicalize()?;
        truth_index = Some(match chosen.iter().position(|p| *p == truth) {
            Some(i) => i,
            None => {
                let i = rng.gen_range(0..cfg.n);
                chosen[i] = truth;
                i
            }
        });
    }
    let weights = chosen.iter().map(|p| first_draw_weight(p, &consistent)).collect();
    Ok(Proposal {
        candidates: chosen,
        weights,
        truth_index,
    })
}

/// Up to `m` questions about the first categories where the two preferences
/// disagree, asserting each side's requirement in turn.
pub fn generate_questions(a: &Preference, b: &Preference, m: usize) -> Result<Vec<Question>> {
    if a == b {
        return Err(Error::IdenticalPreferences);
    }
    let mut out = Vec::new();
    for c in Category::ALL {
        let (ra, rb) = (a.get(c).ok(), b.get(c).ok());
        if ra == rb {
            continue;
        }
        for r in [ra, rb].into_iter().flatten() {
            out.push(Question::new(c, r)?);
        }
    }
    out.truncate(m);
    Ok(out)
}

/// Questions over all candidate pairs (i < j, lexicographic), deduplicated.
pub fn question_pool(candidates: &[Preference], m: usize) -> Result<Vec<Question>> {
    let mut pool: Vec<Question> = Vec::new();
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            if candidates[i] == candidates[j] {
                continue;
            }
            for q in generate_questions(&candidates[i], &candidates[j], m)? {
                if !pool.iter().any(|p| p.key() == q.key()) {
                    pool.push(q);
                }
            }
        }
    }
    Ok(pool)
}

pub fn deterministic_answer(q: &Question, theta: &Preference) -> Result<Answer> {
    let held = theta.get(q.category)?.canonicalize(q.category)?;
    Ok(if held == q.asserted { Answer::Yes } else { Answer::No })
}

/// P(answer | question, preference).
pub trait Likelihood: Sync {
    fn likelihood(&self, answer: Answer, q: &Question, theta: &Preference) -> Result<f64>;

    /// True when likelihoods are exact indicators.
    fn noiseless(&self) -> bool;
}

/// Symmetric answer-error model: the deterministic answer with probability
/// 1 - eta. Equivalent to a logistic link with logit gap ln((1 - eta)/eta).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnswerModel {
    eta: f64,
}

impl AnswerModel {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&eta) {
            return Err(Error::InvalidAnswerModel(eta));
        }
        Ok(Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// None in the noiseless limit.
    pub fn logit_gap(&self) -> Option<f64> {
        (self.eta > 0.0).then(|| ((1.0 - self.eta) / self.eta).ln())
    }

    pub fn p_correct(&self) -> f64 {
        match self.logit_gap() {
            Some(l) => 1.0 / (1.0 + (-l).exp()),
            None => 1.0,
        }
    }
}

impl Likelihood for AnswerModel {
    fn likelihood(&self, answer: Answer, q: &Question, theta: &Preference) -> Result<f64> {
        let p = self.p_correct();
        Ok(if deterministic_answer(q, theta)? == answer { p } else { 1.0 - p })
    }

    fn noiseless(&self) -> bool {
        self.eta == 0.0
    }
}

/// Source of answers to questions.
pub trait User {
    fn answer(&mut self, q: &Question) -> Result<Answer>;
}

/// Answers from a hidden preference, flipped with probability eta.
pub struct SimulatedUser {
    truth: Preference,
    model: AnswerModel,
    rng: ChaCha8Rng,
}

impl SimulatedUser {
    pub fn new(truth: Preference, model: AnswerModel, seed: u64) -> Self {
        Self {
            truth,
            model,
            rng: crate::rng(seed),
        }
    }
}

impl User for SimulatedUser {
    fn answer(&mut self, q: &Question) -> Result<Answer> {
        let exact = deterministic_answer(q, &self.truth)?;
        Ok(if self.model.eta() > 0.0 && self.rng.gen_bool(self.model.eta()) {
            exact.flip()
        } else {
            exact
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Shelf;
    use crate::world::{FridgeState, Placement};

    fn spec(l: SpecificLocation) -> Requirement {
        Requirement::Specific { location: l }
    }

    fn pref(pairs: &[(Category, Requirement)]) -> Preference {
        Preference::new(pairs.iter().cloned()).unwrap()
    }

    #[test]
    fn grammar_size_per_category() {
        let cat = Catalog::default();
        for c in Category::ALL {
            let all = enumerate_requirements(c, &cat);
            assert_eq!(all.len(), 6 + 5 + 1 + 4 + 60 + 90);
            let unique: HashSet<_> = all.iter().collect();
            assert_eq!(unique.len(), all.len());
            assert!(all.iter().all(|r| r.canonicalize(c).ok().as_ref() == Some(r)));
        }
    }

    fn fruit_demo(cat: &Catalog) -> Demonstration {
        let before = FridgeState::default()
            .apply(Placement::new(cat, "yogurt", Shelf::Middle, 40.0).unwrap())
            .unwrap();
        let mut after = before.clone();
        for (o, x) in [("apple", 5.0), ("orange", 15.0)] {
            after = after.apply(Placement::new(cat, o, Shelf::Top, x).unwrap()).unwrap();
        }
        Demonstration {
            before,
            after,
            put_away: vec!["apple".into(), "orange".into()],
        }
    }

    #[test]
    fn fruit_demo_admits_specific_and_two_generals() {
        let cat = Catalog::default();
        let got = consistent_requirements(&[fruit_demo(&cat)], &BTreeSet::from([Category::Fruits]), &cat).unwrap();
        let fruits = &got[&Category::Fruits];
        for r in [
            spec(SpecificLocation::TOP_LEFT),
            Requirement::General {
                location: GeneralLocation::TopShelf,
            },
            Requirement::General {
                location: GeneralLocation::LeftSideOfFridge,
            },
        ] {
            assert!(fruits.contains(&r), "{r:?}");
        }
        assert!(!fruits.contains(&spec(SpecificLocation::TOP_RIGHT)));
    }

    #[test]
    fn proposals_are_consistent_distinct_and_seeded() {
        let cat = Catalog::default();
        let demos = [fruit_demo(&cat)];
        let universe = BTreeSet::from([Category::Fruits, Category::DairyProducts]);
        let truth = pref(&[
            (Category::Fruits, spec(SpecificLocation::TOP_LEFT)),
            (Category::DairyProducts, spec(SpecificLocation::MIDDLE_RIGHT)),
        ]);
        let cfg = ProposalConfig {
            n: 5,
            include_truth: true,
            seed: 3,
        };
        let a = propose_candidates(&demos, &universe, Some(&truth), &cfg, &cat).unwrap();
        let b = propose_candidates(&demos, &universe, Some(&truth), &cfg, &cat).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.candidates[a.truth_index.unwrap()], truth);
        let distinct: HashSet<_> = a.candidates.iter().collect();
        assert_eq!(distinct.len(), 5);
        for p in &a.candidates {
            assert!(crate::reward::consistent_with_demos(p, &demos, &cat));
        }
    }

    #[test]
    fn too_few_candidates_is_reported() {
        let cat = Catalog::default();
        let demos = [fruit_demo(&cat)];
        let universe = BTreeSet::from([Category::Fruits]);
        let n = consistent_requirements(&demos, &universe, &cat).unwrap()[&Category::Fruits].len();
        let cfg = ProposalConfig {
            n: n + 1,
            include_truth: false,
            seed: 0,
        };
        assert!(matches!(
            propose_candidates(&demos, &universe, None, &cfg, &cat),
            Err(Error::InsufficientCandidates { .. })
        ));
    }

    #[test]
    fn questions_follow_first_disagreement() {
        let a = pref(&[
            (Category::Fruits, spec(SpecificLocation::TOP_LEFT)),
            (Category::Vegetables, Requirement::Together),
        ]);
        let b = pref(&[
            (
                Category::Fruits,
                Requirement::General {
                    location: GeneralLocation::TopShelf,
                },
            ),
            (Category::Vegetables, spec(SpecificLocation::BOTTOM_LEFT)),
        ]);
        let qs = generate_questions(&a, &b, 2).unwrap();
        assert_eq!(qs.len(), 2);
        assert_eq!(qs[0].asserted, spec(SpecificLocation::TOP_LEFT));
        assert_eq!(deterministic_answer(&qs[0], &a).unwrap(), Answer::Yes);
        assert_eq!(deterministic_answer(&qs[0], &b).unwrap(), Answer::No);
        assert_eq!(deterministic_answer(&qs[1], &b).unwrap(), Answer::Yes);
        assert_eq!(qs[0].text, "Do you prefer fruits on the left side of top shelf?");
        assert!(matches!(generate_questions(&a, &a, 2), Err(Error::IdenticalPreferences)));
    }

    #[test]
    fn answers_use_exact_equality() {
        let general = pref(&[(
            Category::Fruits,
            Requirement::General {
                location: GeneralLocation::LeftSideOfFridge,
            },
        )]);
        let specific = pref(&[(Category::Fruits, spec(SpecificLocation::TOP_LEFT))]);
        let q_spec = Question::new(Category::Fruits, &spec(SpecificLocation::TOP_LEFT)).unwrap();
        let q_gen = Question::new(Category::Fruits, general.get(Category::Fruits).unwrap()).unwrap();
        assert_eq!(deterministic_answer(&q_spec, &general).unwrap(), Answer::No);
        assert_eq!(deterministic_answer(&q_gen, &specific).unwrap(), Answer::No);
        let together = pref(&[(Category::Fruits, Requirement::Together)]);
        let q = Question::new(Category::Fruits, &Requirement::Together).unwrap();
        assert_eq!(deterministic_answer(&q, &together).unwrap(), Answer::Yes);
        let q_dairy = Question::new(Category::DairyProducts, &Requirement::Together).unwrap();
        assert!(matches!(
            deterministic_answer(&q_dairy, &together),
            Err(Error::UncoveredCategory(Category::DairyProducts))
        ));
    }

    #[test]
    fn answer_model_values() {
        assert!(AnswerModel::new(0.5).is_err());
        assert!(AnswerModel::new(-0.1).is_err());
        let m = AnswerModel::new(0.1).unwrap();
        assert!((m.logit_gap().unwrap() - 9f64.ln()).abs() < 1e-12);
        let theta = pref(&[(Category::Fruits, Requirement::Together)]);
        let q = Question::new(Category::Fruits, &Requirement::Together).unwrap();
        assert!((m.likelihood(Answer::Yes, &q, &theta).unwrap() - 0.9).abs() < 1e-12);
        assert!((m.likelihood(Answer::No, &q, &theta).unwrap() - 0.1).abs() < 1e-12);
        let exact = AnswerModel::new(0.0).unwrap();
        assert_eq!(exact.likelihood(Answer::Yes, &q, &theta).unwrap(), 1.0);
        assert_eq!(exact.likelihood(Answer::No, &q, &theta).unwrap(), 0.0);
    }

    #[test]
    fn simulated_flip_rate_matches_eta() {
        let theta = pref(&[(Category::Fruits, Requirement::Together)]);
        let q = Question::new(Category::Fruits, &Requirement::Together).unwrap();
        let mut user = SimulatedUser::new(theta.clone(), AnswerModel::new(0.1).unwrap(), 11);
        let flips = (0..10_000)
            .filter(|_| user.answer(&q).unwrap() == Answer::No)
            .count();
        let rate = flips as f64 / 1e4;
        assert!((rate - 0.1).abs() <= 0.02, "{rate}");
        let mut exact = SimulatedUser::new(theta, AnswerModel::new(0.0).unwrap(), 11);
        assert!((0..1000).all(|_| exact.answer(&q).unwrap() == Answer::Yes));
    }

    proptest::proptest! {
        #[test]
        fn pool_separates_every_pair(seed in 0u64..40) {
            let cat = Catalog::default();
            let demos = [fruit_demo(&cat)];
            let universe = BTreeSet::from([Category::Fruits, Category::Condiments]);
            let cfg = ProposalConfig { n: 5, include_truth: false, seed };
            let prop = propose_candidates(&demos, &universe, None, &cfg, &cat).unwrap();
            let pool = question_pool(&prop.candidates, 2).unwrap();
            proptest::prop_assert!(pool.len() <= 20);
            for i in 0..5 {
                for j in i + 1..5 {
                    let (a, b) = (&prop.candidates[i], &prop.candidates[j]);
                    let separated = pool.iter().any(|q| {
                        deterministic_answer(q, a).unwrap() != deterministic_answer(q, b).unwrap()
                    });
                    proptest::prop_assert!(separated);
                }
            }
        }
    }
}
