//! Terminal front-end for the query loop, JSONL event transcripts and replay.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::belief::{best_plan, run_loop, ActiveLearningResult, BeliefState, Event, EventSink, LearnerConfig, QueryPolicy};
use crate::benchgen::TestCase;
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::oracle::{propose_candidates, question_pool, Answer, AnswerModel, ProposalConfig, Question, User};
use crate::planner::{plan_with_refinement, PlannerConfig};

/// Reads y/n answers from `input`, prompting on `output`.
pub struct TerminalUser<R, W> {
    input: R,
    output: W,
    asked: usize,
}

impl<R: BufRead, W: Write> TerminalUser<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Self { input, output, asked: 0 }
    }
}

fn parse_answer(line: &str) -> Option<Answer> {
    match line.trim().to_ascii_lowercase().as_str() {
        "y" | "yes" => Some(Answer::Yes),
        "n" | "no" => Some(Answer::No),
        _ => None,
    }
}

impl<R: BufRead, W: Write> User for TerminalUser<R, W> {
    fn answer(&mut self, q: &Question) -> Result<Answer> {
        loop {
            write!(self.output, "{} [y/n] ", q.text)?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                writeln!(self.output)?;
                return Err(Error::InputAbort { asked: self.asked });
            }
            if let Some(a) = parse_answer(&line) {
                self.asked += 1;
                return Ok(a);
            }
            writeln!(self.output, "please answer y or n")?;
        }
    }
}

/// Writes one JSON event per line, flushing after each.
pub struct JsonlSink<W> {
    out: W,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> EventSink for JsonlSink<W> {
    fn emit(&mut self, event: &Event) -> Result<()> {
        serde_json::to_writer(&mut self.out, event)?;
        self.out.write_all(b"\n")?;
        self.out.flush()?;
        Ok(())
    }
}

/// Copies events to two sinks.
pub struct Tee<'a>(pub &'a mut dyn EventSink, pub &'a mut dyn EventSink);

impl EventSink for Tee<'_> {
    fn emit(&mut self, event: &Event) -> Result<()> {
        self.0.emit(event)?;
        self.1.emit(event)
    }
}

pub fn read_events(text: &str) -> Result<Vec<Event>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplaySummary {
    pub candidates: usize,
    pub exchanges: Vec<(Question, Answer)>,
    /// Final posterior; equals the prior when nothing was asked.
    pub probs: Vec<f64>,
    /// `None` when the transcript stops before termination.
    pub chosen: Option<usize>,
    pub complete: bool,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedScript(msg.into())
}

/// Checks event order (propose, then question/answer/update triples, then an
/// optional terminate) and that the recorded choice is the best plan under
/// the final posterior. Truncated transcripts from aborted sessions replay
/// as incomplete.
pub fn replay(events: &[Event]) -> Result<ReplaySummary> {
    let mut it = events.iter().peekable();
    let Some(Event::Propose { candidates, probs, rewards, .. }) = it.next() else {
        return Err(malformed("transcript must start with a propose event"));
    };
    let mut probs = probs.clone();
    let mut exchanges = Vec::new();
    loop {
        match it.next() {
            None => {
                return Ok(ReplaySummary {
                    candidates: candidates.len(),
                    exchanges,
                    probs,
                    chosen: None,
                    complete: false,
                })
            }
            Some(Event::Question { index, question }) => {
                if *index != exchanges.len() {
                    return Err(malformed(format!("question index {index}, expected {}", exchanges.len())));
                }
                let answer = match it.next() {
                    Some(Event::Answer { answer }) => *answer,
                    None => {
                        return Ok(ReplaySummary {
                            candidates: candidates.len(),
                            exchanges,
                            probs,
                            chosen: None,
                            complete: false,
                        })
                    }
                    Some(e) => return Err(malformed(format!("expected answer, found {e:?}"))),
                };
                match it.next() {
                    Some(Event::Update { probs: p }) => {
                        if p.len() != candidates.len() || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                            return Err(malformed("update is not a distribution over the candidates"));
                        }
                        probs = p.clone();
                    }
                    other => return Err(malformed(format!("expected update, found {other:?}"))),
                }
                exchanges.push((question.clone(), answer));
            }
            Some(Event::Terminate { chosen, queries, .. }) => {
                if *queries != exchanges.len() {
                    return Err(malformed(format!("{queries} queries recorded, {} asked", exchanges.len())));
                }
                let (best, _) = best_plan(&probs, rewards);
                if best != *chosen {
                    return Err(malformed(format!("chose {chosen}, best plan is {best}")));
                }
                if it.next().is_some() {
                    return Err(malformed("events after terminate"));
                }
                return Ok(ReplaySummary {
                    candidates: candidates.len(),
                    exchanges,
                    probs,
                    chosen: Some(*chosen),
                    complete: true,
                });
            }
            Some(e) => return Err(malformed(format!("unexpected event {e:?}"))),
        }
    }
}

/// Query loop against a person. Candidates come from the case's
/// demonstrations alone; the stored ground truth is not used.
pub fn interactive_session(
    case: &TestCase,
    learner: &LearnerConfig,
    planner: &PlannerConfig,
    seed: u64,
    user: &mut dyn User,
    sink: &mut dyn EventSink,
    catalog: &Catalog,
) -> Result<ActiveLearningResult> {
    learner.validate()?;
    let universe = case.universe(catalog)?;
    let cfg = ProposalConfig {
        n: learner.n,
        include_truth: false,
        seed,
    };
    let proposal = propose_candidates(&case.demos, &universe, None, &cfg, catalog)?;
    let plans = proposal
        .candidates
        .iter()
        .map(|c| plan_with_refinement(&case.scenario.initial, &case.scenario.task, c, planner, catalog).map(|o| o.plan))
        .collect::<Result<Vec<_>>>()?;
    let pool = question_pool(&proposal.candidates, learner.m)?;
    let belief = BeliefState::new(proposal.candidates, plans, pool, catalog)?;
    let model = AnswerModel::new(learner.eta)?;
    run_loop(belief, learner, QueryPolicy::InfoGain, &model, user, sink)
}
