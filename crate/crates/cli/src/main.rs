use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use tidyfridge_core::belief::{EventSink, NullSink};
use tidyfridge_core::benchgen::{self, Family, GenConfig};
use tidyfridge_core::harness::interactive::{interactive_session, read_events, replay, JsonlSink, TerminalUser};
use tidyfridge_core::harness::replan::{scenario_replan, MutationScript};
use tidyfridge_core::harness::report::{render_csv, render_table, summarize};
use tidyfridge_core::harness::{self, validate_bound, Approach, BoundCheck, EvalConfig, RunRecord};
use tidyfridge_core::world::FridgeDoc;
use tidyfridge_core::{plan_with_refinement, Catalog, LearnerConfig, PlannerConfig, Preference};

const REQUEST_SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "tidyfridge", version, about = "Fridge preference learning benchmark")]
struct Cli {
    /// Object catalog JSON; the built-in catalog when omitted.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark dataset.
    Gen(GenArgs),
    /// Run approaches over a dataset and write one JSONL record per run.
    Run(RunArgs),
    /// Summarize a records file.
    Eval(EvalArgs),
    /// Plan a single placement request.
    Plan { request: PathBuf },
    /// Ask questions about a case and print the chosen preference and plan.
    Ask(AskArgs),
    /// Validate and summarize an event transcript.
    Replay { transcript: PathBuf },
    /// Execute a case's scenario under a mutation script, replanning as it goes.
    Replan {
        #[arg(long)]
        case: PathBuf,
        script: PathBuf,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated family names; all five by default.
    #[arg(long, value_delimiter = ',')]
    families: Vec<Family>,
    #[arg(long)]
    allow_unambiguous: bool,
    #[arg(long, default_value_t = 5)]
    ambiguity_floor: usize,
}

#[derive(Args)]
struct LearnerArgs {
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.07)]
    epsilon: f64,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 20)]
    max_questions: usize,
}

impl LearnerArgs {
    fn config(&self) -> LearnerConfig {
        LearnerConfig {
            n: self.n,
            m: self.m,
            epsilon: self.epsilon,
            eta: self.eta,
            max_questions: self.max_questions,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Comma-separated approaches.
    #[arg(long, value_delimiter = ',', default_value = "active")]
    approach: Vec<Approach>,
    #[command(flatten)]
    learner: LearnerArgs,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    include_gt: bool,
    /// Comma-separated run seeds.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seed: Vec<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Directory for per-run event transcripts.
    #[arg(long)]
    transcripts: Option<PathBuf>,
    /// Exit nonzero if any run violates the regret bound.
    #[arg(long)]
    assert_bound: bool,
}

#[derive(Args)]
struct EvalArgs {
    records: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    assert_bound: bool,
}

#[derive(Args)]
struct AskArgs {
    case: PathBuf,
    /// Read answers from the terminal; otherwise answer from the case's ground truth.
    #[arg(long)]
    interactive: bool,
    #[command(flatten)]
    learner: LearnerArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write loop events as JSONL.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

/// Input of the `plan` subcommand.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct PlanRequest {
    schema_version: u32,
    fridge: FridgeDoc,
    task: Vec<String>,
    preference: Preference,
    #[serde(default)]
    planner: Option<PlannerConfig>,
}

fn load_catalog(path: Option<&Path>) -> Result<Catalog> {
    match path {
        Some(p) => Catalog::load(p).with_context(|| format!("loading catalog {}", p.display())),
        None => Ok(Catalog::default()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}:{}", path.display(), i + 1)))
        .collect()
}

/// Prints the summary and any bound violations; returns the violation count.
fn report(records: &[RunRecord], csv: Option<&Path>) -> Result<usize> {
    let rows = summarize(records);
    print!("{}", render_table(&rows));
    if let Some(path) = csv {
        fs::write(path, render_csv(&rows)).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut violations = 0;
    for r in records {
        if let Some(e) = &r.error {
            eprintln!("case {} ({}) failed: {e}", r.case_id, r.approach);
        }
        if let BoundCheck::Fail(v) = validate_bound(r) {
            eprintln!("{v}");
            violations += 1;
        }
    }
    Ok(violations)
}

fn gen(args: GenArgs, catalog: &Catalog) -> Result<ExitCode> {
    let cfg = GenConfig {
        seed: args.seed,
        families: if args.families.is_empty() { Family::ALL.to_vec() } else { args.families },
        allow_unambiguous: args.allow_unambiguous,
        ambiguity_floor: args.ambiguity_floor,
    };
    let cases = benchgen::generate_dataset(&cfg, catalog)?;
    let manifest = benchgen::write_dataset(&args.out, &cases, args.seed)?;
    println!("wrote {} cases to {}", manifest.cases.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn run(args: RunArgs, catalog: &Catalog) -> Result<ExitCode> {
    let cases = benchgen::read_dataset(&args.dataset)?;
    if cases.is_empty() {
        bail!("dataset {} is empty", args.dataset.display());
    }
    let cfg = EvalConfig {
        learner: args.learner.config(),
        planner: PlannerConfig::default(),
        include_truth: args.include_gt,
    };
    cfg.learner.validate()?;
    let start = Instant::now();
    let records = match &args.transcripts {
        Some(dir) => harness::run_benchmark_logged(&cases, &args.approach, &cfg, &args.seed, catalog, dir)?,
        None => harness::run_benchmark(&cases, &args.approach, &cfg, &args.seed, catalog),
    };
    eprintln!("{} runs in {:.1}s", records.len(), start.elapsed().as_secs_f64());
    write_jsonl(&args.out, &records)?;
    let violations = report(&records, None)?;
    Ok(if args.assert_bound && violations > 0 { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn eval(args: EvalArgs) -> Result<ExitCode> {
    let records = read_records(&args.records)?;
    let violations = report(&records, args.csv.as_deref())?;
    Ok(if args.assert_bound && violations > 0 { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn plan(path: &Path, catalog: &Catalog) -> Result<ExitCode> {
    let req: PlanRequest = read_json(path)?;
    if req.schema_version != REQUEST_SCHEMA_VERSION {
        bail!("unsupported schemaVersion {}", req.schema_version);
    }
    let state = req.fridge.into_state(catalog)?;
    let outcome = plan_with_refinement(&state, &req.task, &req.preference, &req.planner.unwrap_or_default(), catalog)?;
    println!("{}", serde_json::to_string_pretty(&outcome)?);
    Ok(ExitCode::SUCCESS)
}

fn ask(args: AskArgs, catalog: &Catalog) -> Result<ExitCode> {
    let case = benchgen::read_case(&args.case)?;
    let learner = args.learner.config();
    let mut file_sink;
    let mut null = NullSink;
    let sink: &mut dyn EventSink = match &args.transcript {
        Some(p) => {
            file_sink = JsonlSink::new(BufWriter::new(fs::File::create(p)?));
            &mut file_sink
        }
        None => &mut null,
    };
    let result = if args.interactive {
        let stdin = io::stdin();
        let mut user = TerminalUser::new(stdin.lock(), io::stdout());
        interactive_session(&case, &learner, &PlannerConfig::default(), args.seed, &mut user, sink, catalog)?
    } else {
        let cfg = EvalConfig {
            learner,
            ..EvalConfig::default()
        };
        let (result, _) = harness::run_approach(&case, Approach::Active, &cfg, args.seed, catalog, sink)?;
        for ex in &result.transcript {
            println!("{} {}", ex.question.text, ex.answer);
        }
        result
    };
    println!("questions asked: {}", result.query_count);
    println!("preference: {}", result.chosen_preference);
    println!("plan:");
    for a in &result.chosen_plan.actions {
        match &a.placement {
            Some(p) => println!("  {} -> {} (x = {:.1})", a.object, a.target, p.x),
            None => println!("  {} -> {} (no room)", a.object, a.target),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn replay_cmd(path: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let summary = replay(&read_events(&text)?)?;
    for (q, a) in &summary.exchanges {
        println!("{} {a}", q.text);
    }
    let probs: Vec<String> = summary.probs.iter().map(|p| format!("{p:.4}")).collect();
    println!("posterior: [{}]", probs.join(", "));
    match summary.chosen {
        Some(c) => println!("chosen candidate: {c}"),
        None => println!("transcript ends before termination"),
    }
    Ok(ExitCode::SUCCESS)
}

fn replan(case: &Path, script: &Path, catalog: &Catalog) -> Result<ExitCode> {
    let case = benchgen::read_case(case)?;
    let script: MutationScript = read_json(script)?;
    let out = scenario_replan(
        &script,
        &case.scenario.initial,
        &case.scenario.task,
        &case.ground_truth,
        &PlannerConfig::default(),
        catalog,
    )?;
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = load_catalog(cli.catalog.as_deref()).and_then(|catalog| match cli.command {
        Command::Gen(a) => gen(a, &catalog),
        Command::Run(a) => run(a, &catalog),
        Command::Eval(a) => eval(a),
        Command::Plan { request } => plan(&request, &catalog),
        Command::Ask(a) => ask(a, &catalog),
        Command::Replay { transcript } => replay_cmd(&transcript),
        Command::Replan { case, script } => replan(&case, &script, &catalog),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
