//! `abslab`: batch front end over the abstraction lab.
//!
//! Every command produces a [`Report`]: JSON lines with one record per
//! relation (or slice, or law) and a closing summary, or the same data as CSV
//! or `key=value` text. Exit codes: 0 when every checked theorem held, 1 when
//! one was falsified, 2 on bad input.

pub mod report;
pub mod source;
pub mod survey;

use std::path::PathBuf;

use abstraction_lab::cardinal::{law_suite_with, OrderModel};
use abstraction_lab::classify::{check_tightness, trichotomy_check};
use abstraction_lab::dsl::{compile, parse, parse_rel_file};
use abstraction_lab::permlab::shuttle_sweep;
use abstraction_lab::relcat::relcat_verdict;
use abstraction_lab::sat::{check_thm_bc, check_top_triviality, restricted_satisfiable, satisfiable, RestrictMode};
use abstraction_lab::LabError;
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use report::{OutputFormat, Report, Status};
pub use source::Source;

use report::object;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Parser)]
#[command(name = "abslab", version, about = "Finite-model checks for abstraction principles")]
pub struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "ABSLAB_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Per-slice profiles with the trichotomy and tightness checks.
    Classify(Source),
    /// Class count, satisfiability, and the restricted principle on one slice.
    Sat(SatArgs),
    /// Relative categoricity against cardinality coarsening.
    Relcat(RelcatArgs),
    /// The ordered-semiring laws plus a shuttle sweep.
    Laws(LawsArgs),
    /// Every check over all relations at small n, or a sample.
    Survey(SurveyArgs),
    /// Parse a condition and validate it as an equivalence relation.
    ValidateDsl(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SatArgs {
    #[command(flatten)]
    pub source: Source,
    /// Also check the restricted principle on the slice of this size.
    #[arg(long)]
    pub slice: Option<usize>,
    /// `eq` (concepts equal to the slice) or `le` (concepts up to it).
    #[arg(long, default_value = "eq")]
    pub mode: RestrictMode,
}

#[derive(Debug, Clone, Args)]
pub struct RelcatArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Operator pairs to draw when n is too large for the full search.
    #[arg(long = "sample", default_value_t = 256)]
    pub sample: usize,
}

#[derive(Debug, Clone, Args)]
pub struct LawsArgs {
    #[arg(long, visible_alias = "sample", default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Shuttle instances, over 3 ≤ n ≤ 6.
    #[arg(long, default_value_t = 1_000)]
    pub shuttle: usize,
    /// Compare by plain lexicographic order instead of domination, which
    /// must break some law.
    #[arg(long)]
    pub force_failure: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SurveyArgs {
    #[arg(long)]
    pub n: usize,
    /// Enumerate every relation (n ≤ 4; the default there).
    #[arg(long, conflicts_with = "sample")]
    pub exhaustive: bool,
    /// Sample this many relations instead.
    #[arg(long, visible_alias = "samples")]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Operator pairs per relation when relcat cannot search exhaustively.
    #[arg(long, default_value_t = 64)]
    pub relcat_budget: usize,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("text_source").required(true).multiple(false)))]
pub struct ValidateArgs {
    #[arg(long, group = "text_source")]
    pub rel: Option<PathBuf>,
    #[arg(long, group = "text_source")]
    pub dsl: Option<String>,
    /// Check at this n only; by default at every n from 1 to 6.
    #[arg(long)]
    pub n: Option<usize>,
}

/// Rendered output and the exit status it implies.
#[derive(Debug, Clone)]
pub struct Run {
    pub output: String,
    pub status: Status,
}

pub fn run(cli: &Cli) -> Result<Run, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let report = pool.install(|| execute(&cli.command))?;
    Ok(Run { output: report.render(cli.format), status: report.status })
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Classify(src) => classify(src),
        Command::Sat(a) => sat(a),
        Command::Relcat(a) => relcat(a),
        Command::Laws(a) => laws(a),
        Command::Survey(a) => survey::survey(a),
        Command::ValidateDsl(a) => validate(a),
    }
}

fn classify(src: &Source) -> Result<Report, CliError> {
    let r = src.resolve()?;
    let tri = trichotomy_check(&r.relation);
    let tight = check_tightness(&r.relation);
    let records = tri
        .profiles
        .iter()
        .map(|p| {
            let mut m = Map::new();
            m.insert("relation".into(), json!(r.label));
            m.append(&mut object(p));
            let pattern = tight.nontrivial.iter().find(|t| t.k == p.k).map(|t| json!(t.pattern));
            m.insert("pattern".into(), pattern.unwrap_or(Value::Null));
            m.insert("overlap_exempt".into(), json!(tri.overlaps.iter().find(|o| o.k == p.k).map(|o| o.exempt)));
            m
        })
        .collect();
    let mut summary = Map::new();
    summary.insert("relation".into(), json!(r.label));
    summary.insert("n".into(), json!(r.relation.n()));
    summary.insert("trichotomy".into(), json!(tri.passed()));
    summary.insert("violations".into(), json!(tri.violations));
    summary.insert("overlaps".into(), json!(tri.overlaps));
    summary.insert("tightness".into(), json!(tight.passed()));
    summary.insert("tightness_violations".into(), json!(tight.violations));
    Ok(Report { command: "classify", records, summary, status: Status::from_ok(tri.passed() && tight.passed()) })
}

fn sat(a: &SatArgs) -> Result<Report, CliError> {
    let r = a.source.resolve()?;
    let e = &r.relation;
    let s = satisfiable(e);
    let bc = check_thm_bc(e);
    let top = check_top_triviality(e);
    let mut m = Map::new();
    m.insert("relation".into(), json!(r.label));
    m.append(&mut object(&s));
    m.insert("thm_bc".into(), json!(bc));
    m.insert("top".into(), json!(top));
    if let Some(k) = a.slice {
        m.insert("restricted".into(), json!(restricted_satisfiable(e, k, a.mode)?));
    }
    let ok = bc.confirmed && top.passed();
    let mut summary = Map::new();
    summary.insert("relation".into(), json!(r.label));
    summary.insert("n".into(), json!(e.n()));
    summary.insert("class_count".into(), json!(s.class_count));
    summary.insert("satisfiable".into(), json!(s.satisfiable));
    Ok(Report { command: "sat", records: vec![m], summary, status: Status::from_ok(ok) })
}

fn relcat(a: &RelcatArgs) -> Result<Report, CliError> {
    let r = a.source.resolve()?;
    let v = relcat_verdict(&r.relation, a.sample, a.seed);
    let mut m = Map::new();
    m.insert("relation".into(), json!(r.label));
    m.append(&mut object(&v));
    let mut summary = Map::new();
    summary.insert("relation".into(), json!(r.label));
    summary.insert("rc".into(), json!(v.rc));
    summary.insert("ccoa".into(), json!(v.ccoa));
    summary.insert("agrees".into(), json!(v.agrees));
    Ok(Report { command: "relcat", records: vec![m], summary, status: Status::from_ok(!v.falsified()) })
}

fn laws(a: &LawsArgs) -> Result<Report, CliError> {
    let model = if a.force_failure { OrderModel::Plain } else { OrderModel::Domination };
    let report = law_suite_with(a.samples, a.seed, model);
    let sweep = shuttle_sweep(6, a.seed, a.shuttle)?;
    let records = report
        .laws
        .iter()
        .map(|l| {
            let mut m = object(l);
            m.insert("passed".into(), json!(l.passed()));
            m
        })
        .collect();
    let mut summary = Map::new();
    summary.insert("seed".into(), json!(a.seed));
    summary.insert("samples".into(), json!(a.samples));
    summary.insert("model".into(), json!(model));
    summary.insert("laws_passed".into(), json!(report.passed_count()));
    summary.insert("laws_total".into(), json!(report.laws.len()));
    summary.insert("shuttle".into(), json!(sweep));
    let ok = report.all_passed() && sweep.all_passed();
    Ok(Report { command: "laws", records, summary, status: Status::from_ok(ok) })
}

fn validate(a: &ValidateArgs) -> Result<Report, CliError> {
    let expr = match (&a.dsl, &a.rel) {
        (Some(text), _) => parse(text).map_err(LabError::from)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_rel_file(&text).map_err(LabError::from)?.expr
        }
        (None, None) => unreachable!("clap enforces one source"),
    };
    let sizes: Vec<usize> = match a.n {
        Some(n) => vec![n],
        None => (1..=6).collect(),
    };
    let mut records = Vec::new();
    let mut all_valid = true;
    for n in sizes {
        let mut m = Map::new();
        m.insert("n".into(), json!(n));
        match compile(&expr, n) {
            Ok(e) => {
                m.insert("valid".into(), json!(true));
                m.insert("types".into(), json!(e.yes_types().len()));
                m.insert("class_count".into(), json!(e.class_count()));
                m.insert("problem".into(), Value::Null);
            }
            Err(LabError::NotEquivalence(v)) => {
                all_valid = false;
                m.insert("valid".into(), json!(false));
                m.insert("types".into(), Value::Null);
                m.insert("class_count".into(), Value::Null);
                m.insert("problem".into(), json!(v.to_string()));
            }
            Err(e) => return Err(e.into()),
        }
        records.push(m);
    }
    let mut summary = Map::new();
    summary.insert("expression".into(), json!(expr.to_string()));
    summary.insert("valid".into(), json!(all_valid));
    Ok(Report { command: "validate-dsl", records, summary, status: if all_valid { Status::Ok } else { Status::Invalid } })
}
