//! Batch front end: parses inputs, dispatches to the library, writes one
//! JSON document (or CSV) to the output stream.

mod demo;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dbbel::belief::{assess, BeliefError};
use dbbel::io::{
    assessment_to_json, constraints_to_json, forest_from_json, mass_from_json,
    problem_from_json, result_to_json, IoError, Mode,
};
use dbbel::proof::{derives0_traced, least_depth, witness_tree, DepthSearch, Reasoner};
use dbbel::solver::{b_k_inf, gensat, SolverConfig, SolverError};
use dbbel::syntax::{BruteForceLimit, ParseOptions, Root, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "dbbel", version, about = "Depth-bounded Boolean inference and belief functions")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Accept `A -> B` as `!A | B` in every sentence input.
    #[arg(long, global = true)]
    desugar_implication: bool,
    /// Worker threads for forest evaluation; output is identical for any value.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Premises {
    /// Premise sentences; `*` stands for no information.
    #[arg(long, num_args = 1.., conflicts_with = "premises_file")]
    premises: Vec<String>,
    /// One premise per line; blank lines and `#` comments are skipped.
    #[arg(long)]
    premises_file: Option<PathBuf>,
    #[arg(long)]
    goal: String,
    /// Include a derivation (always present for prove0 when derivable).
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide `Γ ⊢₀ φ`.
    Prove0(Premises),
    /// Decide `Γ ⊢ₖ φ`.
    Provek {
        #[arg(long)]
        k: usize,
        /// Also report the least depth at which the goal follows, up to k.
        #[arg(long)]
        least: bool,
        #[command(flatten)]
        premises: Premises,
    },
    /// Belief and plausibility of queries under a forest and mass function.
    Belief {
        #[arg(long)]
        forest: PathBuf,
        #[arg(long)]
        mass: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        query: Vec<String>,
    },
    /// Satisfiability of belief constraints.
    Gensat {
        #[arg(long)]
        problem: PathBuf,
        /// Rewrite raw constraints into the two-sided belief/plausibility form.
        #[arg(long)]
        normalize: bool,
    },
    /// Tightest belief/plausibility interval for the problem's query.
    Binf {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        normalize: bool,
    },
    /// Bundled fixtures.
    Demo {
        #[arg(value_enum)]
        name: demo::Name,
    },
}

/// What went wrong, and which exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or unusable input: exit 1.
    Input(String),
    /// Enumeration budget or oracle bound exceeded: exit 2.
    Bound(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Bound(_) => 2,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Belief(BeliefError::Oracle(_)) => Failure::Bound(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Budget { .. }
            | SolverError::Depth { .. }
            | SolverError::Oracle(_)
            | SolverError::Belief(BeliefError::Oracle(_)) => Failure::Bound(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// A command's result: the JSON document, plus a table when the command
/// supports CSV.
pub struct Report {
    pub json: Value,
    pub table: Option<Vec<[String; 4]>>,
}

impl Report {
    fn json(json: Value) -> Report {
        Report { json, table: None }
    }
}

pub const CSV_HEADER: [&str; 4] = ["k", "query", "belief", "plausibility"];

/// Runs one invocation and returns its exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let opts = ParseOptions {
        desugar_implication: cli.desugar_implication,
    };
    let jobs = cli.jobs.max(1);
    let mut notes = Vec::new();
    let outcome = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| dispatch(&cli.command, opts, jobs > 1, &mut notes)),
        Err(e) => Err(Failure::Input(e.to_string())),
    };
    for note in notes {
        let _ = writeln!(err, "note: {note}");
    }
    let report = match outcome {
        Ok(r) => r,
        Err(f) => {
            let (Failure::Input(m) | Failure::Bound(m)) = &f;
            let _ = writeln!(err, "error: {m}");
            return f.code();
        }
    };
    let written = match (cli.format, &report.table) {
        (Format::Json, _) => serde_json::to_string_pretty(&report.json)
            .map_err(|e| e.to_string())
            .and_then(|s| writeln!(out, "{s}").map_err(|e| e.to_string())),
        (Format::Csv, Some(rows)) => write_csv(out, rows).map_err(|e| e.to_string()),
        (Format::Csv, None) => {
            let _ = writeln!(err, "error: CSV output is available for `belief` and belief demos only");
            return 1;
        }
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn write_csv(out: &mut dyn Write, rows: &[[String; 4]]) -> std::io::Result<()> {
    writeln!(out, "{}", CSV_HEADER.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn csv_cell(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn premises(p: &Premises, opts: ParseOptions) -> Result<Vec<Root>, Failure> {
    let lines: Vec<String> = match &p.premises_file {
        Some(path) => read(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect(),
        None => p.premises.clone(),
    };
    Ok(lines
        .iter()
        .map(|l| dbbel::io::root(l, opts))
        .collect::<Result<_, _>>()?)
}

fn premise_conjunction(roots: &[Root]) -> Root {
    let sentences: Vec<Sentence> = roots.iter().filter_map(Root::sentence).cloned().collect();
    Sentence::conj_all(sentences).map_or(Root::Star, Root::Info)
}

fn dispatch(cmd: &Command, opts: ParseOptions, parallel: bool, notes: &mut Vec<String>) -> Result<Report, Failure> {
    match cmd {
        Command::Prove0(p) => {
            let roots = premises(p, opts)?;
            let goal = dbbel::io::sentence(&p.goal, opts)?;
            let trace = derives0_traced(&roots, &goal);
            let mut doc = json!({ "derivable": trace.is_some() });
            if let Some(t) = trace {
                doc["trace"] = serde_json::to_value(t).expect("traces serialize");
            }
            Ok(Report::json(doc))
        }
        Command::Provek { k, least, premises: p } => {
            let roots = premises(p, opts)?;
            let goal = dbbel::io::sentence(&p.goal, opts)?;
            let derivable = DepthSearch::new(&roots, &goal).derives(*k);
            let mut doc = json!({ "derivable": derivable });
            if *least {
                doc["least_depth"] = json!(least_depth(&roots, &goal, *k));
            }
            if p.trace && derivable {
                let root = premise_conjunction(&roots);
                let tree = witness_tree(&root, &goal, *k).expect("derivable");
                let nodes: Vec<Value> = tree
                    .nodes()
                    .map(|n| {
                        json!({
                            "id": n.id,
                            "parent": n.parent,
                            "branch": n.branch.as_ref().map(Sentence::to_string),
                            "info": n.information().to_string(),
                        })
                    })
                    .collect();
                doc["tree"] = json!({ "root": root.to_string(), "nodes": nodes });
            }
            Ok(Report::json(doc))
        }
        Command::Belief { forest, mass, query } => {
            let forest = forest_from_json(&read(forest)?, opts)?;
            let reasoner = Reasoner::new();
            let mass = mass_from_json(&read(mass)?, &forest, &reasoner)?;
            let mut results = Vec::new();
            let mut table = Vec::new();
            for q in query {
                let q = dbbel::io::sentence(q, opts)?;
                let a = assess(&forest, &mass, &q, &reasoner);
                let doc = assessment_to_json(&a);
                table.push([
                    forest.stage().to_string(),
                    a.query.to_string(),
                    doc["belief"].as_str().unwrap().to_string(),
                    doc["plausibility"].as_str().unwrap().to_string(),
                ]);
                results.push(doc);
            }
            Ok(Report {
                json: json!({ "stage": forest.stage(), "results": results }),
                table: Some(table),
            })
        }
        Command::Gensat { problem, normalize } | Command::Binf { problem, normalize } => {
            let binf = matches!(cmd, Command::Binf { .. });
            let spec = problem_from_json(&read(problem)?, opts)?;
            let expected = if binf { Mode::Binf } else { Mode::Gensat };
            if spec.mode != expected {
                notes.push(format!("problem mode is {:?}; running {:?}", spec.mode, expected));
            }
            let mut problem = spec.problem;
            if binf && problem.query.is_none() {
                return Err(Failure::Input("binf needs a `query` in the problem".into()));
            }
            let rewrite = *normalize || spec.normalize;
            if rewrite && matches!(problem.constraints, dbbel::solver::Constraints::Raw(_)) {
                problem = problem.normalized()?;
                notes.push(
                    "raw constraints rewritten to two-sided form; right-hand terms now read as plausibility".into(),
                );
            }
            let config = SolverConfig {
                parallel,
                limit: BruteForceLimit::from_env(),
                ..SolverConfig::default()
            };
            let result = if binf { b_k_inf(&problem, &config)? } else { gensat(&problem, &config)? };
            let mut doc = result_to_json(&result);
            doc["depth"] = json!(problem.depth);
            doc["supp"] = json!(problem.supp()?.iter().map(Sentence::to_string).collect::<Vec<_>>());
            if rewrite {
                doc["constraints"] = constraints_to_json(&problem.constraints);
            }
            Ok(Report::json(doc))
        }
        Command::Demo { name } => demo::run(*name),
    }
}
