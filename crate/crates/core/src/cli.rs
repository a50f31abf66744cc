//! The `inqlab` command line.
//!
//! Exit codes: 0 when the command ran and every check it performs passed,
//! 1 when a property is violated or two verdicts that must agree disagree,
//! 2 for usage, input and parse errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::constructions::{
    encode_3sat, finiteness_report, paper_formula, sat_oracle, CnfInstance, ConstructionError,
    PaperFormula,
};
use crate::evaluator::{find_falsifying_subteam, supports, EvalConfig, EvalError, FastEvaluator};
use crate::inqbq::{state_supports, translation_sweep, InfoModel, InqbqError, State};
use crate::metatheory::{run_suite, MetatheoryError, Property, SuiteConfig};
use crate::parser::{parse, render, ParseError};
use crate::structures::{Assignment, Structure, StructureError, Team};
use crate::syntax::{Formula, Var};

#[derive(Debug, Parser)]
#[command(
    name = "inqlab",
    version,
    about = "Model checking for inquisitive team and state semantics"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Add wall-clock time to the output (makes JSON output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(flatten)]
    pub eval: EvalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvaluatorChoice {
    Fast,
    Reference,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Largest team or state whose sub-teams are enumerated by the reference evaluator.
    #[arg(long, global = true, default_value_t = EvalConfig::default().naive_subteam_cap)]
    pub cap: usize,
    /// Disable the fast evaluator's flat short-circuit and closed-form patterns.
    #[arg(long, global = true)]
    pub no_fast_paths: bool,
    /// Byte budget of the fast evaluator's memo table.
    #[arg(long, global = true, default_value_t = EvalConfig::default().memo_limit)]
    pub memo_limit: usize,
}

impl EvalArgs {
    fn config(&self) -> EvalConfig {
        EvalConfig {
            naive_subteam_cap: self.cap,
            enable_fast_paths: !self.no_fast_paths,
            memo_limit: self.memo_limit,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Support of a formula at a team of a structure.
    Eval {
        /// Structure JSON file.
        #[arg(long)]
        model: PathBuf,
        /// Team JSON file.
        #[arg(long)]
        team: PathBuf,
        /// Formula text over the structure's signature.
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = EvaluatorChoice::Fast)]
        evaluator: EvaluatorChoice,
        /// Directory receiving model.json, team.json and formula.txt when the verdict is false.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
    /// Support of a formula at a state of an information model.
    InqbqEval {
        /// Information model JSON file.
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// Comma-separated worlds; all worlds when omitted.
        #[arg(long, value_delimiter = ',')]
        state: Option<Vec<usize>>,
        /// Variable values, as `x=0`.
        #[arg(long = "assign", value_parser = parse_binding)]
        assign: Vec<(String, usize)>,
    },
    /// Print a named formula.
    Paper {
        #[arg(value_parser = PaperFormula::NAMES)]
        name: String,
    },
    /// Evaluate the finiteness sentence and tally relation profiles of all teams over (x, y).
    FinitenessDemo {
        #[arg(long)]
        n: usize,
    },
    /// Run the 3SAT reduction on a DIMACS file and compare with the SAT oracle.
    Reduce3sat {
        /// DIMACS file with exactly three literals per clause.
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
    /// Compare the sample InqBQ sentences with their two-sorted translations.
    TranslateCheck {
        #[arg(long, default_value_t = 2)]
        max_worlds: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
    },
    /// Run the metatheory property suites.
    Suite {
        #[arg(long, default_value_t = SuiteConfig::default().max_domain)]
        max_domain: usize,
        #[arg(long, default_value_t = SuiteConfig::default().max_vars)]
        max_vars: usize,
        #[arg(long, default_value_t = SuiteConfig::default().max_formula_depth)]
        max_depth: usize,
        #[arg(long, default_value_t = SuiteConfig::default().random_seed)]
        seed: u64,
        #[arg(long, default_value_t = SuiteConfig::default().sample_count)]
        samples: usize,
        #[arg(long, default_value_t = SuiteConfig::default().random_domain)]
        random_domain: usize,
        #[arg(long, default_value_t = SuiteConfig::default().cross_samples)]
        cross_samples: usize,
        /// Restrict to the named properties (repeatable); all when omitted.
        #[arg(long = "property", value_parser = parse_property)]
        properties: Vec<Property>,
    },
}

fn parse_binding(s: &str) -> Result<(String, usize), String> {
    let (v, d) = s
        .split_once('=')
        .ok_or_else(|| format!("expected VAR=ELEMENT, got `{s}`"))?;
    let d = d
        .trim()
        .parse()
        .map_err(|_| format!("`{d}` is not an element"))?;
    Ok((v.trim().to_string(), d))
}

fn parse_property(s: &str) -> Result<Property, String> {
    Property::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
        format!(
            "unknown property `{s}`; expected one of {}",
            names.join(", ")
        )
    })
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error("formula:{0}")]
    Parse(ParseError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Inqbq(#[from] InqbqError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Metatheory(#[from] MetatheoryError),
}

impl CliError {
    fn input(path: &Path, e: impl std::error::Error + Send + Sync + 'static) -> Self {
        CliError::Input {
            path: path.to_path_buf(),
            source: Box::new(e),
        }
    }
}

/// What a command prints and how the process should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn write_bundle(dir: &Path, model: &Value, team: &Value, formula: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    write(&dir.join("model.json"), &pretty(model))?;
    write(&dir.join("team.json"), &pretty(team))?;
    write(&dir.join("formula.txt"), &format!("{formula}\n"))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

struct Report {
    json: Value,
    text: String,
    code: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let cfg = cli.eval.config();
    let mut report = match &cli.command {
        Command::Eval {
            model,
            team,
            formula,
            evaluator,
            artifacts,
        } => eval_command(model, team, formula, *evaluator, artifacts.as_deref(), &cfg)?,
        Command::InqbqEval {
            model,
            formula,
            state,
            assign,
        } => inqbq_command(model, formula, state.as_deref(), assign, &cfg)?,
        Command::Paper { name } => {
            let text = render(&paper_formula(name)?);
            Report {
                json: json!({ "command": "paper", "name": name, "formula": text }),
                text,
                code: 0,
            }
        }
        Command::FinitenessDemo { n } => finiteness_command(*n, &cfg)?,
        Command::Reduce3sat { cnf, artifacts } => reduce_command(cnf, artifacts.as_deref(), &cfg)?,
        Command::TranslateCheck {
            max_worlds,
            max_domain,
        } => translate_command(*max_worlds, *max_domain, &cfg)?,
        Command::Suite {
            max_domain,
            max_vars,
            max_depth,
            seed,
            samples,
            random_domain,
            cross_samples,
            properties,
        } => {
            let suite = SuiteConfig {
                max_domain: *max_domain,
                max_vars: *max_vars,
                max_formula_depth: *max_depth,
                random_seed: *seed,
                sample_count: *samples,
                random_domain: *random_domain,
                cross_samples: *cross_samples,
                eval: cfg,
            };
            let props = if properties.is_empty() {
                Property::ALL.to_vec()
            } else {
                properties.clone()
            };
            let r = run_suite(&suite, &props)?;
            let mut json = r.to_json();
            json["command"] = json!("suite");
            json["config"] = serde_json::to_value(suite).expect("config serializes");
            Report {
                json,
                text: r.to_table(),
                code: if r.passed() { 0 } else { 1 },
            }
        }
    };
    if cli.timing {
        let ms = started.elapsed().as_secs_f64() * 1000.0;
        report.json["elapsed_ms"] = json!(ms);
        let _ = writeln!(report.text, "elapsed_ms: {ms:.1}");
    }
    let stdout = match cli.format {
        Format::Json => pretty(&report.json) + "\n",
        Format::Text if report.text.ends_with('\n') => report.text,
        Format::Text => report.text + "\n",
    };
    Ok(Outcome {
        stdout,
        code: report.code,
    })
}

fn eval_command(
    model_path: &Path,
    team_path: &Path,
    text: &str,
    evaluator: EvaluatorChoice,
    artifacts: Option<&Path>,
    cfg: &EvalConfig,
) -> Result<Report, CliError> {
    let model =
        Structure::from_json_str(&read(model_path)?).map_err(|e| CliError::input(model_path, e))?;
    let team = Team::from_json_str(&read(team_path)?).map_err(|e| CliError::input(team_path, e))?;
    let phi = parse(text, &model.signature()).map_err(CliError::Parse)?;
    let (verdict, stats, witness) = match evaluator {
        EvaluatorChoice::Reference => {
            let verdict = supports(&model, &team, &phi, cfg)?;
            let witness = match (&phi, verdict) {
                (Formula::Implies(a, b), false) => {
                    find_falsifying_subteam(&model, &team, a, b, cfg)?
                }
                _ => None,
            };
            (verdict, Value::Null, witness)
        }
        EvaluatorChoice::Fast => {
            let mut fast = FastEvaluator::new(&model, *cfg);
            let verdict = fast.supports(&team, &phi)?;
            let witness = match (&phi, verdict) {
                (Formula::Implies(a, b), false) => fast.find_falsifier(&team, a, b)?,
                _ => None,
            };
            let stats = serde_json::to_value(fast.stats()).expect("stats serialize");
            (verdict, stats, witness)
        }
    };
    let rendered = render(&phi);
    let mut json = json!({
        "command": "eval",
        "formula": rendered,
        "verdict": verdict,
        "evaluator": match evaluator { EvaluatorChoice::Fast => "fast", EvaluatorChoice::Reference => "reference" },
        "team_rows": team.len(),
        "stats": stats,
        "witness": witness.as_ref().map(Team::to_json),
    });
    let mut text_out = format!("verdict: {verdict}\nformula: {rendered}\n");
    if let Some(w) = &witness {
        let _ = writeln!(text_out, "witness: {}", w.to_json());
    }
    if !verdict {
        json["artifact"] =
            json!({ "model": model.to_json(), "team": team.to_json(), "formula": rendered });
        if let Some(dir) = artifacts {
            write_bundle(dir, &model.to_json(), &team.to_json(), &rendered)?;
            let _ = writeln!(text_out, "artifacts: {}", dir.display());
        }
    }
    Ok(Report {
        json,
        text: text_out,
        code: 0,
    })
}

fn inqbq_command(
    model_path: &Path,
    text: &str,
    state: Option<&[usize]>,
    assign: &[(String, usize)],
    cfg: &EvalConfig,
) -> Result<Report, CliError> {
    let model =
        InfoModel::from_json_str(&read(model_path)?).map_err(|e| CliError::input(model_path, e))?;
    let phi = parse(text, &model.signature()).map_err(CliError::Parse)?;
    let s = match state {
        Some(ws) => State::from_worlds(ws.iter().copied()),
        None => model.full_state(),
    };
    let mut g = Assignment::new();
    for (v, d) in assign {
        g.set(Var::new(v), *d);
    }
    let verdict = state_supports(&model, s, &g, &phi, cfg)?;
    let worlds: Vec<usize> = s.worlds().collect();
    let rendered = render(&phi);
    Ok(Report {
        json: json!({ "command": "inqbq-eval", "formula": rendered, "state": worlds, "verdict": verdict }),
        text: format!("verdict: {verdict}\nformula: {rendered}\nstate: {worlds:?}\n"),
        code: 0,
    })
}

fn finiteness_command(n: usize, cfg: &EvalConfig) -> Result<Report, CliError> {
    let r = finiteness_report(n, cfg)?;
    let ok = r.psi_satisfied && !r.neg_psi_satisfied && r.dedekind_witnesses == 0;
    let mut json = serde_json::to_value(&r).expect("report serializes");
    json["command"] = json!("finiteness-demo");
    let text = format!(
        "n = {}\npsi satisfied: {} ({} evaluator)\nnegation satisfied: {}\nteams: {}\nfunctions: {}\ninjective: {}\n\
         total: {}\nsurjective: {}\ninjective total functions: {}\ninjective total non-surjective functions: {}\n",
        r.domain_size,
        r.psi_satisfied,
        r.evaluator,
        r.neg_psi_satisfied,
        r.teams,
        r.functions,
        r.injective,
        r.total,
        r.surjective,
        r.injective_total_functions,
        r.dedekind_witnesses
    );
    Ok(Report {
        json,
        text,
        code: if ok { 0 } else { 1 },
    })
}

fn reduce_command(
    path: &Path,
    artifacts: Option<&Path>,
    cfg: &EvalConfig,
) -> Result<Report, CliError> {
    let cnf = CnfInstance::from_dimacs(&read(path)?).map_err(|e| CliError::input(path, e))?;
    let out = encode_3sat(&cnf)?;
    let mut fast = FastEvaluator::new(&out.structure, *cfg);
    let supported = fast.supports(&out.team, &out.formula)?;
    let sat = sat_oracle(&cnf)?;
    let witness = if supported {
        None
    } else {
        fast.find_falsifier(&out.team, out.antecedent(), out.consequent())?
    };
    let assignment = witness
        .as_ref()
        .map(|w| out.extract_assignment(w))
        .transpose()?;
    // Both total extensions of the extracted partial assignment must satisfy the instance.
    let extension_ok = assignment.as_ref().map(|f| {
        [false, true].iter().all(|&default| {
            let total: Vec<bool> = (0..cnf.variable_count())
                .map(|v| *f.get(&v).unwrap_or(&default))
                .collect();
            cnf.evaluate(&total)
        })
    });
    let agree = supported == !sat && extension_ok.unwrap_or(true);
    let verdict = if agree { "AGREE" } else { "DISAGREE" };
    let formula = render(&out.formula);
    let mut json = json!({
        "command": "reduce3sat",
        "instance": cnf.to_string(),
        "variables": cnf.variable_count(),
        "clauses": cnf.clauses().len(),
        "domain_size": out.structure.domain_size(),
        "team_rows": out.team.len(),
        "supports": supported,
        "sat": sat,
        "agree": agree,
        "witness": witness.as_ref().map(Team::to_json),
        "assignment": assignment.as_ref().map(|f| {
            f.iter().map(|(v, b)| (format!("p{v}"), json!(b))).collect::<serde_json::Map<_, _>>()
        }),
        "assignment_satisfies": extension_ok,
        "stats": serde_json::to_value(fast.stats()).expect("stats serialize"),
    });
    let mut text = format!("supports={supported}, sat={sat}, {verdict}\n");
    if !agree {
        json["artifact"] = json!({
            "model": out.structure.to_json(),
            "team": out.team.to_json(),
            "formula": formula,
        });
        if let Some(dir) = artifacts {
            write_bundle(dir, &out.structure.to_json(), &out.team.to_json(), &formula)?;
            let _ = writeln!(text, "artifacts: {}", dir.display());
        }
    }
    Ok(Report {
        json,
        text,
        code: if agree { 0 } else { 1 },
    })
}

fn translate_command(
    max_worlds: usize,
    max_domain: usize,
    cfg: &EvalConfig,
) -> Result<Report, CliError> {
    let checks = translation_sweep(max_worlds, max_domain, cfg)?;
    let passed = checks.iter().all(|c| c.passed());
    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(
            text,
            "{}  <=>  {}: {}/{} agree",
            c.inqbq, c.two_sorted, c.agreements, c.models
        );
    }
    Ok(Report {
        json: json!({ "command": "translate-check", "passed": passed, "checks": checks }),
        text,
        code: if passed { 0 } else { 1 },
    })
}

/// Parses arguments, runs the command, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
