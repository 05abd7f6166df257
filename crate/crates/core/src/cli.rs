//! The `dgl` command line.
//!
//! Exit codes: 0 true or success, 1 false or rejected, 2 usage or input
//! format error, 3 no certificate within bounds.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::doc::{LassoDoc, ModelDoc, QuasimodelDoc, StateDoc};
use crate::formula::{closure_pm, parse, Closure, Formula, FormulaKind};
use crate::model::{fuzz_axioms, PosetModel};
use crate::quasimodel::{extend_to_lasso, lasso_coherence, neighbourhood_member, Lasso, Quasimodel};
use crate::search::{sat_search, SearchBounds, Verdict};
use crate::simformula::{characterization_sides, sim_formula};
use crate::state::{enumerate_types, state_of_point, State, DEFAULT_TYPE_LIMIT};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUNDS: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dgl", version, about = "Workbench for dynamic Gödel–Löb logic")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a formula and print it with its syntax tree.
    Parse {
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// List the closure S±(f).
    Closure {
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Enumerate the Σ-types of S±(f).
    Types {
        #[arg(short = 'f', long)]
        formula: String,
        #[arg(long, default_value_t = DEFAULT_TYPE_LIMIT)]
        limit: usize,
    },
    /// Validate a model document.
    CheckModel {
        #[arg(long)]
        model: PathBuf,
    },
    /// Decide whether a formula holds at every point of a model.
    Valid {
        #[arg(long)]
        model: PathBuf,
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Check random axiom instances and rule applications on random models.
    FuzzAxioms {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Print the simulation formula of a state.
    Simformula {
        #[arg(long)]
        state: PathBuf,
    },
    /// Compare Sim(state) at a model point with the simulation decider.
    Simcheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        state: PathBuf,
    },
    /// The Σ-state of a model point, with Σ = S±(f).
    StateOf {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Validate a quasimodel document.
    CheckQuasimodel {
        #[arg(long)]
        quasimodel: PathBuf,
    },
    /// Extend a path to a realising lasso and check it.
    Unwind {
        #[arg(long)]
        quasimodel: PathBuf,
        /// Comma-separated S-path of point names.
        #[arg(long)]
        from: String,
    },
    /// Decide whether lasso `v` lies in the m-neighbourhood of lasso `w`.
    Neighbourhood {
        #[arg(long)]
        quasimodel: PathBuf,
        /// Lasso document: a file, or inline JSON.
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(short = 'm', long)]
        m: usize,
    },
    /// Bounded satisfiability search with a quasimodel certificate.
    Sat {
        #[arg(short = 'f', long)]
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_norm: usize,
        #[arg(long, default_value_t = 256)]
        max_states: usize,
        #[arg(long, default_value_t = 16)]
        max_path: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// A finished command: exit code, human text, JSON document.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: impl Into<String>, json: Value) -> Report {
        Report {
            code,
            text: text.into(),
            json,
        }
    }
}

/// Input problems: exit 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn formula(text: &str) -> Result<Formula> {
    parse(text).map_err(|e| usage(format!("formula: {e}")))
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn inline_or_file<T: DeserializeOwned>(arg: &str) -> Result<T> {
    if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).map_err(|e| usage(format!("inline document: {e}")))
    } else {
        read_doc(Path::new(arg))
    }
}

fn load_model(path: &Path) -> Result<PosetModel> {
    PosetModel::from_doc(&read_doc::<ModelDoc>(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_quasimodel(path: &Path) -> Result<Quasimodel> {
    Quasimodel::from_doc(&read_doc::<QuasimodelDoc>(path)?, None)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn model_point(m: &PosetModel, name: &str) -> Result<usize> {
    m.point(name).ok_or_else(|| usage(format!("unknown point `{name}`")))
}

fn ast(f: &Formula) -> Value {
    match f.kind() {
        FormulaKind::Atom(a) => json!({ "atom": a.as_ref() }),
        FormulaKind::Neg(x) => json!({ "not": ast(x) }),
        FormulaKind::And(a, b) => json!({ "and": [ast(a), ast(b)] }),
        FormulaKind::Dia(x) => json!({ "dia": ast(x) }),
        FormulaKind::Next(x) => json!({ "next": ast(x) }),
        FormulaKind::Evt(x) => json!({ "evt": ast(x) }),
    }
}

fn tree(f: &Formula, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let (name, kids): (String, Vec<&Formula>) = match f.kind() {
        FormulaKind::Atom(a) => (a.to_string(), vec![]),
        FormulaKind::Neg(x) => ("Neg".into(), vec![x]),
        FormulaKind::And(a, b) => ("And".into(), vec![a, b]),
        FormulaKind::Dia(x) => ("Dia".into(), vec![x]),
        FormulaKind::Next(x) => ("Next".into(), vec![x]),
        FormulaKind::Evt(x) => ("Evt".into(), vec![x]),
    };
    out.push_str(&format!("{pad}{name}\n"));
    for k in kids {
        tree(k, indent + 1, out);
    }
}

fn exec(cmd: Cmd) -> Result<Report> {
    match cmd {
        Cmd::Parse { formula: text } => {
            let f = formula(&text)?;
            let mut t = format!("{f}\n");
            tree(&f, 0, &mut t);
            Ok(Report::new(EXIT_TRUE, t.trim_end(), json!({ "formula": f.to_string(), "ast": ast(&f) })))
        }
        Cmd::Closure { formula: text } => {
            let sigma = closure_pm(&formula(&text)?);
            let members: Vec<String> = sigma.members().iter().map(|m| m.to_string()).collect();
            Ok(Report::new(
                EXIT_TRUE,
                members.join("\n"),
                json!({ "size": sigma.len(), "members": members }),
            ))
        }
        Cmd::Types { formula: text, limit } => {
            let sigma = closure_pm(&formula(&text)?);
            let types = enumerate_types(&sigma, limit).map_err(|e| anyhow!("{e}"))?;
            let printed: Vec<Vec<String>> = types.iter().map(|t| t.printed(&sigma)).collect();
            let text = printed
                .iter()
                .map(|t| format!("{{{}}}", t.join(", ")))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report::new(
                EXIT_TRUE,
                text,
                json!({ "count": types.len(), "types": printed }),
            ))
        }
        Cmd::CheckModel { model } => {
            let doc: ModelDoc = read_doc(&model)?;
            match PosetModel::from_doc(&doc) {
                Ok(m) => Ok(Report::new(
                    EXIT_TRUE,
                    "valid model",
                    json!({ "valid": true, "model": m.to_doc() }),
                )),
                Err(e) => Ok(Report::new(
                    EXIT_FALSE,
                    format!("invalid model: {e}"),
                    json!({ "valid": false, "error": e.to_string() }),
                )),
            }
        }
        Cmd::Valid { model, formula: text } => {
            let m = load_model(&model)?;
            let f = formula(&text)?;
            let truth = m.eval(&f);
            let failing: Vec<&str> = (0..m.len())
                .filter(|&x| !truth.set.contains(x))
                .map(|x| m.names()[x].as_str())
                .collect();
            let valid = failing.is_empty();
            let text = if valid {
                "valid".to_string()
            } else {
                format!("invalid: fails at {}", failing.join(", "))
            };
            Ok(Report::new(
                if valid { EXIT_TRUE } else { EXIT_FALSE },
                text,
                json!({ "valid": valid, "formula": f.to_string(), "counterexamples": failing }),
            ))
        }
        Cmd::FuzzAxioms {
            seed,
            trials,
            max_points,
            depth,
        } => {
            if max_points == 0 {
                return Err(usage("--max-points must be positive"));
            }
            let r = fuzz_axioms(seed, trials, max_points, depth);
            let failures: Vec<Value> = r
                .failures
                .iter()
                .map(|f| json!({ "trial": f.trial, "what": f.what, "formula": f.formula.to_string(), "model": f.model.to_doc() }))
                .collect();
            let text = format!(
                "{} axiom instances, {} rule applications ({} with valid premises), {} failures",
                r.axiom_trials,
                r.rule_trials,
                r.rule_trials_applicable,
                r.failures.len()
            );
            Ok(Report::new(
                if r.failures.is_empty() { EXIT_TRUE } else { EXIT_FALSE },
                text,
                json!({
                    "seed": seed,
                    "axiom_trials": r.axiom_trials,
                    "rule_trials": r.rule_trials,
                    "rule_trials_applicable": r.rule_trials_applicable,
                    "failures": failures,
                }),
            ))
        }
        Cmd::Simformula { state } => {
            let w = State::from_doc(&read_doc::<StateDoc>(&state)?, None).map_err(|e| usage(e.to_string()))?;
            let f = sim_formula(&w);
            Ok(Report::new(
                EXIT_TRUE,
                f.to_string(),
                json!({ "formula": f.to_string(), "dag_size": f.dag_size() }),
            ))
        }
        Cmd::Simcheck { model, point, state } => {
            let m = load_model(&model)?;
            let x = model_point(&m, &point)?;
            let w = State::from_doc(&read_doc::<StateDoc>(&state)?, None).map_err(|e| usage(e.to_string()))?;
            let (semantic, structural) = characterization_sides(&m, x, &w).map_err(|e| usage(e.to_string()))?;
            let agree = semantic == structural;
            let text = format!(
                "Sim(state) at {point}: {semantic}; state simulates {point}: {structural}; {}",
                if agree { "agree" } else { "MISMATCH" }
            );
            Ok(Report::new(
                if agree { EXIT_TRUE } else { EXIT_FALSE },
                text,
                json!({ "sim_true": semantic, "simulates": structural, "agree": agree }),
            ))
        }
        Cmd::StateOf { model, point, formula: text } => {
            let m = load_model(&model)?;
            let x = model_point(&m, &point)?;
            let sigma: Arc<Closure> = Arc::new(closure_pm(&formula(&text)?));
            let w = state_of_point(&m, x, sigma);
            let doc = serde_json::to_value(w.to_doc())?;
            Ok(Report::new(EXIT_TRUE, serde_json::to_string_pretty(&doc)?, doc))
        }
        Cmd::CheckQuasimodel { quasimodel } => {
            let doc: QuasimodelDoc = read_doc(&quasimodel)?;
            match Quasimodel::from_doc(&doc, None) {
                Ok(q) => {
                    let mut text = format!("valid quasimodel ({} points)", q.len());
                    let mut witness_ok = true;
                    if let Some(wname) = &doc.witness {
                        witness_ok = q.point(wname).is_some();
                        text.push_str(&format!(", witness {wname}"));
                    }
                    Ok(Report::new(
                        if witness_ok { EXIT_TRUE } else { EXIT_FALSE },
                        text,
                        json!({ "valid": witness_ok, "points": q.len() }),
                    ))
                }
                Err(e) => Ok(Report::new(
                    EXIT_FALSE,
                    format!("invalid quasimodel: {e}"),
                    json!({ "valid": false, "error": e.to_string() }),
                )),
            }
        }
        Cmd::Unwind { quasimodel, from } => {
            let q = load_quasimodel(&quasimodel)?;
            let prefix = from
                .split(',')
                .map(|n| q.point(n.trim()).ok_or_else(|| usage(format!("unknown point `{n}`"))))
                .collect::<Result<Vec<_>>>()?;
            let l = extend_to_lasso(&q, &prefix).map_err(|e| usage(e.to_string()))?;
            let doc = l.to_doc(&q);
            let coherent = lasso_coherence(&q, &l);
            let text = format!(
                "stem [{}] loop [{}]{}",
                doc.stem.join(", "),
                doc.cycle.join(", "),
                match &coherent {
                    Ok(()) => String::new(),
                    Err(v) => format!("\nincoherent: {v}"),
                }
            );
            Ok(Report::new(
                if coherent.is_ok() { EXIT_TRUE } else { EXIT_FALSE },
                text,
                json!({ "stem": doc.stem, "loop": doc.cycle, "coherent": coherent.is_ok() }),
            ))
        }
        Cmd::Neighbourhood { quasimodel, v, w, m } => {
            let q = load_quasimodel(&quasimodel)?;
            let lasso = |arg: &str| -> Result<Lasso> {
                let doc: LassoDoc = inline_or_file(arg)?;
                Lasso::from_doc(&q, &doc).map_err(|e| usage(e.to_string()))
            };
            let (lv, lw) = (lasso(&v)?, lasso(&w)?);
            let member = neighbourhood_member(&q, &lv, m, &lw);
            Ok(Report::new(
                if member { EXIT_TRUE } else { EXIT_FALSE },
                if member { "member" } else { "not a member" },
                json!({ "member": member, "m": m }),
            ))
        }
        Cmd::Sat {
            formula: text,
            max_norm,
            max_states,
            max_path,
            seed,
            certificate,
            threads,
        } => {
            let f = formula(&text)?;
            if max_norm == 0 || max_states == 0 || max_path == 0 {
                return Err(usage("bounds must be positive"));
            }
            let bounds = SearchBounds {
                max_norm,
                max_states,
                max_path,
                seed,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .context("thread pool")?;
            let out = pool.install(|| sat_search(&f, &bounds)).map_err(|e| anyhow!("{e}"))?;
            let stats = json!({
                "states": out.stats.states,
                "edges": out.stats.edges,
                "levels": out.stats.levels,
                "good": out.stats.good,
                "norm_pruned": out.stats.norm_pruned,
                "state_cap": out.stats.state_cap,
                "depth_cap": out.stats.depth_cap,
                "draft_cap": out.stats.draft_cap,
            });
            match out.verdict {
                Verdict::Sat { certificate: q, witness } => {
                    let mut doc = q.to_doc();
                    doc.witness = Some(q.names()[witness].clone());
                    if let Some(path) = certificate {
                        std::fs::write(&path, serde_json::to_string_pretty(&doc)?)
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    Ok(Report::new(
                        EXIT_TRUE,
                        format!("SAT: certificate with {} points, witness {}", q.len(), q.names()[witness]),
                        json!({ "verdict": "SAT", "seed": seed, "certificate": doc, "stats": stats }),
                    ))
                }
                Verdict::NoWithinBounds { exhausted } => Ok(Report::new(
                    EXIT_BOUNDS,
                    format!("NO_WITHIN_BOUNDS (exhausted: {exhausted})"),
                    json!({ "verdict": "NO_WITHIN_BOUNDS", "exhausted": exhausted, "seed": seed, "stats": stats }),
                )),
            }
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let _ = e.print();
            return code;
        }
    };
    let json_out = cli.json;
    match exec(cli.cmd) {
        Ok(r) => {
            if json_out {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("values serialize"));
            } else {
                println!("{}", r.text);
            }
            r.code
        }
        Err(e) => {
            if json_out {
                println!("{}", json!({ "error": format!("{e:#}") }));
            }
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_FALSE
            }
        }
    }
}
