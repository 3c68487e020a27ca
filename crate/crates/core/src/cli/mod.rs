//! Command-line front end. [`run`] takes an argument list and returns the
//! exit code and both output streams, so the binary is a thin wrapper.

mod report;
mod tasks;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bimod::{algebra_from_json, bimodule_from_json};
use crate::dsl::{parse_dsl, DslDocument, Item, TransferChecks};
use crate::engine::{normalize_with_steps, RuleSet, NORMALIZE_BUDGET};
use crate::group::{build_cover, load_group_json, parse_subgroup_spec};
use crate::term::{render, Style};
use crate::trace::shipped_theorems;

pub use report::{render_grid, RunReport, TaskReport, Verdict};
pub use tasks::{prove_task, trace_task, transfer_checks, transfer_task, Check, Models};

#[derive(Parser, Debug)]
#[command(name = "shadowtrace", version, about = "Proof checking and trace computations for shadowed bicategories")]
struct Cli {
    /// Worker threads for independent tasks.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    #[value(alias = "text")]
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    Bimod,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Typecheck a document and run all of its goals and tasks.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the whisker normal form of a named expression.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Trace of the identity of each bimodule in a document or JSON file.
    Trace {
        #[arg(long, value_enum)]
        model: Model,
        file: PathBuf,
        /// Only this bimodule of a document.
        #[arg(long)]
        bimodule: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Conjugacy-class transfer of a finite cover.
    Transfer {
        #[arg(long)]
        group: PathBuf,
        /// `{0,2}`, `<(1 2 3)>` or a subgroup name from the group file.
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        check_bg: bool,
        #[arg(long)]
        check_euler: bool,
        #[arg(long)]
        cross_model: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Verify the shipped theorem scripts.
    Corpus {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let jobs = cli.jobs as usize;
    match cli.command {
        Command::Check { file, format } => match load_document(&file) {
            Ok(doc) => check(&file, &doc, jobs, format),
            Err(o) => o,
        },
        Command::Normalize { file, expr, format } => match load_document(&file) {
            Ok(doc) => normalize_cmd(&doc, &expr, format),
            Err(o) => o,
        },
        Command::Trace { model: Model::Bimod, file, bimodule, format } => trace_cmd(&file, bimodule.as_deref(), jobs, format),
        Command::Transfer { group, subgroup, check_bg, check_euler, cross_model, format } => {
            let checks = TransferChecks { becker_gottlieb: check_bg, euler: check_euler, cross_model };
            transfer_cmd(&group, &subgroup, checks, format)
        }
        Command::Corpus { format } => {
            let thms = shipped_theorems();
            let tasks = run_parallel(jobs, &thms, |t| {
                let start = std::time::Instant::now();
                let rules = RuleSet::builtin(&t.sig);
                let mut r = prove_task(&t.sig, &rules, &format!("{}/{}", t.file, t.name), &t.script);
                r.elapsed_ms = start.elapsed().as_millis() as u64;
                r
            });
            finish(RunReport::new("corpus", tasks), format)
        }
    }
}

fn run_parallel<T: Sync, F: Fn(&T) -> TaskReport + Sync>(jobs: usize, items: &[T], f: F) -> Vec<TaskReport> {
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

fn read_file(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<DslDocument, Outcome> {
    let text = read_file(path)?;
    parse_dsl(&text).map_err(|e| Outcome::usage(format!("{}:{e}", path.display())))
}

fn finish(report: RunReport, format: Format) -> Outcome {
    let stdout = match format {
        Format::Json => report.to_json(),
        Format::Table => report.to_table(),
    };
    let stderr = match report.first_failure() {
        Some(t) => format!("error: task `{}` {:?}: {}\n", t.name, t.verdict, t.message.as_deref().unwrap_or("not proved")),
        None => String::new(),
    };
    Outcome { code: report.exit_code(), stdout, stderr }
}

fn json_doc(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn check(file: &Path, doc: &DslDocument, jobs: usize, format: Format) -> Outcome {
    let models = match Models::load(doc, &tasks::base_dir(file)) {
        Ok(m) => m,
        Err(e) => return Outcome::usage(format!("{}: {e}", file.display())),
    };
    let rules = RuleSet::builtin(&doc.sig);
    let items: Vec<&Item> = doc.tasks().collect();
    let reports = run_parallel(jobs, &items, |i| tasks::run_item(doc, &rules, &models, i).expect("task item"));
    finish(RunReport::new("check", reports), format)
}

fn normalize_cmd(doc: &DslDocument, name: &str, format: Format) -> Outcome {
    let Some(e) = doc.expr(name) else { return Outcome::usage(format!("no expression named `{name}`")) };
    let rules = RuleSet::builtin(&doc.sig);
    let (nf, steps) = match normalize_with_steps(&doc.sig, &rules, e, NORMALIZE_BUDGET) {
        Ok(x) => x,
        Err(err) => return Outcome { code: 1, stdout: String::new(), stderr: format!("error: task `{name}`: {err}\n") },
    };
    let (input, output) = (render(&doc.sig, e, Style::Unicode), render(&doc.sig, &nf, Style::Unicode));
    let stdout = match format {
        Format::Json => json_doc(&json!({ "name": name, "input": input, "normal_form": output, "steps": steps.len() })),
        Format::Table => format!("{name} : {input}\n  ~> {output}\n  ({} steps)\n", steps.len()),
    };
    Outcome { code: 0, stdout, stderr: String::new() }
}

fn trace_cmd(file: &Path, only: Option<&str>, jobs: usize, format: Format) -> Outcome {
    if file.extension().is_some_and(|e| e == "json") {
        let text = match read_file(file) {
            Ok(t) => t,
            Err(o) => return o,
        };
        let loaded = serde_json::from_str::<Value>(&text).map_err(|e| e.to_string()).and_then(|v| {
            let part = |k: &str| v.get(k).ok_or_else(|| format!("missing `{k}`"));
            let a = algebra_from_json(part("left")?).map_err(|e| format!("left: {e}"))?;
            let r = algebra_from_json(part("right")?).map_err(|e| format!("right: {e}"))?;
            bimodule_from_json(part("bimodule")?, a.into(), r.into()).map_err(|e| format!("bimodule: {e}"))
        });
        return match loaded {
            Ok(m) => {
                let start = std::time::Instant::now();
                let mut r = trace_task("trace", &m);
                r.elapsed_ms = start.elapsed().as_millis() as u64;
                finish(RunReport::new("trace", vec![r]), format)
            }
            Err(e) => Outcome::usage(format!("{}: {e}", file.display())),
        };
    }
    let doc = match load_document(file) {
        Ok(d) => d,
        Err(o) => return o,
    };
    let models = match Models::load(&doc, &tasks::base_dir(file)) {
        Ok(m) => m,
        Err(e) => return Outcome::usage(format!("{}: {e}", file.display())),
    };
    let mut names: Vec<String> = doc
        .tasks()
        .filter_map(|i| match i {
            Item::Trace { bimodule } => Some(bimodule.clone()),
            _ => None,
        })
        .collect();
    if names.is_empty() {
        names = models.bimodule_names();
    }
    if let Some(b) = only {
        if !models.bimodule_names().iter().any(|n| n == b) {
            return Outcome::usage(format!("no bimodule named `{b}`"));
        }
        names = vec![b.to_string()];
    }
    let rules = RuleSet::builtin(&doc.sig);
    let items: Vec<Item> = names.into_iter().map(|bimodule| Item::Trace { bimodule }).collect();
    let reports = run_parallel(jobs, &items, |i| tasks::run_item(&doc, &rules, &models, i).expect("trace item"));
    finish(RunReport::new("trace", reports), format)
}

fn transfer_cmd(group: &Path, subgroup: &str, checks: TransferChecks, format: Format) -> Outcome {
    let text = match read_file(group) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let cover = serde_json::from_str::<Value>(&text)
        .map_err(|e| e.to_string())
        .and_then(|v| load_group_json(&v).map_err(|e| e.to_string()))
        .and_then(|gd| {
            let spec = parse_subgroup_spec(subgroup).map_err(|e| e.to_string())?;
            let k = gd.resolve(&spec).map_err(|e| e.to_string())?;
            build_cover(gd.group.clone(), &k).map_err(|e| e.to_string())
        });
    let cover = match cover {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("{}: {e}", group.display())),
    };
    let (report, (t, cs)) = transfer_task("transfer", &cover, checks);
    let stdout = match format {
        Format::Json => json_doc(&json!({
            "index": cover.index(),
            "transfer": t.to_json(),
            "checks": cs.iter().map(Check::to_json).collect::<Vec<_>>(),
            "verdict": report.verdict,
        })),
        Format::Table => report.text.clone().unwrap_or_default(),
    };
    let stderr = match cs.iter().find(|c| !c.pass) {
        Some(c) => format!("error: task `{}` failed: {}\n", c.name, c.line),
        None => String::new(),
    };
    Outcome { code: if report.verdict.ok() { 0 } else { 1 }, stdout, stderr }
}
