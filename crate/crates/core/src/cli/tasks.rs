use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};

use super::report::{render_grid, TaskReport, Verdict};
use crate::bimod::{
    algebra_from_json, bimodule_from_json, evaluate_trace, hattori_stallings_oracle, matrix_to_json, Algebra, Bimodule,
};
use crate::dsl::{DslDocument, Item, Source, TransferChecks};
use crate::engine::{render_steps, search_equal, verify_script, ProofScript, RuleSet, SearchBudget};
use crate::group::{
    becker_gottlieb_composite, build_cover, cross_model_check, euler_composite, load_group_json, loop_transfer, CoverSpec,
    GroupData, TransferMatrix,
};
use crate::linalg::{fmt_q, Mat};
use crate::term::{Signature, Style};

/// Model data declared by a document, loaded and validated.
#[derive(Default)]
pub struct Models {
    algebras: HashMap<String, Arc<Algebra>>,
    bimodules: HashMap<String, Bimodule>,
    groups: HashMap<String, GroupData>,
    covers: HashMap<String, CoverSpec>,
}

fn read_source(base: &Path, s: &Source) -> Result<Value, String> {
    match s {
        Source::Inline(v) => Ok(v.clone()),
        Source::File(f) => {
            let path = base.join(f);
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
        }
    }
}

impl Models {
    /// Loads every model item in order; `base` resolves relative file names.
    pub fn load(doc: &DslDocument, base: &Path) -> Result<Self, String> {
        let mut m = Models::default();
        for item in &doc.items {
            match item {
                Item::Algebra { name, source } => {
                    let a = algebra_from_json(&read_source(base, source)?).map_err(|e| format!("algebra {name}: {e}"))?;
                    m.algebras.insert(name.clone(), Arc::new(a));
                }
                Item::Bimodule { name, left, right, source } => {
                    let v = read_source(base, source)?;
                    let b = bimodule_from_json(&v, m.algebras[left].clone(), m.algebras[right].clone())
                        .map_err(|e| format!("bimodule {name}: {e}"))?;
                    m.bimodules.insert(name.clone(), b);
                }
                Item::Group { name, source } => {
                    let g = load_group_json(&read_source(base, source)?).map_err(|e| format!("group {name}: {e}"))?;
                    m.groups.insert(name.clone(), g);
                }
                Item::Cover { name, group, subgroup } => {
                    let gd = &m.groups[group];
                    let cover = gd
                        .resolve(subgroup)
                        .and_then(|k| build_cover(gd.group.clone(), &k))
                        .map_err(|e| format!("cover {name}: {e}"))?;
                    m.covers.insert(name.clone(), cover);
                }
                _ => {}
            }
        }
        Ok(m)
    }

    pub fn bimodule_names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.bimodules.keys().cloned().collect();
        v.sort();
        v
    }
}

/// Runs one goal or model task of a document.
pub fn run_item(doc: &DslDocument, rules: &RuleSet, models: &Models, item: &Item) -> Option<TaskReport> {
    let start = Instant::now();
    let mut report = match item {
        Item::Prove { name, lhs, rhs, steps } => {
            let script = ProofScript { lhs: lhs.clone(), rhs: rhs.clone(), steps: steps.clone() };
            prove_task(&doc.sig, rules, name, &script)
        }
        Item::Search { name, lhs, rhs, budget, depth } => {
            let budget = SearchBudget { nodes: *budget, depth: depth.unwrap_or(SearchBudget::default().depth) };
            let cert = search_equal(&doc.sig, rules, lhs, rhs, budget);
            match cert.script() {
                Some(s) => TaskReport::new(name, "search", Verdict::Proved)
                    .artifact("steps", json!(s.steps.len()))
                    .artifact("script", json!(render_steps(&doc.sig, rules, &s.steps, Style::Ascii)))
                    .text(render_steps(&doc.sig, rules, &s.steps, Style::Unicode)),
                None => TaskReport::new(name, "search", Verdict::Unknown).message("no proof within the budget"),
            }
        }
        Item::Trace { bimodule } => trace_task(&format!("trace {bimodule}"), &models.bimodules[bimodule]),
        Item::Transfer { cover, checks } => {
            let (report, _) = transfer_task(&format!("transfer {cover}"), &models.covers[cover], *checks);
            report
        }
        _ => return None,
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Some(report)
}

pub fn prove_task(sig: &Signature, rules: &RuleSet, name: &str, script: &ProofScript) -> TaskReport {
    match verify_script(sig, rules, script) {
        Ok(_) => TaskReport::new(name, "prove", Verdict::Proved).artifact("steps", json!(script.steps.len())),
        Err(e) => TaskReport::new(name, "prove", Verdict::Fail).message(e.to_string()),
    }
}

fn mat_grid(m: &Mat, rows: &[String], cols: &[String]) -> String {
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect();
    render_grid(rows, cols, &cells)
}

/// The HH₀ trace of a bimodule, checked against the direct formula.
pub fn trace_task(name: &str, m: &Bimodule) -> TaskReport {
    let (t, oracle) = match (evaluate_trace(m), hattori_stallings_oracle(m)) {
        (Ok(t), Ok(o)) => (t, o),
        (Err(e), _) | (_, Err(e)) => return TaskReport::new(name, "trace", Verdict::Fail).message(e.to_string()),
    };
    let labels = |a: &Arc<Algebra>| -> Vec<String> {
        a.hh0().representatives().iter().map(|&i| format!("[{}]", a.basis[i])).collect()
    };
    let (rows, cols) = (labels(&m.r), labels(&m.a));
    let ok = t == oracle;
    let mut r = TaskReport::new(name, "trace", Verdict::pass_fail(ok))
        .artifact("rows", json!(rows))
        .artifact("cols", json!(cols))
        .artifact("matrix", matrix_to_json(&t))
        .text(mat_grid(&t, &rows, &cols));
    if !ok {
        r = r.message("trace differs from the Hattori-Stallings formula").artifact("oracle", matrix_to_json(&oracle));
    }
    r
}

/// One named check on a transfer, with its observed value.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub value: Value,
    pub line: String,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "verdict": Verdict::pass_fail(self.pass), "value": self.value })
    }
}

pub fn transfer_checks(cover: &CoverSpec, checks: TransferChecks) -> Vec<Check> {
    let n = cover.index() as i64;
    let pf = |ok: bool| if ok { "Pass" } else { "Fail" };
    let mut out = Vec::new();
    if checks.becker_gottlieb {
        let bg = becker_gottlieb_composite(cover);
        out.push(Check {
            name: "becker_gottlieb",
            pass: bg == n,
            value: json!(bg),
            line: format!("BG composite = {bg} (index {n}), {}", pf(bg == n)),
        });
    }
    if checks.euler {
        let e = euler_composite(cover);
        let ok = e.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == if i == j { n } else { 0 }));
        out.push(Check {
            name: "euler",
            pass: ok,
            value: json!(e),
            line: format!("Euler composite = {}, {}", if ok { format!("{n}·I") } else { format!("{e:?}") }, pf(ok)),
        });
    }
    if checks.cross_model {
        let (ok, line) = match cross_model_check(cover) {
            Ok(r) => (r.pass, format!("bimodule trace matches transfer: {}", pf(r.pass))),
            Err(e) => (false, format!("cross-model check failed: {e}")),
        };
        out.push(Check { name: "cross_model", pass: ok, value: json!(ok), line });
    }
    out
}

/// The loop transfer of a cover with its requested checks.
pub fn transfer_task(name: &str, cover: &CoverSpec, checks: TransferChecks) -> (TaskReport, (TransferMatrix, Vec<Check>)) {
    let t = loop_transfer(cover);
    let cs = transfer_checks(cover, checks);
    let ok = cs.iter().all(|c| c.pass);
    let mut text = t.to_table();
    for c in &cs {
        text.push_str(&c.line);
        text.push('\n');
    }
    let mut r = TaskReport::new(name, "transfer", Verdict::pass_fail(ok))
        .artifact("transfer", t.to_json())
        .artifact("checks", Value::Array(cs.iter().map(Check::to_json).collect()))
        .text(text);
    if let Some(c) = cs.iter().find(|c| !c.pass) {
        r = r.message(format!("{} check failed", c.name));
    }
    (r, (t, cs))
}

/// Directory used to resolve file references in a document.
pub fn base_dir(file: &Path) -> PathBuf {
    file.parent().map(Path::to_path_buf).unwrap_or_default()
}
