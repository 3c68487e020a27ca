use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Proved,
    Unknown,
    Pass,
    Fail,
}

impl Verdict {
    pub fn ok(self) -> bool {
        matches!(self, Verdict::Proved | Verdict::Pass)
    }

    pub fn pass_fail(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub kind: &'static str,
    pub verdict: Verdict,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub artifacts: Map<String, Value>,
    /// Human-readable rendering of the main artifact, if any.
    #[serde(skip)]
    pub text: Option<String>,
}

impl TaskReport {
    pub fn new(name: impl Into<String>, kind: &'static str, verdict: Verdict) -> Self {
        TaskReport { name: name.into(), kind, verdict, elapsed_ms: 0, message: None, artifacts: Map::new(), text: None }
    }

    pub fn message(mut self, m: impl Into<String>) -> Self {
        self.message = Some(m.into());
        self
    }

    pub fn artifact(mut self, key: &str, v: Value) -> Self {
        self.artifacts.insert(key.into(), v);
        self
    }

    pub fn text(mut self, t: String) -> Self {
        self.text = Some(t);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Verdict,
    pub tasks: Vec<TaskReport>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, tasks: Vec<TaskReport>) -> Self {
        let status = Verdict::pass_fail(tasks.iter().all(|t| t.verdict.ok()));
        RunReport { command: command.into(), status, tasks }
    }

    pub fn first_failure(&self) -> Option<&TaskReport> {
        self.tasks.iter().find(|t| !t.verdict.ok())
    }

    pub fn exit_code(&self) -> i32 {
        if self.first_failure().is_some() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_table(&self) -> String {
        let name_w = self.tasks.iter().map(|t| t.name.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for t in &self.tasks {
            let verdict = format!("{:?}", t.verdict);
            let mut line = format!("{verdict:<8} {:<name_w$}  {:>6} ms", t.name, t.elapsed_ms);
            if let Some(m) = &t.message {
                line.push_str("  ");
                line.push_str(m);
            }
            let _ = writeln!(out, "{}", line.trim_end());
            if let Some(text) = &t.text {
                for l in text.lines() {
                    let _ = writeln!(out, "    {l}");
                }
            }
        }
        let ok = self.tasks.iter().filter(|t| t.verdict.ok()).count();
        let _ = writeln!(out, "{ok}/{} tasks ok", self.tasks.len());
        out
    }
}

/// Right-justified columns under a header of labels.
pub fn render_grid(row_labels: &[String], col_labels: &[String], cells: &[Vec<String>]) -> String {
    let w0 = row_labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..col_labels.len())
        .map(|j| cells.iter().map(|r| r[j].chars().count()).chain([col_labels[j].chars().count()]).max().unwrap_or(0))
        .collect();
    let pad = |s: &str, w: usize| format!("{}{s}", " ".repeat(w - s.chars().count()));
    let mut out = String::new();
    let header: Vec<String> = col_labels.iter().zip(&widths).map(|(l, w)| pad(l, *w)).collect();
    let _ = writeln!(out, "{}  {}", " ".repeat(w0), header.join("  "));
    for (label, row) in row_labels.iter().zip(cells) {
        let r: Vec<String> = row.iter().zip(&widths).map(|(c, w)| pad(c, *w)).collect();
        let _ = writeln!(out, "{}  {}", pad(label, w0), r.join("  "));
    }
    out.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
}
