use std::collections::HashMap;
use std::fmt::Write as _;

use super::pattern::{derive, inst_pat, match_pat, Binding, Kind, Subst};
use super::rules::{builtin_rules, RewriteRule};
use crate::term::{render, render_one, typecheck, typecheck_sub, Expr, Path, Signature, Style};

/// Rules indexed by name.
#[derive(Clone, Debug)]
pub struct RuleSet {
    rules: Vec<RewriteRule>,
    index: HashMap<String, usize>,
}

impl RuleSet {
    pub fn new(rules: Vec<RewriteRule>) -> Self {
        let index = rules.iter().enumerate().map(|(i, r)| (r.name.clone(), i)).collect();
        RuleSet { rules, index }
    }

    pub fn builtin(sig: &Signature) -> Self {
        Self::new(builtin_rules(sig))
    }

    pub fn get(&self, name: &str) -> Option<&RewriteRule> {
        self.index.get(name).map(|&i| &self.rules[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &RewriteRule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// The same set with derived rules removed.
    pub fn axioms_only(&self) -> Self {
        Self::new(self.rules.iter().filter(|r| !r.is_derived()).cloned().collect())
    }
}

/// One rewrite: rule `rule` (right-to-left when `inverse`) at `path`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: String,
    pub inverse: bool,
    pub path: Path,
    pub subst: Subst,
}

impl Step {
    pub fn new(rule: impl Into<String>, inverse: bool, path: Path) -> Self {
        Step { rule: rule.into(), inverse, path, subst: Subst::new() }
    }

    pub fn with(mut self, var: &str, b: Binding) -> Self {
        self.subst.insert(var.to_string(), b);
        self
    }

    /// The step undoing this one, valid on the expression this step produced.
    pub fn inverted(&self) -> Step {
        Step { inverse: !self.inverse, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub lhs: Expr,
    pub rhs: Expr,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved(ProofScript),
    /// Disproved by a model; the string describes the witness.
    Refuted(String),
    Unknown { explored: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityCertificate {
    pub lhs: Expr,
    pub rhs: Expr,
    pub verdict: Verdict,
}

impl EqualityCertificate {
    pub fn is_proved(&self) -> bool {
        matches!(self.verdict, Verdict::Proved(_))
    }

    pub fn script(&self) -> Option<&ProofScript> {
        match &self.verdict {
            Verdict::Proved(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("step {index}: {reason}")]
    StepMismatch { index: usize, reason: String },
    #[error("goal does not typecheck: {0}")]
    Goal(String),
}

/// Applies one step and returns the new expression together with the full
/// substitution used (matched plus derived metavariables).
pub fn apply_step(sig: &Signature, rules: &RuleSet, e: &Expr, step: &Step) -> Result<(Expr, Subst), String> {
    let rule = rules.get(&step.rule).ok_or_else(|| format!("unknown rule `{}`", step.rule))?;
    let (from, to) = rule.side(step.inverse);
    let sub = e.at(&step.path).ok_or_else(|| format!("no subterm at {}", step.path))?;
    for (name, b) in &step.subst {
        match rule.var_kind(name) {
            Some(k) if k == b.kind() => {}
            Some(_) => return Err(format!("metavariable `{name}` given a value of the wrong kind")),
            None => return Err(format!("rule `{}` has no metavariable `{name}`", rule.name)),
        }
    }
    let matches = match_pat(sig, from, sub, &step.subst);
    let mut s = match matches.len() {
        0 => return Err(format!("`{}` has no redex at {}", step.rule, step.path)),
        1 => matches.into_iter().next().unwrap(),
        n => return Err(format!("`{}` matches {n} ways at {}; supply a substitution", step.rule, step.path)),
    };
    for (name, d) in &rule.derive {
        if !s.contains_key(name) {
            if let Some(b) = derive(sig, d, &s) {
                s.insert(name.clone(), b);
            }
        }
    }
    let new = inst_pat(to, &s).map_err(|e| e.to_string())?;
    let old_b = typecheck_sub(sig, sub, &step.path).map_err(|e| e.to_string())?;
    let new_b = typecheck(sig, &new).map_err(|e| format!("rewritten subterm is ill-typed: {e}"))?;
    if old_b != new_b {
        return Err(format!("`{}` at {} would change the boundary", step.rule, step.path));
    }
    // keep only the metavariables of this rule that ended up bound
    s.retain(|k, _| rule.var_kind(k).is_some());
    let out = e.replace(&step.path, new).ok_or_else(|| format!("cannot replace at {}", step.path))?;
    Ok((out, s))
}

/// Replays `script` from its lhs. Proved iff every step applies and the
/// final expression is the rhs.
pub fn verify_script(sig: &Signature, rules: &RuleSet, script: &ProofScript) -> Result<EqualityCertificate, EngineError> {
    let bl = typecheck(sig, &script.lhs).map_err(|e| EngineError::Goal(e.to_string()))?;
    let br = typecheck(sig, &script.rhs).map_err(|e| EngineError::Goal(e.to_string()))?;
    if bl != br || script.lhs.kind() != script.rhs.kind() {
        return Err(EngineError::Goal("lhs and rhs have different boundaries".into()));
    }
    let mut cur = script.lhs.clone();
    for (index, step) in script.steps.iter().enumerate() {
        cur = apply_step(sig, rules, &cur, step)
            .map_err(|reason| EngineError::StepMismatch { index, reason })?
            .0;
    }
    if cur != script.rhs {
        return Err(EngineError::StepMismatch {
            index: script.steps.len(),
            reason: "final expression is not the rhs".into(),
        });
    }
    Ok(EqualityCertificate {
        lhs: script.lhs.clone(),
        rhs: script.rhs.clone(),
        verdict: Verdict::Proved(script.clone()),
    })
}

pub fn render_binding(sig: &Signature, b: &Binding, style: Style) -> String {
    match b {
        Binding::Zero(z) => sig.zero(*z).to_string(),
        Binding::One(w) => render_one(sig, w, style),
        Binding::Two(t) => render(sig, &Expr::Two(t.clone()), style),
        Binding::Shadow(t) => render(sig, &Expr::Shadow(t.clone()), style),
    }
}

/// One script line. 2-cell and shadow metavariables that the redex
/// determines are left out; word and 0-cell choices are always written.
pub fn render_step(sig: &Signature, rules: &RuleSet, step: &Step, style: Style) -> String {
    let mut out = step.rule.clone();
    if step.inverse {
        out.push_str("^-1");
    }
    let _ = write!(out, " @ {} {{", step.path);
    let from_vars = rules.get(&step.rule).map(|r| r.side(step.inverse).0.vars()).unwrap_or_default();
    let mut first = true;
    for (name, b) in &step.subst {
        let implied = matches!(b.kind(), Kind::Two | Kind::Shadow) && from_vars.contains(name);
        if implied {
            continue;
        }
        out.push_str(if first { " " } else { ", " });
        first = false;
        let _ = write!(out, "{name} = {}", render_binding(sig, b, style));
    }
    out.push_str(if first { "}" } else { " }" });
    out
}

pub fn render_steps(sig: &Signature, rules: &RuleSet, steps: &[Step], style: Style) -> String {
    let mut out = String::new();
    for s in steps {
        out.push_str(&render_step(sig, rules, s, style));
        out.push('\n');
    }
    out
}

/// Applies steps in order, recording each with its full substitution.
pub fn run_steps(sig: &Signature, rules: &RuleSet, e: &Expr, steps: &[Step]) -> Result<(Expr, Vec<Step>), EngineError> {
    let mut cur = e.clone();
    let mut out = Vec::with_capacity(steps.len());
    for (index, st) in steps.iter().enumerate() {
        let (next, s) = apply_step(sig, rules, &cur, st).map_err(|reason| EngineError::StepMismatch { index, reason })?;
        out.push(Step { subst: s, ..st.clone() });
        cur = next;
    }
    Ok((cur, out))
}

/// Reverses a recorded run: valid from its end back to its start.
pub fn reverse_steps(steps: &[Step]) -> Vec<Step> {
    steps.iter().rev().map(Step::inverted).collect()
}
