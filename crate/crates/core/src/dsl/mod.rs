//! The `.st` document language: declarations, goals, model data and tasks.
//!
//! The grammar is described in `docs/dsl.md`. [`print_document`] writes the
//! canonical form and [`parse_dsl`] reads it back.

mod lexer;
mod parser;
mod print;

use std::fmt;

use crate::engine::Step;
use crate::term::{Expr, GenId, PairId, Signature, TwoGenId, ZeroId};

pub use parser::{parse_dsl, parse_expr, parse_step, parse_word};
pub use print::{canonical_steps, print_document, print_item};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String, found: String },
    /// A name that is not declared (or not of the right sort) at this point.
    Unresolved { what: &'static str, name: String },
    Invalid(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => write!(f, "expected {expected}, found {found}"),
            ParseErrorKind::Unresolved { what, name } => write!(f, "undeclared {what} `{name}`"),
            ParseErrorKind::Invalid(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for ParseError {}

/// Where model data comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    /// A path, relative to the document.
    File(String),
    Inline(serde_json::Value),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    /// Element indices.
    Elements(Vec<usize>),
    /// A subgroup listed by name in the group's data.
    Named(String),
    /// Generated by permutations in cycle notation (points are 1-based).
    Generated(Vec<Vec<Vec<usize>>>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransferChecks {
    pub becker_gottlieb: bool,
    pub euler: bool,
    pub cross_model: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    ZeroCells(Vec<ZeroId>),
    OneCell(GenId),
    TwoCell(TwoGenId),
    DualPair(PairId),
    Shadow,
    Symmetric(ZeroId),
    Expr { name: String, expr: Expr },
    Prove { name: String, lhs: Expr, rhs: Expr, steps: Vec<Step> },
    Search { name: String, lhs: Expr, rhs: Expr, budget: usize, depth: Option<usize> },
    Algebra { name: String, source: Source },
    Bimodule { name: String, left: String, right: String, source: Source },
    Group { name: String, source: Source },
    Cover { name: String, group: String, subgroup: SubgroupSpec },
    Trace { bimodule: String },
    Transfer { cover: String, checks: TransferChecks },
}

impl Item {
    /// Goals and model tasks, as opposed to declarations.
    pub fn is_task(&self) -> bool {
        matches!(self, Item::Prove { .. } | Item::Search { .. } | Item::Trace { .. } | Item::Transfer { .. })
    }

    pub fn task_name(&self) -> Option<String> {
        match self {
            Item::Prove { name, .. } | Item::Search { name, .. } => Some(name.clone()),
            Item::Trace { bimodule } => Some(format!("trace {bimodule}")),
            Item::Transfer { cover, .. } => Some(format!("transfer {cover}")),
            _ => None,
        }
    }
}

/// A parsed document: one signature and its items in source order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DslDocument {
    pub sig: Signature,
    pub items: Vec<Item>,
}

impl DslDocument {
    pub fn tasks(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| i.is_task())
    }

    pub fn expr(&self, name: &str) -> Option<&Expr> {
        self.items.iter().find_map(|i| match i {
            Item::Expr { name: n, expr } if n == name => Some(expr),
            _ => None,
        })
    }

    pub fn model_item(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| match i {
            Item::Algebra { name: n, .. }
            | Item::Bimodule { name: n, .. }
            | Item::Group { name: n, .. }
            | Item::Cover { name: n, .. } => n == name,
            _ => false,
        })
    }
}

/// Words that cannot name a declared cell.
pub const RESERVED: &[&str] = &[
    "0cell", "1cell", "2cell", "dualpair", "shadow", "symmetric", "expr", "prove", "search", "by", "budget", "depth",
    "algebra", "bimodule", "group", "cover", "trace", "transfer", "id", "coev", "eval", "gamma", "theta", "sid", "sh",
    "U",
];
