//! Equality of 2-cells and shadow morphisms modulo the axioms: rules,
//! replayable proof scripts, normalization and bounded search.

mod normalize;
mod pattern;
mod rules;
mod script;
mod search;

pub use normalize::{
    fast_normal_form, items, layers, normalize, normalize_with_steps, shadow_spine, spine, Item, Layer,
    NORMALIZE_BUDGET,
};
pub use pattern::{Binding, Derive, Kind, Pat, ShPat, Subst, TwoPat, WordItem, WordPat};
pub use rules::{builtin_rules, pair_rule_name, RewriteRule, RuleClass};
pub use script::{
    apply_step, render_binding, render_step, render_steps, reverse_steps, run_steps, verify_script,
    EngineError, EqualityCertificate, ProofScript, RuleSet, Step, Verdict,
};
pub use search::{macro_moves, search_equal, Move, SearchBudget};
