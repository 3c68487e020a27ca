//! Cells of a free shadowed bicategory: signatures, expressions, typing.

mod expr;
mod render;
mod signature;
mod typing;

pub use expr::{Expr, OneCell, Path, ShadowExpr, SubTerm, TwoCell};
pub use render::{render, render_one, render_shadow, render_two, Style};
pub use signature::{
    validate_signature, Diagnostic, DiagnosticKind, DualPairDecl, GenId, OneCellGen, PairId, Signature,
    SignatureError, TwoCellGen, TwoGenId, ZeroId,
};
pub use typing::{typecheck, typecheck_2cell, typecheck_shadow, typecheck_sub, Boundary, TypeError};
