//! Symbolic and numerical traces in shadowed bicategories.

pub mod term;
pub mod engine;
pub mod dsl;
pub mod trace;
pub mod linalg;
pub mod bimod;
pub mod group;
pub mod cli;
