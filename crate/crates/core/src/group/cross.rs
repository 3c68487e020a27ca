use std::sync::Arc;

use super::{loop_transfer, CoverSpec, GroupError, TransferMatrix};
use crate::bimod::{evaluate_trace, Algebra, Bimodule, HH0Space};
use crate::linalg::{q, to_dense, unit_vec, Mat, Q};

/// `QG` as a `(QG, QK)`-bimodule, free over `QK` on the coset
/// representatives. The basis of `QK` follows the sorted subgroup.
pub fn restriction_bimodule(cover: &CoverSpec) -> Result<Bimodule, GroupError> {
    let g = &cover.group;
    let n = g.order();
    let internal = |e: crate::bimod::BimodError| GroupError::Internal(e.to_string());
    let qg = Arc::new(Algebra::group_algebra(g.table(), g.labels.clone()).map_err(internal)?);
    let sub = g.subgroup(&cover.subgroup)?;
    let qk = Arc::new(Algebra::group_algebra(sub.table(), sub.labels.clone()).map_err(internal)?);
    let e = |i: usize| to_dense(&unit_vec(i), n);
    Ok(Bimodule {
        a: qg.clone(),
        r: qk,
        left: (0..n).map(|x| qg.left_mult(&e(x))).collect(),
        right: cover.subgroup.iter().map(|&k| qg.right_mult(&e(k))).collect(),
        witness: Some(cover.reps.iter().map(|&x| e(x)).collect()),
    })
}

#[derive(Clone, Debug)]
pub struct CrossModelReport {
    pub pass: bool,
    pub transfer: TransferMatrix,
    /// The bimodule trace rewritten in conjugacy-class bases.
    pub trace: Mat,
}

/// Columns: the HH₀ class of each class representative.
fn class_basis(h: &HH0Space, reps: impl Iterator<Item = usize>, ambient: usize) -> Mat {
    let cols: Vec<Vec<Q>> = reps.map(|r| h.project(&to_dense(&unit_vec(r), ambient))).collect();
    Mat::from_cols(h.dim(), &cols)
}

/// Evaluates the trace of `QG` over `(QG, QK)` and compares it with the
/// loop transfer after moving both HH₀ bases to class bases.
pub fn cross_model_check(cover: &CoverSpec) -> Result<CrossModelReport, GroupError> {
    let m = restriction_bimodule(cover)?;
    let raw = evaluate_trace(&m).map_err(|e| GroupError::Internal(format!("restriction is not free: {e}")))?;
    let pg = class_basis(&m.a.hh0(), cover.g_classes.iter().map(|c| c.rep), m.a.dim());
    let k_pos = |x: usize| cover.subgroup.binary_search(&x).expect("class member of K");
    let pk = class_basis(&m.r.hh0(), cover.k_classes.iter().map(|c| k_pos(c.rep)), m.r.dim());
    let pk_inv = pk.inverse().ok_or_else(|| GroupError::Internal("HH₀(QK) is not spanned by classes".into()))?;
    let trace = pk_inv.mul(&raw).mul(&pg);
    let transfer = loop_transfer(cover);
    let pass = trace.rows == transfer.rows()
        && trace.cols == transfer.cols()
        && (0..trace.rows).all(|i| (0..trace.cols).all(|j| *trace.get(i, j) == q(transfer.entries[i][j])));
    Ok(CrossModelReport { pass, transfer, trace })
}
