use std::sync::Arc;

use super::Algebra;
use crate::linalg::{q, Mat};

/// A small algebra given by a faithful matrix representation, together
/// with some left modules over it (one matrix per basis element).
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub algebra: Arc<Algebra>,
    pub modules: Vec<Vec<Mat>>,
}

fn e(n: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zero(n, n);
    m.set(i, j, q(1));
    m
}

fn shift(n: usize) -> Mat {
    let mut m = Mat::zero(n, n);
    for i in 0..n {
        m.set((i + 1) % n, i, q(1));
    }
    m
}

fn powers(g: &Mat, n: usize) -> Vec<Mat> {
    let mut out = vec![Mat::identity(g.rows)];
    for k in 1..n {
        out.push(out[k - 1].mul(g));
    }
    out
}

fn upper_triangular(mats: &[Mat]) -> bool {
    mats.iter().all(|m| (0..m.rows).all(|i| (0..i).all(|j| m.get(i, j) == &q(0))))
}

fn entry(name: &'static str, mats: Vec<Mat>, characters: Vec<Vec<i64>>) -> CatalogEntry {
    let labels = (0..mats.len()).map(|i| format!("e{i}")).collect();
    let algebra = Arc::new(Algebra::from_matrices(labels, &mats).expect("catalog algebra"));
    let n = algebra.dim();
    let regular = (0..n).map(|i| algebra.left_mult(&algebra.basis_vec(i))).collect();
    let mut modules = vec![regular];
    if mats[0].rows != n {
        modules.push(mats.clone());
    }
    let mut chars = characters;
    if chars.is_empty() && upper_triangular(&mats) {
        // diagonal entries of a triangular algebra are characters
        for i in 0..mats[0].rows {
            chars.push(mats.iter().map(|m| if m.get(i, i) == &q(1) { 1 } else { 0 }).collect());
        }
        chars.sort();
        chars.dedup();
    }
    for c in chars {
        modules.push(c.iter().map(|x| Mat::from_ints(&[&[*x]])).collect());
    }
    CatalogEntry { name, algebra, modules }
}

/// Every algebra of dimension at most four used by the random generators.
pub fn catalog() -> Vec<CatalogEntry> {
    let z2 = powers(&shift(2), 2);
    let z2z2: Vec<Mat> = z2.iter().flat_map(|a| z2.iter().map(move |b| a.kron(b))).collect();
    vec![
        entry("Q", vec![Mat::identity(1)], vec![]),
        entry("QxQ", vec![e(2, 0, 0), e(2, 1, 1)], vec![]),
        entry("Q[x]/x^2", vec![Mat::identity(2), e(2, 0, 1)], vec![]),
        entry("Q[x]/x^3", vec![Mat::identity(3), e(3, 0, 1).add(&e(3, 1, 2)), e(3, 0, 2)], vec![]),
        entry("QxQxQ", vec![e(3, 0, 0), e(3, 1, 1), e(3, 2, 2)], vec![]),
        entry("T2", vec![e(2, 0, 0), e(2, 0, 1), e(2, 1, 1)], vec![]),
        entry("Q[x,y]/(x,y)^2", vec![Mat::identity(3), e(3, 0, 2), e(3, 1, 2)], vec![]),
        entry("M2", vec![e(2, 0, 0), e(2, 0, 1), e(2, 1, 0), e(2, 1, 1)], vec![]),
        entry("QZ2", z2, vec![vec![1, 1], vec![1, -1]]),
        entry("QZ3", powers(&shift(3), 3), vec![vec![1, 1, 1]]),
        entry("QZ4", powers(&shift(4), 4), vec![vec![1, 1, 1, 1], vec![1, -1, 1, -1]]),
        entry(
            "QZ2xZ2",
            z2z2,
            vec![vec![1, 1, 1, 1], vec![1, -1, 1, -1], vec![1, 1, -1, -1], vec![1, -1, -1, 1]],
        ),
    ]
}

pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|c| c.name == name)
}
