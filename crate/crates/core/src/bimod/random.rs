use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{catalog, Algebra, Bimodule, CatalogEntry};
use crate::linalg::{q, Mat, Q};

/// A random invertible integer matrix `L U` with unit lower `L` and upper
/// `U` with diagonal `±1`, both sparse with entries in `{-1, 0, 1}`.
pub(crate) fn random_invertible(rng: &mut impl Rng, n: usize) -> Mat {
    let mut l = Mat::identity(n);
    let mut u = Mat::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                l.set(i, j, q(sparse_unit(rng)));
            } else if i < j {
                u.set(i, j, q(sparse_unit(rng)));
            } else {
                u.set(i, i, q(if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
        }
    }
    l.mul(&u)
}

fn sparse_unit(rng: &mut impl Rng) -> i64 {
    if rng.gen_bool(0.7) {
        0
    } else if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

fn random_element(rng: &mut impl Rng, a: &Algebra) -> Vec<Q> {
    (0..a.dim()).map(|_| q(rng.gen_range(-2..=2))).collect()
}

/// Re-expresses module matrices over `A` in the basis `e'_j = Σ_i p_ij e_i`.
fn rebase(mats: &[Mat], p: &Mat) -> Vec<Mat> {
    let n = mats.first().map_or(0, |m| m.rows);
    (0..p.cols)
        .map(|j| {
            let mut out = Mat::zero(n, n);
            for (i, m) in mats.iter().enumerate() {
                if p.get(i, j) != &q(0) {
                    out = out.add(&m.scale(p.get(i, j)));
                }
            }
            out
        })
        .collect()
}

/// A catalog algebra in a random basis, keeping its modules.
#[derive(Clone, Debug)]
pub struct RandomAlgebra {
    pub entry: CatalogEntry,
    pub change: Mat,
    pub algebra: Arc<Algebra>,
}

impl RandomAlgebra {
    pub fn new(rng: &mut impl Rng, entry: CatalogEntry) -> Self {
        let change = random_invertible(rng, entry.algebra.dim());
        let algebra = Arc::new(entry.algebra.change_basis(&change).expect("invertible"));
        RandomAlgebra { entry, change, algebra }
    }

    /// A uniformly chosen catalog algebra of dimension at most `max_dim`.
    pub fn choose(rng: &mut impl Rng, max_dim: usize) -> Self {
        let cat: Vec<_> = catalog().into_iter().filter(|c| c.algebra.dim() <= max_dim).collect();
        let entry = cat.choose(rng).expect("nonempty catalog").clone();
        Self::new(rng, entry)
    }
}

/// A random bimodule over catalog algebras of dimension at most
/// `max_alg_dim` with `dim M ≤ max_dim`, free over the right algebra.
pub fn random_free_bimodule(rng: &mut impl Rng, max_alg_dim: usize, max_dim: usize) -> Bimodule {
    let a = RandomAlgebra::choose(rng, max_alg_dim);
    let r = RandomAlgebra::choose(rng, max_alg_dim.min(max_dim.max(1)));
    random_bimodule_between(rng, &a, &r, max_dim)
}

/// `P ⊗_Q R` for a random left `A`-module `P` assembled from catalog
/// modules, with random bases everywhere and a twisted witness.
pub fn random_bimodule_between(rng: &mut impl Rng, a: &RandomAlgebra, r: &RandomAlgebra, max_dim: usize) -> Bimodule {
    let ra = &r.algebra;
    let dr = ra.dim();
    let budget = max_dim / dr;
    let mut pieces: Vec<Vec<Mat>> = Vec::new();
    let mut k = 0;
    loop {
        let fits: Vec<_> = a.entry.modules.iter().filter(|m| k + m[0].rows <= budget).collect();
        if fits.is_empty() || (k > 0 && rng.gen_bool(0.4)) || (k == 0 && rng.gen_bool(0.05)) {
            break;
        }
        let piece = fits.choose(rng).unwrap();
        k += piece[0].rows;
        pieces.push(rebase(piece, &a.change));
    }
    let mut p_mats: Vec<Mat> = vec![Mat::zero(0, 0); a.algebra.dim()];
    for piece in &pieces {
        p_mats = p_mats.iter().zip(piece).map(|(x, y)| x.direct_sum(y)).collect();
    }
    let s = random_invertible(rng, k);
    let si = s.inverse().unwrap();
    let p_mats: Vec<Mat> = p_mats.iter().map(|m| si.mul(m).mul(&s)).collect();

    let id_r = Mat::identity(dr);
    let left = p_mats.iter().map(|m| m.kron(&id_r)).collect();
    let right = (0..dr).map(|c| Mat::identity(k).kron(&ra.right_mult(&ra.basis_vec(c)))).collect();
    let witness = (0..k)
        .map(|i| {
            let mut g = vec![q(0); k * dr];
            g[i * dr..(i + 1) * dr].clone_from_slice(&ra.unit);
            g
        })
        .collect();
    let m = Bimodule { a: a.algebra.clone(), r: ra.clone(), left, right, witness: Some(witness) };
    random_twist(rng, &m)
}

/// Same module, new witness and basis: elementary moves `g_i += g_j r`
/// on the generators, then a random change of basis.
pub fn random_twist(rng: &mut impl Rng, m: &Bimodule) -> Bimodule {
    let mut out = m.clone();
    if let Some(gens) = out.witness.as_mut() {
        let k = gens.len();
        if k > 1 {
            for _ in 0..rng.gen_range(0..=3) {
                let i = rng.gen_range(0..k);
                let j = (i + rng.gen_range(1..k)) % k;
                let shifted = m.right_action(&random_element(rng, &m.r)).mul_vec(&gens[j]);
                for (x, y) in gens[i].iter_mut().zip(shifted) {
                    *x += y;
                }
            }
        }
        gens.shuffle(rng);
    }
    let t = random_invertible(rng, m.dim());
    out.change_basis(&t).expect("invertible")
}
