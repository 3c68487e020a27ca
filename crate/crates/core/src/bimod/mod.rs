//! Finite-dimensional algebras and bimodules over Q, with the shadow
//! realized as HH₀ and traces of identity maps computed two ways.

mod catalog;
mod json;
mod random;

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::linalg::{axpy, q, to_dense, to_sparse, unit_vec, Echelon, Mat, Quotient, SVec, Q};

pub use catalog::{catalog, catalog_entry, CatalogEntry};
pub use json::{algebra_from_json, algebra_to_json, bimodule_from_json, bimodule_to_json, matrix_to_json, rationals_to_json};
pub use random::{random_bimodule_between, random_free_bimodule, random_twist, RandomAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BimodError {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("not free: {0}")]
    NotFree(String),
    #[error("bad JSON: {0}")]
    Json(String),
}

/// An associative unital algebra with basis `e_0..e_{n-1}` and
/// `e_i e_j = Σ_k structure[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub basis: Vec<String>,
    mult: Vec<Vec<SVec>>,
    pub unit: Vec<Q>,
    gens: Vec<usize>,
}

impl Algebra {
    /// Checks associativity on all basis triples and the two-sided unit law.
    pub fn new(basis: Vec<String>, structure: Vec<Vec<Vec<Q>>>, unit: Vec<Q>) -> Result<Self, BimodError> {
        let n = basis.len();
        let bad = |m: String| Err(BimodError::InvalidAlgebra(m));
        if structure.len() != n || unit.len() != n {
            return bad(format!("expected {n} rows of structure constants and a unit of length {n}"));
        }
        let mut mult = Vec::with_capacity(n);
        for (i, row) in structure.iter().enumerate() {
            if row.len() != n || row.iter().any(|v| v.len() != n) {
                return bad(format!("structure row {i} is not {n}×{n}"));
            }
            mult.push(row.iter().map(|v| to_sparse(v)).collect());
        }
        let mut a = Algebra { basis, mult, unit, gens: Vec::new() };
        for i in 0..n {
            for j in 0..n {
                let ij = a.mult[i][j].clone();
                for k in 0..n {
                    let left = a.mul_sparse(&ij, &unit_vec(k));
                    let right = a.mul_sparse(&unit_vec(i), &a.mult[j][k]);
                    if left != right {
                        return bad(format!("(e{i} e{j}) e{k} ≠ e{i} (e{j} e{k})"));
                    }
                }
            }
        }
        let u = to_sparse(&a.unit);
        for i in 0..n {
            if a.mul_sparse(&u, &unit_vec(i)) != unit_vec(i) || a.mul_sparse(&unit_vec(i), &u) != unit_vec(i) {
                return bad(format!("unit fails on e{i}"));
            }
        }
        a.gens = a.find_generators();
        Ok(a)
    }

    /// Basis indices generating the algebra, chosen greedily: each is the
    /// first basis element outside the subalgebra spanned so far.
    fn find_generators(&self) -> Vec<usize> {
        let n = self.dim();
        let mut gens = Vec::new();
        let mut span = Echelon::new(n);
        let mut queue = vec![to_sparse(&self.unit)];
        span.insert(queue[0].clone());
        for i in 0..n {
            if span.contains(&unit_vec(i)) {
                continue;
            }
            gens.push(i);
            // words in the generators, as right multiples of known elements
            queue = span.rows().cloned().collect();
            while let Some(v) = queue.pop() {
                for &g in &gens {
                    let w = self.mul_sparse(&v, &unit_vec(g));
                    if span.insert(w.clone()) {
                        queue.push(w);
                    }
                }
            }
        }
        gens
    }

    /// Basis indices that generate the algebra. Relations of the form
    /// `x·r − r·x` or `m·r ⊗ n − m ⊗ r·n` only need `r` among these.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// The algebra spanned by the given square matrices, which must be
    /// closed under products and contain the identity in their span.
    pub fn from_matrices(basis: Vec<String>, mats: &[Mat]) -> Result<Self, BimodError> {
        let n = mats.len();
        let size = mats.first().map_or(0, |m| m.rows);
        let flat: Vec<Vec<Q>> = mats.iter().map(|m| m.to_rows().concat()).collect();
        let w = Mat::from_cols(size * size, &flat);
        let solve = |target: &Mat| -> Option<Vec<Q>> { solve_in_span(&w, &target.to_rows().concat()) };
        let mut structure = Vec::with_capacity(n);
        for a in mats {
            let mut row = Vec::with_capacity(n);
            for b in mats {
                let c = solve(&a.mul(b))
                    .ok_or_else(|| BimodError::InvalidAlgebra("matrix span is not closed under products".into()))?;
                row.push(c);
            }
            structure.push(row);
        }
        let unit = solve(&Mat::identity(size))
            .ok_or_else(|| BimodError::InvalidAlgebra("identity is not in the span".into()))?;
        Algebra::new(basis, structure, unit)
    }

    /// The group algebra of a Cayley table; basis labels are given.
    pub fn group_algebra(table: &[Vec<usize>], labels: Vec<String>) -> Result<Self, BimodError> {
        let n = table.len();
        let e = (0..n).find(|&i| (0..n).all(|j| table[i][j] == j)).ok_or_else(|| {
            BimodError::InvalidAlgebra("group table has no identity".into())
        })?;
        let structure = (0..n)
            .map(|i| (0..n).map(|j| to_dense(&unit_vec(table[i][j]), n)).collect())
            .collect();
        Algebra::new(labels, structure, to_dense(&unit_vec(e), n))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn structure(&self) -> Vec<Vec<Vec<Q>>> {
        let n = self.dim();
        self.mult.iter().map(|row| row.iter().map(|v| to_dense(v, n)).collect()).collect()
    }

    pub fn mul_sparse(&self, x: &SVec, y: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, a) in x {
            for (j, b) in y {
                axpy(&mut out, &(a * b), &self.mult[*i][*j]);
            }
        }
        out
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        to_dense(&self.mul_sparse(&to_sparse(x), &to_sparse(y)), self.dim())
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mult(&self, x: &[Q]) -> Mat {
        let n = self.dim();
        let xs = to_sparse(x);
        let cols: Vec<Vec<Q>> = (0..n).map(|j| to_dense(&self.mul_sparse(&xs, &unit_vec(j)), n)).collect();
        Mat::from_cols(n, &cols)
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mult(&self, x: &[Q]) -> Mat {
        let n = self.dim();
        let xs = to_sparse(x);
        let cols: Vec<Vec<Q>> = (0..n).map(|j| to_dense(&self.mul_sparse(&unit_vec(j), &xs), n)).collect();
        Mat::from_cols(n, &cols)
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Q> {
        to_dense(&unit_vec(i), self.dim())
    }

    /// The same algebra in the basis `e'_j = Σ_i p[i][j] e_i`.
    pub fn change_basis(&self, p: &Mat) -> Result<Algebra, BimodError> {
        let pinv = p.inverse().ok_or_else(|| BimodError::InvalidAlgebra("singular change of basis".into()))?;
        let n = self.dim();
        let structure = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let prod = self.mul(&p.col(i), &p.col(j));
                        pinv.mul_vec(&prod)
                    })
                    .collect()
            })
            .collect();
        Algebra::new(self.basis.clone(), structure, pinv.mul_vec(&self.unit))
    }

    /// `A` as an `(A, A)`-bimodule, free on the unit.
    pub fn regular(self: &Arc<Self>) -> Bimodule {
        let n = self.dim();
        Bimodule {
            a: self.clone(),
            r: self.clone(),
            left: (0..n).map(|i| self.left_mult(&self.basis_vec(i))).collect(),
            right: (0..n).map(|i| self.right_mult(&self.basis_vec(i))).collect(),
            witness: Some(vec![self.unit.clone()]),
        }
    }

    /// HH₀ of the algebra with coefficients in itself.
    pub fn hh0(self: &Arc<Self>) -> HH0Space {
        shadow_hh0(&self.regular())
    }
}

/// Coordinates of `v` in the column span of `w`, if it lies there.
fn solve_in_span(w: &Mat, v: &[Q]) -> Option<Vec<Q>> {
    // row-reduce the augmented system [w | v]
    let n = w.cols;
    let mut rows: Vec<Vec<Q>> = (0..w.rows).map(|i| {
        let mut r = w.row(i).to_vec();
        r.push(v[i].clone());
        r
    }).collect();
    let mut piv = Vec::new();
    let mut r0 = 0;
    for c in 0..n {
        let Some(p) = (r0..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(r0, p);
        let s = rows[r0][c].recip();
        for x in rows[r0].iter_mut() {
            *x *= &s;
        }
        for r in 0..rows.len() {
            if r != r0 && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                let src = rows[r0].clone();
                for (x, y) in rows[r].iter_mut().zip(src) {
                    *x -= &f * y;
                }
            }
        }
        piv.push(c);
        r0 += 1;
    }
    if rows[r0..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut out = vec![Q::zero(); n];
    for (k, c) in piv.iter().enumerate() {
        out[*c] = rows[k][n].clone();
    }
    Some(out)
}

/// An `(A, R)`-bimodule: `left[i]` is the matrix of `m ↦ e_i m` and
/// `right[j]` the matrix of `m ↦ m f_j`. The optional witness lists
/// generators of `M` as a free right `R`-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub a: Arc<Algebra>,
    pub r: Arc<Algebra>,
    pub left: Vec<Mat>,
    pub right: Vec<Mat>,
    pub witness: Option<Vec<Vec<Q>>>,
}

fn combo(mats: &[Mat], coeffs: &[Q], n: usize) -> Mat {
    let mut out = Mat::zero(n, n);
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&m.scale(c));
        }
    }
    out
}

impl Bimodule {
    pub fn dim(&self) -> usize {
        self.left.first().or(self.right.first()).map_or(0, |m| m.rows)
    }

    /// Action of an arbitrary element of `A` on the left.
    pub fn left_action(&self, x: &[Q]) -> Mat {
        combo(&self.left, x, self.dim())
    }

    pub fn right_action(&self, x: &[Q]) -> Mat {
        combo(&self.right, x, self.dim())
    }

    /// Checks the action laws, commutation of the actions and the witness.
    pub fn validate(&self) -> Result<(), BimodError> {
        let m = self.dim();
        let bad = |s: String| Err(BimodError::InvalidBimodule(s));
        if self.left.len() != self.a.dim() || self.right.len() != self.r.dim() {
            return bad("one action matrix per basis element is required".into());
        }
        if self.left.iter().chain(&self.right).any(|x| x.rows != m || x.cols != m) {
            return bad(format!("action matrices must be {m}×{m}"));
        }
        let (a, r) = (&self.a, &self.r);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let prod = a.mul(&a.basis_vec(i), &a.basis_vec(j));
                if self.left[i].mul(&self.left[j]) != self.left_action(&prod) {
                    return bad(format!("left action is not multiplicative at ({i}, {j})"));
                }
            }
        }
        if self.left_action(&a.unit) != Mat::identity(m) {
            return bad("left unit does not act as the identity".into());
        }
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                let prod = r.mul(&r.basis_vec(i), &r.basis_vec(j));
                if self.right[j].mul(&self.right[i]) != self.right_action(&prod) {
                    return bad(format!("right action is not multiplicative at ({i}, {j})"));
                }
            }
        }
        if self.right_action(&r.unit) != Mat::identity(m) {
            return bad("right unit does not act as the identity".into());
        }
        for (i, l) in self.left.iter().enumerate() {
            for (j, rr) in self.right.iter().enumerate() {
                if l.mul(rr) != rr.mul(l) {
                    return bad(format!("actions of e{i} and f{j} do not commute"));
                }
            }
        }
        if self.witness.is_some() {
            self.witness_matrix()?;
        }
        Ok(())
    }

    /// Columns `g_i f_b` in the order `(i, b)`; invertible iff the
    /// witness is a free basis.
    fn witness_matrix(&self) -> Result<Mat, BimodError> {
        let Some(gens) = &self.witness else { return Err(BimodError::NotFree("no freeness witness".into())) };
        let m = self.dim();
        if gens.iter().any(|g| g.len() != m) {
            return Err(BimodError::NotFree(format!("witness vectors must have length {m}")));
        }
        let mut cols = Vec::new();
        for g in gens {
            for rb in &self.right {
                cols.push(rb.mul_vec(g));
            }
        }
        if cols.len() != m {
            return Err(BimodError::NotFree(format!(
                "{} generators over a {}-dimensional algebra cannot span a {m}-dimensional module",
                gens.len(),
                self.r.dim()
            )));
        }
        let w = Mat::from_cols(m, &cols);
        if w.inverse().is_none() {
            return Err(BimodError::NotFree("R^k → M is not an isomorphism".into()));
        }
        Ok(w)
    }

    /// Looks for free generators over `R` among basis vectors and their
    /// pairwise sums and differences. `None` does not prove `M` is not free.
    pub fn find_witness(&self) -> Option<Vec<Vec<Q>>> {
        let (m, dr) = (self.dim(), self.r.dim());
        if dr == 0 || m % dr != 0 {
            return None;
        }
        let e = |i: usize| to_dense(&unit_vec(i), m);
        let mut candidates: Vec<Vec<Q>> = (0..m).map(e).collect();
        for i in 0..m {
            for j in i + 1..m {
                for s in [1, -1] {
                    let mut v = e(i);
                    v[j] = q(s);
                    candidates.push(v);
                }
            }
        }
        let mut span = Echelon::new(m);
        let mut gens = Vec::new();
        for g in candidates {
            let mut trial = span.clone();
            if self.right.iter().all(|rb| trial.insert(to_sparse(&rb.mul_vec(&g)))) {
                span = trial;
                gens.push(g);
                if span.rank() == m {
                    return Some(gens);
                }
            }
        }
        None
    }

    /// `M ⊕ N` with the union of the witnesses.
    pub fn direct_sum(&self, o: &Bimodule) -> Bimodule {
        let (m, n) = (self.dim(), o.dim());
        let witness = match (&self.witness, &o.witness) {
            (Some(x), Some(y)) => Some(
                x.iter()
                    .map(|g| g.iter().cloned().chain(std::iter::repeat(Q::zero()).take(n)).collect())
                    .chain(y.iter().map(|g| std::iter::repeat(Q::zero()).take(m).chain(g.iter().cloned()).collect()))
                    .collect(),
            ),
            _ => None,
        };
        Bimodule {
            a: self.a.clone(),
            r: self.r.clone(),
            left: self.left.iter().zip(&o.left).map(|(x, y)| x.direct_sum(y)).collect(),
            right: self.right.iter().zip(&o.right).map(|(x, y)| x.direct_sum(y)).collect(),
            witness,
        }
    }

    /// The same module in the basis given by the columns of `t`.
    pub fn change_basis(&self, t: &Mat) -> Option<Bimodule> {
        let ti = t.inverse()?;
        let conj = |x: &Mat| ti.mul(x).mul(t);
        Some(Bimodule {
            a: self.a.clone(),
            r: self.r.clone(),
            left: self.left.iter().map(conj).collect(),
            right: self.right.iter().map(conj).collect(),
            witness: self.witness.as_ref().map(|w| w.iter().map(|g| ti.mul_vec(g)).collect()),
        })
    }
}

/// `M ⊗_R N` as a quotient of the plain tensor product. Plain basis
/// element `u_i ⊗ v_j` has index `i * dim(N) + j`.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub left_dim: usize,
    pub right_dim: usize,
    pub quotient: Quotient,
}

impl TensorSpace {
    pub fn plain_index(&self, i: usize, j: usize) -> usize {
        i * self.right_dim + j
    }

    pub fn pure(&self, u: &SVec, v: &SVec) -> SVec {
        pure_tensor(self.right_dim, u, v)
    }
}

fn pure_tensor(right_dim: usize, u: &SVec, v: &SVec) -> SVec {
    let mut out = SVec::new();
    for (i, a) in u {
        for (j, b) in v {
            out.insert(i * right_dim + j, a * b);
        }
    }
    out
}

fn cols_sparse(m: &Mat) -> Vec<SVec> {
    (0..m.cols).map(|j| to_sparse(&m.col(j))).collect()
}

/// Relations `u·x ⊗ v − u ⊗ x·v` for `x` running over generators, given
/// the right action on the first factor and the left action on the second.
fn balance_relations(ech: &mut Echelon, right_on_first: &[Mat], left_on_second: &[Mat], gens: &[usize]) {
    let m = right_on_first.first().map_or(0, |x| x.rows);
    let p = left_on_second.first().map_or(0, |x| x.rows);
    for (ra, lb) in gens.iter().map(|&g| (&right_on_first[g], &left_on_second[g])) {
        let rc = cols_sparse(ra);
        let lc = cols_sparse(lb);
        for i in 0..m {
            for j in 0..p {
                let mut v = pure_tensor(p, &rc[i], &unit_vec(j));
                axpy(&mut v, &-Q::one(), &pure_tensor(p, &unit_vec(i), &lc[j]));
                if !v.is_empty() {
                    ech.insert(v);
                }
            }
        }
    }
}

/// Relations `x·u ⊗ v − u ⊗ v·x`: the shadow's cyclic coequalizer on a
/// tensor product whose outer algebras agree.
fn cyclic_relations(ech: &mut Echelon, left_on_first: &[Mat], right_on_second: &[Mat], gens: &[usize]) {
    let m = left_on_first.first().map_or(0, |x| x.rows);
    let p = right_on_second.first().map_or(0, |x| x.rows);
    for (la, rb) in gens.iter().map(|&g| (&left_on_first[g], &right_on_second[g])) {
        let lc = cols_sparse(la);
        let rc = cols_sparse(rb);
        for i in 0..m {
            for j in 0..p {
                let mut v = pure_tensor(p, &lc[i], &unit_vec(j));
                axpy(&mut v, &-Q::one(), &pure_tensor(p, &unit_vec(i), &rc[j]));
                if !v.is_empty() {
                    ech.insert(v);
                }
            }
        }
    }
}

fn tensor_space(m: &Bimodule, n: &Bimodule) -> TensorSpace {
    let mut ech = Echelon::new(m.dim() * n.dim());
    balance_relations(&mut ech, &m.right, &n.left, m.r.generators());
    TensorSpace { left_dim: m.dim(), right_dim: n.dim(), quotient: Quotient::new(ech) }
}

/// `M ⊗_R N` for `M` over `(A, R)` and `N` over `(R, C)`, with the induced
/// actions. If both factors carry witnesses, so does the result.
pub fn tensor_over(mid: &Algebra, m: &Bimodule, n: &Bimodule) -> Result<Bimodule, BimodError> {
    if *m.r != *mid || *n.a != *mid {
        return Err(BimodError::InvalidBimodule("middle algebras do not match".into()));
    }
    let ts = tensor_space(m, n);
    let q = &ts.quotient;
    let d = q.dim();
    let reps: Vec<(usize, usize)> = q.basis.iter().map(|c| (c / n.dim(), c % n.dim())).collect();
    let induced = |act: &dyn Fn(usize, usize) -> SVec| -> Mat {
        let cols: Vec<Vec<Q>> = reps.iter().map(|&(i, j)| q.project(act(i, j))).collect();
        Mat::from_cols(d, &cols)
    };
    let left = m
        .left
        .iter()
        .map(|la| {
            let lc = cols_sparse(la);
            induced(&|i, j| ts.pure(&lc[i], &unit_vec(j)))
        })
        .collect();
    let right = n
        .right
        .iter()
        .map(|rb| {
            let rc = cols_sparse(rb);
            induced(&|i, j| ts.pure(&unit_vec(i), &rc[j]))
        })
        .collect();
    let witness = match (&m.witness, &n.witness) {
        (Some(gs), Some(hs)) => Some(
            gs.iter()
                .flat_map(|g| hs.iter().map(|h| q.project(ts.pure(&to_sparse(g), &to_sparse(h)))))
                .collect(),
        ),
        _ => None,
    };
    Ok(Bimodule { a: m.a.clone(), r: n.r.clone(), left, right, witness })
}

/// HH₀: the quotient of an `(R, R)`-bimodule by `r·m − m·r`.
#[derive(Clone, Debug)]
pub struct HH0Space {
    pub quotient: Quotient,
}

impl HH0Space {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Ambient basis index of each quotient basis vector.
    pub fn representatives(&self) -> &[usize] {
        &self.quotient.basis
    }

    pub fn projection(&self) -> Mat {
        self.quotient.projection_matrix()
    }

    pub fn project(&self, v: &[Q]) -> Vec<Q> {
        self.quotient.project(to_sparse(v))
    }
}

pub fn shadow_hh0(m: &Bimodule) -> HH0Space {
    let n = m.dim();
    let mut ech = Echelon::new(n);
    for &g in m.r.generators() {
        let d = m.left[g].add(&m.right[g].scale(&-Q::one()));
        for j in 0..n {
            let v = to_sparse(&d.col(j));
            if !v.is_empty() {
                ech.insert(v);
            }
        }
    }
    HH0Space { quotient: Quotient::new(ech) }
}

/// The dual `DM = Hom_R(M, R)` of a free `(A, R)`-bimodule, in the basis
/// `φ_{i,b}: g_j ↦ δ_ij f_b` (index `i * dim R + b`).
#[derive(Clone, Debug)]
pub struct Dual {
    pub dm: Bimodule,
    /// `g ↦ (block i: coordinates of r_i)` where `g = Σ_i g_i r_i`.
    coords: Mat,
    /// The dual basis element `φ_i` with `φ_i(g_j) = δ_ij 1`.
    pub dual_basis: Vec<Vec<Q>>,
    /// `A → M ⊗_R DM`, into the quotient basis of `m_dm`.
    pub coev_map: Mat,
    /// `DM ⊗_A M → R`, from the quotient basis of `dm_m`.
    pub eval_map: Mat,
    pub m_dm: TensorSpace,
    pub dm_m: TensorSpace,
}

impl Dual {
    /// `φ(m)` for `φ` in coordinates and `m ∈ M`.
    pub fn apply(&self, r: &Algebra, phi: &[Q], m: &[Q]) -> Vec<Q> {
        let c = self.coords.mul_vec(m);
        let k = r.dim();
        let mut out = vec![Q::zero(); k];
        for i in 0..phi.len() / k {
            let prod = r.mul(&phi[i * k..(i + 1) * k], &c[i * k..(i + 1) * k]);
            for (o, x) in out.iter_mut().zip(prod) {
                *o += x;
            }
        }
        out
    }
}

pub fn dualize(m: &Bimodule) -> Result<Dual, BimodError> {
    let w = m.witness_matrix()?;
    let coords = w.inverse().expect("checked invertible");
    let gens = m.witness.as_ref().unwrap();
    let (r, a) = (&m.r, &m.a);
    let (k, dr, dim) = (gens.len(), r.dim(), m.dim());
    // r_{j,i} with a·g_i = Σ_j g_j r_{j,i}, for each basis element of A
    let blocks = |v: &[Q]| -> Vec<Vec<Q>> { (0..k).map(|j| v[j * dr..(j + 1) * dr].to_vec()).collect() };
    let right = (0..a.dim())
        .map(|ai| {
            let mut mat = Mat::zero(dim, dim);
            for (i, g) in gens.iter().enumerate() {
                let rji = blocks(&coords.mul_vec(&m.left[ai].mul_vec(g)));
                for (j, rj) in rji.iter().enumerate() {
                    // block j of φ times r_{j,i} lands in block i
                    let rm = r.right_mult(rj);
                    for x in 0..dr {
                        for y in 0..dr {
                            let e = rm.get(x, y).clone();
                            if !e.is_zero() {
                                let old = mat.get(i * dr + x, j * dr + y).clone();
                                mat.set(i * dr + x, j * dr + y, old + e);
                            }
                        }
                    }
                }
            }
            mat
        })
        .collect();
    let left = (0..dr)
        .map(|c| {
            let lm = r.left_mult(&r.basis_vec(c));
            let mut mat = Mat::zero(dim, dim);
            for i in 0..k {
                for x in 0..dr {
                    for y in 0..dr {
                        mat.set(i * dr + x, i * dr + y, lm.get(x, y).clone());
                    }
                }
            }
            mat
        })
        .collect();
    let dual_basis: Vec<Vec<Q>> = (0..k)
        .map(|i| {
            let mut v = vec![Q::zero(); dim];
            v[i * dr..(i + 1) * dr].clone_from_slice(&r.unit);
            v
        })
        .collect();
    let dm = Bimodule { a: r.clone(), r: a.clone(), left, right, witness: None };

    let m_dm = tensor_space(m, &dm);
    let dm_m = tensor_space(&dm, m);
    let mut d = Dual {
        dm,
        coords,
        dual_basis,
        coev_map: Mat::zero(0, 0),
        eval_map: Mat::zero(0, 0),
        m_dm,
        dm_m,
    };
    let coev_cols: Vec<Vec<Q>> =
        (0..a.dim()).map(|x| d.m_dm.quotient.project(coev_plain(m, &d, &a.basis_vec(x)))).collect();
    d.coev_map = Mat::from_cols(d.m_dm.quotient.dim(), &coev_cols);
    let eval_cols: Vec<Vec<Q>> = d
        .dm_m
        .quotient
        .basis
        .iter()
        .map(|c| {
            let (phi, x) = (c / dim, c % dim);
            d.apply(r, &to_dense(&unit_vec(phi), dim), &to_dense(&unit_vec(x), dim))
        })
        .collect();
    d.eval_map = Mat::from_cols(dr, &eval_cols);
    check_triangles(m, &d)?;
    Ok(d)
}

/// `a ↦ Σ_i a·g_i ⊗ φ_i` in the plain tensor `M ⊗ DM`.
fn coev_plain(m: &Bimodule, d: &Dual, x: &[Q]) -> SVec {
    let la = m.left_action(x);
    let mut out = SVec::new();
    for (g, phi) in m.witness.as_ref().unwrap().iter().zip(&d.dual_basis) {
        let t = d.m_dm.pure(&to_sparse(&la.mul_vec(g)), &to_sparse(phi));
        axpy(&mut out, &Q::one(), &t);
    }
    out
}

/// Both zig-zags on basis vectors: `Σ_i g_i φ_i(m) = m` and
/// `Σ_i φ(g_i) φ_i = φ`.
fn check_triangles(m: &Bimodule, d: &Dual) -> Result<(), BimodError> {
    let gens = m.witness.as_ref().unwrap();
    let (r, dim) = (&m.r, m.dim());
    for x in 0..dim {
        let e = to_dense(&unit_vec(x), dim);
        let mut back = vec![Q::zero(); dim];
        for (g, phi) in gens.iter().zip(&d.dual_basis) {
            let v = m.right_action(&d.apply(r, phi, &e)).mul_vec(g);
            for (o, y) in back.iter_mut().zip(v) {
                *o += y;
            }
        }
        if back != e {
            return Err(BimodError::NotFree("first triangle identity fails".into()));
        }
    }
    for y in 0..dim {
        let phi = to_dense(&unit_vec(y), dim);
        let mut back = vec![Q::zero(); dim];
        for (g, psi) in gens.iter().zip(&d.dual_basis) {
            let v = d.dm.left_action(&d.apply(r, &phi, g)).mul_vec(psi);
            for (o, z) in back.iter_mut().zip(v) {
                *o += z;
            }
        }
        if back != phi {
            return Err(BimodError::NotFree("second triangle identity fails".into()));
        }
    }
    Ok(())
}

/// HH₀ of `M ⊗_R N` for `M` over `(A, R)` and `N` over `(R, A)`, as a
/// quotient of the plain tensor product by the balancing and cyclic
/// relations together.
fn shadow_of_tensor(m: &Bimodule, n: &Bimodule) -> Quotient {
    shadow_of_balanced(&tensor_space(m, n), m, n)
}

fn shadow_of_balanced(ts: &TensorSpace, m: &Bimodule, n: &Bimodule) -> Quotient {
    let mut ech = ts.quotient.ech.clone();
    cyclic_relations(&mut ech, &m.left, &n.right, m.a.generators());
    Quotient::new(ech)
}

/// The trace of `id_M` at HH₀: `⟨⟨A⟩⟩ → ⟨⟨M ⊗_R DM⟩⟩ → ⟨⟨DM ⊗_A M⟩⟩ → ⟨⟨R⟩⟩`,
/// a `dim HH₀(R) × dim HH₀(A)` matrix in the pivot bases.
pub fn evaluate_trace(m: &Bimodule) -> Result<Mat, BimodError> {
    let d = dualize(m)?;
    let (a, r) = (&m.a, &m.r);
    let hh_a = a.hh0();
    let hh_r = r.hh0();
    let sh_t = shadow_of_balanced(&d.m_dm, m, &d.dm);
    let sh_s = shadow_of_balanced(&d.dm_m, &d.dm, m);
    let (dim, ddim) = (m.dim(), d.dm.dim());

    // coevaluation on HH₀(A) representatives
    let coev: Vec<Vec<Q>> = hh_a
        .representatives()
        .iter()
        .map(|&x| sh_t.project(coev_plain(m, &d, &a.basis_vec(x))))
        .collect();
    let coev = Mat::from_cols(sh_t.dim(), &coev);

    // θ: u ⊗ φ ↦ φ ⊗ u on representatives
    let theta: Vec<Vec<Q>> = sh_t
        .basis
        .iter()
        .map(|c| {
            let (u, phi) = (c / ddim, c % ddim);
            sh_s.project(unit_vec(phi * dim + u))
        })
        .collect();
    let theta = Mat::from_cols(sh_s.dim(), &theta);

    // evaluation φ ⊗ u ↦ [φ(u)]
    let eval: Vec<Vec<Q>> = sh_s
        .basis
        .iter()
        .map(|c| {
            let (phi, u) = (c / dim, c % dim);
            let val = d.apply(r, &to_dense(&unit_vec(phi), ddim), &to_dense(&unit_vec(u), dim));
            hh_r.project(&val)
        })
        .collect();
    let eval = Mat::from_cols(hh_r.dim(), &eval);
    Ok(eval.mul(&theta).mul(&coev))
}

/// `[a] ↦ Σ_i [φ_i(a·g_i)]`, read directly off the dual basis.
pub fn hattori_stallings_oracle(m: &Bimodule) -> Result<Mat, BimodError> {
    let w = m.witness_matrix()?;
    let coords = w.inverse().expect("checked invertible");
    let gens = m.witness.as_ref().unwrap();
    let (a, r) = (&m.a, &m.r);
    let dr = r.dim();
    let hh_a = a.hh0();
    let hh_r = r.hh0();
    let cols: Vec<Vec<Q>> = hh_a
        .representatives()
        .iter()
        .map(|&x| {
            let la = &m.left[x];
            let mut sum = vec![Q::zero(); dr];
            for (i, g) in gens.iter().enumerate() {
                let c = coords.mul_vec(&la.mul_vec(g));
                for (s, y) in sum.iter_mut().zip(&c[i * dr..(i + 1) * dr]) {
                    *s += y;
                }
            }
            hh_r.project(&sum)
        })
        .collect();
    Ok(Mat::from_cols(hh_r.dim(), &cols))
}

/// The descended swap `⟨⟨M ⊗_R N⟩⟩ → ⟨⟨N ⊗_A M⟩⟩` and back, as matrices in
/// the pivot bases.
pub fn theta_pair(m: &Bimodule, n: &Bimodule) -> (Mat, Mat) {
    let s1 = shadow_of_tensor(m, n);
    let s2 = shadow_of_tensor(n, m);
    let (dm, dn) = (m.dim(), n.dim());
    let fwd: Vec<Vec<Q>> = s1.basis.iter().map(|c| s2.project(unit_vec((c % dn) * dm + c / dn))).collect();
    let back: Vec<Vec<Q>> = s2.basis.iter().map(|c| s1.project(unit_vec((c % dm) * dn + c / dm))).collect();
    (Mat::from_cols(s2.dim(), &fwd), Mat::from_cols(s1.dim(), &back))
}
