//! Exact rational linear algebra: dense matrices and incremental sparse
//! row echelon forms used for quotient spaces.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Reads `"p/q"`, `"p"` or a JSON integer-looking string.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(Q::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sparse vector: column index to nonzero entry.
pub type SVec = BTreeMap<usize, Q>;

pub fn axpy(v: &mut SVec, a: &Q, w: &SVec) {
    for (c, x) in w {
        let e = v.entry(*c).or_insert_with(Q::zero);
        *e += a * x;
        if e.is_zero() {
            v.remove(c);
        }
    }
}

pub fn unit_vec(i: usize) -> SVec {
    let mut v = SVec::new();
    v.insert(i, Q::one());
    v
}

pub fn to_sparse(v: &[Q]) -> SVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(v: &SVec, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// A row echelon basis of a subspace of `Q^dim`, built one vector at a
/// time. Each stored row has leading entry 1 at its pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    pivots: BTreeMap<usize, SVec>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, pivots: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce(&self, mut v: SVec) -> SVec {
        let mut from = 0;
        while let Some(c) = v.range(from..).map(|(c, _)| *c).find(|c| self.pivots.contains_key(c)) {
            let a = -v[&c].clone();
            axpy(&mut v, &a, &self.pivots[&c]);
            from = c + 1;
        }
        v
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: SVec) -> bool {
        let mut r = self.reduce(v);
        let Some((&c, lead)) = r.iter().next() else { return false };
        let inv = lead.recip();
        for x in r.values_mut() {
            *x *= &inv;
        }
        self.pivots.insert(c, r);
        true
    }

    /// The stored rows, in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SVec> {
        self.pivots.values()
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Non-pivot columns in increasing order: a basis of the quotient.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.pivots.contains_key(c)).collect()
    }
}

/// `Q^dim / span(relations)` with the quotient basis given by the
/// non-pivot columns of the echelon form.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ech: Echelon,
    pub basis: Vec<usize>,
    index: BTreeMap<usize, usize>,
}

impl Quotient {
    pub fn new(ech: Echelon) -> Self {
        let basis = ech.complement();
        let index = basis.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Quotient { ech, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the class of `v` in the quotient basis.
    pub fn project(&self, v: SVec) -> Vec<Q> {
        let r = self.ech.reduce(v);
        let mut out = vec![Q::zero(); self.basis.len()];
        for (c, x) in r {
            out[self.index[&c]] = x;
        }
        out
    }

    /// The representative of a quotient vector: a combination of basis columns.
    pub fn lift(&self, coords: &[Q]) -> SVec {
        coords
            .iter()
            .zip(&self.basis)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, c)| (*c, x.clone()))
            .collect()
    }

    /// The projection as a `dim × ambient` matrix.
    pub fn projection_matrix(&self) -> Mat {
        let mut m = Mat::zero(self.dim(), self.ech.dim());
        for j in 0..self.ech.dim() {
            for (i, x) in self.project(unit_vec(j)).into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| fmt_q(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return None;
        }
        Some(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_cols(n: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zero(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect()).expect("rectangular")
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "matrix shapes");
        let mut out = Mat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "matrix-vector shapes");
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn mul_svec(&self, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (j, x) in v {
            for i in 0..self.rows {
                let a = self.get(i, *j);
                if !a.is_zero() {
                    let e = out.entry(i).or_insert_with(Q::zero);
                    *e += a * x;
                }
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shapes");
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: &Q) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, o: &Mat) -> Mat {
        let mut out = Mat::zero(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                out.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(to_sparse(self.row(i)));
        }
        e.rank()
    }

    /// Gauss-Jordan inverse; None if singular or not square.
    /// Kronecker product: `(A ⊗ B)[(i, k), (j, l)] = A[i][j] B[k][l]`.
    pub fn kron(&self, o: &Mat) -> Mat {
        let mut m = Mat::zero(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(i * o.rows + k, j * o.cols + l, a * o.get(k, l));
                    }
                }
            }
        }
        m
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let s = a.get(c, c).recip();
            for j in 0..n {
                a.data[c * n + j] *= &s;
                inv.data[c * n + j] *= &s;
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let x = &a.data[c * n + j] * &f;
                    a.data[r * n + j] -= x;
                    let y = &inv.data[c * n + j] * &f;
                    inv.data[r * n + j] -= y;
                }
            }
        }
        Some(inv)
    }

    /// Whether every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Entries as i64, if all are integers in range.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| if x.is_integer() { x.numer().to_i64() } else { None }).collect())
            .collect()
    }

    pub fn max_abs(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "3", "-7", "1/2", "-5/3"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(fmt_q(&parse_q("4/6").unwrap()), "2/3");
        assert!(parse_q("1/0").is_none());
    }

    #[test]
    fn quotient_by_a_line() {
        let mut e = Echelon::new(3);
        let mut v = SVec::new();
        v.insert(0, q(1));
        v.insert(2, q(-1));
        assert!(e.insert(v.clone()));
        assert!(!e.insert(v));
        let qt = Quotient::new(e);
        assert_eq!(qt.basis, vec![1, 2]);
        assert_eq!(qt.project(unit_vec(0)), vec![q(0), q(1)]);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = Mat> {
        proptest::collection::vec(-3i64..=3, n * n)
            .prop_map(move |v| Mat::from_rows(v.chunks(n).map(|r| r.iter().map(|x| q(*x)).collect()).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(m in small_matrix(4)) {
            if let Some(inv) = m.inverse() {
                prop_assert_eq!(m.mul(&inv), Mat::identity(4));
                prop_assert_eq!(inv.mul(&m), Mat::identity(4));
                prop_assert_eq!(m.rank(), 4);
            } else {
                prop_assert!(m.rank() < 4);
            }
        }

        #[test]
        fn projection_kills_relations(m in small_matrix(4)) {
            let mut e = Echelon::new(4);
            for i in 0..4 {
                e.insert(to_sparse(m.row(i)));
            }
            let qt = Quotient::new(e);
            prop_assert_eq!(qt.dim(), 4 - m.rank());
            for i in 0..4 {
                prop_assert!(qt.project(to_sparse(m.row(i))).iter().all(Zero::is_zero));
            }
            // lifting then projecting is the identity on the quotient
            for k in 0..qt.dim() {
                let mut c = vec![q(0); qt.dim()];
                c[k] = q(1);
                prop_assert_eq!(qt.project(qt.lift(&c)), c);
            }
        }
    }
}
