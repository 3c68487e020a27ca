//! Finite groups, covers `BK → BG` and the free loop transfer on
//! conjugacy-class bases.

mod cross;
mod families;
mod io;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

pub use cross::{cross_model_check, restriction_bimodule, CrossModelReport};
pub use families::{abelian, alternating, cyclic, dihedral, direct_product, quaternion, symmetric};
pub use io::{load_group_json, parse_cycles, parse_subgroup_spec, GroupData};

pub const DEFAULT_ORDER_BOUND: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("group order exceeds the bound {0}")]
    TooLarge(usize),
    #[error("unknown subgroup `{0}`")]
    UnknownSubgroup(String),
    #[error("bad group data: {0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// A finite group on elements `0..order` with a multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    pub labels: Vec<String>,
    /// Images of `0..degree` for each element, when built from permutations.
    pub perms: Option<Vec<Vec<usize>>>,
}

/// A conjugacy class: its least element, size and members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub rep: usize,
    pub members: Vec<usize>,
}

impl Class {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl FiniteGroup {
    /// Checks closure, identity, inverses and associativity. Associativity
    /// is tested against a generating set, which suffices.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        let bad = |m: String| Err(GroupError::NotAGroup(m));
        if n == 0 {
            return bad("empty table".into());
        }
        if n > DEFAULT_ORDER_BOUND {
            return Err(GroupError::TooLarge(DEFAULT_ORDER_BOUND));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad(format!("table must be {n}×{n} with entries below {n}"));
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g)) else {
            return bad("no identity element".into());
        };
        let mut inverse = vec![0; n];
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == identity && table[h][g] == identity) {
                Some(h) => inverse[g] = h,
                None => return bad(format!("element {g} has no inverse")),
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(GroupError::Data(format!("{} labels for order {n}", labels.len())));
        }
        let g = FiniteGroup { table, identity, inverse, labels, perms: None };
        for c in g.generating_set() {
            for a in 0..n {
                for b in 0..n {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return bad(format!("({a} {b}) {c} ≠ {a} ({b} {c})"));
                    }
                }
            }
        }
        Ok(g)
    }

    /// The group generated by permutations of `0..degree`, elements sorted
    /// by their image lists.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>], bound: usize) -> Result<Self, GroupError> {
        for p in gens {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(GroupError::Data(format!("{p:?} is not a permutation of {degree} points")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut found = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for s in gens {
                let p: Vec<usize> = found[i].iter().map(|&x| s[x]).collect();
                if !index.contains_key(&p) {
                    if found.len() == bound {
                        return Err(GroupError::TooLarge(bound));
                    }
                    index.insert(p.clone(), found.len());
                    queue.push_back(found.len());
                    found.push(p);
                }
            }
        }
        found.sort();
        Ok(Self::from_sorted_perms(found))
    }

    fn from_sorted_perms(perms: Vec<Vec<usize>>) -> Self {
        let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        // (p q)(x) = p(q(x))
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                        index[pq.as_slice()]
                    })
                    .collect()
            })
            .collect();
        let n = perms.len();
        let identity = 0;
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n).find(|&h| table[g][h] == identity).expect("closed under products");
        }
        let labels = perms.iter().map(|p| cycle_label(p)).collect();
        FiniteGroup { table, identity, inverse, labels, perms: Some(perms) }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// `x⁻¹ g x`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inv(x), g), x)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup generated by `gens`, as sorted element indices.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| inside[i]).collect()
    }

    /// Greedily chosen generators: each is the least element outside the
    /// span of the previous ones.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        while span.len() < self.order() {
            let next = (0..self.order()).find(|x| span.binary_search(x).is_err()).unwrap();
            gens.push(next);
            span = self.generated(&gens);
        }
        gens
    }

    /// Conjugacy classes under conjugation by `by`, restricted to `within`
    /// (which must be normalized by `by`). Classes are ordered by least
    /// member, which is also the representative.
    fn classes_in(&self, within: &[usize], by: &[usize]) -> Vec<Class> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for &g in within {
            if seen[g] {
                continue;
            }
            let mut members: Vec<usize> = by.iter().map(|&x| self.conj(g, x)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                seen[m] = true;
            }
            out.push(Class { rep: members[0], members });
        }
        out
    }

    pub fn classes(&self) -> Vec<Class> {
        let all: Vec<usize> = (0..self.order()).collect();
        self.classes_in(&all, &all)
    }

    /// Checks that `k` is a subgroup, naming the first failure.
    pub fn check_subgroup(&self, k: &[usize]) -> Result<(), GroupError> {
        let bad = |m: String| Err(GroupError::NotASubgroup(m));
        let n = self.order();
        if let Some(x) = k.iter().find(|&&x| x >= n) {
            return bad(format!("element {x} is not in a group of order {n}"));
        }
        let mut inside = vec![false; n];
        for &x in k {
            inside[x] = true;
        }
        if !inside[self.identity] {
            return bad(format!("identity {} is missing", self.labels[self.identity]));
        }
        for &a in k {
            if !inside[self.inv(a)] {
                return bad(format!("inverse of {} is missing", self.labels[a]));
            }
            for &b in k {
                if !inside[self.mul(a, b)] {
                    return bad(format!(
                        "{} · {} = {} is missing",
                        self.labels[a],
                        self.labels[b],
                        self.labels[self.mul(a, b)]
                    ));
                }
            }
        }
        Ok(())
    }

    /// `K` as a group in its own right, elements in increasing order and
    /// labels inherited.
    pub fn subgroup(&self, k: &[usize]) -> Result<FiniteGroup, GroupError> {
        self.check_subgroup(k)?;
        let mut k = k.to_vec();
        k.sort_unstable();
        k.dedup();
        let pos: HashMap<usize, usize> = k.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = k.iter().map(|&a| k.iter().map(|&b| pos[&self.mul(a, b)]).collect()).collect();
        let mut sub = FiniteGroup::from_table(table, Some(k.iter().map(|&x| self.labels[x].clone()).collect()))?;
        sub.perms = self.perms.as_ref().map(|ps| k.iter().map(|&x| ps[x].clone()).collect());
        Ok(sub)
    }

    /// Element index of a permutation, for permutation groups.
    pub fn find_perm(&self, p: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|q| q == p)
    }
}

/// Cycle notation with 1-based points; `e` for the identity.
pub fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = p[x];
        }
        let _ = write!(out, "({})", cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// A finite cover `BK → BG`: left cosets `G = ⊔ x_i K` with least
/// representatives, and the conjugacy classes of both groups.
#[derive(Clone, Debug)]
pub struct CoverSpec {
    pub group: Arc<FiniteGroup>,
    pub subgroup: Vec<usize>,
    pub reps: Vec<usize>,
    pub g_classes: Vec<Class>,
    pub k_classes: Vec<Class>,
    /// Class of each subgroup element, indexed by group element.
    k_class_of: Vec<Option<usize>>,
    g_class_of: Vec<usize>,
}

pub fn build_cover(group: Arc<FiniteGroup>, k: &[usize]) -> Result<CoverSpec, GroupError> {
    group.check_subgroup(k)?;
    let mut subgroup = k.to_vec();
    subgroup.sort_unstable();
    subgroup.dedup();
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] == usize::MAX {
            for &h in &subgroup {
                coset_of[group.mul(x, h)] = reps.len();
            }
            reps.push(x);
        }
    }
    let g_classes = group.classes();
    let k_classes = group.classes_in(&subgroup, &subgroup);
    let mut g_class_of = vec![0; n];
    for (i, c) in g_classes.iter().enumerate() {
        for &m in &c.members {
            g_class_of[m] = i;
        }
    }
    let mut k_class_of = vec![None; n];
    for (i, c) in k_classes.iter().enumerate() {
        for &m in &c.members {
            k_class_of[m] = Some(i);
        }
    }
    Ok(CoverSpec { group, subgroup, reps, g_classes, k_classes, k_class_of, g_class_of })
}

impl CoverSpec {
    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.k_class_of[g].is_some()
    }

    pub fn k_class_of(&self, g: usize) -> Option<usize> {
        self.k_class_of[g]
    }

    pub fn g_class_of(&self, g: usize) -> usize {
        self.g_class_of[g]
    }

    /// Position of the coset `gK` in `reps`.
    pub fn coset_of(&self, g: usize) -> usize {
        let gr = &self.group;
        self.reps.iter().position(|&x| self.contains(gr.mul(gr.inv(x), g))).expect("cosets cover G")
    }
}

/// An integer matrix from classes of `G` (columns) to classes of `K` (rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub row_sizes: Vec<usize>,
    pub col_sizes: Vec<usize>,
    pub entries: Vec<Vec<i64>>,
}

impl TransferMatrix {
    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn column_sum(&self, j: usize) -> i64 {
        self.entries.iter().map(|r| r[j]).sum()
    }

    /// `self · other` as integer matrices; labels from the outer factors.
    pub fn compose(&self, other: &TransferMatrix) -> TransferMatrix {
        assert_eq!(self.cols(), other.rows(), "inner dimensions");
        let entries = (0..self.rows())
            .map(|i| (0..other.cols()).map(|j| (0..self.cols()).map(|k| self.entries[i][k] * other.entries[k][j]).sum()).collect())
            .collect();
        TransferMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: other.col_labels.clone(),
            row_sizes: self.row_sizes.clone(),
            col_sizes: other.col_sizes.clone(),
            entries,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.row_labels,
            "cols": self.col_labels,
            "entries": self.entries,
            "labels": {
                "row_sizes": self.row_sizes,
                "col_sizes": self.col_sizes,
            },
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, GroupError> {
        let bad = || GroupError::Data("malformed transfer matrix".into());
        let strings = |x: &serde_json::Value| -> Result<Vec<String>, GroupError> {
            serde_json::from_value(x.clone()).map_err(|_| bad())
        };
        let sizes = |x: Option<&serde_json::Value>| -> Result<Vec<usize>, GroupError> {
            serde_json::from_value(x.ok_or_else(bad)?.clone()).map_err(|_| bad())
        };
        let m = TransferMatrix {
            row_labels: strings(v.get("rows").ok_or_else(bad)?)?,
            col_labels: strings(v.get("cols").ok_or_else(bad)?)?,
            row_sizes: sizes(v.pointer("/labels/row_sizes"))?,
            col_sizes: sizes(v.pointer("/labels/col_sizes"))?,
            entries: serde_json::from_value(v.get("entries").ok_or_else(bad)?.clone()).map_err(|_| bad())?,
        };
        if m.entries.len() != m.rows() || m.entries.iter().any(|r| r.len() != m.cols()) {
            return Err(bad());
        }
        Ok(m)
    }

    /// Aligned text: a header of column labels, then one line per row.
    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        crate::cli::render_grid(&self.row_labels, &self.col_labels, &cells)
    }

    /// Reads back [`TransferMatrix::to_table`] output: labels and entries.
    pub fn parse_table(text: &str, row_labels: &[String], col_labels: &[String]) -> Option<Vec<Vec<i64>>> {
        let mut lines = text.lines();
        let header = lines.next()?;
        let mut rest = header.trim();
        for l in col_labels {
            rest = rest.strip_prefix(l.as_str())?.trim_start();
        }
        if !rest.is_empty() {
            return None;
        }
        let mut out = Vec::new();
        for (line, label) in lines.zip(row_labels) {
            let body = line.trim_start().strip_prefix(label.as_str())?;
            out.push(body.split_whitespace().map(|x| x.parse().ok()).collect::<Option<Vec<i64>>>()?);
        }
        (out.len() == row_labels.len()).then_some(out)
    }
}

/// Entries of the loop transfer for given coset and class representatives:
/// `(λ, ω) ↦ #{i : x_i⁻¹ g x_i ∈ λ}` with `g` the chosen element of `ω`.
pub fn transfer_entries(cover: &CoverSpec, coset_reps: &[usize], class_reps: &[usize]) -> Vec<Vec<i64>> {
    let g = &cover.group;
    let mut entries = vec![vec![0i64; class_reps.len()]; cover.k_classes.len()];
    for (col, &w) in class_reps.iter().enumerate() {
        for &x in coset_reps {
            if let Some(row) = cover.k_class_of(g.conj(w, x)) {
                entries[row][col] += 1;
            }
        }
    }
    entries
}

pub fn loop_transfer(cover: &CoverSpec) -> TransferMatrix {
    let g = &cover.group;
    let class_reps: Vec<usize> = cover.g_classes.iter().map(|c| c.rep).collect();
    TransferMatrix {
        row_labels: cover.k_classes.iter().map(|c| g.labels[c.rep].clone()).collect(),
        col_labels: class_reps.iter().map(|&r| g.labels[r].clone()).collect(),
        row_sizes: cover.k_classes.iter().map(Class::size).collect(),
        col_sizes: cover.g_classes.iter().map(Class::size).collect(),
        entries: transfer_entries(cover, &cover.reps, &class_reps),
    }
}

/// `[e]_G` through the loop transfer, coefficients summed.
pub fn becker_gottlieb_composite(cover: &CoverSpec) -> i64 {
    let t = loop_transfer(cover);
    t.column_sum(cover.g_class_of(cover.group.identity()))
}

/// Class inclusion `[k]_K ↦ [k]_G` followed by the loop transfer.
pub fn euler_composite(cover: &CoverSpec) -> Vec<Vec<i64>> {
    let t = loop_transfer(cover);
    let nk = cover.k_classes.len();
    (0..nk)
        .map(|i| cover.k_classes.iter().map(|c| t.entries[i][cover.g_class_of(c.rep)]).collect())
        .collect()
}

/// Both sides of `transfer(G, K) = transfer(H, K) · transfer(G, H)` for
/// `K ≤ H ≤ G`.
pub fn functoriality(group: &Arc<FiniteGroup>, h: &[usize], k: &[usize]) -> Result<(TransferMatrix, TransferMatrix), GroupError> {
    let direct = loop_transfer(&build_cover(group.clone(), k)?);
    let hg = Arc::new(group.subgroup(h)?);
    let mut hs = h.to_vec();
    hs.sort_unstable();
    let k_in_h: Vec<usize> = k
        .iter()
        .map(|x| hs.binary_search(x).map_err(|_| GroupError::NotASubgroup(format!("{} is not in H", group.labels[*x]))))
        .collect::<Result<_, _>>()?;
    let lower = loop_transfer(&build_cover(hg, &k_in_h)?);
    let upper = loop_transfer(&build_cover(group.clone(), h)?);
    Ok((direct, lower.compose(&upper)))
}

/// All subgroups, as sorted element lists, found by closing under
/// adjoining one element at a time.
pub fn all_subgroups(group: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut found: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    let mut frontier = vec![vec![group.identity()]];
    found.insert(frontier[0].clone(), ());
    while let Some(h) = frontier.pop() {
        for x in 0..group.order() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(x);
            let s = group.generated(&gens);
            if found.insert(s.clone(), ()).is_none() {
                frontier.push(s);
            }
        }
    }
    found.into_keys().collect()
}
