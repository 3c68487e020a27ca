use std::fmt;

use super::signature::{GenId, PairId, Signature, TwoGenId, ZeroId};

/// A strict 1-cell: a composable word of generators. The empty word at `A`
/// is the unit `U_A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneCell {
    src: ZeroId,
    tgt: ZeroId,
    gens: Vec<GenId>,
}

impl OneCell {
    pub fn unit(a: ZeroId) -> Self {
        OneCell { src: a, tgt: a, gens: Vec::new() }
    }

    pub fn gen(sig: &Signature, g: GenId) -> Self {
        let d = sig.one(g);
        OneCell { src: d.src, tgt: d.tgt, gens: vec![g] }
    }

    /// Unchecked constructor; `Signature::word_is_well_typed` validates the result.
    pub fn from_parts(src: ZeroId, tgt: ZeroId, gens: Vec<GenId>) -> Self {
        OneCell { src, tgt, gens }
    }

    pub fn src(&self) -> ZeroId {
        self.src
    }

    pub fn tgt(&self) -> ZeroId {
        self.tgt
    }

    pub fn gens(&self) -> &[GenId] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.tgt
    }

    /// Horizontal composite `self ⊗ other`, if the 0-cells chain.
    pub fn concat(&self, other: &OneCell) -> Option<OneCell> {
        if self.tgt != other.src {
            return None;
        }
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Some(OneCell { src: self.src, tgt: other.tgt, gens })
    }

    /// The 0-cell sitting at gap `i` of the word (0 = source, len = target).
    pub fn zero_at(&self, sig: &Signature, i: usize) -> ZeroId {
        if i == 0 {
            self.src
        } else {
            sig.one(self.gens[i - 1]).tgt
        }
    }

    /// Subword `[from, to)` with its boundary 0-cells.
    pub fn slice(&self, sig: &Signature, from: usize, to: usize) -> OneCell {
        OneCell {
            src: self.zero_at(sig, from),
            tgt: self.zero_at(sig, to),
            gens: self.gens[from..to].to_vec(),
        }
    }
}

/// 2-cells of the free shadowed bicategory. `VComp(f, g)` is "f then g".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoCell {
    Id(OneCell),
    Gen(TwoGenId),
    Coev(PairId),
    Eval(PairId),
    Gamma(OneCell, OneCell),
    VComp(Box<TwoCell>, Box<TwoCell>),
    HComp(Box<TwoCell>, Box<TwoCell>),
}

impl TwoCell {
    pub fn vcomp(f: TwoCell, g: TwoCell) -> TwoCell {
        TwoCell::VComp(Box::new(f), Box::new(g))
    }

    pub fn hcomp(f: TwoCell, g: TwoCell) -> TwoCell {
        TwoCell::HComp(Box::new(f), Box::new(g))
    }

    /// Left-nested vertical composite of a non-empty sequence.
    pub fn vchain(parts: impl IntoIterator<Item = TwoCell>) -> Option<TwoCell> {
        parts.into_iter().reduce(TwoCell::vcomp)
    }

    /// Left-nested horizontal composite of a non-empty sequence.
    pub fn hchain(parts: impl IntoIterator<Item = TwoCell>) -> Option<TwoCell> {
        parts.into_iter().reduce(TwoCell::hcomp)
    }

    pub fn size(&self) -> usize {
        match self {
            TwoCell::VComp(a, b) | TwoCell::HComp(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

/// Morphisms between shadows `⟨⟨X⟩⟩` of endo-1-cells. `SComp(u, v)` is "u then v".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShadowExpr {
    Sh(TwoCell),
    Theta(OneCell, OneCell),
    SComp(Box<ShadowExpr>, Box<ShadowExpr>),
    SId(OneCell),
}

impl ShadowExpr {
    pub fn scomp(u: ShadowExpr, v: ShadowExpr) -> ShadowExpr {
        ShadowExpr::SComp(Box::new(u), Box::new(v))
    }

    pub fn schain(parts: impl IntoIterator<Item = ShadowExpr>) -> Option<ShadowExpr> {
        parts.into_iter().reduce(ShadowExpr::scomp)
    }

    pub fn size(&self) -> usize {
        match self {
            ShadowExpr::Sh(f) => 1 + f.size(),
            ShadowExpr::SComp(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

/// Either kind of expression; proof goals and rewrite steps work on this.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Two(TwoCell),
    Shadow(ShadowExpr),
}

impl Expr {
    pub fn size(&self) -> usize {
        match self {
            Expr::Two(t) => t.size(),
            Expr::Shadow(s) => s.size(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Expr::Two(_) => "2-cell",
            Expr::Shadow(_) => "shadow",
        }
    }
}

impl From<TwoCell> for Expr {
    fn from(t: TwoCell) -> Self {
        Expr::Two(t)
    }
}

impl From<ShadowExpr> for Expr {
    fn from(s: ShadowExpr) -> Self {
        Expr::Shadow(s)
    }
}

/// A position in an expression tree: child indices from the root.
/// Binary composites have children 0 and 1; `Sh(f)` has child 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<u8>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, i: u8) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    pub fn join(&self, rest: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&rest.0);
        Path(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

/// Borrowed view of a subterm.
#[derive(Clone, Copy, Debug)]
pub enum SubTerm<'a> {
    Two(&'a TwoCell),
    Shadow(&'a ShadowExpr),
}

impl SubTerm<'_> {
    pub fn to_expr(self) -> Expr {
        match self {
            SubTerm::Two(t) => Expr::Two(t.clone()),
            SubTerm::Shadow(s) => Expr::Shadow(s.clone()),
        }
    }
}

impl Expr {
    pub fn as_sub(&self) -> SubTerm<'_> {
        match self {
            Expr::Two(t) => SubTerm::Two(t),
            Expr::Shadow(s) => SubTerm::Shadow(s),
        }
    }

    pub fn at(&self, path: &Path) -> Option<SubTerm<'_>> {
        let mut cur = self.as_sub();
        for &i in &path.0 {
            cur = match (cur, i) {
                (SubTerm::Two(TwoCell::VComp(a, b) | TwoCell::HComp(a, b)), i) => {
                    SubTerm::Two(if i == 0 { a } else if i == 1 { b } else { return None })
                }
                (SubTerm::Shadow(ShadowExpr::SComp(a, b)), i) => {
                    SubTerm::Shadow(if i == 0 { a } else if i == 1 { b } else { return None })
                }
                (SubTerm::Shadow(ShadowExpr::Sh(f)), 0) => SubTerm::Two(f),
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Replaces the subterm at `path`; the replacement must have the same kind.
    pub fn replace(&self, path: &Path, new: Expr) -> Option<Expr> {
        fn two(t: &TwoCell, p: &[u8], new: Expr) -> Option<TwoCell> {
            let Some((&i, rest)) = p.split_first() else {
                return match new {
                    Expr::Two(n) => Some(n),
                    Expr::Shadow(_) => None,
                };
            };
            match (t, i) {
                (TwoCell::VComp(a, b), 0) => Some(TwoCell::vcomp(two(a, rest, new)?, (**b).clone())),
                (TwoCell::VComp(a, b), 1) => Some(TwoCell::vcomp((**a).clone(), two(b, rest, new)?)),
                (TwoCell::HComp(a, b), 0) => Some(TwoCell::hcomp(two(a, rest, new)?, (**b).clone())),
                (TwoCell::HComp(a, b), 1) => Some(TwoCell::hcomp((**a).clone(), two(b, rest, new)?)),
                _ => None,
            }
        }
        fn sh(s: &ShadowExpr, p: &[u8], new: Expr) -> Option<ShadowExpr> {
            let Some((&i, rest)) = p.split_first() else {
                return match new {
                    Expr::Shadow(n) => Some(n),
                    Expr::Two(_) => None,
                };
            };
            match (s, i) {
                (ShadowExpr::SComp(a, b), 0) => Some(ShadowExpr::scomp(sh(a, rest, new)?, (**b).clone())),
                (ShadowExpr::SComp(a, b), 1) => Some(ShadowExpr::scomp((**a).clone(), sh(b, rest, new)?)),
                (ShadowExpr::Sh(f), 0) => Some(ShadowExpr::Sh(two(f, rest, new)?)),
                _ => None,
            }
        }
        match self {
            Expr::Two(t) => two(t, &path.0, new).map(Expr::Two),
            Expr::Shadow(s) => sh(s, &path.0, new).map(Expr::Shadow),
        }
    }

    /// All positions, pre-order.
    pub fn positions(&self) -> Vec<Path> {
        fn go(t: SubTerm<'_>, p: Path, out: &mut Vec<Path>) {
            out.push(p.clone());
            match t {
                SubTerm::Two(TwoCell::VComp(a, b) | TwoCell::HComp(a, b)) => {
                    go(SubTerm::Two(a), p.child(0), out);
                    go(SubTerm::Two(b), p.child(1), out);
                }
                SubTerm::Shadow(ShadowExpr::SComp(a, b)) => {
                    go(SubTerm::Shadow(a), p.child(0), out);
                    go(SubTerm::Shadow(b), p.child(1), out);
                }
                SubTerm::Shadow(ShadowExpr::Sh(f)) => go(SubTerm::Two(f), p.child(0), out),
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self.as_sub(), Path::root(), &mut out);
        out
    }
}
