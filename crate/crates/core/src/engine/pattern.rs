use std::collections::BTreeMap;

use crate::term::{
    typecheck_2cell, typecheck_shadow, Expr, OneCell, PairId, ShadowExpr, Signature, SubTerm, TwoCell, ZeroId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Zero,
    One,
    Two,
    Shadow,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binding {
    Zero(ZeroId),
    One(OneCell),
    Two(TwoCell),
    Shadow(ShadowExpr),
}

impl Binding {
    pub fn kind(&self) -> Kind {
        match self {
            Binding::Zero(_) => Kind::Zero,
            Binding::One(_) => Kind::One,
            Binding::Two(_) => Kind::Two,
            Binding::Shadow(_) => Kind::Shadow,
        }
    }
}

pub type Subst = BTreeMap<String, Binding>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordItem {
    /// A 1-cell metavariable; may bind the empty word.
    Var(String),
    /// `U(A)` for a 0-cell metavariable `A`: an empty stretch at that 0-cell.
    Unit(String),
    Lit(OneCell),
}

/// A 1-cell pattern: a concatenation of items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordPat(pub Vec<WordItem>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoPat {
    Var(String),
    Id(WordPat),
    Coev(PairId),
    Eval(PairId),
    Gamma(WordPat, WordPat),
    V(Box<TwoPat>, Box<TwoPat>),
    H(Box<TwoPat>, Box<TwoPat>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShPat {
    Var(String),
    Sh(TwoPat),
    Theta(WordPat, WordPat),
    S(Box<ShPat>, Box<ShPat>),
    SId(WordPat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pat {
    Two(TwoPat),
    Shadow(ShPat),
}

impl Pat {
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Pat::Two(t) => t.collect_vars(&mut out),
            Pat::Shadow(s) => s.collect_vars(&mut out),
        }
        out
    }
}

impl WordPat {
    fn collect_vars(&self, out: &mut Vec<String>) {
        for i in &self.0 {
            match i {
                WordItem::Var(v) | WordItem::Unit(v) => push_unique(out, v),
                WordItem::Lit(_) => {}
            }
        }
    }
}

impl TwoPat {
    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            TwoPat::Var(v) => push_unique(out, v),
            TwoPat::Id(w) => w.collect_vars(out),
            TwoPat::Coev(_) | TwoPat::Eval(_) => {}
            TwoPat::Gamma(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            TwoPat::V(a, b) | TwoPat::H(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl ShPat {
    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            ShPat::Var(v) => push_unique(out, v),
            ShPat::Sh(t) => t.collect_vars(out),
            ShPat::Theta(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            ShPat::S(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            ShPat::SId(w) => w.collect_vars(out),
        }
    }
}

fn push_unique(out: &mut Vec<String>, v: &str) {
    if !out.iter().any(|x| x == v) {
        out.push(v.to_string());
    }
}

fn bind(s: &Subst, var: &str, val: Binding) -> Option<Subst> {
    match s.get(var) {
        Some(b) if *b == val => Some(s.clone()),
        Some(_) => None,
        None => {
            let mut s = s.clone();
            s.insert(var.to_string(), val);
            Some(s)
        }
    }
}

/// All ways of matching a word pattern against a concrete word.
pub fn match_word(sig: &Signature, pat: &WordPat, w: &OneCell, s: &Subst) -> Vec<Subst> {
    let mut out = Vec::new();
    word_from(sig, &pat.0, w, 0, s.clone(), &mut out);
    out
}

fn word_from(sig: &Signature, items: &[WordItem], w: &OneCell, pos: usize, s: Subst, out: &mut Vec<Subst>) {
    let Some((first, rest)) = items.split_first() else {
        if pos == w.len() {
            out.push(s);
        }
        return;
    };
    match first {
        WordItem::Unit(a) => {
            if let Some(s) = bind(&s, a, Binding::Zero(w.zero_at(sig, pos))) {
                word_from(sig, rest, w, pos, s, out);
            }
        }
        WordItem::Lit(c) => {
            if literal_at(sig, c, w, pos) {
                word_from(sig, rest, w, pos + c.len(), s, out);
            }
        }
        WordItem::Var(x) => match s.get(x) {
            Some(Binding::One(c)) => {
                if literal_at(sig, c, w, pos) {
                    let c_len = c.len();
                    word_from(sig, rest, w, pos + c_len, s, out);
                }
            }
            Some(_) => {}
            None => {
                let ends: Vec<usize> = if rest.is_empty() { vec![w.len()] } else { (pos..=w.len()).collect() };
                for end in ends {
                    if end < pos {
                        continue;
                    }
                    let mut s2 = s.clone();
                    s2.insert(x.clone(), Binding::One(w.slice(sig, pos, end)));
                    word_from(sig, rest, w, end, s2, out);
                }
            }
        },
    }
}

fn literal_at(sig: &Signature, c: &OneCell, w: &OneCell, pos: usize) -> bool {
    pos + c.len() <= w.len() && w.zero_at(sig, pos) == c.src() && &w.gens()[pos..pos + c.len()] == c.gens()
}

pub fn match_two(sig: &Signature, pat: &TwoPat, e: &TwoCell, s: &Subst) -> Vec<Subst> {
    match (pat, e) {
        (TwoPat::Var(v), _) => bind(s, v, Binding::Two(e.clone())).into_iter().collect(),
        (TwoPat::Id(w), TwoCell::Id(x)) => match_word(sig, w, x, s),
        (TwoPat::Coev(p), TwoCell::Coev(q)) | (TwoPat::Eval(p), TwoCell::Eval(q)) if p == q => vec![s.clone()],
        (TwoPat::Gamma(a, b), TwoCell::Gamma(x, y)) => match_word(sig, a, x, s)
            .into_iter()
            .flat_map(|s| match_word(sig, b, y, &s))
            .collect(),
        (TwoPat::V(a, b), TwoCell::VComp(f, g)) | (TwoPat::H(a, b), TwoCell::HComp(f, g)) => match_two(sig, a, f, s)
            .into_iter()
            .flat_map(|s| match_two(sig, b, g, &s))
            .collect(),
        _ => Vec::new(),
    }
}

pub fn match_shadow(sig: &Signature, pat: &ShPat, e: &ShadowExpr, s: &Subst) -> Vec<Subst> {
    match (pat, e) {
        (ShPat::Var(v), _) => bind(s, v, Binding::Shadow(e.clone())).into_iter().collect(),
        (ShPat::Sh(p), ShadowExpr::Sh(f)) => match_two(sig, p, f, s),
        (ShPat::Theta(a, b), ShadowExpr::Theta(x, y)) => match_word(sig, a, x, s)
            .into_iter()
            .flat_map(|s| match_word(sig, b, y, &s))
            .collect(),
        (ShPat::S(a, b), ShadowExpr::SComp(u, v)) => match_shadow(sig, a, u, s)
            .into_iter()
            .flat_map(|s| match_shadow(sig, b, v, &s))
            .collect(),
        (ShPat::SId(w), ShadowExpr::SId(x)) => match_word(sig, w, x, s),
        _ => Vec::new(),
    }
}

pub fn match_pat(sig: &Signature, pat: &Pat, e: SubTerm<'_>, s: &Subst) -> Vec<Subst> {
    let mut all = match (pat, e) {
        (Pat::Two(p), SubTerm::Two(t)) => match_two(sig, p, t, s),
        (Pat::Shadow(p), SubTerm::Shadow(t)) => match_shadow(sig, p, t, s),
        _ => Vec::new(),
    };
    all.dedup();
    all
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstError {
    #[error("unbound metavariable `{0}`")]
    Unbound(String),
    #[error("metavariable `{0}` bound to the wrong kind")]
    WrongKind(String),
    #[error("instantiated word does not chain")]
    Chain,
}

pub fn inst_word(pat: &WordPat, s: &Subst) -> Result<OneCell, InstError> {
    let mut acc: Option<OneCell> = None;
    for item in &pat.0 {
        let piece = match item {
            WordItem::Lit(c) => c.clone(),
            WordItem::Var(v) => match s.get(v) {
                Some(Binding::One(c)) => c.clone(),
                Some(_) => return Err(InstError::WrongKind(v.clone())),
                None => return Err(InstError::Unbound(v.clone())),
            },
            WordItem::Unit(a) => match s.get(a) {
                Some(Binding::Zero(z)) => OneCell::unit(*z),
                Some(_) => return Err(InstError::WrongKind(a.clone())),
                None => return Err(InstError::Unbound(a.clone())),
            },
        };
        acc = Some(match acc {
            None => piece,
            Some(a) => a.concat(&piece).ok_or(InstError::Chain)?,
        });
    }
    acc.ok_or(InstError::Chain)
}

pub fn inst_two(pat: &TwoPat, s: &Subst) -> Result<TwoCell, InstError> {
    Ok(match pat {
        TwoPat::Var(v) => match s.get(v) {
            Some(Binding::Two(t)) => t.clone(),
            Some(_) => return Err(InstError::WrongKind(v.clone())),
            None => return Err(InstError::Unbound(v.clone())),
        },
        TwoPat::Id(w) => TwoCell::Id(inst_word(w, s)?),
        TwoPat::Coev(p) => TwoCell::Coev(*p),
        TwoPat::Eval(p) => TwoCell::Eval(*p),
        TwoPat::Gamma(a, b) => TwoCell::Gamma(inst_word(a, s)?, inst_word(b, s)?),
        TwoPat::V(a, b) => TwoCell::vcomp(inst_two(a, s)?, inst_two(b, s)?),
        TwoPat::H(a, b) => TwoCell::hcomp(inst_two(a, s)?, inst_two(b, s)?),
    })
}

pub fn inst_shadow(pat: &ShPat, s: &Subst) -> Result<ShadowExpr, InstError> {
    Ok(match pat {
        ShPat::Var(v) => match s.get(v) {
            Some(Binding::Shadow(t)) => t.clone(),
            Some(_) => return Err(InstError::WrongKind(v.clone())),
            None => return Err(InstError::Unbound(v.clone())),
        },
        ShPat::Sh(t) => ShadowExpr::Sh(inst_two(t, s)?),
        ShPat::Theta(a, b) => ShadowExpr::Theta(inst_word(a, s)?, inst_word(b, s)?),
        ShPat::S(a, b) => ShadowExpr::scomp(inst_shadow(a, s)?, inst_shadow(b, s)?),
        ShPat::SId(w) => ShadowExpr::SId(inst_word(w, s)?),
    })
}

pub fn inst_pat(pat: &Pat, s: &Subst) -> Result<Expr, InstError> {
    Ok(match pat {
        Pat::Two(p) => Expr::Two(inst_two(p, s)?),
        Pat::Shadow(p) => Expr::Shadow(inst_shadow(p, s)?),
    })
}

/// How to fill a metavariable that only occurs on the produced side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derive {
    /// Source 1-cell of a 2-cell or shadow metavariable.
    Src(String),
    Tgt(String),
    /// Source 0-cell of a 1-cell or 2-cell metavariable.
    Src0(String),
    Tgt0(String),
}

pub fn derive(sig: &Signature, d: &Derive, s: &Subst) -> Option<Binding> {
    let boundary = |v: &str| match s.get(v)? {
        Binding::Two(t) => typecheck_2cell(sig, t).ok(),
        Binding::Shadow(t) => typecheck_shadow(sig, t).ok(),
        _ => None,
    };
    match d {
        Derive::Src(v) => boundary(v).map(|b| Binding::One(b.src)),
        Derive::Tgt(v) => boundary(v).map(|b| Binding::One(b.tgt)),
        Derive::Src0(v) | Derive::Tgt0(v) => {
            let w = match s.get(v)? {
                Binding::One(w) => w.clone(),
                Binding::Two(_) | Binding::Shadow(_) => boundary(v)?.src,
                Binding::Zero(_) => return None,
            };
            Some(Binding::Zero(if matches!(d, Derive::Src0(_)) { w.src() } else { w.tgt() }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_split_enumerates_all_cuts() {
        let mut sig = Signature::new();
        let a = sig.add_zero("A").unwrap();
        sig.add_one("E", a, a).unwrap();
        let w = sig.word(&["E", "E", "E"]).unwrap();
        let p = WordPat(vec![WordItem::Var("X".into()), WordItem::Var("Y".into())]);
        assert_eq!(match_word(&sig, &p, &w, &Subst::new()).len(), 4);
        let p = WordPat(vec![WordItem::Unit("A".into()), WordItem::Var("X".into())]);
        let m = match_word(&sig, &p, &w, &Subst::new());
        assert_eq!(m.len(), 1);
        assert_eq!(m[0]["A"], Binding::Zero(a));
    }

    #[test]
    fn repeated_var_must_agree() {
        let mut sig = Signature::new();
        let a = sig.add_zero("A").unwrap();
        sig.add_one("E", a, a).unwrap();
        sig.add_one("F", a, a).unwrap();
        let p = WordPat(vec![WordItem::Var("X".into()), WordItem::Var("X".into())]);
        assert_eq!(match_word(&sig, &p, &sig.word(&["E", "F", "E", "F"]).unwrap(), &Subst::new()).len(), 1);
        assert!(match_word(&sig, &p, &sig.word(&["E", "F", "F"]).unwrap(), &Subst::new()).is_empty());
    }
}
