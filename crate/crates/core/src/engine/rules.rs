use super::pattern::{Derive, Kind, Pat, ShPat, TwoPat, WordItem, WordPat};
use crate::term::{PairId, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleClass {
    /// Interchange, unit and associativity laws of the strict bicategory and
    /// the functor/category laws of the shadow.
    Structural,
    /// Triangle identities of a declared dual pair.
    Duality,
    /// Rotation and unit axioms of the shadow, naturality of theta.
    Shadow,
    /// Symmetry at a flagged 0-cell.
    Symmetry,
    /// Consequence of other rules, carrying its own certificate.
    Derived,
}

/// A bidirectional equation between patterns. Metavariables that appear on
/// only one side are filled from `derive` (in order) when rewriting towards
/// that side, or must be supplied in the step's substitution.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: Pat,
    pub rhs: Pat,
    pub vars: Vec<(String, Kind)>,
    pub derive: Vec<(String, Derive)>,
    pub class: RuleClass,
}

impl RewriteRule {
    pub fn var_kind(&self, v: &str) -> Option<Kind> {
        self.vars.iter().find(|(n, _)| n == v).map(|(_, k)| *k)
    }

    pub fn is_derived(&self) -> bool {
        self.class == RuleClass::Derived
    }

    pub fn side(&self, inverse: bool) -> (&Pat, &Pat) {
        if inverse {
            (&self.rhs, &self.lhs)
        } else {
            (&self.lhs, &self.rhs)
        }
    }
}

fn w(items: &[&str]) -> WordPat {
    WordPat(
        items
            .iter()
            .map(|s| match s.strip_prefix("U:") {
                Some(a) => WordItem::Unit(a.to_string()),
                None => WordItem::Var(s.to_string()),
            })
            .collect(),
    )
}

fn v(n: &str) -> TwoPat {
    TwoPat::Var(n.into())
}

fn id(items: &[&str]) -> TwoPat {
    TwoPat::Id(w(items))
}

fn vc(a: TwoPat, b: TwoPat) -> TwoPat {
    TwoPat::V(Box::new(a), Box::new(b))
}

fn hc(a: TwoPat, b: TwoPat) -> TwoPat {
    TwoPat::H(Box::new(a), Box::new(b))
}

fn gamma(a: &[&str], b: &[&str]) -> TwoPat {
    TwoPat::Gamma(w(a), w(b))
}

fn sh(t: TwoPat) -> ShPat {
    ShPat::Sh(t)
}

fn sv(n: &str) -> ShPat {
    ShPat::Var(n.into())
}

fn sc(a: ShPat, b: ShPat) -> ShPat {
    ShPat::S(Box::new(a), Box::new(b))
}

fn theta(a: &[&str], b: &[&str]) -> ShPat {
    ShPat::Theta(w(a), w(b))
}

fn sid(items: &[&str]) -> ShPat {
    ShPat::SId(w(items))
}

struct Spec<'a> {
    name: String,
    lhs: Pat,
    rhs: Pat,
    kinds: &'a [(&'a str, Kind)],
    derive: Vec<(&'a str, Derive)>,
    class: RuleClass,
}

fn rule(spec: Spec<'_>) -> RewriteRule {
    let mut names = spec.lhs.vars();
    for n in spec.rhs.vars() {
        if !names.contains(&n) {
            names.push(n);
        }
    }
    let vars = names
        .into_iter()
        .map(|n| {
            let k = spec
                .kinds
                .iter()
                .find(|(m, _)| *m == n)
                .map(|(_, k)| *k)
                .unwrap_or_else(|| panic!("rule {}: no kind for `{n}`", spec.name));
            (n, k)
        })
        .collect();
    RewriteRule {
        name: spec.name,
        lhs: spec.lhs,
        rhs: spec.rhs,
        vars,
        derive: spec.derive.into_iter().map(|(n, d)| (n.to_string(), d)).collect(),
        class: spec.class,
    }
}

use Kind::{One as K1, Shadow as KS, Two as K2, Zero as K0};

fn d_src(x: &str) -> Derive {
    Derive::Src(x.into())
}
fn d_tgt(x: &str) -> Derive {
    Derive::Tgt(x.into())
}
fn d_src0(x: &str) -> Derive {
    Derive::Src0(x.into())
}
fn d_tgt0(x: &str) -> Derive {
    Derive::Tgt0(x.into())
}

fn two(lhs: TwoPat, rhs: TwoPat) -> (Pat, Pat) {
    (Pat::Two(lhs), Pat::Two(rhs))
}

fn shp(lhs: ShPat, rhs: ShPat) -> (Pat, Pat) {
    (Pat::Shadow(lhs), Pat::Shadow(rhs))
}

fn mk(name: &str, sides: (Pat, Pat), kinds: &[(&str, Kind)], derive: Vec<(&str, Derive)>, class: RuleClass) -> RewriteRule {
    rule(Spec { name: name.to_string(), lhs: sides.0, rhs: sides.1, kinds, derive, class })
}

/// Name of the triangle rule instance for a declared pair.
pub fn pair_rule_name(base: &str, sig: &Signature, p: PairId) -> String {
    format!("{base}[{}]", sig.pair(p).name)
}

/// The axioms available for `sig`, instantiated per declaration.
pub fn builtin_rules(sig: &Signature) -> Vec<RewriteRule> {
    use RuleClass::*;
    let mut out = Vec::new();

    for (i, pair) in sig.dual_pairs.iter().enumerate() {
        let p = PairId(i as u32);
        let x = TwoPat::Id(WordPat(vec![WordItem::Lit(pair.left.clone())]));
        let y = TwoPat::Id(WordPat(vec![WordItem::Lit(pair.right.clone())]));
        // (coev ⊗ 1_X) ; (1_X ⊗ eval) = 1_X
        out.push(mk(
            &pair_rule_name("R1", sig, p),
            two(vc(hc(TwoPat::Coev(p), x.clone()), hc(x.clone(), TwoPat::Eval(p))), x),
            &[],
            vec![],
            Duality,
        ));
        // (1_Y ⊗ coev) ; (eval ⊗ 1_Y) = 1_Y
        out.push(mk(
            &pair_rule_name("R2", sig, p),
            two(vc(hc(y.clone(), TwoPat::Coev(p)), hc(TwoPat::Eval(p), y.clone())), y),
            &[],
            vec![],
            Duality,
        ));
    }

    let k4 = [("f", K2), ("g", K2), ("h", K2), ("k", K2)];
    out.push(mk(
        "R5",
        two(hc(vc(v("f"), v("g")), vc(v("h"), v("k"))), vc(hc(v("f"), v("h")), hc(v("g"), v("k")))),
        &k4,
        vec![],
        Structural,
    ));
    out.push(mk("R5id", two(hc(id(&["X"]), id(&["Y"])), id(&["X", "Y"])), &[("X", K1), ("Y", K1)], vec![], Structural));
    out.push(mk(
        "R6va",
        two(vc(vc(v("f"), v("g")), v("h")), vc(v("f"), vc(v("g"), v("h")))),
        &k4,
        vec![],
        Structural,
    ));
    out.push(mk(
        "R6ha",
        two(hc(hc(v("f"), v("g")), v("h")), hc(v("f"), hc(v("g"), v("h")))),
        &k4,
        vec![],
        Structural,
    ));
    let fx = [("f", K2), ("X", K1), ("A", K0)];
    out.push(mk("R6vl", two(vc(id(&["X"]), v("f")), v("f")), &fx, vec![("X", d_src("f"))], Structural));
    out.push(mk("R6vr", two(vc(v("f"), id(&["X"])), v("f")), &fx, vec![("X", d_tgt("f"))], Structural));
    out.push(mk("R6hl", two(hc(id(&["U:A"]), v("f")), v("f")), &fx, vec![("A", d_src0("f"))], Structural));
    out.push(mk("R6hr", two(hc(v("f"), id(&["U:A"])), v("f")), &fx, vec![("A", d_tgt0("f"))], Structural));

    if sig.shadow {
        let kinds = [("f", K2), ("g", K2), ("u", KS), ("v", KS), ("t", KS), ("X", K1)];
        out.push(mk("R6sf", shp(sh(vc(v("f"), v("g"))), sc(sh(v("f")), sh(v("g")))), &kinds, vec![], Structural));
        out.push(mk("R6si", shp(sh(id(&["X"])), sid(&["X"])), &kinds, vec![], Structural));
        out.push(mk(
            "R6sa",
            shp(sc(sc(sv("u"), sv("v")), sv("t")), sc(sv("u"), sc(sv("v"), sv("t")))),
            &kinds,
            vec![],
            Structural,
        ));
        out.push(mk("R6sl", shp(sc(sid(&["X"]), sv("u")), sv("u")), &kinds, vec![("X", d_src("u"))], Structural));
        out.push(mk("R6sr", shp(sc(sv("u"), sid(&["X"])), sv("u")), &kinds, vec![("X", d_tgt("u"))], Structural));

        let wk = [("X", K1), ("Y", K1), ("Z", K1), ("X'", K1), ("Y'", K1), ("A", K0), ("f", K2), ("g", K2)];
        // rotation compatible with associativity
        out.push(mk(
            "R3",
            shp(sc(theta(&["X", "Y"], &["Z"]), theta(&["Z", "X"], &["Y"])), theta(&["X"], &["Y", "Z"])),
            &wk,
            vec![],
            Shadow,
        ));
        out.push(mk("R4a", shp(theta(&["X"], &["U:A"]), sid(&["X"])), &wk, vec![("A", d_tgt0("X"))], Shadow));
        out.push(mk("R4b", shp(theta(&["U:A"], &["X"]), sid(&["X"])), &wk, vec![("A", d_src0("X"))], Shadow));
        // naturality of theta, one slot at a time
        out.push(mk(
            "R7a",
            shp(
                sc(sh(hc(v("f"), id(&["Y"]))), theta(&["X'"], &["Y"])),
                sc(theta(&["X"], &["Y"]), sh(hc(id(&["Y"]), v("f")))),
            ),
            &wk,
            vec![("X", d_src("f")), ("X'", d_tgt("f"))],
            Shadow,
        ));
        out.push(mk(
            "R7b",
            shp(
                sc(sh(hc(id(&["X"]), v("g"))), theta(&["X"], &["Y'"])),
                sc(theta(&["X"], &["Y"]), sh(hc(v("g"), id(&["X"])))),
            ),
            &wk,
            vec![("Y", d_src("g")), ("Y'", d_tgt("g"))],
            Shadow,
        ));
        out.push(mk(
            "R9",
            shp(sc(theta(&["X"], &["Y"]), theta(&["Y"], &["X"])), sid(&["X", "Y"])),
            &wk,
            vec![],
            Derived,
        ));
    }

    if !sig.symmetric.is_empty() {
        let k = [("X", K1), ("Y", K1), ("Z", K1), ("X'", K1), ("Y'", K1), ("A", K0), ("f", K2), ("g", K2)];
        out.push(mk("R8sym", two(vc(gamma(&["X"], &["Y"]), gamma(&["Y"], &["X"])), id(&["X", "Y"])), &k, vec![], Symmetry));
        out.push(mk(
            "R8nat1",
            two(
                vc(hc(v("f"), id(&["Y"])), gamma(&["X'"], &["Y"])),
                vc(gamma(&["X"], &["Y"]), hc(id(&["Y"]), v("f"))),
            ),
            &k,
            vec![("X", d_src("f")), ("X'", d_tgt("f"))],
            Symmetry,
        ));
        out.push(mk(
            "R8nat2",
            two(
                vc(hc(id(&["X"]), v("g")), gamma(&["X"], &["Y'"])),
                vc(gamma(&["X"], &["Y"]), hc(v("g"), id(&["X"]))),
            ),
            &k,
            vec![("Y", d_src("g")), ("Y'", d_tgt("g"))],
            Symmetry,
        ));
        out.push(mk(
            "R8hex",
            two(
                gamma(&["X"], &["Y", "Z"]),
                vc(hc(gamma(&["X"], &["Y"]), id(&["Z"])), hc(id(&["Y"]), gamma(&["X"], &["Z"]))),
            ),
            &k,
            vec![],
            Symmetry,
        ));
        out.push(mk("R8ul", two(gamma(&["U:A"], &["X"]), id(&["X"])), &k, vec![("A", d_src0("X"))], Symmetry));
        out.push(mk("R8ur", two(gamma(&["X"], &["U:A"]), id(&["X"])), &k, vec![("A", d_tgt0("X"))], Symmetry));
    }
    out
}
