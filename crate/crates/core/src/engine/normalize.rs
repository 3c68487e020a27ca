//! Whisker normal form.
//!
//! A 2-cell is normal when it is `id(X)` or a left-nested vertical chain of
//! layers, each layer being one atom (generator, coev, eval, gamma) with
//! optional identity whiskers arranged as `(id(L) ⊗ a) ⊗ id(R)`. A shadow
//! morphism is normal when it is `sid(X)` or a left-nested chain of items
//! `⟨⟨layer⟩⟩` and `theta(X, Y)` with both arguments non-empty.
//!
//! `normalize` reaches this form by recorded rule steps; `fast_normal_form`
//! computes the same result directly and is what search uses.

use super::script::{apply_step, EngineError, RuleSet, Step};
use crate::term::{typecheck, Expr, OneCell, Path, ShadowExpr, Signature, SubTerm, TwoCell};

struct Recorder<'a> {
    sig: &'a Signature,
    rules: &'a RuleSet,
    expr: Expr,
    steps: Vec<Step>,
    budget: usize,
}

impl Recorder<'_> {
    fn step(&mut self, rule: &str, inverse: bool, path: &Path) -> Result<(), EngineError> {
        if self.steps.len() >= self.budget {
            return Err(EngineError::StepMismatch { index: self.steps.len(), reason: "normalization budget exhausted".into() });
        }
        let st = Step::new(rule, inverse, path.clone());
        let (e, s) = apply_step(self.sig, self.rules, &self.expr, &st)
            .map_err(|reason| EngineError::StepMismatch { index: self.steps.len(), reason })?;
        self.expr = e;
        self.steps.push(Step { subst: s, ..st });
        Ok(())
    }

    fn two(&self, p: &Path) -> &TwoCell {
        match self.expr.at(p) {
            Some(SubTerm::Two(t)) => t,
            _ => unreachable!("no 2-cell at {p}"),
        }
    }

    fn shadow(&self, p: &Path) -> &ShadowExpr {
        match self.expr.at(p) {
            Some(SubTerm::Shadow(s)) => s,
            _ => unreachable!("no shadow morphism at {p}"),
        }
    }

    fn norm2(&mut self, p: &Path) -> Result<(), EngineError> {
        match self.two(p) {
            TwoCell::Id(_) | TwoCell::Gen(_) | TwoCell::Coev(_) | TwoCell::Eval(_) => Ok(()),
            TwoCell::Gamma(x, y) => {
                if x.is_unit() {
                    self.step("R8ul", false, p)
                } else if y.is_unit() {
                    self.step("R8ur", false, p)
                } else {
                    Ok(())
                }
            }
            TwoCell::VComp(..) => {
                self.norm2(&p.child(0))?;
                self.norm2(&p.child(1))?;
                self.append(p)
            }
            TwoCell::HComp(..) => {
                self.norm2(&p.child(0))?;
                self.norm2(&p.child(1))?;
                self.tensor(p)
            }
        }
    }

    /// `F ; G` with both normal.
    fn append(&mut self, p: &Path) -> Result<(), EngineError> {
        let TwoCell::VComp(f, g) = self.two(p) else { unreachable!() };
        if matches!(**f, TwoCell::Id(_)) {
            return self.step("R6vl", false, p);
        }
        if matches!(**g, TwoCell::Id(_)) {
            return self.step("R6vr", false, p);
        }
        if matches!(**g, TwoCell::VComp(..)) {
            self.step("R6va", true, p)?;
            return self.append(&p.child(0));
        }
        Ok(())
    }

    /// `F ⊗ G` with both normal.
    fn tensor(&mut self, p: &Path) -> Result<(), EngineError> {
        let TwoCell::HComp(f, g) = self.two(p) else { unreachable!() };
        match (matches!(**f, TwoCell::Id(_)), matches!(**g, TwoCell::Id(_))) {
            (true, true) => self.step("R5id", false, p),
            (true, false) => self.whisker_l(p),
            (false, true) => self.whisker_r(p),
            (false, false) => {
                self.step("R6vr", true, &p.child(0))?;
                self.step("R6vl", true, &p.child(1))?;
                self.step("R5", false, p)?;
                self.whisker_r(&p.child(0))?;
                self.whisker_l(&p.child(1))?;
                self.append(p)
            }
        }
    }

    /// `id(X) ⊗ G` with `G` normal and not an identity.
    fn whisker_l(&mut self, p: &Path) -> Result<(), EngineError> {
        let TwoCell::HComp(x, g) = self.two(p) else { unreachable!() };
        let TwoCell::Id(x) = &**x else { unreachable!() };
        if x.is_unit() {
            return self.step("R6hl", false, p);
        }
        if matches!(**g, TwoCell::VComp(..)) {
            self.step("R6vl", true, &p.child(0))?;
            self.step("R5", false, p)?;
            self.whisker_l(&p.child(0))?;
            self.whisker_l_layer(&p.child(1))?;
            return self.append(p);
        }
        self.whisker_l_layer(p)
    }

    fn whisker_l_layer(&mut self, p: &Path) -> Result<(), EngineError> {
        let TwoCell::HComp(_, layer) = self.two(p) else { unreachable!() };
        let TwoCell::HComp(l, _) = &**layer else { return Ok(()) };
        match &**l {
            TwoCell::HComp(..) => {
                self.step("R6ha", true, p)?;
                self.step("R6ha", true, &p.child(0))?;
                self.step("R5id", false, &p.child(0).child(0))
            }
            TwoCell::Id(_) => {
                self.step("R6ha", true, p)?;
                self.step("R5id", false, &p.child(0))
            }
            _ => self.step("R6ha", true, p),
        }
    }

    /// `F ⊗ id(Y)` with `F` normal and not an identity.
    fn whisker_r(&mut self, p: &Path) -> Result<(), EngineError> {
        let TwoCell::HComp(f, y) = self.two(p) else { unreachable!() };
        let TwoCell::Id(y) = &**y else { unreachable!() };
        if y.is_unit() {
            return self.step("R6hr", false, p);
        }
        if matches!(**f, TwoCell::VComp(..)) {
            self.step("R6vl", true, &p.child(1))?;
            self.step("R5", false, p)?;
            self.whisker_r(&p.child(0))?;
            self.whisker_r_layer(&p.child(1))?;
            return self.append(p);
        }
        self.whisker_r_layer(p)
    }

    fn whisker_r_layer(&mut self, p: &Path) -> Result<(), EngineError> {
        let TwoCell::HComp(layer, _) = self.two(p) else { unreachable!() };
        let TwoCell::HComp(l, _) = &**layer else { return Ok(()) };
        match &**l {
            TwoCell::Id(_) => Ok(()),
            _ => {
                self.step("R6ha", false, p)?;
                self.step("R5id", false, &p.child(1))
            }
        }
    }

    fn norm_sh(&mut self, p: &Path) -> Result<(), EngineError> {
        match self.shadow(p) {
            ShadowExpr::SId(_) => Ok(()),
            ShadowExpr::Theta(x, y) => {
                if x.is_unit() {
                    self.step("R4b", false, p)
                } else if y.is_unit() {
                    self.step("R4a", false, p)
                } else {
                    Ok(())
                }
            }
            ShadowExpr::Sh(_) => {
                self.norm2(&p.child(0))?;
                self.sh_spine(p)
            }
            ShadowExpr::SComp(..) => {
                self.norm_sh(&p.child(0))?;
                self.norm_sh(&p.child(1))?;
                self.sappend(p)
            }
        }
    }

    fn sh_spine(&mut self, p: &Path) -> Result<(), EngineError> {
        let ShadowExpr::Sh(f) = self.shadow(p) else { unreachable!() };
        match &*f {
            TwoCell::Id(_) => self.step("R6si", false, p),
            TwoCell::VComp(..) => {
                self.step("R6sf", false, p)?;
                self.sh_spine(&p.child(0))?;
                self.sappend(p)
            }
            _ => Ok(()),
        }
    }

    fn sappend(&mut self, p: &Path) -> Result<(), EngineError> {
        let ShadowExpr::SComp(u, v) = self.shadow(p) else { unreachable!() };
        if matches!(**u, ShadowExpr::SId(_)) {
            return self.step("R6sl", false, p);
        }
        if matches!(**v, ShadowExpr::SId(_)) {
            return self.step("R6sr", false, p);
        }
        if matches!(**v, ShadowExpr::SComp(..)) {
            self.step("R6sa", true, p)?;
            return self.sappend(&p.child(0));
        }
        Ok(())
    }
}

/// Default cap on recorded steps; normalization of any term we build stays far below it.
pub const NORMALIZE_BUDGET: usize = 1_000_000;

/// Normal form of `e` and the steps reaching it from `e`.
pub fn normalize_with_steps(
    sig: &Signature,
    rules: &RuleSet,
    e: &Expr,
    budget: usize,
) -> Result<(Expr, Vec<Step>), EngineError> {
    let mut r = Recorder { sig, rules, expr: e.clone(), steps: Vec::new(), budget };
    match e {
        Expr::Two(_) => r.norm2(&Path::root())?,
        Expr::Shadow(_) => r.norm_sh(&Path::root())?,
    }
    Ok((r.expr, r.steps))
}

/// Rewrites `e` to whisker normal form. Idempotent and boundary-preserving.
pub fn normalize(sig: &Signature, rules: &RuleSet, e: &Expr, budget: usize) -> Result<Expr, EngineError> {
    normalize_with_steps(sig, rules, e, budget).map(|(e, _)| e)
}

/// A whiskered atom `L ⊗ atom ⊗ R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    pub left: OneCell,
    pub atom: TwoCell,
    pub right: OneCell,
}

impl Layer {
    pub fn term(&self) -> TwoCell {
        let a = self.atom.clone();
        match (self.left.is_unit(), self.right.is_unit()) {
            (true, true) => a,
            (false, true) => TwoCell::hcomp(TwoCell::Id(self.left.clone()), a),
            (true, false) => TwoCell::hcomp(a, TwoCell::Id(self.right.clone())),
            (false, false) => TwoCell::hcomp(
                TwoCell::hcomp(TwoCell::Id(self.left.clone()), a),
                TwoCell::Id(self.right.clone()),
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Sh(Layer),
    Theta(OneCell, OneCell),
}

impl Item {
    pub fn term(&self) -> ShadowExpr {
        match self {
            Item::Sh(l) => ShadowExpr::Sh(l.term()),
            Item::Theta(x, y) => ShadowExpr::Theta(x.clone(), y.clone()),
        }
    }
}

fn layers_of(sig: &Signature, e: &TwoCell, out: &mut Vec<Layer>) -> (OneCell, OneCell) {
    let b = crate::term::typecheck_2cell(sig, e).expect("well-typed 2-cell");
    collect_layers(sig, e, out);
    (b.src, b.tgt)
}

fn collect_layers(sig: &Signature, e: &TwoCell, out: &mut Vec<Layer>) {
    match e {
        TwoCell::Id(_) => {}
        TwoCell::Gamma(x, y) if x.is_unit() || y.is_unit() => {}
        TwoCell::Gen(_) | TwoCell::Coev(_) | TwoCell::Eval(_) | TwoCell::Gamma(..) => {
            let b = crate::term::typecheck_2cell(sig, e).expect("well-typed atom");
            out.push(Layer {
                left: OneCell::unit(b.src.src()),
                atom: e.clone(),
                right: OneCell::unit(b.src.tgt()),
            });
        }
        TwoCell::VComp(f, g) => {
            collect_layers(sig, f, out);
            collect_layers(sig, g, out);
        }
        TwoCell::HComp(f, g) => {
            let bf = crate::term::typecheck_2cell(sig, f).expect("well-typed factor");
            let bg = crate::term::typecheck_2cell(sig, g).expect("well-typed factor");
            let mut lf = Vec::new();
            collect_layers(sig, f, &mut lf);
            for l in lf {
                out.push(Layer { right: l.right.concat(&bg.src).unwrap(), ..l });
            }
            let mut lg = Vec::new();
            collect_layers(sig, g, &mut lg);
            for l in lg {
                out.push(Layer { left: bf.tgt.concat(&l.left).unwrap(), ..l });
            }
        }
    }
}

/// Layers of a well-typed 2-cell plus its boundary.
pub fn layers(sig: &Signature, e: &TwoCell) -> (Vec<Layer>, OneCell, OneCell) {
    let mut out = Vec::new();
    let (s, t) = layers_of(sig, e, &mut out);
    (out, s, t)
}

pub fn spine(layers: &[Layer], src: &OneCell) -> TwoCell {
    TwoCell::vchain(layers.iter().map(Layer::term)).unwrap_or_else(|| TwoCell::Id(src.clone()))
}

/// Items of a well-typed shadow morphism plus its boundary.
pub fn items(sig: &Signature, e: &ShadowExpr) -> (Vec<Item>, OneCell, OneCell) {
    fn go(sig: &Signature, e: &ShadowExpr, out: &mut Vec<Item>) {
        match e {
            ShadowExpr::SId(_) => {}
            ShadowExpr::Theta(x, y) => {
                if !x.is_unit() && !y.is_unit() {
                    out.push(Item::Theta(x.clone(), y.clone()));
                }
            }
            ShadowExpr::Sh(f) => {
                let mut ls = Vec::new();
                collect_layers(sig, f, &mut ls);
                out.extend(ls.into_iter().map(Item::Sh));
            }
            ShadowExpr::SComp(u, v) => {
                go(sig, u, out);
                go(sig, v, out);
            }
        }
    }
    let b = crate::term::typecheck_shadow(sig, e).expect("well-typed shadow morphism");
    let mut out = Vec::new();
    go(sig, e, &mut out);
    (out, b.src, b.tgt)
}

pub fn shadow_spine(items: &[Item], src: &OneCell) -> ShadowExpr {
    ShadowExpr::schain(items.iter().map(Item::term)).unwrap_or_else(|| ShadowExpr::SId(src.clone()))
}

/// The normal form computed directly, without recording steps.
pub fn fast_normal_form(sig: &Signature, e: &Expr) -> Expr {
    debug_assert!(typecheck(sig, e).is_ok());
    match e {
        Expr::Two(t) => {
            let (ls, s, _) = layers(sig, t);
            Expr::Two(spine(&ls, &s))
        }
        Expr::Shadow(x) => {
            let (is, s, _) = items(sig, x);
            Expr::Shadow(shadow_spine(&is, &s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::PairId;

    fn sig() -> Signature {
        let mut s = Signature::new();
        let a = s.add_zero("A").unwrap();
        let b = s.add_zero("B").unwrap();
        s.add_one("X", a, b).unwrap();
        s.add_one("Y", b, a).unwrap();
        s.add_one("P", a, a).unwrap();
        let (x, y) = (s.word(&["X"]).unwrap(), s.word(&["Y"]).unwrap());
        s.add_pair("p", x, y).unwrap();
        let p = s.word(&["P"]).unwrap();
        s.add_two("f", p.clone(), p).unwrap();
        s.enable_shadow();
        s
    }

    fn check(sig: &Signature, e: Expr) -> Expr {
        let rules = RuleSet::builtin(sig);
        let (n, steps) = normalize_with_steps(sig, &rules, &e, NORMALIZE_BUDGET).unwrap();
        assert_eq!(n, fast_normal_form(sig, &e));
        let (n2, steps2) = normalize_with_steps(sig, &rules, &n, NORMALIZE_BUDGET).unwrap();
        assert_eq!(n2, n);
        assert!(steps2.is_empty());
        let (replayed, _) = super::super::script::run_steps(sig, &rules, &e, &steps).unwrap();
        assert_eq!(replayed, n);
        n
    }

    #[test]
    fn unit_laws() {
        let s = sig();
        let f = TwoCell::Gen(s.two_id("f").unwrap());
        let p = s.word(&["P"]).unwrap();
        let a = s.zero_id("A").unwrap();
        assert_eq!(check(&s, Expr::Two(TwoCell::vcomp(f.clone(), TwoCell::Id(p)))), Expr::Two(f.clone()));
        assert_eq!(
            check(&s, Expr::Two(TwoCell::hcomp(TwoCell::Id(OneCell::unit(a)), f.clone()))),
            Expr::Two(f)
        );
    }

    #[test]
    fn reassociates_to_left_spine() {
        let s = sig();
        let f = TwoCell::Gen(s.two_id("f").unwrap());
        let e = TwoCell::vcomp(f.clone(), TwoCell::vcomp(f.clone(), f.clone()));
        let n = check(&s, Expr::Two(e));
        assert_eq!(n, Expr::Two(TwoCell::vcomp(TwoCell::vcomp(f.clone(), f.clone()), f)));
    }

    #[test]
    fn tensor_splits_into_layers() {
        let s = sig();
        let f = TwoCell::Gen(s.two_id("f").unwrap());
        let p = PairId(0);
        let e = TwoCell::hcomp(TwoCell::hcomp(f.clone(), TwoCell::Coev(p)), TwoCell::vcomp(f.clone(), f.clone()));
        let n = check(&s, Expr::Two(e));
        let Expr::Two(t) = n else { panic!() };
        let (ls, _, _) = layers(&s, &t);
        assert_eq!(ls.len(), 4);
    }

    #[test]
    fn shadow_items() {
        let s = sig();
        let p = PairId(0);
        let (x, y) = (s.word(&["X"]).unwrap(), s.word(&["Y"]).unwrap());
        let a = s.zero_id("A").unwrap();
        let e = ShadowExpr::scomp(
            ShadowExpr::Sh(TwoCell::vcomp(TwoCell::Coev(p), TwoCell::Id(x.concat(&y).unwrap()))),
            ShadowExpr::scomp(
                ShadowExpr::Theta(x.clone(), y.clone()),
                ShadowExpr::scomp(ShadowExpr::Sh(TwoCell::Eval(p)), ShadowExpr::Theta(OneCell::unit(s.zero_id("B").unwrap()), OneCell::unit(s.zero_id("B").unwrap()))),
            ),
        );
        let n = check(&s, Expr::Shadow(e));
        let Expr::Shadow(t) = n else { panic!() };
        assert_eq!(items(&s, &t).0.len(), 3);
        let _ = a;
    }
}
