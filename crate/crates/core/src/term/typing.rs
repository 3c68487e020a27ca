use super::expr::{Expr, OneCell, Path, ShadowExpr, SubTerm, TwoCell};
use super::signature::Signature;

/// Source and target 1-cells of a 2-cell, or the endo-1-cells whose shadows
/// bound a shadow morphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Boundary {
    pub src: OneCell,
    pub tgt: OneCell,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("boundary mismatch at {position}: {detail}")]
    BoundaryMismatch { position: Path, detail: String },
    #[error("shadow of a non-endo 1-cell at {position}")]
    ShadowOnNonEndo { position: Path },
    #[error("gamma at {position} needs a 0-cell declared symmetric")]
    GammaNotSymmetric { position: Path },
    #[error("shadow constructs used at {position} but the signature has no shadow")]
    ShadowDisabled { position: Path },
    #[error("reference to an undeclared cell at {position}")]
    Unknown { position: Path },
}

impl TypeError {
    pub fn position(&self) -> &Path {
        match self {
            TypeError::BoundaryMismatch { position, .. }
            | TypeError::ShadowOnNonEndo { position }
            | TypeError::GammaNotSymmetric { position }
            | TypeError::ShadowDisabled { position }
            | TypeError::Unknown { position } => position,
        }
    }

    fn reroot(self, prefix: &Path) -> TypeError {
        let fix = |p: Path| prefix.join(&p);
        match self {
            TypeError::BoundaryMismatch { position, detail } => {
                TypeError::BoundaryMismatch { position: fix(position), detail }
            }
            TypeError::ShadowOnNonEndo { position } => TypeError::ShadowOnNonEndo { position: fix(position) },
            TypeError::GammaNotSymmetric { position } => TypeError::GammaNotSymmetric { position: fix(position) },
            TypeError::ShadowDisabled { position } => TypeError::ShadowDisabled { position: fix(position) },
            TypeError::Unknown { position } => TypeError::Unknown { position: fix(position) },
        }
    }
}

fn word(sig: &Signature, w: &OneCell, at: &Path) -> Result<(), TypeError> {
    if sig.word_is_well_typed(w) {
        Ok(())
    } else {
        Err(TypeError::Unknown { position: at.clone() })
    }
}

fn mismatch(at: &Path, detail: impl Into<String>) -> TypeError {
    TypeError::BoundaryMismatch { position: at.clone(), detail: detail.into() }
}

pub fn typecheck_2cell(sig: &Signature, e: &TwoCell) -> Result<Boundary, TypeError> {
    two(sig, e, &mut Path::root())
}

pub fn typecheck_shadow(sig: &Signature, e: &ShadowExpr) -> Result<Boundary, TypeError> {
    shadow(sig, e, &mut Path::root())
}

pub fn typecheck(sig: &Signature, e: &Expr) -> Result<Boundary, TypeError> {
    match e {
        Expr::Two(t) => typecheck_2cell(sig, t),
        Expr::Shadow(s) => typecheck_shadow(sig, s),
    }
}

/// Typechecks the subterm at `path`, reporting errors relative to the whole term.
pub fn typecheck_sub(sig: &Signature, sub: SubTerm<'_>, path: &Path) -> Result<Boundary, TypeError> {
    let r = match sub {
        SubTerm::Two(t) => typecheck_2cell(sig, t),
        SubTerm::Shadow(s) => typecheck_shadow(sig, s),
    };
    r.map_err(|e| e.reroot(path))
}

fn two(sig: &Signature, e: &TwoCell, at: &mut Path) -> Result<Boundary, TypeError> {
    match e {
        TwoCell::Id(x) => {
            word(sig, x, at)?;
            Ok(Boundary { src: x.clone(), tgt: x.clone() })
        }
        TwoCell::Gen(g) => {
            let d = sig.two_cells.get(g.0 as usize).ok_or_else(|| TypeError::Unknown { position: at.clone() })?;
            Ok(Boundary { src: d.src.clone(), tgt: d.tgt.clone() })
        }
        TwoCell::Coev(p) | TwoCell::Eval(p) => {
            let d = sig.dual_pairs.get(p.0 as usize).ok_or_else(|| TypeError::Unknown { position: at.clone() })?;
            if matches!(e, TwoCell::Coev(_)) {
                let xy = d.left.concat(&d.right).ok_or_else(|| mismatch(at, "dual pair does not chain"))?;
                Ok(Boundary { src: OneCell::unit(d.left.src()), tgt: xy })
            } else {
                let yx = d.right.concat(&d.left).ok_or_else(|| mismatch(at, "dual pair does not chain"))?;
                Ok(Boundary { src: yx, tgt: OneCell::unit(d.left.tgt()) })
            }
        }
        TwoCell::Gamma(x, y) => {
            word(sig, x, at)?;
            word(sig, y, at)?;
            if !x.is_endo() || !y.is_endo() || x.src() != y.src() {
                return Err(mismatch(at, "gamma needs endo-1-cells on one 0-cell"));
            }
            if !sig.is_symmetric(x.src()) {
                return Err(TypeError::GammaNotSymmetric { position: at.clone() });
            }
            Ok(Boundary { src: x.concat(y).unwrap(), tgt: y.concat(x).unwrap() })
        }
        TwoCell::VComp(f, g) => {
            at.0.push(0);
            let bf = two(sig, f, at)?;
            *at.0.last_mut().unwrap() = 1;
            let bg = two(sig, g, at)?;
            at.0.pop();
            if bf.tgt != bg.src {
                return Err(mismatch(at, "target of the first factor is not the source of the second"));
            }
            Ok(Boundary { src: bf.src, tgt: bg.tgt })
        }
        TwoCell::HComp(f, g) => {
            at.0.push(0);
            let bf = two(sig, f, at)?;
            *at.0.last_mut().unwrap() = 1;
            let bg = two(sig, g, at)?;
            at.0.pop();
            match (bf.src.concat(&bg.src), bf.tgt.concat(&bg.tgt)) {
                (Some(src), Some(tgt)) => Ok(Boundary { src, tgt }),
                _ => Err(mismatch(at, "horizontal factors do not share a 0-cell")),
            }
        }
    }
}

fn shadow(sig: &Signature, e: &ShadowExpr, at: &mut Path) -> Result<Boundary, TypeError> {
    if !sig.shadow {
        return Err(TypeError::ShadowDisabled { position: at.clone() });
    }
    match e {
        ShadowExpr::Sh(f) => {
            at.0.push(0);
            let b = two(sig, f, at)?;
            at.0.pop();
            if !b.src.is_endo() {
                return Err(TypeError::ShadowOnNonEndo { position: at.clone() });
            }
            Ok(b)
        }
        ShadowExpr::Theta(x, y) => {
            word(sig, x, at)?;
            word(sig, y, at)?;
            match (x.concat(y), y.concat(x)) {
                (Some(src), Some(tgt)) => Ok(Boundary { src, tgt }),
                _ => Err(mismatch(at, "theta(X, Y) needs X: A -> B and Y: B -> A")),
            }
        }
        ShadowExpr::SComp(u, v) => {
            at.0.push(0);
            let bu = shadow(sig, u, at)?;
            *at.0.last_mut().unwrap() = 1;
            let bv = shadow(sig, v, at)?;
            at.0.pop();
            if bu.tgt != bv.src {
                return Err(mismatch(at, "shadow composite does not chain"));
            }
            Ok(Boundary { src: bu.src, tgt: bv.tgt })
        }
        ShadowExpr::SId(x) => {
            word(sig, x, at)?;
            if !x.is_endo() {
                return Err(TypeError::ShadowOnNonEndo { position: at.clone() });
            }
            Ok(Boundary { src: x.clone(), tgt: x.clone() })
        }
    }
}
