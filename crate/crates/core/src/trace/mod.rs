//! Traces, composite dual pairs and the shipped theorem corpus.

mod corpus;

use crate::engine::{
    macro_moves, normalize_with_steps, reverse_steps, search_equal, verify_script, EqualityCertificate, ProofScript,
    RuleSet, SearchBudget, Step, NORMALIZE_BUDGET,
};
use crate::term::{typecheck, typecheck_2cell, Expr, OneCell, PairId, ShadowExpr, Signature, TwoCell, ZeroId};

pub use corpus::{corpus_documents, shipped_theorems, ShippedTheorem, CORPUS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("generated certificate does not replay: {0}")]
    ScriptFailure(String),
    #[error("no move `{label}`; available: {available}")]
    NoMove { label: String, available: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Declared(PairId),
    /// `(U_A, U_A)` with identity coevaluation and evaluation.
    Unit(ZeroId),
    Composite(Box<DualPairHandle>, Box<DualPairHandle>),
}

/// A dual pair `(x, y)` with its coevaluation `U_A -> x ⊗ y` and evaluation
/// `y ⊗ x -> U_B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPairHandle {
    pub x: OneCell,
    pub y: OneCell,
    pub coev: TwoCell,
    pub eval: TwoCell,
    pub provenance: Provenance,
    /// Proofs of both triangle identities; empty for declared pairs, whose
    /// triangles are axioms.
    pub triangles: Vec<EqualityCertificate>,
}

fn id(x: &OneCell) -> TwoCell {
    TwoCell::Id(x.clone())
}

impl DualPairHandle {
    pub fn declared(sig: &Signature, p: PairId) -> Self {
        let d = sig.pair(p);
        DualPairHandle {
            x: d.left.clone(),
            y: d.right.clone(),
            coev: TwoCell::Coev(p),
            eval: TwoCell::Eval(p),
            provenance: Provenance::Declared(p),
            triangles: Vec::new(),
        }
    }

    pub fn unit(sig: &Signature, rules: &RuleSet, a: ZeroId) -> Result<Self, TraceError> {
        let u = OneCell::unit(a);
        let mut h = DualPairHandle {
            x: u.clone(),
            y: u.clone(),
            coev: id(&u),
            eval: id(&u),
            provenance: Provenance::Unit(a),
            triangles: Vec::new(),
        };
        for (lhs, rhs) in h.triangle_goals() {
            let script = ProofBuilder::new(sig, rules, &lhs)?.finish(&rhs)?;
            h.triangles.push(certify(sig, rules, script)?);
        }
        Ok(h)
    }

    /// The two triangle identities as `(lhs, rhs)` goals.
    pub fn triangle_goals(&self) -> [(Expr, Expr); 2] {
        let (x, y) = (&self.x, &self.y);
        [
            (
                Expr::Two(TwoCell::vcomp(
                    TwoCell::hcomp(self.coev.clone(), id(x)),
                    TwoCell::hcomp(id(x), self.eval.clone()),
                )),
                Expr::Two(id(x)),
            ),
            (
                Expr::Two(TwoCell::vcomp(
                    TwoCell::hcomp(id(y), self.coev.clone()),
                    TwoCell::hcomp(self.eval.clone(), id(y)),
                )),
                Expr::Two(id(y)),
            ),
        ]
    }

    pub fn src(&self) -> ZeroId {
        self.x.src()
    }

    pub fn tgt(&self) -> ZeroId {
        self.x.tgt()
    }
}

fn certify(sig: &Signature, rules: &RuleSet, script: ProofScript) -> Result<EqualityCertificate, TraceError> {
    verify_script(sig, rules, &script).map_err(|e| TraceError::ScriptFailure(e.to_string()))
}

/// Builds a proof by choosing macro moves by label, starting from the
/// normal form of `lhs`.
pub struct ProofBuilder<'a> {
    sig: &'a Signature,
    rules: &'a RuleSet,
    lhs: Expr,
    node: Expr,
    steps: Vec<Step>,
}

impl<'a> ProofBuilder<'a> {
    pub fn new(sig: &'a Signature, rules: &'a RuleSet, lhs: &Expr) -> Result<Self, TraceError> {
        let (node, steps) = normalize_with_steps(sig, rules, lhs, NORMALIZE_BUDGET)
            .map_err(|e| TraceError::ScriptFailure(e.to_string()))?;
        Ok(ProofBuilder { sig, rules, lhs: lhs.clone(), node, steps })
    }

    /// The current normal form.
    pub fn node(&self) -> &Expr {
        &self.node
    }

    pub fn labels(&self) -> Vec<String> {
        macro_moves(self.sig, self.rules, &self.node).into_iter().map(|m| m.label).collect()
    }

    pub fn apply(mut self, label: &str) -> Result<Self, TraceError> {
        let moves = macro_moves(self.sig, self.rules, &self.node);
        let Some(m) = moves.iter().find(|m| m.label == label) else {
            let available = moves.iter().map(|m| m.label.as_str()).collect::<Vec<_>>().join(", ");
            return Err(TraceError::NoMove { label: label.into(), available });
        };
        self.steps.extend(m.script(self.sig, self.rules));
        self.node = m.result.clone();
        Ok(self)
    }

    /// Closes the proof at `rhs`, whose normal form must be the current node.
    pub fn finish(mut self, rhs: &Expr) -> Result<ProofScript, TraceError> {
        let (nf, rsteps) = normalize_with_steps(self.sig, self.rules, rhs, NORMALIZE_BUDGET)
            .map_err(|e| TraceError::ScriptFailure(e.to_string()))?;
        if nf != self.node {
            return Err(TraceError::ScriptFailure("proof ends away from the goal".into()));
        }
        self.steps.extend(reverse_steps(&rsteps));
        let script = ProofScript { lhs: self.lhs, rhs: rhs.clone(), steps: self.steps };
        verify_script(self.sig, self.rules, &script).map_err(|e| TraceError::ScriptFailure(e.to_string()))?;
        Ok(script)
    }
}

/// `(x ⊗ x', y' ⊗ y)` with coevaluation `coev ; (x ⊗ coev' ⊗ y)` and
/// evaluation `(y' ⊗ eval ⊗ x') ; eval'`, plus replayed proofs of both
/// triangle identities.
pub fn compose_dual_pairs(
    sig: &Signature,
    rules: &RuleSet,
    p1: &DualPairHandle,
    p2: &DualPairHandle,
) -> Result<DualPairHandle, TraceError> {
    if p1.tgt() != p2.src() {
        return Err(TraceError::BoundaryMismatch(format!(
            "first pair ends at `{}`, second starts at `{}`",
            sig.zero(p1.tgt()),
            sig.zero(p2.src())
        )));
    }
    let x = p1.x.concat(&p2.x).expect("composable");
    let y = p2.y.concat(&p1.y).expect("composable");
    let coev = TwoCell::vcomp(p1.coev.clone(), TwoCell::hchain([id(&p1.x), p2.coev.clone(), id(&p1.y)]).unwrap());
    let eval = TwoCell::vcomp(TwoCell::hchain([id(&p2.y), p1.eval.clone(), id(&p2.x)]).unwrap(), p2.eval.clone());
    let mut h = DualPairHandle {
        x,
        y,
        coev,
        eval,
        provenance: Provenance::Composite(Box::new(p1.clone()), Box::new(p2.clone())),
        triangles: Vec::new(),
    };
    let goals = h.triangle_goals();
    for (k, (lhs, rhs)) in goals.iter().enumerate() {
        let script = match (&p1.provenance, &p2.provenance) {
            (Provenance::Declared(a), Provenance::Declared(b)) => {
                // exchange the inner coevaluation with the outer evaluation,
                // then the two component triangles
                let base = if k == 0 { "R1" } else { "R2" };
                let (first, second) = (&sig.pair(*a).name, &sig.pair(*b).name);
                ProofBuilder::new(sig, rules, lhs)?
                    .apply("swap 1")?
                    .apply(&format!("{base}[{first}] @ 0..2"))?
                    .apply(&format!("{base}[{second}] @ 0..2"))?
                    .finish(rhs)?
            }
            _ => {
                let c = search_equal(sig, rules, lhs, rhs, SearchBudget::default());
                match c.script() {
                    Some(s) => s.clone(),
                    None => return Err(TraceError::ScriptFailure(format!("triangle {} not found", k + 1))),
                }
            }
        };
        h.triangles.push(certify(sig, rules, script)?);
    }
    Ok(h)
}

/// The trace of `phi: P ⊗ X -> X ⊗ Q` as a shadow-level composite
/// `⟨⟨P⟩⟩ -> ⟨⟨P X Y⟩⟩ -> ⟨⟨X Q Y⟩⟩ -> ⟨⟨Y X Q⟩⟩ -> ⟨⟨Q⟩⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceExpr {
    pub pair: DualPairHandle,
    pub phi: TwoCell,
    pub p: OneCell,
    pub q: OneCell,
    pub result: ShadowExpr,
}

pub fn build_trace(sig: &Signature, pair: &DualPairHandle, phi: &TwoCell) -> Result<TraceExpr, TraceError> {
    let b = typecheck_2cell(sig, phi).map_err(|e| TraceError::BoundaryMismatch(e.to_string()))?;
    let (x, y) = (&pair.x, &pair.y);
    let (n, m) = (b.src.len(), b.tgt.len());
    let mismatch = || TraceError::BoundaryMismatch("phi must have the form P ⊗ X -> X ⊗ Q".into());
    if n < x.len() || m < x.len() || b.src.tgt() != x.tgt() || b.tgt.src() != x.src() {
        return Err(mismatch());
    }
    let p = b.src.slice(sig, 0, n - x.len());
    let q = b.tgt.slice(sig, x.len(), m);
    if &b.src.slice(sig, n - x.len(), n) != x || &b.tgt.slice(sig, 0, x.len()) != x {
        return Err(mismatch());
    }
    if !p.is_endo() || !q.is_endo() {
        return Err(mismatch());
    }
    let result = ShadowExpr::schain([
        ShadowExpr::Sh(TwoCell::hcomp(id(&p), pair.coev.clone())),
        ShadowExpr::Sh(TwoCell::hcomp(phi.clone(), id(y))),
        ShadowExpr::Theta(x.concat(&q).unwrap(), y.clone()),
        ShadowExpr::Sh(TwoCell::hcomp(pair.eval.clone(), id(&q))),
    ])
    .unwrap();
    let rb = typecheck(sig, &Expr::Shadow(result.clone())).map_err(|e| TraceError::BoundaryMismatch(e.to_string()))?;
    debug_assert!(rb.src == p && rb.tgt == q);
    Ok(TraceExpr { pair: pair.clone(), phi: phi.clone(), p, q, result })
}

/// `tr(id_X)` for a pair.
pub fn trace_of_identity(sig: &Signature, pair: &DualPairHandle) -> Result<TraceExpr, TraceError> {
    build_trace(sig, pair, &id(&pair.x))
}
