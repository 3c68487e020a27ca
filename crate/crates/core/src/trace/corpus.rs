use super::{compose_dual_pairs, trace_of_identity, DualPairHandle, ProofBuilder, TraceError};
use crate::dsl::{canonical_steps, parse_dsl, parse_expr, parse_step, DslDocument, Item};
use crate::engine::{run_steps, search_equal, ProofScript, RuleSet, SearchBudget, Step};
use crate::term::{Expr, OneCell, PairId, ShadowExpr, Signature, ZeroId};

/// The shipped theorem files, by file stem.
pub const CORPUS: &[(&str, &str)] = &[
    ("theta_squared", include_str!("../../theorems/theta_squared.st")),
    ("pretransfer", include_str!("../../theorems/pretransfer.st")),
    ("unit_trace", include_str!("../../theorems/unit_trace.st")),
    ("composite_pairs", include_str!("../../theorems/composite_pairs.st")),
];

#[derive(Clone, Debug)]
pub struct ShippedTheorem {
    pub file: &'static str,
    pub name: String,
    pub sig: Signature,
    pub script: ProofScript,
}

/// Every `prove` goal of the embedded corpus, parsed.
pub fn shipped_theorems() -> Vec<ShippedTheorem> {
    let mut out = Vec::new();
    for (file, text) in CORPUS {
        let doc = parse_dsl(text).unwrap_or_else(|e| panic!("corpus file {file}: {e}"));
        for item in &doc.items {
            if let Item::Prove { name, lhs, rhs, steps } = item {
                out.push(ShippedTheorem {
                    file,
                    name: name.clone(),
                    sig: doc.sig.clone(),
                    script: ProofScript { lhs: lhs.clone(), rhs: rhs.clone(), steps: steps.clone() },
                });
            }
        }
    }
    out
}

fn two(sig: &Signature, text: &str) -> Expr {
    parse_expr(sig, text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn steps(sig: &Signature, rules: &RuleSet, lines: &[&str]) -> Vec<Step> {
    lines.iter().map(|l| parse_step(sig, rules, l).unwrap_or_else(|e| panic!("{l}: {e}"))).collect()
}

struct Gen {
    doc: DslDocument,
    rules: RuleSet,
}

impl Gen {
    fn new(decls: &str) -> Self {
        let doc = parse_dsl(decls).expect("corpus declarations");
        let rules = RuleSet::builtin(&doc.sig);
        Gen { doc, rules }
    }

    fn prove(&mut self, name: &str, script: ProofScript) -> Result<(), TraceError> {
        // record full substitutions, then keep what the printed form keeps
        let (end, rec) = run_steps(&self.doc.sig, &self.rules, &script.lhs, &script.steps)
            .map_err(|e| TraceError::ScriptFailure(format!("{name}: {e}")))?;
        if end != script.rhs {
            return Err(TraceError::ScriptFailure(format!("{name}: ends away from the goal")));
        }
        self.doc.items.push(Item::Prove {
            name: name.into(),
            lhs: script.lhs,
            rhs: script.rhs,
            steps: canonical_steps(&self.rules, &rec),
        });
        Ok(())
    }
}

fn theta_squared() -> Result<DslDocument, TraceError> {
    let mut g = Gen::new("0cell A, B;\n1cell X : A -> B;\n1cell Y : B -> A;\nshadow;\n");
    let sig = g.doc.sig.clone();
    let lhs = two(&sig, "theta(X, Y) ; theta(Y, X)");
    let rhs = two(&sig, "sid(X ⊗ Y)");
    let st = steps(&sig, &g.rules, &["R3 @ / { X = U(A), Y = X, Z = Y }", "R4b @ / { X = X ⊗ Y }"]);
    g.prove("theta_squared", ProofScript { lhs, rhs, steps: st })?;
    Ok(g.doc)
}

fn pretransfer() -> Result<DslDocument, TraceError> {
    let mut g = Gen::new(
        "0cell B, E;\n1cell S_f : B -> E;\n1cell fS : E -> B;\n1cell DS_f : E -> B;\n\
         dualpair sf = (S_f, DS_f);\ndualpair fs = (fS, S_f);\nsymmetric B;\nshadow;\n",
    );
    let sig = g.doc.sig.clone();
    let head = "coev[sf] ; id(S_f) ⊗ coev[fs] ⊗ id(DS_f) ; gamma(S_f ⊗ fS, S_f ⊗ DS_f)";
    let six = two(
        &sig,
        &format!(
            "{head} ; id(S_f ⊗ DS_f ⊗ S_f) ⊗ coev[fs] ⊗ id(fS) ; id(S_f) ⊗ eval[sf] ⊗ id(fS ⊗ S_f ⊗ fS) \
             ; eval[fs] ⊗ id(S_f ⊗ fS)"
        ),
    );
    let five = two(&sig, &format!("{head} ; id(S_f) ⊗ eval[sf] ⊗ id(fS)"));
    let script =
        ProofBuilder::new(&sig, &g.rules, &six)?.apply("swap 3")?.apply("R2[fs] @ 4..6")?.finish(&five)?;
    g.prove("pretransfer_composite", script)?;

    let lhs = two(&sig, "theta(S_f ⊗ fS ⊗ S_f, DS_f) ; theta(DS_f ⊗ S_f ⊗ fS, S_f)");
    let rhs = two(&sig, "theta(S_f ⊗ fS, S_f ⊗ DS_f)");
    let st = steps(&sig, &g.rules, &["R3 @ / { X = S_f ⊗ fS, Y = S_f, Z = DS_f }"]);
    g.prove("shadow_triangle", ProofScript { lhs, rhs, steps: st })?;
    Ok(g.doc)
}

fn unit_trace() -> Result<DslDocument, TraceError> {
    let mut g = Gen::new("0cell A;\nshadow;\n");
    let sig = g.doc.sig.clone();
    let unit = DualPairHandle::unit(&sig, &g.rules, ZeroId(0))?;
    let tr = trace_of_identity(&sig, &unit)?;
    let lhs = Expr::Shadow(tr.result);
    let rhs = Expr::Shadow(ShadowExpr::SId(OneCell::unit(ZeroId(0))));
    let script = ProofBuilder::new(&sig, &g.rules, &lhs)?.finish(&rhs)?;
    g.prove("unit_trace", script)?;
    Ok(g.doc)
}

fn composite_pairs() -> Result<DslDocument, TraceError> {
    let mut g = Gen::new(
        "0cell A, B, C;\n1cell X : A -> B;\n1cell Y : B -> A;\n1cell X' : B -> C;\n1cell Y' : C -> B;\n\
         dualpair p = (X, Y);\ndualpair q = (X', Y');\nshadow;\n",
    );
    let sig = g.doc.sig.clone();
    let p = DualPairHandle::declared(&sig, PairId(0));
    let q = DualPairHandle::declared(&sig, PairId(1));
    let pq = compose_dual_pairs(&sig, &g.rules, &p, &q)?;
    for (name, cert) in ["composite_triangle_left", "composite_triangle_right"].iter().zip(&pq.triangles) {
        g.prove(name, cert.script().expect("proved").clone())?;
    }

    // trace of the composite pair against the composite of the traces
    let lhs = Expr::Shadow(trace_of_identity(&sig, &pq)?.result);
    let rhs = Expr::Shadow(ShadowExpr::scomp(trace_of_identity(&sig, &p)?.result, trace_of_identity(&sig, &q)?.result));
    let found = search_equal(&sig, &g.rules, &lhs, &rhs, SearchBudget::default());
    let script = found.script().ok_or_else(|| TraceError::ScriptFailure("trace functoriality not found".into()))?;
    g.prove("trace_functoriality", script.clone())?;
    Ok(g.doc)
}

/// Regenerates the corpus documents from their constructions. The golden
/// test checks that printing these reproduces [`CORPUS`] byte for byte.
pub fn corpus_documents() -> Result<Vec<(&'static str, DslDocument)>, TraceError> {
    Ok(vec![
        ("theta_squared", theta_squared()?),
        ("pretransfer", pretransfer()?),
        ("unit_trace", unit_trace()?),
        ("composite_pairs", composite_pairs()?),
    ])
}
