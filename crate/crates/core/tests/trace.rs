use shadowtrace::dsl::{parse_dsl, print_document};
use shadowtrace::engine::{fast_normal_form, verify_script, RuleSet};
use shadowtrace::term::{typecheck, Expr, OneCell, PairId, Signature, Style, TwoCell, ZeroId};
use shadowtrace::trace::{
    build_trace, compose_dual_pairs, corpus_documents, shipped_theorems, trace_of_identity, DualPairHandle, TraceError,
    CORPUS,
};

fn chain() -> Signature {
    parse_dsl(
        "0cell A, B, C;\n1cell X : A -> B;\n1cell Y : B -> A;\n1cell X' : B -> C;\n1cell Y' : C -> B;\n\
         1cell P : A -> A;\n2cell f : P ⊗ X => X;\ndualpair p = (X, Y);\ndualpair q = (X', Y');\nshadow;",
    )
    .unwrap()
    .sig
}

#[test]
fn corpus_files_match_their_constructions() {
    let docs = corpus_documents().unwrap();
    assert_eq!(docs.len(), CORPUS.len());
    for ((name, doc), (file, text)) in docs.iter().zip(CORPUS) {
        assert_eq!(name, file);
        assert_eq!(&print_document(doc, Style::Unicode), text, "corpus file {file} is stale");
    }
}

#[test]
fn every_shipped_script_replays() {
    let all = shipped_theorems();
    assert_eq!(all.len(), 7);
    for t in &all {
        let rules = RuleSet::builtin(&t.sig);
        let cert = verify_script(&t.sig, &rules, &t.script).unwrap_or_else(|e| panic!("{}: {e}", t.name));
        assert!(cert.is_proved());
    }
}

#[test]
fn corpus_print_parse_identity() {
    for (file, text) in CORPUS {
        let doc = parse_dsl(text).unwrap();
        assert_eq!(&print_document(&doc, Style::Unicode), text, "{file}");
        let ascii = print_document(&doc, Style::Ascii);
        assert_eq!(parse_dsl(&ascii).unwrap(), doc, "{file}");
    }
}

#[test]
fn trace_of_identity_has_four_stages_and_unit_boundary() {
    let sig = chain();
    let p = DualPairHandle::declared(&sig, PairId(0));
    let tr = trace_of_identity(&sig, &p).unwrap();
    let b = typecheck(&sig, &Expr::Shadow(tr.result.clone())).unwrap();
    assert_eq!((b.src, b.tgt), (OneCell::unit(ZeroId(0)), OneCell::unit(ZeroId(1))));
    let (items, _, _) = shadowtrace::engine::items(&sig, &tr.result);
    assert_eq!(items.len(), 3, "coev, theta and eval survive normalization");
}

#[test]
fn trace_with_nontrivial_endomorphism() {
    let sig = chain();
    let p = DualPairHandle::declared(&sig, PairId(0));
    let f = TwoCell::Gen(sig.two_id("f").unwrap());
    let tr = build_trace(&sig, &p, &f).unwrap();
    assert_eq!(tr.p, sig.word(&["P"]).unwrap());
    assert_eq!(tr.q, OneCell::unit(ZeroId(1)));
    let b = typecheck(&sig, &Expr::Shadow(tr.result)).unwrap();
    assert_eq!(b.src, tr.p);
}

#[test]
fn trace_rejects_wrong_source() {
    let sig = chain();
    let q = DualPairHandle::declared(&sig, PairId(1));
    let f = TwoCell::Gen(sig.two_id("f").unwrap());
    assert!(matches!(build_trace(&sig, &q, &f), Err(TraceError::BoundaryMismatch(_))));
}

#[test]
fn composing_with_the_unit_pair_is_neutral() {
    let sig = chain();
    let rules = RuleSet::builtin(&sig);
    let p = DualPairHandle::declared(&sig, PairId(0));
    let u = DualPairHandle::unit(&sig, &rules, ZeroId(1)).unwrap();
    let pu = compose_dual_pairs(&sig, &rules, &p, &u).unwrap();
    assert_eq!(pu.x, p.x);
    assert_eq!(fast_normal_form(&sig, &Expr::Two(pu.coev.clone())), Expr::Two(p.coev.clone()));
    assert_eq!(fast_normal_form(&sig, &Expr::Two(pu.eval.clone())), Expr::Two(p.eval.clone()));
    assert_eq!(pu.triangles.len(), 2);
}

#[test]
fn composite_triangles_replay() {
    let sig = chain();
    let rules = RuleSet::builtin(&sig);
    let p = DualPairHandle::declared(&sig, PairId(0));
    let q = DualPairHandle::declared(&sig, PairId(1));
    let pq = compose_dual_pairs(&sig, &rules, &p, &q).unwrap();
    for c in &pq.triangles {
        assert!(verify_script(&sig, &rules, c.script().unwrap()).is_ok());
    }
    // a composite of a composite falls back to search
    let u = DualPairHandle::unit(&sig, &rules, ZeroId(2)).unwrap();
    let pqu = compose_dual_pairs(&sig, &rules, &pq, &u).unwrap();
    assert_eq!(pqu.triangles.len(), 2);
}

#[test]
fn non_composable_pairs_are_rejected() {
    let sig = chain();
    let rules = RuleSet::builtin(&sig);
    let p = DualPairHandle::declared(&sig, PairId(0));
    assert!(matches!(compose_dual_pairs(&sig, &rules, &p, &p), Err(TraceError::BoundaryMismatch(_))));
}
