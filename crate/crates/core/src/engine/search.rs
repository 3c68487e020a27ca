//! Bounded bidirectional breadth-first search for equalities.
//!
//! Nodes are whisker normal forms. An edge is a macro move: pick a term
//! `t` whose normal form is the current node, apply a few rule steps to it
//! and normalize again. Its primitive script is
//! `reverse(normalize steps of t) ++ rule steps ++ normalize steps of t'`,
//! so every synthesized certificate is an ordinary replayable script.

use std::collections::HashMap;

use rayon::prelude::*;

use super::normalize::{fast_normal_form, items, layers, normalize_with_steps, Item, Layer, NORMALIZE_BUDGET};
use super::pattern::{match_pat, Binding, Subst};
use super::script::{reverse_steps, run_steps, verify_script, EqualityCertificate, ProofScript, RuleSet, Step, Verdict};
use crate::term::{
    typecheck, typecheck_2cell, Expr, OneCell, Path, ShadowExpr, Signature, SubTerm, TwoCell,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Cap on distinct normal forms visited, both sides together.
    pub nodes: usize,
    /// Cap on the number of macro moves in a proof.
    pub depth: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 100_000, depth: 8 }
    }
}

/// One edge of the search graph.
#[derive(Clone, Debug)]
pub struct Move {
    pub label: String,
    /// A term whose normal form is the source node.
    pub t: Expr,
    /// Recorded steps from `t` to `t2`.
    pub steps: Vec<Step>,
    pub t2: Expr,
    /// Normal form of `t2`.
    pub result: Expr,
}

impl Move {
    /// Primitive steps from the source normal form to `result`.
    pub fn script(&self, sig: &Signature, rules: &RuleSet) -> Vec<Step> {
        let (_, pre) = normalize_with_steps(sig, rules, &self.t, NORMALIZE_BUDGET).expect("normalizable");
        let (_, post) = normalize_with_steps(sig, rules, &self.t2, NORMALIZE_BUDGET).expect("normalizable");
        let mut out = reverse_steps(&pre);
        out.extend(self.steps.iter().cloned());
        out.extend(post);
        out
    }
}

/// Path to element `k` of a left-nested chain of `n` elements.
fn chain_path(n: usize, k: usize) -> Vec<u8> {
    if n <= 1 {
        return Vec::new();
    }
    if k == 0 {
        return vec![0; n - 1];
    }
    let mut v = vec![0; n - 1 - k];
    v.push(1);
    v
}

/// `id(L) ⊗ core ⊗ id(R)` with empty whiskers left out, plus the path to `core`.
fn whisk(l: &OneCell, core: TwoCell, r: &OneCell) -> (TwoCell, Vec<u8>) {
    match (l.is_unit(), r.is_unit()) {
        (true, true) => (core, vec![]),
        (false, true) => (TwoCell::hcomp(TwoCell::Id(l.clone()), core), vec![1]),
        (true, false) => (TwoCell::hcomp(core, TwoCell::Id(r.clone())), vec![0]),
        (false, false) => (
            TwoCell::hcomp(TwoCell::hcomp(TwoCell::Id(l.clone()), core), TwoCell::Id(r.clone())),
            vec![0, 1],
        ),
    }
}

/// A candidate rewrite on a stretch of layers, before it is placed in context.
struct Local {
    label: String,
    /// Replaces layers `[start, end)`; `start == end` inserts at a gap.
    start: usize,
    end: usize,
    core: TwoCell,
    /// Steps with paths relative to `core`.
    steps: Vec<Step>,
}

struct LayerInfo {
    layer: Layer,
    src_atom: OneCell,
    tgt_atom: OneCell,
    src: OneCell,
    tgt: OneCell,
}

fn info(sig: &Signature, l: &Layer) -> LayerInfo {
    let b = typecheck_2cell(sig, &l.atom).expect("well-typed atom");
    let src = l.left.concat(&b.src).and_then(|w| w.concat(&l.right)).expect("layer chains");
    let tgt = l.left.concat(&b.tgt).and_then(|w| w.concat(&l.right)).expect("layer chains");
    LayerInfo { layer: l.clone(), src_atom: b.src, tgt_atom: b.tgt, src, tgt }
}

fn layer_term(l: &OneCell, atom: &TwoCell, r: &OneCell) -> TwoCell {
    Layer { left: l.clone(), atom: atom.clone(), right: r.clone() }.term()
}

fn at(p: &[u8]) -> Path {
    Path(p.to_vec())
}

fn join(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

struct Gen<'a> {
    sig: &'a Signature,
    rules: &'a RuleSet,
    window_rules: Vec<String>,
}

impl<'a> Gen<'a> {
    fn new(sig: &'a Signature, rules: &'a RuleSet) -> Self {
        let window_rules = rules
            .iter()
            .filter(|r| {
                r.name.starts_with("R1[") || r.name.starts_with("R2[") || r.name == "R8sym" || r.name == "R8hex"
            })
            .map(|r| r.name.clone())
            .collect();
        Gen { sig, rules, window_rules }
    }

    fn has(&self, rule: &str) -> bool {
        self.rules.get(rule).is_some()
    }

    /// Local rewrites on a sequence of layers with gap words `gaps`
    /// (`gaps[k]` is the word before layer `k`).
    fn layer_moves(&self, ls: &[LayerInfo], gaps: &[OneCell]) -> Vec<Local> {
        let sig = self.sig;
        let mut out = Vec::new();
        let n = ls.len();

        // swaps of independent neighbours
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (&ls[i], &ls[i + 1]);
            let (s1, e1) = (a.layer.left.len(), a.layer.left.len() + a.tgt_atom.len());
            let (s2, e2) = (b.layer.left.len(), b.layer.left.len() + b.src_atom.len());
            let w = &a.tgt;
            if e1 <= s2 {
                let l = w.slice(sig, 0, s1);
                let m = w.slice(sig, e1, s2);
                let r = w.slice(sig, e2, w.len());
                let g = if m.is_unit() { b.layer.atom.clone() } else { TwoCell::hcomp(TwoCell::Id(m), b.layer.atom.clone()) };
                let (core, _) = whisk(&l, TwoCell::hcomp(a.layer.atom.clone(), g), &r);
                let (_, cp) = whisk(&l, TwoCell::Id(w.clone()), &r);
                out.push(Local {
                    label: format!("swap {i}"),
                    start: i,
                    end: i + 2,
                    core,
                    steps: vec![
                        Step::new("R6vl", true, at(&join(&cp, &[0]))),
                        Step::new("R6vr", true, at(&join(&cp, &[1]))),
                        Step::new("R5", false, at(&cp)),
                    ],
                });
            } else if e2 <= s1 {
                let l = w.slice(sig, 0, s2);
                let m = w.slice(sig, e2, s1);
                let r = w.slice(sig, e1, w.len());
                let sb = b.src_atom.clone();
                let ma = if m.is_unit() { a.layer.atom.clone() } else { TwoCell::hcomp(TwoCell::Id(m.clone()), a.layer.atom.clone()) };
                let mta = m.concat(&a.tgt_atom).unwrap();
                let inner = TwoCell::vcomp(
                    TwoCell::hcomp(TwoCell::Id(sb), ma),
                    TwoCell::hcomp(b.layer.atom.clone(), TwoCell::Id(mta)),
                );
                let (core, cp) = whisk(&l, inner, &r);
                out.push(Local {
                    label: format!("swap {i}"),
                    start: i,
                    end: i + 2,
                    core,
                    steps: vec![Step::new("R5", true, at(&cp))],
                });
            }
        }

        // rule instances on windows with common whiskers factored out
        for size in 1..=2usize {
            for i in 0..n.saturating_sub(size - 1) {
                let win = &ls[i..i + size];
                let lw = win.iter().map(|x| x.layer.left.len()).min().unwrap();
                let rw = win.iter().map(|x| x.layer.right.len()).min().unwrap();
                let w0 = &win[0].src;
                let l = w0.slice(sig, 0, lw);
                let r = w0.slice(sig, w0.len() - rw, w0.len());
                let stripped: Vec<TwoCell> = win
                    .iter()
                    .map(|x| {
                        let ll = x.layer.left.slice(sig, lw, x.layer.left.len());
                        let rr = x.layer.right.slice(sig, 0, x.layer.right.len() - rw);
                        layer_term(&ll, &x.layer.atom, &rr)
                    })
                    .collect();
                let inner = TwoCell::vchain(stripped).unwrap();
                for name in &self.window_rules {
                    let rule = self.rules.get(name).unwrap();
                    for inverse in [false, true] {
                        let from = rule.side(inverse).0;
                        for s in match_pat(sig, from, SubTerm::Two(&inner), &Subst::new()) {
                            let (core, cp) = whisk(&l, inner.clone(), &r);
                            out.push(Local {
                                label: format!("{}{} @ {i}..{}", name, if inverse { "^-1" } else { "" }, i + size),
                                start: i,
                                end: i + size,
                                core,
                                steps: vec![Step { rule: name.clone(), inverse, path: at(&cp), subst: s }],
                            });
                        }
                    }
                }
            }
        }

        // naturality of gamma in each slot
        if self.has("R8nat1") {
            for i in 0..n.saturating_sub(1) {
                self.gamma_naturality(ls, i, &mut out);
            }
        }

        // insertions at gaps
        for (g, w) in gaps.iter().enumerate() {
            for (pi, pair) in sig.dual_pairs.iter().enumerate() {
                let p = crate::term::PairId(pi as u32);
                for (base, word) in [("R1", &pair.left), ("R2", &pair.right)] {
                    let name = super::rules::pair_rule_name(base, sig, p);
                    if !self.has(&name) {
                        continue;
                    }
                    for k in occurrences(sig, w, word) {
                        let l = w.slice(sig, 0, k);
                        let r = w.slice(sig, k + word.len(), w.len());
                        let (core, cp) = whisk(&l, TwoCell::Id(word.clone()), &r);
                        out.push(Local {
                            label: format!("{name}^-1 at gap {g}:{k}"),
                            start: g,
                            end: g,
                            core,
                            steps: vec![Step::new(name.clone(), true, at(&cp))],
                        });
                    }
                }
            }
            if self.has("R8sym") {
                for i in 0..w.len() {
                    for j in i + 2..=w.len() {
                        let z = w.zero_at(sig, i);
                        if w.zero_at(sig, j) != z || !sig.is_symmetric(z) {
                            continue;
                        }
                        for k in i + 1..j {
                            if w.zero_at(sig, k) != z {
                                continue;
                            }
                            let l = w.slice(sig, 0, i);
                            let r = w.slice(sig, j, w.len());
                            let (core, cp) = whisk(&l, TwoCell::Id(w.slice(sig, i, j)), &r);
                            let step = Step::new("R8sym", true, at(&cp))
                                .with("X", Binding::One(w.slice(sig, i, k)))
                                .with("Y", Binding::One(w.slice(sig, k, j)));
                            out.push(Local { label: format!("R8sym^-1 at gap {g}:{i}..{k}..{j}"), start: g, end: g, core, steps: vec![step] });
                        }
                    }
                }
            }
        }
        out
    }

    fn gamma_naturality(&self, ls: &[LayerInfo], i: usize, out: &mut Vec<Local>) {
        let sig = self.sig;
        let (a, b) = (&ls[i], &ls[i + 1]);
        // atom layer followed by gamma
        if let TwoCell::Gamma(x, y) = &b.layer.atom {
            let lg = b.layer.left.len();
            let al = a.layer.left.len();
            let w = &a.tgt;
            let (s, e) = (al, al + a.tgt_atom.len());
            let r_end = w.len() - b.layer.right.len();
            let l = w.slice(sig, 0, lg);
            let r = w.slice(sig, r_end, w.len());
            if s >= lg && e <= lg + x.len() {
                let f = layer_term(&w.slice(sig, lg, s), &a.layer.atom, &w.slice(sig, e, lg + x.len()));
                let inner = TwoCell::vcomp(TwoCell::hcomp(f, TwoCell::Id(y.clone())), b.layer.atom.clone());
                let (core, cp) = whisk(&l, inner, &r);
                out.push(Local { label: format!("R8nat1 @ {i}"), start: i, end: i + 2, core, steps: vec![Step::new("R8nat1", false, at(&cp))] });
            }
            if s >= lg + x.len() && e <= r_end {
                let g = layer_term(&w.slice(sig, lg + x.len(), s), &a.layer.atom, &w.slice(sig, e, r_end));
                let inner = TwoCell::vcomp(TwoCell::hcomp(TwoCell::Id(x.clone()), g), b.layer.atom.clone());
                let (core, cp) = whisk(&l, inner, &r);
                out.push(Local { label: format!("R8nat2 @ {i}"), start: i, end: i + 2, core, steps: vec![Step::new("R8nat2", false, at(&cp))] });
            }
        }
        // gamma followed by atom layer
        if let TwoCell::Gamma(x, y) = &a.layer.atom {
            let lg = a.layer.left.len();
            let w = &a.tgt;
            let r_end = w.len() - a.layer.right.len();
            let bl = b.layer.left.len();
            let (s, e) = (bl, bl + b.src_atom.len());
            let l = w.slice(sig, 0, lg);
            let r = w.slice(sig, r_end, w.len());
            // output word is Y X
            if s >= lg + y.len() && e <= r_end {
                let f = layer_term(&w.slice(sig, lg + y.len(), s), &b.layer.atom, &w.slice(sig, e, r_end));
                let inner = TwoCell::vcomp(a.layer.atom.clone(), TwoCell::hcomp(TwoCell::Id(y.clone()), f));
                let (core, cp) = whisk(&l, inner, &r);
                out.push(Local { label: format!("R8nat1^-1 @ {i}"), start: i, end: i + 2, core, steps: vec![Step::new("R8nat1", true, at(&cp))] });
            }
            if s >= lg && e <= lg + y.len() {
                let g = layer_term(&w.slice(sig, lg, s), &b.layer.atom, &w.slice(sig, e, lg + y.len()));
                let inner = TwoCell::vcomp(a.layer.atom.clone(), TwoCell::hcomp(g, TwoCell::Id(x.clone())));
                let (core, cp) = whisk(&l, inner, &r);
                out.push(Local { label: format!("R8nat2^-1 @ {i}"), start: i, end: i + 2, core, steps: vec![Step::new("R8nat2", true, at(&cp))] });
            }
        }
    }

    fn realize(&self, nf: &Expr, label: String, t: Expr, steps: Vec<Step>) -> Option<Move> {
        debug_assert_eq!(&fast_normal_form(self.sig, &t), nf, "move `{label}` is misplaced");
        let (t2, rec) = run_steps(self.sig, self.rules, &t, &steps).ok()?;
        let result = fast_normal_form(self.sig, &t2);
        if &result == nf {
            return None;
        }
        Some(Move { label, t, steps: rec, t2, result })
    }

    fn moves(&self, nf: &Expr) -> Vec<Move> {
        match nf {
            Expr::Two(t) => self.two_moves(nf, t),
            Expr::Shadow(s) => self.shadow_moves(nf, s),
        }
    }

    fn two_moves(&self, nf: &Expr, t: &TwoCell) -> Vec<Move> {
        let (ls, src, _) = layers(self.sig, t);
        let infos: Vec<LayerInfo> = ls.iter().map(|l| info(self.sig, l)).collect();
        let mut gaps = vec![src];
        gaps.extend(infos.iter().map(|x| x.tgt.clone()));
        let mut out = Vec::new();
        for loc in self.layer_moves(&infos, &gaps) {
            let mut parts: Vec<TwoCell> = ls[..loc.start].iter().map(Layer::term).collect();
            let k = parts.len();
            parts.push(loc.core);
            parts.extend(ls[loc.end..].iter().map(Layer::term));
            let prefix = chain_path(parts.len(), k);
            let t = Expr::Two(TwoCell::vchain(parts).unwrap());
            let steps = loc
                .steps
                .into_iter()
                .map(|s| Step { path: at(&join(&prefix, &s.path.0)), ..s })
                .collect();
            out.extend(self.realize(nf, loc.label, t, steps));
        }
        out
    }

    fn shadow_moves(&self, nf: &Expr, s: &ShadowExpr) -> Vec<Move> {
        let sig = self.sig;
        let (its, src, _) = items(sig, s);
        let n = its.len();
        let mut gaps = vec![src.clone()];
        for it in &its {
            let next = match it {
                Item::Sh(l) => info(sig, l).tgt,
                Item::Theta(x, y) => y.concat(x).unwrap(),
            };
            gaps.push(next);
        }
        let mut out = Vec::new();
        let place = |start: usize, end: usize, core: ShadowExpr, inner: &[u8], steps: Vec<Step>, label: String| {
            let mut parts: Vec<ShadowExpr> = its[..start].iter().map(Item::term).collect();
            let k = parts.len();
            parts.push(core);
            parts.extend(its[end..].iter().map(Item::term));
            let prefix = join(&chain_path(parts.len(), k), inner);
            let t = Expr::Shadow(ShadowExpr::schain(parts).unwrap());
            let steps = steps.into_iter().map(|s| Step { path: at(&join(&prefix, &s.path.0)), ..s }).collect();
            self.realize(nf, label, t, steps)
        };

        // 2-cell moves inside maximal runs of ⟨⟨layer⟩⟩ items
        let mut i = 0;
        while i <= n {
            let mut j = i;
            while j < n && matches!(its[j], Item::Sh(_)) {
                j += 1;
            }
            let infos: Vec<LayerInfo> = its[i..j]
                .iter()
                .map(|it| match it {
                    Item::Sh(l) => info(sig, l),
                    Item::Theta(..) => unreachable!(),
                })
                .collect();
            let run_gaps = gaps[i..=j].to_vec();
            for loc in self.layer_moves(&infos, &run_gaps) {
                let core = ShadowExpr::Sh(loc.core);
                out.extend(place(i + loc.start, i + loc.end, core, &[0], loc.steps, format!("sh {}", loc.label)));
            }
            i = j + 1;
        }

        if sig.shadow {
            for k in 0..n.saturating_sub(1) {
                match (&its[k], &its[k + 1]) {
                    (Item::Sh(l), Item::Theta(p, q)) => {
                        let li = info(sig, l);
                        let (s, e) = (l.left.len(), l.left.len() + li.tgt_atom.len());
                        let w = &li.tgt;
                        if e <= p.len() {
                            let f = layer_term(&l.left, &l.atom, &w.slice(sig, e, p.len()));
                            let core = ShadowExpr::scomp(
                                ShadowExpr::Sh(TwoCell::hcomp(f, TwoCell::Id(q.clone()))),
                                ShadowExpr::Theta(p.clone(), q.clone()),
                            );
                            out.extend(place(k, k + 2, core, &[], vec![Step::new("R7a", false, Path::root())], format!("R7a @ {k}")));
                        }
                        if s >= p.len() {
                            let g = layer_term(&w.slice(sig, p.len(), s), &l.atom, &l.right);
                            let core = ShadowExpr::scomp(
                                ShadowExpr::Sh(TwoCell::hcomp(TwoCell::Id(p.clone()), g)),
                                ShadowExpr::Theta(p.clone(), q.clone()),
                            );
                            out.extend(place(k, k + 2, core, &[], vec![Step::new("R7b", false, Path::root())], format!("R7b @ {k}")));
                        }
                    }
                    (Item::Theta(p, q), Item::Sh(l)) => {
                        let li = info(sig, l);
                        let (s, e) = (l.left.len(), l.left.len() + li.src_atom.len());
                        let w = &li.src;
                        if s >= q.len() {
                            let f = layer_term(&w.slice(sig, q.len(), s), &l.atom, &l.right);
                            let core = ShadowExpr::scomp(
                                ShadowExpr::Theta(p.clone(), q.clone()),
                                ShadowExpr::Sh(TwoCell::hcomp(TwoCell::Id(q.clone()), f)),
                            );
                            out.extend(place(k, k + 2, core, &[], vec![Step::new("R7a", true, Path::root())], format!("R7a^-1 @ {k}")));
                        }
                        if e <= q.len() {
                            let g = layer_term(&l.left, &l.atom, &w.slice(sig, e, q.len()));
                            let core = ShadowExpr::scomp(
                                ShadowExpr::Theta(p.clone(), q.clone()),
                                ShadowExpr::Sh(TwoCell::hcomp(g, TwoCell::Id(p.clone()))),
                            );
                            out.extend(place(k, k + 2, core, &[], vec![Step::new("R7b", true, Path::root())], format!("R7b^-1 @ {k}")));
                        }
                    }
                    (Item::Theta(p1, q1), Item::Theta(p2, q2)) => {
                        // theta(X Y, Z) ; theta(Z X, Y) = theta(X, Y Z)
                        if p2.len() >= q1.len() && p2.gens()[..q1.len()] == *q1.gens() && p1.len() >= q2.len() {
                            let x = p2.slice(sig, q1.len(), p2.len());
                            if x.concat(q2).as_ref() == Some(p1) {
                                let core = ShadowExpr::scomp(
                                    ShadowExpr::Theta(p1.clone(), q1.clone()),
                                    ShadowExpr::Theta(p2.clone(), q2.clone()),
                                );
                                let step = Step::new("R3", false, Path::root())
                                    .with("X", Binding::One(x))
                                    .with("Y", Binding::One(q2.clone()))
                                    .with("Z", Binding::One(q1.clone()));
                                out.extend(place(k, k + 2, core, &[], vec![step], format!("R3 @ {k}")));
                            }
                        }
                    }
                    _ => {}
                }
            }
            // splits of a single theta
            for (k, it) in its.iter().enumerate() {
                if let Item::Theta(p, q) = it {
                    for c in 1..q.len() {
                        let step = Step::new("R3", true, Path::root())
                            .with("X", Binding::One(p.clone()))
                            .with("Y", Binding::One(q.slice(sig, 0, c)))
                            .with("Z", Binding::One(q.slice(sig, c, q.len())));
                        let core = ShadowExpr::Theta(p.clone(), q.clone());
                        out.extend(place(k, k + 1, core, &[], vec![step], format!("R3^-1 @ {k}:{c}")));
                    }
                }
            }
            // theta(X, Y) ; theta(Y, X) inserted at a gap
            for (g, w) in gaps.iter().enumerate() {
                for c in 1..w.len() {
                    let core = ShadowExpr::Theta(OneCell::unit(w.src()), w.clone());
                    let steps = vec![Step::new("R3", true, Path::root())
                        .with("X", Binding::One(OneCell::unit(w.src())))
                        .with("Y", Binding::One(w.slice(sig, 0, c)))
                        .with("Z", Binding::One(w.slice(sig, c, w.len())))];
                    out.extend(place(g, g, core, &[], steps, format!("theta pair at gap {g}:{c}")));
                }
            }
        }
        out
    }
}

fn occurrences(sig: &Signature, w: &OneCell, sub: &OneCell) -> Vec<usize> {
    if sub.is_unit() {
        return Vec::new();
    }
    (0..=w.len().saturating_sub(sub.len()))
        .filter(|&k| k + sub.len() <= w.len() && w.gens()[k..k + sub.len()] == *sub.gens() && w.zero_at(sig, k) == sub.src())
        .collect()
}

/// All macro moves out of a normal form. Exposed for tactic-style proof building.
pub fn macro_moves(sig: &Signature, rules: &RuleSet, nf: &Expr) -> Vec<Move> {
    Gen::new(sig, rules).moves(nf)
}

struct Node {
    nf: Expr,
    parent: Option<(usize, Move)>,
    depth: usize,
}

struct Side {
    nodes: Vec<Node>,
    index: HashMap<Expr, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(root: Expr) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Side { nodes: vec![Node { nf: root, parent: None, depth: 0 }], index, frontier: vec![0] }
    }

    /// Expands the frontier by one level. Returns false if the cap was hit.
    fn expand(&mut self, g: &Gen<'_>, cap: usize) -> bool {
        let frontier = std::mem::take(&mut self.frontier);
        let expanded: Vec<Vec<Move>> = frontier.par_iter().map(|&i| g.moves(&self.nodes[i].nf)).collect();
        let mut added = 0usize;
        for (&i, ms) in frontier.iter().zip(expanded) {
            let depth = self.nodes[i].depth + 1;
            for m in ms {
                if self.index.contains_key(&m.result) {
                    continue;
                }
                if added >= cap {
                    return false;
                }
                let id = self.nodes.len();
                self.index.insert(m.result.clone(), id);
                self.nodes.push(Node { nf: m.result.clone(), parent: Some((i, m)), depth });
                self.frontier.push(id);
                added += 1;
            }
        }
        true
    }

    /// Moves from the root to node `i`.
    fn path_to(&self, mut i: usize) -> Vec<&Move> {
        let mut out = Vec::new();
        while let Some((p, m)) = &self.nodes[i].parent {
            out.push(m);
            i = *p;
        }
        out.reverse();
        out
    }
}

/// Looks for a proof of `lhs = rhs`. Never refutes.
pub fn search_equal(sig: &Signature, rules: &RuleSet, lhs: &Expr, rhs: &Expr, budget: SearchBudget) -> EqualityCertificate {
    let unknown = |explored| EqualityCertificate { lhs: lhs.clone(), rhs: rhs.clone(), verdict: Verdict::Unknown { explored } };
    if lhs == rhs {
        return EqualityCertificate {
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            verdict: Verdict::Proved(ProofScript { lhs: lhs.clone(), rhs: rhs.clone(), steps: Vec::new() }),
        };
    }
    match (typecheck(sig, lhs), typecheck(sig, rhs)) {
        (Ok(a), Ok(b)) if a == b && lhs.kind() == rhs.kind() => {}
        _ => return unknown(0),
    }
    let Ok((ln, lsteps)) = normalize_with_steps(sig, rules, lhs, NORMALIZE_BUDGET) else { return unknown(0) };
    let Ok((rn, rsteps)) = normalize_with_steps(sig, rules, rhs, NORMALIZE_BUDGET) else { return unknown(0) };
    let g = Gen::new(sig, rules);
    let mut left = Side::new(ln);
    let mut right = Side::new(rn);
    let mut round = 0usize;
    loop {
        // best meeting point: fewest total moves, then lowest ids
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, node) in left.nodes.iter().enumerate() {
            if let Some(&j) = right.index.get(&node.nf) {
                let d = node.depth + right.nodes[j].depth;
                if d <= budget.depth && best.map_or(true, |(bd, bi, bj)| (d, i, j) < (bd, bi, bj)) {
                    best = Some((d, i, j));
                }
            }
        }
        if let Some((_, i, j)) = best {
            let mut steps = lsteps.clone();
            for m in left.path_to(i) {
                steps.extend(m.script(sig, rules));
            }
            for m in right.path_to(j).into_iter().rev() {
                steps.extend(reverse_steps(&m.script(sig, rules)));
            }
            steps.extend(reverse_steps(&rsteps));
            let script = ProofScript { lhs: lhs.clone(), rhs: rhs.clone(), steps };
            return match verify_script(sig, rules, &script) {
                Ok(cert) => cert,
                Err(_) => unknown(left.nodes.len() + right.nodes.len()),
            };
        }
        let explored = left.nodes.len() + right.nodes.len();
        let exhausted = left.frontier.is_empty() && right.frontier.is_empty();
        if exhausted || 2 * round >= budget.depth || explored >= budget.nodes {
            return unknown(explored);
        }
        let cap = budget.nodes.saturating_sub(explored);
        let ok_l = left.expand(&g, cap);
        let ok_r = right.expand(&g, cap);
        round += 1;
        if !ok_l || !ok_r {
            return unknown(budget.nodes);
        }
    }
}
