//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use shadowtrace::group::*;
use shadowtrace::term::{typecheck, Expr, OneCell, ShadowExpr, Signature, TwoCell, ZeroId};

/// Small groups, abelian and not, for the property tests.
pub fn random_group(rng: &mut ChaCha8Rng) -> FiniteGroup {
    match rng.gen_range(0..7) {
        0 => cyclic(rng.gen_range(1..=30)),
        1 => abelian(&[rng.gen_range(2..=4), rng.gen_range(2..=6)]),
        2 => dihedral(rng.gen_range(3..=12)).unwrap(),
        3 => symmetric(rng.gen_range(2..=4)).unwrap(),
        4 => alternating(4).unwrap(),
        5 => quaternion().unwrap(),
        _ => direct_product(&symmetric(3).unwrap(), &cyclic(rng.gen_range(2..=4))),
    }
}

pub fn random_subgroup(rng: &mut ChaCha8Rng, g: &FiniteGroup) -> Vec<usize> {
    let gens: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..g.order())).collect();
    g.generated(&gens)
}


/// Direct coset sums on permutations of three points, composed right to
/// left: entry `(λ, ω)` counts representatives `x` with `x⁻¹ g x ∈ λ`.
pub fn s3_oracle() -> Vec<Vec<i64>> {
    type P = [usize; 3];
    let comp = |p: P, q: P| -> P { [p[q[0]], p[q[1]], p[q[2]]] };
    let inv = |p: P| -> P {
        let mut r = [0; 3];
        for i in 0..3 {
            r[p[i]] = i;
        }
        r
    };
    let (e, c, c2, t) = ([0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1]);
    // A3 is abelian, so its classes are singletons
    let k_classes = [e, c, c2];
    let reps = [e, t];
    let g_reps = [e, t, c];
    k_classes
        .iter()
        .map(|&l| {
            g_reps
                .iter()
                .map(|&g| reps.iter().filter(|&&x| comp(comp(inv(x), g), x) == l).count() as i64)
                .collect()
        })
        .collect()
}

/// Groups of order at most 200, with nonabelian families well represented.
pub fn random_group_upto_200(rng: &mut ChaCha8Rng) -> FiniteGroup {
    match rng.gen_range(0..9) {
        0 => cyclic(rng.gen_range(1..=200)),
        1 => {
            let a = rng.gen_range(2..=10);
            abelian(&[a, rng.gen_range(2..=200 / a).min(20)])
        }
        2 => dihedral(rng.gen_range(3..=100)).unwrap(),
        3 => symmetric(rng.gen_range(3..=5)).unwrap(),
        4 => alternating(rng.gen_range(4..=5)).unwrap(),
        5 => quaternion().unwrap(),
        6 => direct_product(&symmetric(3).unwrap(), &cyclic(rng.gen_range(2..=33))),
        7 => direct_product(&alternating(4).unwrap(), &cyclic(rng.gen_range(2..=16))),
        _ => direct_product(&dihedral(rng.gen_range(3..=10)).unwrap(), &cyclic(rng.gen_range(2..=5))),
    }
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One representative per isomorphism class of abelian groups of order `n`,
/// as lists of prime-power cyclic factors.
pub fn abelian_types(n: usize) -> Vec<Vec<usize>> {
    let mut primes = Vec::new();
    let (mut m, mut p) = (n, 2);
    while m > 1 {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
        p += 1;
    }
    let mut out = vec![vec![]];
    for (p, e) in primes {
        let mut next = Vec::new();
        for base in &out {
            for part in partitions(e, e) {
                let mut f: Vec<usize> = base.clone();
                f.extend(part.iter().map(|&k| p.pow(k as u32)));
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// The signature random expressions live in.
pub const DECLS: &str = "0cell A, B;
1cell X : A -> B;
1cell Y : B -> A;
1cell P : A -> A;
1cell Q : B -> B;
dualpair p = (X, Y);
2cell f : P => P;
2cell g : P ⊗ X => X ⊗ Q;
2cell k : Q => Q ⊗ Q;
symmetric A;
shadow;
";

pub fn signature() -> Signature {
    shadowtrace::dsl::parse_dsl(DECLS).unwrap().sig
}

/// Random walk along 1-cell generators from `a`.
pub fn random_word(rng: &mut ChaCha8Rng, sig: &Signature, a: ZeroId, max_len: usize) -> OneCell {
    let mut w = OneCell::unit(a);
    for _ in 0..rng.gen_range(0..=max_len) {
        let next: Vec<_> = (0..sig.one_cells.len() as u32)
            .map(shadowtrace::term::GenId)
            .filter(|&g| sig.one(g).src == w.tgt())
            .collect();
        let Some(&g) = next.choose(rng) else { break };
        w = w.concat(&OneCell::gen(sig, g)).unwrap();
    }
    w
}

fn tgt(sig: &Signature, e: &TwoCell) -> OneCell {
    typecheck(sig, &Expr::Two(e.clone())).expect("generated 2-cells are well typed").tgt
}

/// A random 2-cell with source `w`.
pub fn two_from(rng: &mut ChaCha8Rng, sig: &Signature, w: &OneCell, depth: usize) -> TwoCell {
    let mut atoms = vec![TwoCell::Id(w.clone())];
    for (i, t) in sig.two_cells.iter().enumerate() {
        if &t.src == w {
            atoms.push(TwoCell::Gen(shadowtrace::term::TwoGenId(i as u32)));
        }
    }
    for (i, d) in sig.dual_pairs.iter().enumerate() {
        let id = shadowtrace::term::PairId(i as u32);
        if w.is_unit() && w.src() == d.left.src() {
            atoms.push(TwoCell::Coev(id));
        }
        if d.right.concat(&d.left).as_ref() == Some(w) {
            atoms.push(TwoCell::Eval(id));
        }
    }
    if w.is_endo() && sig.is_symmetric(w.src()) {
        let cuts: Vec<usize> = (0..=w.len()).filter(|&i| w.zero_at(sig, i) == w.src()).collect();
        let i = *cuts.choose(rng).unwrap();
        atoms.push(TwoCell::Gamma(w.slice(sig, 0, i), w.slice(sig, i, w.len())));
    }
    if depth == 0 || rng.gen_bool(0.25) {
        return atoms.choose(rng).unwrap().clone();
    }
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..=w.len());
        let (l, r) = (w.slice(sig, 0, i), w.slice(sig, i, w.len()));
        TwoCell::hcomp(two_from(rng, sig, &l, depth - 1), two_from(rng, sig, &r, depth - 1))
    } else {
        let f = two_from(rng, sig, w, depth - 1);
        let mid = tgt(sig, &f);
        TwoCell::vcomp(f, two_from(rng, sig, &mid, depth - 1))
    }
}

/// A random shadow morphism out of `⟨⟨w⟩⟩` for an endo-1-cell `w`.
pub fn shadow_from(rng: &mut ChaCha8Rng, sig: &Signature, w: &OneCell, depth: usize) -> ShadowExpr {
    let pick = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..4) };
    match pick {
        0 => ShadowExpr::SId(w.clone()),
        1 => ShadowExpr::Sh(two_from(rng, sig, w, depth)),
        2 => {
            let i = rng.gen_range(0..=w.len());
            ShadowExpr::Theta(w.slice(sig, 0, i), w.slice(sig, i, w.len()))
        }
        _ => {
            let u = shadow_from(rng, sig, w, depth - 1);
            let mid = typecheck(sig, &Expr::Shadow(u.clone())).unwrap().tgt;
            ShadowExpr::scomp(u, shadow_from(rng, sig, &mid, depth - 1))
        }
    }
}

/// A random well-typed 2-cell or shadow morphism.
pub fn random_expr(rng: &mut ChaCha8Rng, sig: &Signature, depth: usize) -> Expr {
    let a = ZeroId(rng.gen_range(0..sig.zero_cells.len() as u32));
    let w = random_word(rng, sig, a, 3);
    if rng.gen_bool(0.5) {
        return Expr::Two(two_from(rng, sig, &w, depth));
    }
    // close the walk into a loop so it has a shadow
    let mut w = w;
    if w.tgt() != w.src() {
        let back = (0..sig.one_cells.len() as u32)
            .map(shadowtrace::term::GenId)
            .find(|&g| sig.one(g).src == w.tgt() && sig.one(g).tgt == w.src())
            .expect("a generator back");
        w = w.concat(&OneCell::gen(sig, back)).unwrap();
    }
    Expr::Shadow(shadow_from(rng, sig, &w, depth))
}

/// Outcome of trying rule instances on one expression.
pub struct Rewrites {
    pub applied: Vec<(shadowtrace::engine::Step, Expr)>,
    /// Refusals of well-typed results with a different boundary.
    pub unsound: Vec<String>,
}

/// Tries every rule in both directions at up to `positions` random
/// positions of `e`, without supplying metavariables.
pub fn random_rewrites(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    rules: &shadowtrace::engine::RuleSet,
    e: &Expr,
    positions: usize,
) -> Rewrites {
    use shadowtrace::engine::{apply_step, Step};
    let mut paths = e.positions();
    paths.shuffle(rng);
    let mut out = Rewrites { applied: Vec::new(), unsound: Vec::new() };
    for path in paths.into_iter().take(positions) {
        for rule in rules.iter() {
            for inverse in [false, true] {
                let step = Step::new(rule.name.clone(), inverse, path.clone());
                match apply_step(sig, rules, e, &step) {
                    Ok((next, subst)) => out.applied.push((Step { subst, ..step }, next)),
                    // matching is syntactic; an ill-typed result is a failed side
                    // condition, while a well-typed one must keep the boundary
                    Err(m) if m.contains("would change the boundary") => out.unsound.push(m),
                    Err(_) => {}
                }
            }
        }
    }
    out
}
