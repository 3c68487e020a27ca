//! The acceptance suite: each criterion prints one PASS/FAIL line on
//! stderr with its wall time, and the test fails if any criterion does.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shadowtrace::bimod::{evaluate_trace, hattori_stallings_oracle, random_bimodule_between, random_free_bimodule, RandomAlgebra};
use shadowtrace::dsl::{parse_dsl, Item};
use shadowtrace::engine::{normalize, search_equal, verify_script, RuleSet, SearchBudget, NORMALIZE_BUDGET};
use shadowtrace::group::*;
use shadowtrace::term::{typecheck, Expr};
use shadowtrace::trace::{shipped_theorems, CORPUS};

mod common;
use common::{abelian_types, random_expr, random_group_upto_200, random_rewrites, random_subgroup, s3_oracle, signature};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn run(n: usize, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(l) = limit {
        if elapsed > l {
            out = fail(format!("{} (took {elapsed:.2?}, limit {l:?})", out.detail));
        }
    }
    let verdict = if out.ok { "PASS" } else { "FAIL" };
    let line = format!("criterion {n} {verdict} [{elapsed:.2?}] {title}: {}\n", out.detail);
    let _ = std::io::stderr().write_all(line.as_bytes());
    out.ok
}

/// Covers of every abelian group of order at most 64: all subgroups of
/// cyclic groups, 50 random subgroups of the others.
fn abelian_covers() -> Vec<CoverSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut out = Vec::new();
    for n in 1..=64 {
        for factors in abelian_types(n) {
            let g = Arc::new(abelian(&factors));
            let subgroups = if factors.len() <= 1 {
                all_subgroups(&g)
            } else {
                let mut ks: Vec<Vec<usize>> = (0..50)
                    .map(|_| {
                        let gens: Vec<usize> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..n)).collect();
                        g.generated(&gens)
                    })
                    .collect();
                ks.sort();
                ks.dedup();
                ks
            };
            out.extend(subgroups.iter().map(|k| build_cover(g.clone(), k).unwrap()));
        }
    }
    out
}

fn criterion_1(covers: &[CoverSpec]) -> Outcome {
    let groups: std::collections::BTreeSet<(usize, usize)> =
        covers.iter().map(|c| (c.group.order(), Arc::as_ptr(&c.group) as usize)).collect();
    for c in covers {
        let n = c.index() as i64;
        let e = euler_composite(c);
        for (i, row) in e.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x != if i == j { n } else { 0 } {
                    return fail(format!("euler composite of |G|={} |K|={} is {e:?}", c.group.order(), c.subgroup.len()));
                }
            }
        }
        let t = loop_transfer(c);
        for (j, cl) in c.g_classes.iter().enumerate() {
            let meets = cl.members.iter().any(|&g| c.contains(g));
            let expect = if meets { n } else { 0 };
            if t.column_sum(j) != expect {
                return fail(format!("column {j} of |G|={} has degree {}", c.group.order(), t.column_sum(j)));
            }
        }
    }
    pass(format!("{} covers over {} abelian groups", covers.len(), groups.len()))
}

fn criterion_2() -> Outcome {
    let path = format!("{}/data/groups/s3.json", env!("CARGO_MANIFEST_DIR"));
    let gd = load_group_json(&serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()).unwrap();
    let c = build_cover(gd.group.clone(), &gd.subgroups["a3"]).unwrap();
    let t = loop_transfer(&c);
    let expected = vec![vec![2, 0, 0], vec![0, 0, 1], vec![0, 0, 1]];
    if s3_oracle() != expected || t.entries != expected {
        return fail(format!("entries {:?}", t.entries));
    }
    if t.row_labels != ["e", "(1 2 3)", "(1 3 2)"] || t.col_labels != ["e", "(2 3)", "(1 2 3)"] {
        return fail(format!("labels {:?} / {:?}", t.row_labels, t.col_labels));
    }
    let golden = std::fs::read_to_string(format!("{}/tests/golden/s3_a3.json", env!("CARGO_MANIFEST_DIR"))).unwrap();
    if serde_json::to_string_pretty(&t.to_json()).unwrap() + "\n" != golden {
        return fail("JSON differs from the golden file");
    }
    pass("[e]->2[e], [3-cycle]->[(1 2 3)]+[(1 3 2)], [transposition]->0; JSON byte-identical")
}

fn random_covers(seed: u64, count: usize) -> Vec<CoverSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = Arc::new(random_group_upto_200(&mut rng));
            let k = random_subgroup(&mut rng, &g);
            build_cover(g, &k).unwrap()
        })
        .collect()
}

fn criterion_3(covers: &[CoverSpec]) -> Outcome {
    let nonabelian = covers.iter().filter(|c| !c.group.is_abelian()).count();
    for c in covers {
        let bg = becker_gottlieb_composite(c);
        if bg != c.index() as i64 {
            return fail(format!("|G|={} |K|={}: composite {bg}", c.group.order(), c.subgroup.len()));
        }
    }
    let largest = covers.iter().map(|c| c.group.order()).max().unwrap_or(0);
    if nonabelian == 0 {
        return fail("no nonabelian group was drawn");
    }
    pass(format!("{} covers, {nonabelian} nonabelian, largest |G|={largest}", covers.len()))
}

fn criterion_4(abelian: &[CoverSpec]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..200 {
        let m = random_free_bimodule(&mut rng, 4, 8);
        match (evaluate_trace(&m), hattori_stallings_oracle(&m)) {
            (Ok(t), Ok(o)) if t == o => {}
            (t, o) => return fail(format!("bimodule {i} (dim {}): {t:?} vs {o:?}", m.dim())),
        }
    }
    let small: Vec<&CoverSpec> = abelian.iter().filter(|c| c.group.order() <= 24).collect();
    for c in &small {
        match cross_model_check(c) {
            Ok(r) if r.pass => {}
            Ok(r) => return fail(format!("|G|={}: trace {:?} vs transfer {:?}", c.group.order(), r.trace, r.transfer.entries)),
            Err(e) => return fail(format!("|G|={}: {e}", c.group.order())),
        }
    }
    pass(format!("200 bimodules agree with the direct formula; {} covers agree across models", small.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let a = RandomAlgebra::choose(&mut rng, 4);
        let r = RandomAlgebra::choose(&mut rng, 4);
        let m = random_bimodule_between(&mut rng, &a, &r, 8);
        let n = random_bimodule_between(&mut rng, &a, &r, 8);
        let sum = evaluate_trace(&m.direct_sum(&n)).unwrap();
        let parts = evaluate_trace(&m).unwrap().add(&evaluate_trace(&n).unwrap());
        if sum != parts {
            return fail(format!("instance {i}: trace of the sum {sum:?} vs {parts:?}"));
        }
    }
    for i in 0..50 {
        let g = Arc::new(random_group_upto_200(&mut rng));
        let h = random_subgroup(&mut rng, &g);
        let hg = g.subgroup(&h).unwrap();
        let k: Vec<usize> = random_subgroup(&mut rng, &hg).into_iter().map(|x| h[x]).collect();
        let (direct, composite) = functoriality(&g, &h, &k).unwrap();
        if direct.entries != composite.entries {
            return fail(format!("chain {i}: |G|={} |H|={} |K|={}", g.order(), h.len(), k.len()));
        }
    }
    pass("100 direct sums, 50 chains K <= H <= G")
}

fn criterion_6() -> Outcome {
    let shipped = shipped_theorems();
    for t in &shipped {
        if verify_script(&t.sig, &RuleSet::builtin(&t.sig), &t.script).is_err() {
            return fail(format!("{}/{} does not replay", t.file, t.name));
        }
    }
    let budget = SearchBudget { nodes: 100_000, depth: 8 };
    let goals = [("theta_squared", "theta_squared"), ("composite_pairs", "composite_triangle_left"), ("composite_pairs", "composite_triangle_right")];
    for (file, goal) in goals {
        let text = CORPUS.iter().find(|(f, _)| *f == file).unwrap().1;
        let doc = parse_dsl(text).unwrap();
        let rules = RuleSet::builtin(&doc.sig);
        let Some((lhs, rhs)) = doc.items.iter().find_map(|i| match i {
            Item::Prove { name, lhs, rhs, .. } if name == goal => Some((lhs.clone(), rhs.clone())),
            _ => None,
        }) else {
            return fail(format!("goal {goal} missing"));
        };
        let cert = search_equal(&doc.sig, &rules, &lhs, &rhs, budget);
        let Some(script) = cert.script() else { return fail(format!("search did not re-prove {goal}")) };
        if verify_script(&doc.sig, &rules, script).is_err() {
            return fail(format!("re-proof of {goal} does not replay"));
        }
    }
    pass(format!("{} shipped scripts verify; theta^2 = id and both composite triangles re-proved", shipped.len()))
}

fn criterion_7(covers: &[CoverSpec]) -> Outcome {
    let sig = signature();
    let rules = RuleSet::builtin(&sig);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rewrites = 0;
    for i in 0..10_000 {
        let e: Expr = random_expr(&mut rng, &sig, 4);
        let b = match typecheck(&sig, &e) {
            Ok(b) => b,
            Err(err) => return fail(format!("expression {i} is ill-typed: {err}")),
        };
        let r = random_rewrites(&mut rng, &sig, &rules, &e, 2);
        if let Some(m) = r.unsound.first() {
            return fail(format!("expression {i}: {m}"));
        }
        for (step, next) in &r.applied {
            if typecheck(&sig, next).ok().as_ref() != Some(&b) {
                return fail(format!("expression {i}: {} at {} changes the boundary", step.rule, step.path));
            }
        }
        rewrites += r.applied.len();
        let n = normalize(&sig, &rules, &e, NORMALIZE_BUDGET).unwrap();
        if normalize(&sig, &rules, &n, NORMALIZE_BUDGET).unwrap() != n {
            return fail(format!("expression {i}: normalize is not idempotent"));
        }
    }
    for c in covers {
        let base = loop_transfer(c).entries;
        for _ in 0..100 {
            let coset_reps: Vec<usize> = c.reps.iter().map(|&x| c.group.mul(x, *c.subgroup.choose(&mut rng).unwrap())).collect();
            let class_reps: Vec<usize> = c.g_classes.iter().map(|cl| *cl.members.choose(&mut rng).unwrap()).collect();
            if transfer_entries(c, &coset_reps, &class_reps) != base {
                return fail(format!("|G|={}: transfer depends on representatives", c.group.order()));
            }
        }
    }
    pass(format!("10000 expressions, {rewrites} rule instances; {} covers x 100 re-choices", covers.len()))
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let abelian = abelian_covers();
    let random = random_covers(3, 100);
    let results = [
        run(1, "covering-space degrees", Some(secs(10)), || criterion_1(&abelian)),
        run(2, "S3/A3 golden table", None, criterion_2),
        run(3, "Becker-Gottlieb composite", Some(secs(30)), || criterion_3(&random)),
        run(4, "trace equals the Hattori-Stallings trace", Some(secs(60)), || criterion_4(&abelian)),
        run(5, "additivity and functoriality", None, criterion_5),
        run(6, "symbolic corpus", Some(secs(20)), criterion_6),
        run(7, "engine soundness", None, || criterion_7(&random)),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
