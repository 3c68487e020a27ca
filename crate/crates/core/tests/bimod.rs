use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shadowtrace::bimod::*;
use shadowtrace::linalg::{q, Mat, Q};

fn rationals() -> Arc<Algebra> {
    Arc::new(catalog_entry("Q").unwrap().algebra.as_ref().clone())
}

/// `Q^n` over `(Q, Q)` with the standard witness.
fn free_q(n: usize) -> Bimodule {
    let k = rationals();
    Bimodule {
        a: k.clone(),
        r: k,
        left: vec![Mat::identity(n)],
        right: vec![Mat::identity(n)],
        witness: Some((0..n).map(|i| (0..n).map(|j| q((i == j) as i64)).collect()).collect()),
    }
}

/// Composition of permutations of `0..n` given as images; `(p q)(x) = p(q(x))`.
fn perm_table(perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|r| {
                    let prod: Vec<usize> = r.iter().map(|&x| p[x]).collect();
                    perms.iter().position(|s| *s == prod).unwrap()
                })
                .collect()
        })
        .collect()
}

fn s3() -> Vec<Vec<usize>> {
    vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 2, 1], vec![2, 1, 0], vec![1, 2, 0], vec![2, 0, 1]]
}

fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("g{i}")).collect()
}

/// `QG` over `(QG, QK)` for `K` given by element indices, witnessed by `reps`.
fn restriction(table: &[Vec<usize>], k: &[usize], reps: &[usize]) -> Bimodule {
    let n = table.len();
    let sub: Vec<Vec<usize>> =
        k.iter().map(|&x| k.iter().map(|&y| k.iter().position(|&z| z == table[x][y]).unwrap()).collect()).collect();
    let qg = Arc::new(Algebra::group_algebra(table, labels(n)).unwrap());
    let qk = Arc::new(Algebra::group_algebra(&sub, labels(k.len())).unwrap());
    let unit = |i: usize| -> Vec<Q> { (0..n).map(|j| q((i == j) as i64)).collect() };
    Bimodule {
        a: qg.clone(),
        r: qk,
        left: (0..n).map(|i| qg.left_mult(&unit(i))).collect(),
        right: k.iter().map(|&x| qg.right_mult(&unit(x))).collect(),
        witness: Some(reps.iter().map(|&x| unit(x)).collect()),
    }
}

/// Number of conjugacy classes, by orbit enumeration.
fn class_count(table: &[Vec<usize>]) -> usize {
    let n = table.len();
    let e = (0..n).find(|&i| (0..n).all(|j| table[i][j] == j)).unwrap();
    let inv = |g: usize| (0..n).find(|&h| table[g][h] == e).unwrap();
    let mut seen = vec![false; n];
    let mut count = 0;
    for g in 0..n {
        if !seen[g] {
            count += 1;
            for x in 0..n {
                seen[table[table[inv(x)][g]][x]] = true;
            }
        }
    }
    count
}

#[test]
fn hh0_dimensions() {
    assert_eq!(rationals().hh0().dim(), 1);
    let qs3 = Arc::new(Algebra::group_algebra(&perm_table(&s3()), labels(6)).unwrap());
    assert_eq!(qs3.hh0().dim(), class_count(&perm_table(&s3())));
    let dual = Arc::new(catalog_entry("Q[x]/x^2").unwrap().algebra.as_ref().clone());
    assert_eq!(dual.hh0().dim(), 2);
}

#[test]
fn hh0_projection_kernel_is_the_commutator_span() {
    let m2 = catalog_entry("M2").unwrap().algebra;
    let h = m2.hh0();
    // M2 modulo commutators is the trace
    assert_eq!(h.dim(), 1);
    assert_eq!(h.projection().rank(), 1);
}

#[test]
fn tensor_dimensions() {
    let k = rationals();
    let p = tensor_over(&k, &free_q(2), &free_q(3)).unwrap();
    assert_eq!(p.dim(), 6);
    p.validate().unwrap();

    let z4 = cyclic_table(4);
    let m = restriction(&z4, &[0, 2], &[0, 1]);
    let qk = m.r.clone();
    let t = tensor_over(&qk, &m, &qk.regular()).unwrap();
    assert_eq!(t.dim(), 4);
    t.validate().unwrap();
}

#[test]
fn tensor_with_the_unit_keeps_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let m = random_free_bimodule(&mut rng, 4, 8);
        let t = tensor_over(&m.r, &m, &m.r.regular()).unwrap();
        assert_eq!(t.dim(), m.dim());
        t.validate().unwrap();
    }
}

#[test]
fn mismatched_middle_is_rejected() {
    let m = restriction(&cyclic_table(4), &[0, 2], &[0, 1]);
    assert!(tensor_over(&m.a, &m, &m.a.regular()).is_err());
}

#[test]
fn dual_of_the_unit_bimodule() {
    let r = catalog_entry("T2").unwrap().algebra;
    let d = dualize(&r.regular()).unwrap();
    assert_eq!(d.dm.dim(), r.dim());
    d.dm.validate().unwrap();
    assert_eq!(d.m_dm.quotient.dim(), r.dim());
    assert_eq!(d.eval_map.rows, r.dim());
}

#[test]
fn dual_of_free_q3_has_the_standard_coevaluation() {
    let d = dualize(&free_q(3)).unwrap();
    // coev(1) = Σ e_i ⊗ e_i^*, with plain index i * 3 + i
    let reps = &d.m_dm.quotient.basis;
    assert_eq!(reps.len(), 9);
    let col = d.coev_map.col(0);
    for (c, x) in reps.iter().zip(col) {
        assert_eq!(x, q((c / 3 == c % 3) as i64));
    }
}

#[test]
fn dual_of_qs3_over_qa3() {
    let table = perm_table(&s3());
    // A3 = {id, (0 1 2), (0 2 1)}, coset reps e and a transposition
    let m = restriction(&table, &[0, 4, 5], &[0, 1]);
    m.validate().unwrap();
    let d = dualize(&m).unwrap();
    d.dm.validate().unwrap();
}

#[test]
fn not_free_is_reported() {
    let mut m = free_q(2);
    m.witness = Some(vec![vec![q(1), q(1)], vec![q(2), q(2)]]);
    assert!(matches!(dualize(&m), Err(BimodError::NotFree(_))));
    m.witness = Some(vec![vec![q(1), q(0)]]);
    assert!(matches!(evaluate_trace(&m), Err(BimodError::NotFree(_))));
}

#[test]
fn trace_of_free_rational_modules_is_the_rank() {
    for n in 0..5 {
        let want = Mat::from_ints(&[&[n as i64]]);
        assert_eq!(evaluate_trace(&free_q(n)).unwrap(), want);
        assert_eq!(hattori_stallings_oracle(&free_q(n)).unwrap(), want);
    }
}

#[test]
fn trace_of_the_unit_bimodule_is_the_identity() {
    for entry in catalog() {
        let m = entry.algebra.regular();
        let h = entry.algebra.hh0().dim();
        assert_eq!(evaluate_trace(&m).unwrap(), Mat::identity(h), "{}", entry.name);
        assert_eq!(hattori_stallings_oracle(&m).unwrap(), Mat::identity(h), "{}", entry.name);
    }
}

#[test]
fn invalid_algebra_is_rejected() {
    // e0 e0 = e1, e1 anything else zero, unit e0: the unit law fails
    let z = || q(0);
    let structure = vec![vec![vec![z(), q(1)], vec![z(), z()]], vec![vec![z(), z()], vec![z(), z()]]];
    assert!(Algebra::new(labels(2), structure, vec![q(1), z()]).is_err());
}

#[test]
fn invalid_bimodule_is_rejected() {
    let mut m = free_q(2);
    m.right = vec![Mat::from_ints(&[&[1, 1], &[0, 1]])];
    assert!(m.validate().is_err());
}

#[test]
fn json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let m = random_free_bimodule(&mut rng, 4, 8);
        let a = algebra_from_json(&algebra_to_json(&m.a)).unwrap();
        assert_eq!(a, *m.a);
        let back = bimodule_from_json(&bimodule_to_json(&m), m.a.clone(), m.r.clone()).unwrap();
        assert_eq!(back, m);
    }
}

#[test]
fn algebra_json_accepts_fractions() {
    let v = serde_json::json!({
        "dim": 2,
        "basis": ["1", "x"],
        "structure": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]],
        "unit": ["2/2", 0]
    });
    let a = algebra_from_json(&v).unwrap();
    assert_eq!(a.basis, vec!["1", "x"]);
    let bad = serde_json::json!({"dim": 1, "structure": [[["x"]]], "unit": ["1"]});
    assert!(matches!(algebra_from_json(&bad), Err(BimodError::Json(_))));
}

fn assert_valid(m: &Bimodule) {
    m.validate().unwrap_or_else(|e| panic!("{e}: {m:?}"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_bimodules_are_valid(seed in any::<u64>()) {
        let m = random_free_bimodule(&mut ChaCha8Rng::seed_from_u64(seed), 4, 8);
        assert_valid(&m);
        prop_assert!(m.dim() <= 8);
    }

    #[test]
    fn trace_matches_oracle(seed in any::<u64>()) {
        let m = random_free_bimodule(&mut ChaCha8Rng::seed_from_u64(seed), 2, 3);
        prop_assert_eq!(evaluate_trace(&m).unwrap(), hattori_stallings_oracle(&m).unwrap());
    }

    #[test]
    fn trace_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RandomAlgebra::choose(&mut rng, 4);
        let r = RandomAlgebra::choose(&mut rng, 4);
        let m = random_bimodule_between(&mut rng, &a, &r, 4);
        let n = random_bimodule_between(&mut rng, &a, &r, 4);
        let sum = evaluate_trace(&m.direct_sum(&n)).unwrap();
        prop_assert_eq!(sum, evaluate_trace(&m).unwrap().add(&evaluate_trace(&n).unwrap()));
    }

    #[test]
    fn trace_is_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RandomAlgebra::choose(&mut rng, 3);
        let r = RandomAlgebra::choose(&mut rng, 3);
        let c = RandomAlgebra::choose(&mut rng, 3);
        let m = random_bimodule_between(&mut rng, &a, &r, 4);
        let n = random_bimodule_between(&mut rng, &r, &c, 4);
        let mn = tensor_over(&r.algebra, &m, &n).unwrap();
        assert_valid(&mn);
        let composite = evaluate_trace(&n).unwrap().mul(&evaluate_trace(&m).unwrap());
        prop_assert_eq!(evaluate_trace(&mn).unwrap(), composite);
    }

    #[test]
    fn theta_is_an_involution(seed in any::<u64>()) {
        let m = random_free_bimodule(&mut ChaCha8Rng::seed_from_u64(seed), 3, 4);
        let d = dualize(&m).unwrap();
        let (fwd, back) = theta_pair(&m, &d.dm);
        prop_assert_eq!(back.mul(&fwd), Mat::identity(fwd.cols));
        prop_assert_eq!(fwd.mul(&back), Mat::identity(back.cols));
    }

    #[test]
    fn trace_ignores_witness_and_basis(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_free_bimodule(&mut rng, 3, 6);
        let t = random_twist(&mut rng, &m);
        prop_assert_eq!(evaluate_trace(&t).unwrap(), evaluate_trace(&m).unwrap());
    }
}
