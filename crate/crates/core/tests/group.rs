use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shadowtrace::dsl::SubgroupSpec;
use shadowtrace::group::*;

mod common;
use common::{random_group, random_subgroup, s3_oracle};

fn load(name: &str) -> GroupData {
    let path = format!("{}/data/groups/{name}", env!("CARGO_MANIFEST_DIR"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    load_group_json(&v).unwrap()
}

fn cover(g: &GroupData, spec: &str) -> CoverSpec {
    let k = g.resolve(&parse_subgroup_spec(spec).unwrap()).unwrap();
    build_cover(g.group.clone(), &k).unwrap()
}

fn scaled_identity(n: usize, s: i64) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { s } else { 0 }).collect()).collect()
}

#[test]
fn z4_cover_shape() {
    let c = cover(&load("z4.json"), "{0,2}");
    assert_eq!((c.index(), c.g_classes.len(), c.k_classes.len()), (2, 4, 2));
}

#[test]
fn s3_a3_cover_shape() {
    let g = load("s3.json");
    assert_eq!(g.subgroups["a3"], vec![0, 3, 4]);
    let c = cover(&g, "a3");
    assert_eq!((c.index(), c.g_classes.len(), c.k_classes.len()), (2, 3, 3));
    let labels: Vec<&str> = c.reps.iter().map(|&x| c.group.labels[x].as_str()).collect();
    assert_eq!(labels, ["e", "(2 3)"]);
}

#[test]
fn non_subgroup_is_rejected() {
    let g = Arc::new(cyclic(4));
    assert!(matches!(build_cover(g, &[0, 1]), Err(GroupError::NotASubgroup(_))));
}

#[test]
fn z4_transfer() {
    let t = loop_transfer(&cover(&load("z4.json"), "{0,2}"));
    assert_eq!(t.col_labels, ["0", "1", "2", "3"]);
    assert_eq!(t.row_labels, ["0", "2"]);
    assert_eq!(t.entries, vec![vec![2, 0, 0, 0], vec![0, 0, 2, 0]]);
}

#[test]
fn transfer_to_the_whole_group_is_the_identity() {
    for g in [cyclic(5), symmetric(4).unwrap(), quaternion().unwrap()] {
        let all: Vec<usize> = (0..g.order()).collect();
        let n = g.classes().len();
        let c = build_cover(Arc::new(g), &all).unwrap();
        assert_eq!(loop_transfer(&c).entries, scaled_identity(n, 1));
        assert_eq!(becker_gottlieb_composite(&c), 1);
        assert_eq!(euler_composite(&c), scaled_identity(n, 1));
    }
}

#[test]
fn s3_a3_matches_the_coset_sum_oracle_and_golden_file() {
    let oracle = s3_oracle();
    assert_eq!(oracle, vec![vec![2, 0, 0], vec![0, 0, 1], vec![0, 0, 1]]);
    let t = loop_transfer(&cover(&load("s3.json"), "a3"));
    assert_eq!(t.entries, oracle);
    assert_eq!(t.row_labels, ["e", "(1 2 3)", "(1 3 2)"]);
    assert_eq!(t.col_labels, ["e", "(2 3)", "(1 2 3)"]);
    let golden = std::fs::read_to_string(format!("{}/tests/golden/s3_a3.json", env!("CARGO_MANIFEST_DIR"))).unwrap();
    assert_eq!(serde_json::to_string_pretty(&t.to_json()).unwrap() + "\n", golden);
    assert_eq!(TransferMatrix::from_json(&serde_json::from_str(&golden).unwrap()).unwrap(), t);
}

#[test]
fn becker_gottlieb_examples() {
    assert_eq!(becker_gottlieb_composite(&cover(&load("z4.json"), "{0,2}")), 2);
    assert_eq!(becker_gottlieb_composite(&cover(&load("s3.json"), "trivial")), 6);
}

#[test]
fn euler_examples() {
    assert_eq!(euler_composite(&cover(&load("z4.json"), "{0,2}")), scaled_identity(2, 2));
    let v4 = abelian(&[2, 2]);
    let diagonal = v4.labels.iter().position(|l| l == "(1,1)").unwrap();
    let c = build_cover(Arc::new(v4), &[0, diagonal]).unwrap();
    assert_eq!(euler_composite(&c), scaled_identity(2, 2));
}

#[test]
fn cross_model_examples() {
    for (g, spec) in [(load("z4.json"), "{0,2}"), (load("s3.json"), "a3"), (GroupData::new(cyclic(3)), "{0,1,2}")] {
        let r = cross_model_check(&cover(&g, spec)).unwrap();
        assert!(r.pass, "{spec}: {:?} vs {:?}", r.trace, r.transfer.entries);
    }
    let r = cross_model_check(&cover(&GroupData::new(cyclic(3)), "{0,1,2}")).unwrap();
    assert_eq!(r.transfer.entries, scaled_identity(3, 1));
}

#[test]
fn restriction_bimodule_is_valid_and_free() {
    let c = cover(&load("s3.json"), "a3");
    let m = restriction_bimodule(&c).unwrap();
    m.validate().unwrap();
    shadowtrace::bimod::dualize(&m).unwrap();
}

#[test]
fn table_rendering_agrees_with_json() {
    let t = loop_transfer(&cover(&load("s3.json"), "a3"));
    let text = t.to_table();
    assert_eq!(TransferMatrix::parse_table(&text, &t.row_labels, &t.col_labels).unwrap(), t.entries);
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn permutation_closure_orders() {
    assert_eq!(symmetric(4).unwrap().order(), 24);
    assert_eq!(alternating(5).unwrap().order(), 60);
    assert_eq!(dihedral(7).unwrap().order(), 14);
    assert_eq!(quaternion().unwrap().order(), 8);
    assert!(matches!(FiniteGroup::from_permutations(6, &[vec![1, 0, 2, 3, 4, 5], vec![1, 2, 3, 4, 5, 0]], 100), Err(GroupError::TooLarge(100))));
}

#[test]
fn bad_tables_are_rejected() {
    // not associative: a Latin square with identity 0 that is not a group
    let t = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    assert!(matches!(FiniteGroup::from_table(t, None), Err(GroupError::NotAGroup(_))));
    assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
}

#[test]
fn subgroup_specs_parse() {
    assert_eq!(parse_subgroup_spec("{0, 2}").unwrap(), SubgroupSpec::Elements(vec![0, 2]));
    assert_eq!(parse_subgroup_spec("a3").unwrap(), SubgroupSpec::Named("a3".into()));
    assert_eq!(
        parse_subgroup_spec("<(1 2 3), (1 2)(3 4)>").unwrap(),
        SubgroupSpec::Generated(vec![vec![vec![1, 2, 3]], vec![vec![1, 2], vec![3, 4]]])
    );
    assert!(parse_subgroup_spec("{0, x}").is_err());
    let g = load("s3.json");
    assert_eq!(g.resolve(&parse_subgroup_spec("<(1 2 3)>").unwrap()).unwrap(), vec![0, 3, 4]);
    assert!(matches!(g.resolve(&SubgroupSpec::Named("a4".into())), Err(GroupError::UnknownSubgroup(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn representatives_do_not_matter(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Arc::new(random_group(&mut rng));
        let k = random_subgroup(&mut rng, &g);
        let c = build_cover(g.clone(), &k).unwrap();
        let base = loop_transfer(&c).entries;
        let coset_reps: Vec<usize> = c.reps.iter().map(|&x| g.mul(x, *k.choose(&mut rng).unwrap())).collect();
        let class_reps: Vec<usize> = c.g_classes.iter().map(|cl| *cl.members.choose(&mut rng).unwrap()).collect();
        prop_assert_eq!(transfer_entries(&c, &coset_reps, &class_reps), base);
    }

    #[test]
    fn column_sums_are_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Arc::new(random_group(&mut rng));
        let k = random_subgroup(&mut rng, &g);
        let c = build_cover(g.clone(), &k).unwrap();
        let t = loop_transfer(&c);
        for (j, cl) in c.g_classes.iter().enumerate() {
            let landed = c.reps.iter().filter(|&&x| c.contains(g.conj(cl.rep, x))).count() as i64;
            prop_assert_eq!(t.column_sum(j), landed);
            prop_assert!(landed <= c.index() as i64);
        }
        prop_assert_eq!(becker_gottlieb_composite(&c), c.index() as i64);
    }

    #[test]
    fn transfer_is_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Arc::new(random_group(&mut rng));
        let h = random_subgroup(&mut rng, &g);
        let hg = g.subgroup(&h).unwrap();
        let k: Vec<usize> = random_subgroup(&mut rng, &hg).into_iter().map(|i| h[i]).collect();
        let (direct, composite) = functoriality(&g, &h, &k).unwrap();
        prop_assert_eq!(direct.entries, composite.entries);
    }

    #[test]
    fn abelian_euler_is_the_index(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Arc::new(abelian(&[rng.gen_range(1..=6), rng.gen_range(1..=6)]));
        let k = random_subgroup(&mut rng, &g);
        let c = build_cover(g, &k).unwrap();
        prop_assert_eq!(euler_composite(&c), scaled_identity(c.k_classes.len(), c.index() as i64));
    }
}
