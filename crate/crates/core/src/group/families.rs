use super::{FiniteGroup, GroupError, DEFAULT_ORDER_BOUND};

/// `Z/n` with elements labelled by residue.
pub fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::from_table(table, None).expect("cyclic group")
}

/// `G × H` with pairs ordered lexicographically.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (n, m) = (g.order(), h.order());
    let table = (0..n * m)
        .map(|a| (0..n * m).map(|b| g.mul(a / m, b / m) * m + h.mul(a % m, b % m)).collect())
        .collect();
    let labels = (0..n * m).map(|a| format!("({},{})", g.labels[a / m], h.labels[a % m])).collect();
    FiniteGroup::from_table(table, Some(labels)).expect("product of groups")
}

/// `Z/n1 × Z/n2 × …`; a single factor gives the cyclic group.
pub fn abelian(factors: &[usize]) -> FiniteGroup {
    match factors {
        [] => cyclic(1),
        [n] => cyclic(*n),
        [n, rest @ ..] => {
            let tail = abelian(rest);
            let g = direct_product(&cyclic(*n), &tail);
            // flatten nested pair labels
            let labels = g.labels.iter().map(|l| l.replace(",(", ",").replace("))", ")")).collect();
            FiniteGroup { labels, ..g }
        }
    }
}

fn cycle_perm(degree: usize, cycle: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for w in 0..cycle.len() {
        p[cycle[w]] = cycle[(w + 1) % cycle.len()];
    }
    p
}

fn from_perms(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_permutations(degree, gens, DEFAULT_ORDER_BOUND)
}

/// Symmetries of the `n`-gon, order `2n`, acting on the vertices (`n ≥ 3`).
pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    let rot = cycle_perm(n, &(0..n).collect::<Vec<_>>());
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    from_perms(n, &[rot, refl])
}

pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    if n < 2 {
        return from_perms(n.max(1), &[]);
    }
    from_perms(n, &[cycle_perm(n, &[0, 1]), cycle_perm(n, &(0..n).collect::<Vec<_>>())])
}

/// Generated by the 3-cycles `(1 2 k)`.
pub fn alternating(n: usize) -> Result<FiniteGroup, GroupError> {
    let gens: Vec<Vec<usize>> = (2..n).map(|k| cycle_perm(n, &[0, 1, k])).collect();
    from_perms(n.max(1), &gens)
}

/// The quaternion group `{±1, ±i, ±j, ±k}` as permutations of itself.
pub fn quaternion() -> Result<FiniteGroup, GroupError> {
    // points 0..8 are 1, -1, i, -i, j, -j, k, -k; left multiplication by i and j
    let i = vec![2, 3, 1, 0, 6, 7, 5, 4];
    let j = vec![4, 5, 7, 6, 1, 0, 2, 3];
    from_perms(8, &[i, j])
}
