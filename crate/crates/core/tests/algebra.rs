use num_bigint::BigInt;
use num_traits::{One, Zero};
use oppo_core::algebra::{
    homology_at, kernel_basis, snf, snf_with_transforms, subquotient, AlgebraError, FgAbGroup, IntMatrix,
    SparseIntMatrix, SparseVec,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Naive dense reduction: elementary row and column operations, then
/// gcd/lcm normalization of the diagonal.
fn naive_invariant_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj): (usize, usize)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / a[t][t];
            for j in t..cols {
                a[i][j] -= q * a[t][j];
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / a[t][t];
            for row in a.iter_mut().skip(t) {
                row[j] -= q * row[t];
            }
            clean &= a[t][j] == 0;
        }
        if clean {
            diag.push(a[t][t].abs());
            t += 1;
        }
    }
    let n = diag.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = gcd(diag[i], diag[j]);
            let l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| *x).collect()).collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as ratios of determinantal divisors.
fn determinantal_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn to_sparse(m: &[Vec<i64>]) -> SparseIntMatrix {
    SparseIntMatrix::from_dense(&IntMatrix::from_rows(m).unwrap())
}

fn big_diag(f: &[i128]) -> Vec<BigInt> {
    f.iter().map(|&x| BigInt::from(x)).collect()
}

fn matrix_strategy(max: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (0..=max, 0..=max).prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(-range..=range, c), r))
}

#[test]
fn oracles_agree_on_known_example() {
    let m = vec![vec![2, 4], vec![6, 8]];
    assert_eq!(naive_invariant_factors(&m), vec![2, 4]);
    assert_eq!(determinantal_factors(&m), vec![2, 4]);
    assert_eq!(snf(&to_sparse(&m)).diagonal(), big_diag(&[2, 4]));
}

#[test]
fn seeded_matrices_match_naive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..300 {
        let r = rng.gen_range(0..=6);
        let c = rng.gen_range(0..=6);
        let m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = if r == 0 { vec![] } else { m };
        assert_eq!(snf(&to_sparse(&m)).diagonal(), big_diag(&naive_invariant_factors(&m)), "{m:?}");
    }
}

proptest! {
    #[test]
    fn snf_matches_determinantal_divisors(m in matrix_strategy(5, 9)) {
        let f = snf(&to_sparse(&m));
        prop_assert_eq!(f.diagonal(), big_diag(&determinantal_factors(&m)));
    }

    #[test]
    fn snf_output_is_a_divisibility_chain(m in matrix_strategy(6, 9)) {
        let d = snf(&to_sparse(&m)).diagonal();
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(d.iter().all(|x| *x >= BigInt::one()));
    }

    #[test]
    fn transforms_are_unimodular_and_exact(m in matrix_strategy(6, 9)) {
        let dense = IntMatrix::from_rows(&m).unwrap();
        let dec = snf_with_transforms(&dense);
        prop_assert!(dec.left.is_unimodular());
        prop_assert!(dec.right.is_unimodular());
        prop_assert_eq!(dec.left.mul(&dense).unwrap().mul(&dec.right).unwrap(), dec.diag.clone());
        prop_assert_eq!(dec.left_inv.mul(&dec.left).unwrap(), IntMatrix::identity(dense.rows()));
        for i in 0..dec.diag.rows() {
            for j in 0..dec.diag.cols() {
                let v = dec.diag.get(i, j);
                prop_assert!(i == j || v.is_zero());
            }
        }
        prop_assert_eq!(dec.form.diagonal(), snf(&to_sparse(&m)).diagonal());
    }

    #[test]
    fn snf_is_deterministic(m in matrix_strategy(6, 9)) {
        let s = to_sparse(&m);
        prop_assert_eq!(snf(&s), snf(&s.clone()));
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in matrix_strategy(5, 4)) {
        let s = to_sparse(&m);
        let k = kernel_basis(&s);
        prop_assert_eq!(k.len(), s.cols() - snf(&s).rank());
        for v in &k {
            prop_assert!(s.mul_vec(v).is_empty());
        }
    }

    #[test]
    fn text_format_round_trips(m in matrix_strategy(6, 9)) {
        let s = to_sparse(&m);
        prop_assert_eq!(SparseIntMatrix::from_text(&s.to_text()).unwrap(), s);
    }
}

#[test]
fn homology_examples() {
    let z = |r, c| SparseIntMatrix::zeros(r, c);
    assert_eq!(homology_at(&z(3, 0), &z(0, 3)).unwrap(), FgAbGroup::free(3));
    let two = SparseIntMatrix::from_triplets(1, 1, [(0, 0, 2)]).unwrap();
    assert_eq!(homology_at(&two, &z(0, 1)).unwrap(), FgAbGroup::cyclic(2));

    // Hollow triangle, reduced: Z <- Z^3 <- Z^3 <- 0.
    let eps = SparseIntMatrix::from_triplets(1, 3, [(0, 0, 1), (0, 1, 1), (0, 2, 1)]).unwrap();
    let d1 = SparseIntMatrix::from_triplets(3, 3, [(0, 0, -1), (1, 0, 1), (0, 1, -1), (2, 1, 1), (1, 2, -1), (2, 2, 1)])
        .unwrap();
    assert_eq!(homology_at(&z(3, 0), &d1).unwrap(), FgAbGroup::free(1));
    assert_eq!(homology_at(&d1, &eps).unwrap(), FgAbGroup::zero());
    assert_eq!(homology_at(&eps, &z(0, 1)).unwrap(), FgAbGroup::zero());
}

#[test]
fn homology_preconditions_are_reported() {
    let one = SparseIntMatrix::identity(1);
    assert!(matches!(homology_at(&one, &one), Err(AlgebraError::NonzeroComposition { .. })));
    assert!(matches!(
        homology_at(&SparseIntMatrix::zeros(2, 1), &SparseIntMatrix::zeros(1, 3)),
        Err(AlgebraError::DimensionMismatch(_))
    ));
}

fn e(i: usize, x: i64) -> SparseVec {
    vec![(i, BigInt::from(x))]
}

#[test]
fn subquotient_examples() {
    let id2 = SparseIntMatrix::identity(2);
    assert_eq!(subquotient(2, &id2, &SparseIntMatrix::zeros(2, 0)).unwrap(), FgAbGroup::free(2));
    let u = SparseIntMatrix::from_columns(1, vec![e(0, 1)]).unwrap();
    let v = SparseIntMatrix::from_columns(1, vec![e(0, 3)]).unwrap();
    assert_eq!(subquotient(1, &u, &v).unwrap(), FgAbGroup::cyclic(3));
    match subquotient(1, &v, &u) {
        Err(AlgebraError::NotContained { witness }) => assert_eq!(witness, e(0, 1)),
        other => panic!("expected containment failure, got {other:?}"),
    }
}

/// `|Z^4 / C Z^4|` by counting lattice points of `C Z^4` in the box
/// `[0, D)^4`, where `D = |det C|` so that `D Z^4 <= C Z^4`.
fn brute_force_index(c: &[Vec<i128>]) -> u64 {
    let d = det(c).abs();
    let n = c.len();
    // x is in C Z^n iff adj(C) x is divisible by det(C).
    let adj: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i128>> = c
                        .iter()
                        .enumerate()
                        .filter(|(r, _)| *r != j)
                        .map(|(_, row)| row.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, x)| *x).collect())
                        .collect();
                    if (i + j) % 2 == 0 { det(&minor) } else { -det(&minor) }
                })
                .collect()
        })
        .collect();
    let mut hits = 0u64;
    let total = (d as u64).pow(n as u32);
    for idx in 0..total {
        let mut x = vec![0i128; n];
        let mut k = idx;
        for xi in x.iter_mut() {
            *xi = (k % d as u64) as i128;
            k /= d as u64;
        }
        if adj.iter().all(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<i128>() % d == 0) {
            hits += 1;
        }
    }
    total / hits
}

#[test]
fn random_lattices_modulo_twice_themselves() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 25 {
        let cols: Vec<Vec<i64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let u = SparseIntMatrix::from_dense(&IntMatrix::from_rows(&cols).unwrap().transpose());
        let r = snf(&u).rank();
        let v = u.scale(&BigInt::from(2));
        let g = subquotient(4, &u, &v).unwrap();
        assert_eq!(g, FgAbGroup::new(0, std::iter::repeat_n(BigInt::from(2), r)));
        checked += 1;
    }
}

#[test]
fn random_full_rank_quotients_match_coset_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 20 {
        let c: Vec<Vec<i128>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let d = det(&c).abs();
        if d == 0 || d > 12 {
            continue;
        }
        let rows: Vec<Vec<i64>> = c.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        let v = to_sparse(&rows);
        let g = subquotient(4, &SparseIntMatrix::identity(4), &v).unwrap();
        assert_eq!(g.free_rank(), 0);
        assert_eq!(g.torsion_order(), BigInt::from(brute_force_index(&c)));
        checked += 1;
    }
}
