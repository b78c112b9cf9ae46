use std::sync::Arc;

use oppo_core::algebra::{FgAbGroup, SparseIntMatrix};
use oppo_core::group::FiniteGroup;
use oppo_core::homology::{
    bar_tensor, random_double_complex, DoubleComplexZ, EquivariantComplex, GModule, Orientation, RandomGrid,
    SpectralSequence, DEFAULT_BUDGET,
};
use oppo_core::simplicial::ZChainComplex;
use proptest::prelude::*;

fn two_term(a: i64) -> ZChainComplex {
    let d = SparseIntMatrix::from_triplets(1, 1, [(0, 0, a)]).unwrap();
    ZChainComplex::new(0, vec![1, 1], vec![d]).unwrap()
}

fn g(s: &str) -> FgAbGroup {
    FgAbGroup::parse(s).unwrap()
}

/// `0 <- Z <- Z[C_2] <- Z_sign <- 0`, exact.
fn exact_c2_complex() -> EquivariantComplex {
    let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let regular = GModule::permutation(c2.clone(), &[0, 1], &[0, 1]);
    let sign_action = c2
        .elements()
        .map(|x| SparseIntMatrix::from_triplets(1, 1, [(0, 0, if x == 0 { 1i64 } else { -1 })]).unwrap())
        .collect();
    let sign = GModule::new(c2.clone(), 1, sign_action).unwrap();
    let aug = SparseIntMatrix::from_triplets(1, 2, [(0, 0, 1i64), (0, 1, 1)]).unwrap();
    let diff = SparseIntMatrix::from_triplets(2, 1, [(0, 0, 1i64), (1, 0, -1)]).unwrap();
    EquivariantComplex::new(vec![GModule::trivial(c2, 1), regular, sign], vec![aug, diff]).unwrap()
}

#[test]
fn single_column_collapses_at_first_page() {
    let column = ZChainComplex::new(0, vec![1, 1], vec![SparseIntMatrix::from_triplets(1, 1, [(0, 0, 4i64)]).unwrap()]).unwrap();
    let d = DoubleComplexZ::tensor(&two_term(0).shifted(0), &column).unwrap();
    // Columns 0 and 1 carry the same column complex; the zero horizontal map
    // keeps both alive.
    let ss = SpectralSequence::of_double_complex(&d, Orientation::Columns, 3).unwrap();
    assert_eq!(ss.page(1).unwrap().group(0, 0), g("Z/4"));
    assert_eq!(ss.limit().group(1, 0), g("Z/4"));
    assert_eq!(ss.stabilizes_at(), 1);
    assert!(ss.reconcile(&d).unwrap().ok());
}

#[test]
fn tensor_with_exact_factor_vanishes_from_second_page() {
    let d = DoubleComplexZ::tensor(&two_term(1), &two_term(2)).unwrap();
    let ss = SpectralSequence::of_double_complex(&d, Orientation::Columns, 3).unwrap();
    assert_eq!(ss.page(1).unwrap().group(0, 0), g("Z/2"));
    assert!(ss.page(2).unwrap().is_zero());
    let rows = SpectralSequence::of_double_complex(&d, Orientation::Rows, 3).unwrap();
    assert!(rows.page(1).unwrap().is_zero());
    assert!(ss.reconcile(&d).unwrap().total.iter().all(FgAbGroup::is_zero));
}

#[test]
fn nontrivial_differential_on_second_page() {
    // Staircase (2,0) -> (1,0) <- (1,1) -> (0,1) with unit maps: column 1
    // is acyclic, and d^2 links the survivors at (2,0) and (0,1).
    let one = || SparseIntMatrix::from_triplets(1, 1, [(0, 0, 1i64)]).unwrap();
    let z = |r, c| SparseIntMatrix::zeros(r, c);
    let ranks = vec![vec![0, 1], vec![1, 1], vec![1, 0]];
    let horizontal = vec![
        vec![z(0, 0), z(0, 1)],
        vec![z(0, 1), one()],
        vec![one(), z(1, 0)],
    ];
    let vertical = vec![vec![z(0, 0), z(0, 1)], vec![z(0, 1), one()], vec![z(0, 1), z(1, 0)]];
    let d = DoubleComplexZ::new(ranks, horizontal, vertical).unwrap();
    let ss = SpectralSequence::of_double_complex(&d, Orientation::Columns, 3).unwrap();
    assert_eq!(ss.page(2).unwrap().group(2, 0), g("Z"));
    assert_eq!(ss.page(2).unwrap().group(0, 1), g("Z"));
    assert!(ss.page(3).unwrap().is_zero());
    assert!(ss.reconcile(&d).unwrap().ok());
}

#[test]
fn sign_map_is_a_chain_isomorphism() {
    let d = DoubleComplexZ::tensor(&two_term(2), &two_term(3)).unwrap();
    let f = d.transpose_sign_map().unwrap();
    assert_eq!(f.source().homology(), f.target().homology());
    assert!(f.cone().homology().is_zero());
}

#[test]
fn transpose_comparison_for_c2_tensor_complex() {
    let n = exact_c2_complex();
    let d = bar_tensor(&n, 3, None, DEFAULT_BUDGET).unwrap();
    let f = d.transpose_sign_map().unwrap();
    let (a, b) = (f.source().homology(), f.target().homology());
    assert_eq!(a, b);
}

#[test]
fn exact_coefficients_give_vanishing_total_homology() {
    let n = exact_c2_complex();
    let d = bar_tensor(&n, 3, None, DEFAULT_BUDGET).unwrap();
    // Each column F_p ⊗_G N is exact because F_p is free.
    let cols = SpectralSequence::of_double_complex(&d, Orientation::Columns, 2).unwrap();
    assert!(cols.page(1).unwrap().is_zero());
    assert!(d.total().complex().homology().is_zero());
    // The row-first sequence starts from H_p(C_2; N_q) and must die out.
    let rows = SpectralSequence::of_double_complex(&d, Orientation::Rows, 4).unwrap();
    assert!(!rows.page(1).unwrap().is_zero());
    assert!(rows.limit().is_zero());
    assert!(rows.reconcile(&d).unwrap().ok());
}

#[test]
fn serializes_pages_as_text() {
    let d = DoubleComplexZ::tensor(&two_term(1), &two_term(2)).unwrap();
    let ss = SpectralSequence::of_double_complex(&d, Orientation::Columns, 2).unwrap();
    let text = ss.to_text();
    assert!(text.starts_with("spectral-sequence orientation=columns width=2 height=2"));
    assert!(text.contains("page 1\n  q=1: 0 | 0\n  q=0: Z/2 | Z/2\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn random_grids_reconcile_in_both_orientations(seed in 0u64..1_000_000) {
        let d = random_double_complex(seed, RandomGrid::default());
        prop_assert!(d.width() <= 4 && d.height() <= 4);
        let f = d.transpose_sign_map().unwrap();
        prop_assert_eq!(f.source().homology(), f.target().homology());
        for orientation in [Orientation::Columns, Orientation::Rows] {
            let ss = SpectralSequence::of_double_complex(&d, orientation, 2).unwrap();
            let rec = ss.reconcile(&d).unwrap();
            prop_assert!(rec.ok(), "seed {} {:?} mismatches {:?}", seed, orientation, rec.mismatches);
        }
    }
}

#[test]
fn random_grids_exercise_higher_differentials() {
    let mut late = 0;
    let mut torsion = 0;
    for seed in 0..50 {
        let d = random_double_complex(seed, RandomGrid::default());
        let ss = SpectralSequence::of_double_complex(&d, Orientation::Columns, 2).unwrap();
        if ss.stabilizes_at() > 2 {
            late += 1;
        }
        if ss.page(1).unwrap().spots.iter().flatten().any(|s| !s.group.is_free()) {
            torsion += 1;
        }
    }
    println!("late {late} torsion {torsion}");
    assert!(late >= 3 && torsion >= 10, "late {late}, torsion {torsion}");
}
