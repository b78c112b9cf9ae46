use oppo_core::geometry::{
    building_a, building_c, enumerate_subspaces, opposition_complex, Building, Caps, FiniteField, HermitianForm,
    OppositionCheck, Subspace,
};
use oppo_core::simplicial::reduced_homology;
use proptest::prelude::*;

/// Chambers of the flag complex of F_q^n: product of [i]_q over i <= n.
fn flag_count(n: usize, q: usize) -> usize {
    (1..=n).map(|i| (0..i).map(|j| q.pow(j as u32)).sum::<usize>()).product()
}

#[test]
fn subspace_counts_match_gaussian_binomials() {
    assert_eq!(enumerate_subspaces(3, 2, 1).unwrap().len(), 7);
    assert_eq!(enumerate_subspaces(4, 2, 2).unwrap().len(), 35);
    assert_eq!(enumerate_subspaces(4, 3, 2).unwrap().len(), 130);
    assert!(enumerate_subspaces(3, 5, 1).is_err());
    assert!(enumerate_subspaces(9, 2, 1).is_err());
}

#[test]
fn type_a_counts() {
    let b = building_a(3, 2).unwrap();
    assert_eq!(b.vertex_count(), 14);
    assert_eq!(b.chambers().len(), flag_count(3, 2));
    let b = building_a(3, 3).unwrap();
    assert_eq!(b.vertex_count(), 26);
    assert_eq!(b.chambers().len(), 52);
    let b = building_a(4, 2).unwrap();
    assert_eq!(b.vertex_count(), 65);
    assert_eq!(b.chambers().len(), 315);
}

#[test]
fn thickness_is_q_plus_one() {
    for (n, q) in [(3, 2), (3, 3), (3, 4), (4, 2)] {
        let b = building_a(n, q).unwrap();
        assert!(b.thickness().values().all(|&r| r == (q + 1, q + 1)), "A n={n} q={q}");
    }
    let f = FiniteField::new(2).unwrap();
    let b = building_c(&HermitianForm::symplectic(&f, 2).unwrap()).unwrap();
    assert!(b.thickness().values().all(|&r| r == (3, 3)));
    let f3 = FiniteField::new(3).unwrap();
    let b = building_c(&HermitianForm::split_orthogonal(&f3, 2).unwrap()).unwrap();
    // Split orthogonal: panels of one type are thin.
    let t = b.thickness();
    assert!(t.values().any(|&r| r == (2, 2)));
    assert!(t.values().any(|&r| r == (4, 4)));
}

#[test]
fn opposite_chambers_per_chamber() {
    for (n, q, expect) in [(3, 2, 8), (3, 3, 27), (4, 2, 64)] {
        let b = building_a(n, q).unwrap();
        let chambers = b.chambers();
        for c in chambers.iter().step_by(7) {
            let k = chambers.iter().filter(|d| b.is_opposite(c, d)).count();
            assert_eq!(k, expect);
        }
    }
}

#[test]
fn opposition_complex_of_plane_over_f2() {
    let b = building_a(3, 2).unwrap();
    let o = opposition_complex(&b).unwrap();
    assert_eq!(o.complex().count(0), 56);
    assert_eq!(o.complex().count(1), 168);
    let h = reduced_homology(o.complex());
    assert!(h.is_free_concentrated_in(1));
    assert_eq!(h.degree(1).free_rank(), 113);
    assert!(o.matches_definition(&b));
}

#[test]
fn opposition_complex_of_symplectic_square() {
    let f = FiniteField::new(2).unwrap();
    let b = building_c(&HermitianForm::symplectic(&f, 2).unwrap()).unwrap();
    assert_eq!(b.vertex_count(), 30);
    assert_eq!(b.chambers().len(), 45);
    let o = opposition_complex(&b).unwrap();
    assert_eq!(o.complex().count(0), 240);
    assert_eq!(o.complex().count(1), 720);
    let h = reduced_homology(o.complex());
    assert!(h.is_free_concentrated_in(1));
    assert_eq!(h.degree(1).free_rank(), 481);
    assert!(o.matches_definition(&b));
}

#[test]
fn opposition_complex_of_three_space() {
    let b = building_a(4, 2).unwrap();
    let o = opposition_complex(&b).unwrap();
    assert_eq!(o.complex().count(0), 800);
    assert_eq!(o.complex().count(2), 20160);
}

#[test]
fn standard_apartment_is_coxeter_complex() {
    let f2 = FiniteField::new(2).unwrap();
    let f3 = FiniteField::new(3).unwrap();
    let buildings: Vec<Building> = vec![
        building_a(3, 2).unwrap(),
        building_a(4, 2).unwrap(),
        building_c(&HermitianForm::symplectic(&f2, 2).unwrap()).unwrap(),
        building_c(&HermitianForm::symplectic(&f3, 2).unwrap()).unwrap(),
        building_c(&HermitianForm::split_orthogonal(&f3, 2).unwrap()).unwrap(),
    ];
    for b in &buildings {
        assert!(b.apartment_matches_coxeter(), "{:?} rank {}", b.ty(), b.rank());
    }
}

#[test]
fn common_apartments_are_frames() {
    let b = building_a(3, 2).unwrap();
    let adj = b.chamber_adjacency();
    let all: Vec<Vec<u32>> = b.complex().all_simplices().filter(|s| !s.is_empty()).cloned().collect();
    for s in all.iter().step_by(3) {
        for t in all.iter().step_by(5) {
            let apt = b.common_apartment(&adj, s, t).expect("any two simplices share an apartment");
            assert_eq!(apt.len(), 6);
            assert!(b.frame_of_apartment(&apt).is_some());
        }
    }
    let f = FiniteField::new(2).unwrap();
    let b = building_c(&HermitianForm::symplectic(&f, 2).unwrap()).unwrap();
    let adj = b.chamber_adjacency();
    let c = &b.chambers()[0];
    for d in b.chambers().iter().filter(|d| b.is_opposite(c, d)) {
        let ci = 0;
        let di = b.chambers().iter().position(|x| x == d).unwrap();
        let apt = b.apartment_through(&adj, ci, di);
        assert_eq!(apt.len(), 8);
        assert!(b.frame_of_apartment(&apt).is_some());
    }
}

#[test]
fn opposition_type_mismatch_is_diagnosed() {
    let b = building_a(3, 2).unwrap();
    let p = b.vertex_of(&Subspace::coordinate(3, &[0])).unwrap();
    let q = b.vertex_of(&Subspace::coordinate(3, &[1])).unwrap();
    let l = b.vertex_of(&Subspace::coordinate(3, &[1, 2])).unwrap();
    assert!(matches!(b.check_opposite(&[p], &[q]), OppositionCheck::TypeMismatch(_)));
    assert_eq!(b.check_opposite(&[p], &[l]), OppositionCheck::Opposite);
    let l2 = b.vertex_of(&Subspace::coordinate(3, &[0, 2])).unwrap();
    assert_eq!(b.check_opposite(&[p], &[l2]), OppositionCheck::NotOpposite);
}

#[test]
fn caps_reject_large_inputs() {
    assert!(building_a(3, 5).is_err());
    let f = FiniteField::new(4).unwrap();
    assert!(Building::type_a(&f, 8, &Caps::default()).is_err());
}

#[test]
fn sidecar_round_trip() {
    let b = building_a(3, 3).unwrap();
    let parsed = Building::parse_sidecar(&b.sidecar()).unwrap();
    assert_eq!(parsed.len(), b.vertex_count());
    for (v, s) in parsed {
        assert_eq!(b.subspace(v), &s);
    }
}

proptest! {
    #[test]
    fn opposition_is_symmetric_on_vertices(i in 0u32..26, j in 0u32..26) {
        let b = building_a(3, 3).unwrap();
        prop_assert_eq!(b.is_vertex_opposite(i, j), b.is_vertex_opposite(j, i));
    }

    #[test]
    fn symplectic_opposition_is_symmetric(i in 0u32..30, j in 0u32..30) {
        let f = FiniteField::new(2).unwrap();
        let b = building_c(&HermitianForm::symplectic(&f, 2).unwrap()).unwrap();
        prop_assert_eq!(b.is_vertex_opposite(i, j), b.is_vertex_opposite(j, i));
    }
}
