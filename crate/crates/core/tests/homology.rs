use std::sync::Arc;

use num_bigint::BigInt;
use oppo_core::algebra::{FgAbGroup, SparseIntMatrix};
use oppo_core::group::FiniteGroup;
use oppo_core::homology::{
    bar_complex, group_homology, relative_group_homology, BarResolution, GModule, HomologyError, SubPair,
    DEFAULT_BUDGET,
};
use proptest::prelude::*;

fn g(s: &str) -> FgAbGroup {
    FgAbGroup::parse(s).unwrap()
}

/// Oracle: order of the abelianization, `|G| / |[G, G]|`.
fn abelianization_order(grp: &FiniteGroup) -> usize {
    let comms: Vec<u32> = grp
        .elements()
        .flat_map(|a| grp.elements().map(move |b| (a, b)))
        .map(|(a, b)| grp.mul(grp.mul(grp.inv(a), grp.inv(b)), grp.mul(a, b)))
        .collect();
    grp.order() / grp.generated_by(&comms).len()
}

fn sign_module(c2: Arc<FiniteGroup>) -> GModule {
    let action = c2
        .elements()
        .map(|x| {
            let s = if x == c2.identity() { 1 } else { -1 };
            SparseIntMatrix::from_triplets(1, 1, [(0, 0, s as i64)]).unwrap()
        })
        .collect();
    GModule::new(c2, 1, action).unwrap()
}

#[test]
fn bar_complex_of_c2_has_alternating_boundaries() {
    let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let c = bar_complex(&GModule::trivial(c2, 1), 3, None, DEFAULT_BUDGET).unwrap();
    assert_eq!(c.ranks(), &[1, 2, 4, 8]);
    let h: Vec<String> = (0..3).map(|k| c.homology_in(k).to_string()).collect();
    assert_eq!(h, ["Z", "Z/2", "0"]);
}

#[test]
fn cyclic_group_homology() {
    let c6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
    let h = group_homology(&GModule::trivial(c6, 1), 4, DEFAULT_BUDGET).unwrap();
    assert_eq!(h, vec![g("Z"), g("Z/6"), g("0"), g("Z/6")]);
}

#[test]
fn klein_four_has_schur_multiplier_z2() {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let v4 = Arc::new(FiniteGroup::direct_product(&c2, &c2).unwrap());
    let h = group_homology(&GModule::trivial(v4, 1), 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(h, vec![g("Z"), g("Z/2 ⊕ Z/2"), g("Z/2")]);
}

#[test]
fn s3_first_homology_is_abelianization() {
    let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let h = group_homology(&GModule::trivial(s3.clone(), 1), 4, DEFAULT_BUDGET).unwrap();
    assert_eq!(h[1].torsion_order(), BigInt::from(abelianization_order(&s3)));
    assert_eq!(h, vec![g("Z"), g("Z/2"), g("0"), g("Z/6")]);
}

#[test]
fn sign_twisted_coefficients() {
    let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let h = group_homology(&sign_module(c2), 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(h, vec![g("Z/2"), g("0"), g("Z/2")]);
}

#[test]
fn relative_homology_of_c6_over_c2() {
    let c6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
    let sub = c6.generated_by(&[3]);
    let h = relative_group_homology(&GModule::trivial(c6, 1), &sub, 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(h, vec![g("0"), g("Z/3"), g("0")]);
}

#[test]
fn relative_homology_of_s3_over_transposition() {
    // The transposition subgroup carries the 2-part of every homology group,
    // so only the 3-part in degree 3 survives in the relative groups.
    let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let t = s3.elements().find(|&x| x != s3.identity() && s3.mul(x, x) == s3.identity()).unwrap();
    let sub = s3.generated_by(&[t]);
    let h = relative_group_homology(&GModule::trivial(s3, 1), &sub, 4, DEFAULT_BUDGET).unwrap();
    assert_eq!(h, vec![g("0"), g("0"), g("0"), g("Z/3")]);
}

#[test]
fn relative_homology_of_whole_group_vanishes() {
    let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let all: Vec<u32> = s3.elements().collect();
    let h = relative_group_homology(&GModule::trivial(s3, 2), &all, 3, DEFAULT_BUDGET).unwrap();
    assert!(h.iter().all(FgAbGroup::is_zero));
}

#[test]
fn budget_is_enforced() {
    let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
    // Degree 5 needs the generator columns [s|g_2|..|g_6]: 3 * 6^5 of them.
    let err = group_homology(&GModule::trivial(s3, 1), 6, 1000).unwrap_err();
    assert_eq!(err, HomologyError::Budget { needed: 3 * 6u128.pow(5), budget: 1000 });
}

#[test]
fn non_stable_sub_basis_is_rejected() {
    let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let regular = GModule::permutation(c2, &[0, 1], &[0, 1]);
    let all = [0u32, 1];
    let sub = SubPair { elements: &all, basis: &[0] };
    assert!(bar_complex(&regular, 2, Some(&sub), DEFAULT_BUDGET).is_err());
}

#[test]
fn standard_resolution_is_exact() {
    let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let f = BarResolution::new(s3, 2, DEFAULT_BUDGET).unwrap();
    assert_eq!(f.rank(2), 216);
    assert!(f.is_exact());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cyclic_homology_is_periodic(n in 1usize..=7) {
        let cn = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let h = group_homology(&GModule::trivial(cn, 1), 4, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(&h[0], &g("Z"));
        prop_assert_eq!(&h[1], &FgAbGroup::cyclic(n as u64));
        prop_assert!(h[2].is_zero());
        prop_assert_eq!(&h[3], &FgAbGroup::cyclic(n as u64));
    }

    #[test]
    fn resolution_of_cyclic_group_is_exact(n in 1usize..=5) {
        let cn = Arc::new(FiniteGroup::cyclic(n).unwrap());
        prop_assert!(BarResolution::new(cn, 3, DEFAULT_BUDGET).unwrap().is_exact());
    }

    #[test]
    fn free_coefficients_multiply_homology(r in 1usize..=3) {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let one = group_homology(&GModule::trivial(s3.clone(), 1), 3, DEFAULT_BUDGET).unwrap();
        let many = group_homology(&GModule::trivial(s3, r), 3, DEFAULT_BUDGET).unwrap();
        for (a, b) in one.iter().zip(&many) {
            prop_assert_eq!(&a.tensor_free(r), b);
        }
    }
}

#[test]
fn relative_complex_agrees_with_cone_of_inclusion() {
    use oppo_core::homology::bar_inclusion;
    let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let t = s3.elements().find(|&x| x != s3.identity() && s3.mul(x, x) == s3.identity()).unwrap();
    let sub = s3.generated_by(&[t]);
    let m = GModule::trivial(s3, 1);
    let pair = SubPair { elements: &sub, basis: &[0] };
    let quotient = bar_complex(&m, 4, Some(&pair), DEFAULT_BUDGET).unwrap();
    let cone = bar_inclusion(&m, &pair, 4, DEFAULT_BUDGET).unwrap().cone();
    for k in 0..4 {
        assert_eq!(quotient.homology_in(k), cone.homology_in(k), "degree {k}");
    }
}

#[test]
fn cone_of_identity_is_acyclic() {
    use oppo_core::homology::ChainMap;
    let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let c = bar_complex(&sign_module(c2), 3, None, DEFAULT_BUDGET).unwrap();
    let ids = c.ranks().iter().map(|&r| SparseIntMatrix::identity(r)).collect();
    let cone = ChainMap::new(c.clone(), c, ids).unwrap().cone();
    assert!(cone.homology().is_zero());
}

#[test]
fn non_chain_maps_are_rejected() {
    use oppo_core::homology::ChainMap;
    let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let c = bar_complex(&GModule::trivial(c2, 1), 2, None, DEFAULT_BUDGET).unwrap();
    let mut maps: Vec<SparseIntMatrix> = c.ranks().iter().map(|&r| SparseIntMatrix::identity(r)).collect();
    maps[1] = SparseIntMatrix::zeros(2, 2);
    assert!(matches!(ChainMap::new(c.clone(), c, maps), Err(HomologyError::ChainMap(_))));
}

/// The generator-column shortcut must agree with the full bar complex.
#[test]
fn generator_columns_span_the_boundary_image() {
    use oppo_core::homology::bar_homology;
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let groups = [
        Arc::new(s3.clone()),
        Arc::new(FiniteGroup::cyclic(4).unwrap()),
        Arc::new(FiniteGroup::direct_product(&c2, &c2).unwrap()),
        Arc::new(FiniteGroup::trivial()),
    ];
    for grp in groups {
        let sub = grp.generated_by(&grp.generating_set()[..1.min(grp.order() - 1)]);
        let (reps, coset_of) = grp.left_cosets(&sub).unwrap();
        let modules = [GModule::trivial(grp.clone(), 1), GModule::permutation(grp.clone(), &reps, &coset_of)];
        for m in &modules {
            let all: Vec<usize> = (0..m.rank()).collect();
            let pair = SubPair { elements: &sub, basis: &all };
            for rel in [None, Some(&pair)] {
                let full = bar_complex(m, 4, rel, DEFAULT_BUDGET).unwrap();
                for k in 0..3 {
                    let fast = bar_homology(m, k, rel, DEFAULT_BUDGET).unwrap();
                    assert_eq!(fast, full.homology_in(k as i64), "order {} degree {k}", grp.order());
                }
            }
        }
    }
}
