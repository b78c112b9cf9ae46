use oppo_core::algebra::FgAbGroup;
use oppo_core::group::{stability_pair, Series};
use oppo_core::homology::{check_ordering, stability_e1_page, EquivariantComplex, OppositionChains, DEFAULT_BUDGET};
use oppo_core::simplicial::TypeSet;

#[test]
fn gl3_f2_complex_ranks_and_exactness() {
    let pair = stability_pair(Series::GL, 1, 2).unwrap();
    let c = OppositionChains::new(&pair).unwrap();
    assert_eq!(c.ranks(), vec![1, 28, 140, 113]);
    assert_eq!(c.link_module(1).rank(), 1);
    assert_eq!(c.link_module(2).rank(), 5);
    // C_1 is free on the type-i_1 vertices of O.
    let o = pair.opposition().complex();
    let first = o.vertices().into_iter().filter(|&v| o.type_of(v) == c.order()[0]).count();
    assert_eq!(c.rank(1), first);
    assert!(c.chain_complex().homology().is_zero());
}

#[test]
fn boundaries_commute_with_every_element() {
    let pair = stability_pair(Series::GL, 1, 2).unwrap();
    let c = OppositionChains::new(&pair).unwrap();
    let e = c.equivariant();
    let boundaries = (1..e.len()).map(|k| e.boundary(k).clone()).collect();
    EquivariantComplex::new(e.modules().to_vec(), boundaries).unwrap();
}

#[test]
fn iota_is_an_injective_chain_map() {
    let pair = stability_pair(Series::GL, 1, 2).unwrap();
    let c = OppositionChains::new(&pair).unwrap();
    let iota = c.iota().unwrap();
    assert_eq!(iota.at(0).get(0, 0), num_bigint::BigInt::from(1));
    // C'_* is the complex of GL_2(F_2) on its own opposition complex.
    assert_eq!(iota.source().ranks(), &[1, 6, 5, 0]);
    assert!(iota.source().homology().is_zero());
    // Top map lands in the summand of the identity coset of L_{n+1}.
    assert_eq!(c.coset_reps(2)[0], 0);
    assert_eq!(c.sub_basis(2).unwrap(), &[0, 1, 2, 3, 4]);
    for k in 1..=2 {
        let m = iota.at(k);
        let mut rows: Vec<usize> = m.triplets().map(|(r, _, _)| r).collect();
        rows.dedup();
        assert_eq!(rows.len(), m.cols());
    }
}

#[test]
fn gl3_f2_stability_page() {
    let pair = stability_pair(Series::GL, 1, 2).unwrap();
    let c = OppositionChains::new(&pair).unwrap();
    let page = stability_e1_page(&pair, &c, 2, DEFAULT_BUDGET).unwrap();
    assert!(page.complete());
    assert!(page.passes_through(2));
    assert!(page.row_zero_vanishes());
    assert!(page.totals_vanish());
    let value = |p, q| page.spot(p, q).unwrap().value.clone().unwrap();
    assert_eq!(value(0, 1), FgAbGroup::zero());
    assert_eq!(value(0, 2), FgAbGroup::cyclic(4));
    assert_eq!(value(1, 1), FgAbGroup::cyclic(2));
    assert_eq!(page.spots.len(), 6);
}

#[test]
fn tight_budget_marks_spots_skipped() {
    let pair = stability_pair(Series::GL, 1, 2).unwrap();
    let c = OppositionChains::new(&pair).unwrap();
    let page = stability_e1_page(&pair, &c, 2, 20_000).unwrap();
    assert!(!page.complete());
    assert!(page.spot(0, 2).unwrap().skipped());
    assert!(page.passes_through(1));
}

#[test]
fn every_ordering_of_small_buildings() {
    for series in [Series::GL, Series::Sp] {
        let pair = stability_pair(series, 1, 2).unwrap();
        for order in TypeSet::new(pair.type_order().to_vec()).unwrap().orderings() {
            let check = check_ordering(&pair, order.labels()).unwrap();
            assert!(check.passes(), "{series} {:?}: {check:?}", order.labels());
        }
    }
}

#[test]
fn symplectic_iota() {
    let pair = stability_pair(Series::Sp, 1, 2).unwrap();
    let c = OppositionChains::new(&pair).unwrap();
    assert_eq!(c.ranks(), vec![1, 120, 600, 481]);
    let iota = c.iota().unwrap();
    assert!(iota.source().homology().is_zero());
}
