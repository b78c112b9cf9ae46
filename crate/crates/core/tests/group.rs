use std::sync::Arc;

use oppo_core::geometry::{building_a, building_c, FMatrix, FiniteField, HermitianForm};
use oppo_core::group::{
    apartment_transitivity_check, general_linear, generate_group, gl_order, isometry_group, orbit_sizes, special_linear,
    stability_pair, strong_transitivity_check, BuildingAction, FiniteGroup, GroupError, MatrixGroup, Series,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oracle: count invertible n×n matrices over F_q by brute force.
fn brute_force_gl_order(n: usize, q: usize) -> usize {
    let f = FiniteField::new(q).unwrap();
    let total = q.pow((n * n) as u32);
    (0..total)
        .filter(|&x| {
            let mut x = x;
            let mut m = FMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, (x % q) as u8);
                    x /= q;
                }
            }
            m.determinant(&f) != 0
        })
        .count()
}

#[test]
fn linear_group_orders() {
    let f2 = FiniteField::new(2).unwrap();
    let f3 = FiniteField::new(3).unwrap();
    let g = general_linear(&f2, 3).unwrap();
    assert_eq!(g.order(), 168);
    assert_eq!(g.order(), brute_force_gl_order(3, 2));
    assert_eq!(gl_order(3, 2), 168);
    assert_eq!(general_linear(&f3, 2).unwrap().order(), brute_force_gl_order(2, 3));
    assert_eq!(special_linear(&f3, 2).unwrap().order(), 24);
    assert!(g.is_closed());
    let trivial = generate_group(&f2, 3, &[], 10).unwrap();
    assert_eq!(trivial.order(), 1);
    assert!(matches!(general_linear(&FiniteField::new(3).unwrap(), 4), Err(GroupError::CapExceeded(_))));
}

#[test]
fn isometry_group_orders() {
    let f2 = FiniteField::new(2).unwrap();
    let f3 = FiniteField::new(3).unwrap();
    assert_eq!(isometry_group(&HermitianForm::symplectic(&f2, 2).unwrap()).unwrap().order(), 720);
    assert_eq!(isometry_group(&HermitianForm::symplectic(&f3, 1).unwrap()).unwrap().order(), 24);
    // |O^+_4(q)| = 2 q^2 (q^2 - 1)^2.
    assert_eq!(isometry_group(&HermitianForm::split_orthogonal(&f2, 2).unwrap()).unwrap().order(), 72);
    assert_eq!(isometry_group(&HermitianForm::split_orthogonal(&f3, 2).unwrap()).unwrap().order(), 1152);
    let sp = isometry_group(&HermitianForm::symplectic(&f2, 2).unwrap()).unwrap();
    assert!(sp.is_closed());
}

#[test]
fn strong_transitivity() {
    let f2 = FiniteField::new(2).unwrap();
    let b = building_a(3, 2).unwrap();
    let g = general_linear(&f2, 3).unwrap();
    assert!(strong_transitivity_check(&g, &b).unwrap());
    let trivial = generate_group(&f2, 3, &[], 1).unwrap();
    assert!(!strong_transitivity_check(&trivial, &b).unwrap());
    let (ok, apartments) = apartment_transitivity_check(&g, &b).unwrap();
    assert!(ok);
    assert_eq!(apartments, 28);
    let form = HermitianForm::symplectic(&f2, 2).unwrap();
    let sp = isometry_group(&form).unwrap();
    assert!(strong_transitivity_check(&sp, &building_c(&form).unwrap()).unwrap());
    // A Borel subgroup is not transitive on chambers.
    let upper = g.filter(|m| (0..3).all(|i| (0..i).all(|j| m.get(i, j) == 0))).unwrap();
    assert_eq!(upper.order(), 8);
    assert!(!strong_transitivity_check(&upper, &b).unwrap());
}

#[test]
fn orbit_stabilizer_on_buildings() {
    let f2 = FiniteField::new(2).unwrap();
    let b = building_a(3, 2).unwrap();
    let g = general_linear(&f2, 3).unwrap();
    let act = BuildingAction::new(&g, &b).unwrap();
    for v in 0..b.vertex_count() as u32 {
        assert_eq!(act.orbit(v).len() * act.stabilizer(&[v]).len(), g.order());
    }
    assert!(orbit_sizes(&act, &b).iter().all(|&(_, k)| k == 1));
}

fn assert_pair_invariants(series: Series, n: usize, q: usize) {
    let pair = stability_pair(series, n, q).unwrap();
    let g = pair.group().order();
    let o = pair.opposition().complex();
    for p in 1..=n + 1 {
        let t = pair.type_order()[p - 1];
        let same_type = o.vertices().into_iter().filter(|&v| o.type_of(v) == t).count();
        assert_eq!(g / pair.levi(p).len(), same_type, "{series} p={p}");
        assert_eq!(g % pair.levi(p).len(), 0);
        // One orbit per type on opposition-complex vertices.
        let orbit: std::collections::BTreeSet<u32> = (0..g as u32).map(|x| pair.act_on_pair(x, pair.v(p))).collect();
        assert_eq!(orbit.len(), same_type);
        assert!(pair.levi_prime(p).iter().all(|x| pair.levi(p).binary_search(x).is_ok()));
    }
    assert_eq!(pair.levi_prime(n + 1).len(), pair.subgroup().order());
}

#[test]
fn stability_pair_gl() {
    let pair = stability_pair(Series::GL, 1, 2).unwrap();
    assert_eq!(pair.group().order(), 168);
    assert_eq!(pair.subgroup().order(), 6);
    // |L_p| = |GL_p| |GL_{n+2-p}| and elements are block diagonal.
    for p in 1..=2 {
        assert_eq!(pair.levi(p).len() as u128, gl_order(p, 2) * gl_order(3 - p, 2));
        for &x in pair.levi(p) {
            let m = pair.element(x);
            assert!((0..3).all(|i| (0..3).all(|j| (i < p) == (j < p) || m.get(i, j) == 0)));
        }
    }
    // G' is the upper-left block.
    for m in pair.subgroup().elements() {
        assert_eq!(m.get(2, 2), 1);
        assert!((0..2).all(|i| m.get(i, 2) == 0 && m.get(2, i) == 0));
    }
    assert_pair_invariants(Series::GL, 1, 2);
    assert_pair_invariants(Series::GL, 1, 3);
}

#[test]
fn stability_pair_sl_semidirect() {
    let pair = stability_pair(Series::SL, 1, 3).unwrap();
    assert_eq!(pair.group().order(), 5616);
    // L'_1 = L_1 ∩ G' ≅ GL_1(F_3).
    assert_eq!(pair.levi_prime(1).len(), 2);
    assert_pair_invariants(Series::SL, 1, 3);
    let f = pair.group().field().clone();
    for p in 1..=2 {
        let l = pair.levi(p);
        let top = |m: &FMatrix| FMatrix::from_rows(&(0..p).map(|i| (0..p).map(|j| m.get(i, j)).collect()).collect::<Vec<_>>());
        let bottom_sizes = 3 - p;
        // Kernel: upper block is the identity, so the lower block lies in SL.
        let kernel: Vec<u32> = l.iter().copied().filter(|&x| top(pair.element(x)) == FMatrix::identity(p)).collect();
        assert_eq!(kernel.len() as u128, gl_order(bottom_sizes, 3) / 2);
        // Complement: diag(A, det(A)^{-1}, 1, ...).
        let complement: Vec<u32> = l
            .iter()
            .copied()
            .filter(|&x| {
                let m = pair.element(x);
                let d = f.inv(top(m).determinant(&f));
                (p..3).all(|i| (p..3).all(|j| m.get(i, j) == if i != j { 0 } else if i == p { d } else { 1 }))
            })
            .collect();
        assert_eq!(complement.len() as u128, gl_order(p, 3));
        assert_eq!(kernel.iter().filter(|x| complement.contains(x)).count(), 1);
        assert_eq!(kernel.len() * complement.len(), l.len());
        let module = pair.link_module(p).unwrap();
        for &x in &kernel {
            let i = module.levi().binary_search(&x).unwrap();
            assert_eq!(*module.action(i), oppo_core::algebra::SparseIntMatrix::identity(module.rank()));
        }
    }
}

#[test]
fn stability_pair_symplectic() {
    let pair = stability_pair(Series::Sp, 1, 2).unwrap();
    assert_eq!(pair.group().order(), 720);
    assert_eq!(pair.subgroup().order(), 6);
    // L_p ≅ GL_{n+2-p} × Sp(H_{p-1}).
    assert_eq!(pair.levi(1).len() as u128, gl_order(2, 2));
    assert_eq!(pair.levi(2).len() as u128, gl_order(1, 2) * 6);
    assert_pair_invariants(Series::Sp, 1, 2);
}

#[test]
fn stability_pair_orthogonal() {
    let pair = stability_pair(Series::SO, 1, 3).unwrap();
    assert_eq!(pair.group().order(), 1152);
    // Diagonal scalars s, s^{-1} on e_{-2}, e_2 lie in L_2.
    let f = pair.group().field().clone();
    for s in f.units() {
        let d = FMatrix::diagonal(&[s, 1, 1, f.inv(s)]);
        let x = pair.group().index_of(&d).unwrap();
        assert!(pair.levi(2).contains(&x));
    }
    assert_pair_invariants(Series::SO, 1, 3);
    assert_pair_invariants(Series::SO, 1, 2);
}

#[test]
fn unitary_over_f4_exceeds_caps() {
    assert!(stability_pair(Series::U, 1, 4).is_err());
    assert!(stability_pair(Series::U, 1, 2).is_err());
}

#[test]
fn link_modules_are_modules() {
    let pair = stability_pair(Series::GL, 1, 2).unwrap();
    let m1 = pair.link_module(1).unwrap();
    assert_eq!(m1.rank(), 1);
    assert!((0..m1.levi().len()).all(|i| *m1.action(i) == oppo_core::algebra::SparseIntMatrix::identity(1)));
    let m2 = pair.link_module(2).unwrap();
    assert_eq!(m2.rank(), 5);
    let table = pair.cayley().unwrap();
    let (levi, _) = table.subgroup(m2.levi()).unwrap();
    let module = m2.gmodule(Arc::new(levi));
    module.check(0, 20).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..20 {
        let a = rng.gen_range(0..module.group().order() as u32);
        let b = rng.gen_range(0..module.group().order() as u32);
        let ab = module.action(a).mul(module.action(b)).unwrap();
        assert_eq!(&ab, module.action(module.group().mul(a, b)));
        let inv = module.action(a).mul(module.action(module.group().inv(a))).unwrap();
        assert!(inv == oppo_core::algebra::SparseIntMatrix::identity(5));
    }
}

#[test]
fn lower_right_block_acts_trivially() {
    // GL, n = 2: for p = 2 the GL_{n+2-p} factor of L_p fixes M_p.
    let pair = stability_pair(Series::GL, 2, 2).unwrap();
    let p = 2;
    let module = pair.link_module(p).unwrap();
    assert!(module.rank() > 0);
    for (i, &x) in module.levi().iter().enumerate() {
        let m = pair.element(x);
        let upper_identity = (0..p).all(|a| (0..p).all(|b| m.get(a, b) == u8::from(a == b)));
        if upper_identity {
            assert_eq!(*module.action(i), oppo_core::algebra::SparseIntMatrix::identity(module.rank()));
        }
    }
}

#[test]
fn finite_group_from_matrices() {
    let f2 = FiniteField::new(2).unwrap();
    let g: MatrixGroup = general_linear(&f2, 2).unwrap();
    let t = g.cayley().unwrap();
    assert_eq!(t.order(), 6);
    assert!(!t.is_abelian());
    let s3 = FiniteGroup::symmetric(3).unwrap();
    assert_eq!(s3.order(), t.order());
}
