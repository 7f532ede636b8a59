use std::sync::Arc;

use dgmod::catalog::by_name;
use dgmod::constructions::{
    alpha_map, boxtimes, boxtimes_morphisms, eta_tilde, gamma_tilde, hom_complex, tensor_algebras, tensor_modules_over, DGMorphism, HomComplex,
};
use dgmod::resolution::{semifree_resolution, tensor_resolutions, verify_semifree};
use dgmod::semifree::tensor_semifree;
use dgmod::{ChainMap, DGModule, Matrix, PrimeField};
use proptest::prelude::*;

type F = PrimeField;

const MODULES: [(&str, &str); 8] =
    [("T2", "R"), ("T2", "k"), ("T2", "omega"), ("S3", "R"), ("S3", "k"), ("S3", "omega"), ("K(T2)", "R"), ("K(T2)", "k")];

fn fp() -> F {
    PrimeField::new(101).unwrap()
}

fn module(i: usize) -> DGModule<F> {
    let (e, m) = MODULES[i % MODULES.len()];
    by_name(&fp(), e).unwrap().select(m).unwrap().clone()
}

/// Two modules over the same catalog algebra.
fn same_algebra_pair(i: usize, j: usize) -> (DGModule<F>, DGModule<F>) {
    let (e, _) = MODULES[i % MODULES.len()];
    let entry = by_name(&fp(), e).unwrap();
    let n = entry.modules.len();
    (entry.modules[i % n].module.clone(), entry.modules[j % n].module.clone())
}

/// Multiplication by a degree-zero basis element, or the augmentation of a short resolution.
fn morphism(m: &DGModule<F>, kind: usize) -> DGMorphism<F> {
    let a = m.algebra();
    let k = kind % (a.dim(0) + 1);
    if k < a.dim(0) {
        let map = ChainMap::from_fn(m.complex().clone(), m.complex().clone(), 0, |n| m.act(0, k, n).into_owned()).unwrap();
        DGMorphism::new(m.clone(), m.clone(), map).unwrap()
    } else {
        semifree_resolution(m, 2).unwrap().augmentation_morphism()
    }
}

/// `Hom(N, g)`: post-composition with a degree-zero morphism.
fn post(h: &HomComplex<F>, h2: &HomComplex<F>, g: &ChainMap<F>) -> ChainMap<F> {
    let f = fp();
    let n_src = h.source();
    ChainMap::from_fn(h.complex().clone(), h2.complex().clone(), 0, |n| {
        let cols = (0..h.complex().dim(n))
            .map(|j| {
                let e = vec![(j, dgmod::Field::one(&f))];
                let values = (0..n_src.rank()).map(|k| (k, g.component(n_src.degree(k) + n).mul_vec(&h.value(n, &e, k))));
                h2.from_values(n, values)
            })
            .collect();
        Matrix::from_columns(&f, h2.complex().dim(n), cols)
    })
    .unwrap()
}

fn same_components(a: &ChainMap<F>, b: &ChainMap<F>) -> bool {
    let lo = a.source().lo().min(b.source().lo());
    let hi = a.source().hi().max(b.source().hi());
    (lo..=hi).all(|n| a.component(n) == b.component(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn alpha_is_an_isomorphism(i in 0usize..8, j in 0usize..8) {
        let a = alpha_map(&module(i), &module(j)).unwrap();
        prop_assert!(a.verify_isomorphism("alpha").is_holds());
    }

    #[test]
    fn gamma_tilde_is_an_isomorphism(i in 0usize..8, j in 0usize..8, k in 0usize..8, l in 0usize..8) {
        let (x1, y1) = same_algebra_pair(i, j);
        let (x2, y2) = same_algebra_pair(k, l);
        let g = gamma_tilde(&x1, &y1, &x2, &y2).unwrap();
        prop_assert!(g.morphism.verify_isomorphism("gamma").is_holds());
    }

    #[test]
    fn eta_tilde_is_natural(i in 0usize..8, j in 0usize..8, g1 in 0usize..4, g2 in 0usize..4, d in 1i64..3) {
        let (m1, m2) = (module(i), module(j));
        let (u1, u2) = (morphism(&m1, g1), morphism(&m2, g2));
        let n1 = semifree_resolution(&m1, d).unwrap().semifree().clone();
        let n2 = semifree_resolution(&m2, d).unwrap().semifree().clone();
        prop_assert!(u1.linearity_defect().is_none() && u1.map.is_chain_map());
        let before = eta_tilde(&n1, &u1.source, &n2, &u2.source).unwrap();
        let after = eta_tilde(&n1, &u1.target, &n2, &u2.target).unwrap();
        prop_assert!(before.linearity_defect().is_none());
        let (h1, h1t) = (hom_complex(&n1, &u1.source).unwrap(), hom_complex(&n1, &u1.target).unwrap());
        let (h2, h2t) = (hom_complex(&n2, &u2.source).unwrap(), hom_complex(&n2, &u2.target).unwrap());
        let left = boxtimes(&post(&h1, &h1t, &u1.map), &post(&h2, &h2t, &u2.map)).unwrap().then(&after.map).unwrap();
        let a = Arc::new(tensor_algebras(m1.algebra(), m2.algebra()).unwrap());
        let (n, _) = tensor_semifree(a.clone(), &n1, &n2);
        let g = boxtimes_morphisms(a, &u1, &u2).unwrap();
        let (h, ht) = (hom_complex(&n, &g.source).unwrap(), hom_complex(&n, &g.target).unwrap());
        let right = before.map.then(&post(&h, &ht, &g.map)).unwrap();
        prop_assert!(same_components(&left, &right));
    }

    #[test]
    fn tensor_of_resolutions_is_semifree(i in 0usize..8, j in 0usize..8, d in 1i64..4) {
        let (m1, m2) = (module(i), module(j));
        let a = Arc::new(tensor_algebras(m1.algebra(), m2.algebra()).unwrap());
        let t = tensor_modules_over(a, &m1, &m2).unwrap();
        let (r1, r2) = (semifree_resolution(&m1, d).unwrap(), semifree_resolution(&m2, d).unwrap());
        let r = tensor_resolutions(&r1, &r2, &t, d).unwrap();
        let v = verify_semifree(&r);
        prop_assert!(v.is_holds(), "{:?}", v);
    }
}
