//! Property tests for structural invariants.

use num_traits::Zero;
use proptest::prelude::*;

use lie_poset::algebra::LieAlgebra;
use lie_poset::contact::{classify_h2, contact_form, verify_contact_form, Certificate, Classification};
use lie_poset::index::{index, index_formula_h2, is_frobenius_h2};
use lie_poset::linalg::Q;
use lie_poset::topology::{betti_numbers, order_complex};
use lie_poset::Poset;

/// Random naturally labeled posets from random generator sets.
fn poset(max_n: usize) -> impl Strategy<Value = Poset> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
            let gens: Vec<(usize, usize)> = pairs.zip(bits).filter(|(_, b)| *b).map(|(r, _)| r).collect();
            Poset::new(n, &gens).unwrap()
        })
    })
}

fn poset_h2(max_n: usize) -> impl Strategy<Value = Poset> {
    poset(max_n).prop_filter("height <= 2", |p| p.height() <= 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent(p in poset(8)) {
        prop_assert_eq!(Poset::new(p.n(), &p.relations()).unwrap(), p.clone());
        prop_assert_eq!(Poset::new(p.n(), p.covers()).unwrap(), p);
    }

    #[test]
    fn disjoint_sums_add(p in poset(5), q in poset(5)) {
        let s = p.disjoint_sum(&q);
        prop_assert_eq!(s.components().len(), p.components().len() + q.components().len());
        prop_assert_eq!(s.relation_count(), p.relation_count() + q.relation_count());
    }

    #[test]
    fn neighborhoods_are_complete(p in poset_h2(8)) {
        for i in p.extremal_data().interior {
            let nb = p.interior_neighborhood(i).unwrap();
            let ud = p.up_down(i);
            prop_assert_eq!(nb.shape, (ud.down, 1, ud.up));
            prop_assert_eq!(nb.poset, Poset::complete(&[ud.down, 1, ud.up]).unwrap());
        }
    }

    #[test]
    fn formula_matches_rank(p in poset_h2(7), seed in any::<u64>()) {
        prop_assume!(p.n() >= 2);
        let g = LieAlgebra::type_a(&p).unwrap();
        let formula = index_formula_h2(&p).unwrap();
        prop_assert_eq!(index(&g, 3, seed).index, formula);
        prop_assert_eq!(is_frobenius_h2(&p).unwrap(), formula == 0);
    }

    #[test]
    fn poset_algebras_are_lie_algebras(p in poset(5)) {
        prop_assume!(p.n() >= 2);
        let g = LieAlgebra::type_a(&p).unwrap();
        prop_assert!(g.check_jacobi().is_ok());
        prop_assert_eq!(g.dim(), p.n() - 1 + p.relation_count());
        // the center has dimension C - 1 and really is central
        let center = g.center();
        prop_assert_eq!(center.len(), p.components().len() - 1);
        for z in &center {
            for b in 0..g.dim() {
                let e: Vec<Q> = (0..g.dim()).map(|k| Q::from_integer(((k == b) as i64).into())).collect();
                prop_assert!(g.bracket(z, &e).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn contact_verdicts_have_forms(p in poset_h2(8), seed in any::<u64>()) {
        prop_assume!(p.n() >= 2);
        let class = classify_h2(&p).unwrap();
        let g = LieAlgebra::type_a(&p).unwrap();
        match contact_form(&p, seed).unwrap() {
            Some(phi) => {
                prop_assert!(class.is_contact());
                prop_assert!(verify_contact_form(&g, &phi).unwrap());
                prop_assert_eq!(index_formula_h2(&p).unwrap(), 1);
            }
            None => prop_assert!(!class.is_contact()),
        }
        if let Classification::Contact(Certificate::Sequence(seq)) = class {
            let replayed = seq.replay().unwrap().poset;
            prop_assert!(lie_poset::canon::are_isomorphic(&replayed, &p).unwrap());
        }
    }

    #[test]
    fn euler_characteristic_matches_betti(p in poset(6)) {
        let k = order_complex(&p);
        let b = betti_numbers(&k, false).unwrap();
        let alt: i64 = b.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        prop_assert_eq!(alt, k.euler_characteristic());
        prop_assert_eq!(b[0], p.components().len());
    }
}
