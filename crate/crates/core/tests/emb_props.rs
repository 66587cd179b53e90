mod common;

use common::pool;
use hecke_emb::arith::rat;
use hecke_emb::emb::{assoc_discriminant, conjugate, equivalent, make_embedding, Embedding};
use hecke_emb::quat::QuatElem;
use proptest::prelude::*;

fn pick() -> impl Strategy<Value = Embedding> {
    (0usize..2, any::<prop::sample::Index>()).prop_map(|(o, i)| {
        let es = &pool()[o].1;
        es[i.index(es.len())].clone()
    })
}

fn unit(phi: &Embedding, i: prop::sample::Index) -> QuatElem {
    let us = phi.order.short_units();
    phi.order.elem(&us[i.index(us.len())])
}

fn revalidated(e: &Embedding) -> bool {
    make_embedding(&e.order, &e.g)
        .map(|f| f.d == e.d && f.g == e.g)
        .unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equivalence_relation(phi in pick(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let a = conjugate(&phi, &unit(&phi, i)).unwrap();
        let b = conjugate(&a, &unit(&phi, j)).unwrap();
        prop_assert!(revalidated(&a) && revalidated(&b));
        prop_assert!(equivalent(&phi, &phi).unwrap());
        prop_assert!(equivalent(&phi, &a).unwrap() && equivalent(&a, &phi).unwrap());
        prop_assert!(equivalent(&a, &b).unwrap() && equivalent(&phi, &b).unwrap());
    }

    #[test]
    fn equivalence_is_symmetric_across_classes(x in pick(), y in pick()) {
        prop_assume!(x.order == y.order);
        prop_assert_eq!(equivalent(&x, &y).unwrap(), equivalent(&y, &x).unwrap());
    }

    #[test]
    fn conjugation_goes_back(phi in pick(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(phi.order.level % p != 0);
        for pi in phi.order.theta(p).unwrap() {
            let up = conjugate(&phi, &pi).unwrap();
            prop_assert!(revalidated(&up));
            let back = conjugate(&up, &pi.conj()).unwrap();
            prop_assert!(equivalent(&back, &phi).unwrap());
        }
    }

    #[test]
    fn assoc_discriminant_invariance(phi in pick(), i in any::<prop::sample::Index>(), lam in 1i64..=6) {
        let o = &phi.order;
        prop_assert_eq!(assoc_discriminant(o, &phi.g).unwrap(), phi.d);
        let scaled = phi.g.scale(&rat(lam));
        prop_assert_eq!(assoc_discriminant(o, &scaled).unwrap(), phi.d);
        let u = unit(&phi, i);
        let h = o.alg.mul(&o.alg.mul(&u, &phi.g), &u.conj());
        prop_assert_eq!(assoc_discriminant(o, &h).unwrap(), phi.d);
    }
}
