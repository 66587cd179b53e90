mod common;

use common::pool;
use hecke_emb::emb::{conjugate, Embedding};
use hecke_emb::geo::{crossing_sign, geometric_sign, transversal, IntKind, Intersector};
use hecke_emb::hecke::{hecke_t, EmbSum};
use proptest::prelude::*;
use proptest::sample::Index;

fn pair(max_d: u64) -> impl Strategy<Value = (Embedding, Embedding)> {
    (0usize..2, any::<Index>(), any::<Index>()).prop_map(move |(o, i, j)| {
        let es: Vec<&Embedding> = pool()[o].1.iter().filter(|e| e.d.get() <= max_d).collect();
        (es[i.index(es.len())].clone(), es[j.index(es.len())].clone())
    })
}

fn by_unit(phi: &Embedding, i: Index) -> Embedding {
    let us = phi.order.short_units();
    conjugate(phi, &phi.order.elem(&us[i.index(us.len())])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swap_symmetry((a, b) in pair(60)) {
        let mut it = Intersector::new(a.order.clone());
        let s_ab = it.number(&a, &b, IntKind::Signed).unwrap();
        let s_ba = it.number(&b, &a, IntKind::Signed).unwrap();
        prop_assert_eq!(s_ab.clone(), -s_ba);
        let u_ab = it.number(&a, &b, IntKind::Unsigned).unwrap();
        let u_ba = it.number(&b, &a, IntKind::Unsigned).unwrap();
        prop_assert_eq!(u_ab.clone(), u_ba);
        prop_assert!(s_ab.clone() <= u_ab.clone() && -s_ab <= u_ab);
    }

    #[test]
    fn class_invariance((a, b) in pair(60), i in any::<Index>(), j in any::<Index>()) {
        let mut it = Intersector::new(a.order.clone());
        let (a2, b2) = (by_unit(&a, i), by_unit(&b, j));
        for kind in [IntKind::Unsigned, IntKind::Signed] {
            prop_assert_eq!(it.number(&a, &b, kind).unwrap(), it.number(&a2, &b2, kind).unwrap());
        }
    }

    #[test]
    fn exact_and_interval_transversality_agree((a, b) in pair(120), i in any::<Index>()) {
        let b = by_unit(&b, i);
        let t = transversal(&a, &b);
        let geo = geometric_sign(&a, &b);
        prop_assert_eq!(t, geo.is_some());
        if t {
            prop_assert_eq!(Some(crossing_sign(&a, &b).unwrap()), geo);
        }
    }

    #[test]
    fn hecke_equivariance((a, b) in pair(40), n in 2u64..=6) {
        prop_assume!(hecke_emb::arith::gcd_u64(n, a.order.level) == 1);
        let mut it = Intersector::new(a.order.clone());
        let (x, y) = (EmbSum::single(&a), EmbSum::single(&b));
        let (tx, ty) = (hecke_t(n, &x), hecke_t(n, &y));
        for kind in [IntKind::Unsigned, IntKind::Signed] {
            prop_assert_eq!(it.pairing(&tx, &y, kind).unwrap(), it.pairing(&x, &ty, kind).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn crossings_agree_with_interval_geometry((a, b) in pair(60)) {
        let mut it = Intersector::new(a.order.clone());
        for c in it.crossings(&a, &b).unwrap() {
            let w = Embedding::from_coords_unchecked(a.order.clone(), b.d, c.w);
            prop_assert_eq!(geometric_sign(&a, &w), Some(c.sign));
        }
    }
}
