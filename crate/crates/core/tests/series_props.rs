mod common;

use common::pool;
use hecke_emb::arith::gcd_u64;
use hecke_emb::emb::Embedding;
use hecke_emb::fixtures::{embeddings14_3, order14_3, qexp};
use hecke_emb::geo::{IntKind, Intersector};
use hecke_emb::hecke::{hecke_t, EmbSum};
use hecke_emb::series::{coprime_mask, intersection_series, match_series, Match};
use proptest::prelude::*;
use proptest::sample::Index;

fn pair(o: usize) -> impl Strategy<Value = (Embedding, Embedding)> {
    (any::<Index>(), any::<Index>()).prop_map(move |(i, j)| {
        let es: Vec<&Embedding> = pool()[o].1.iter().filter(|e| e.d.get() <= 40).collect();
        (es[i.index(es.len())].clone(), es[j.index(es.len())].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coefficients_compose((a, b) in pair(0), m in 2u64..=10, n in 2u64..=10) {
        prop_assume!(gcd_u64(m, n) == 1);
        let mut it = Intersector::new(a.order.clone());
        let (x, y) = (EmbSum::single(&a), EmbSum::single(&b));
        let direct = it.pairing(&x, &hecke_t(m * n, &y), IntKind::Signed).unwrap();
        let composed = it.pairing(&x, &hecke_t(m, &hecke_t(n, &y)), IntKind::Signed).unwrap();
        prop_assert_eq!(direct, composed);
    }

    #[test]
    fn level_three_series_are_masked((a, b) in pair(1)) {
        let mut it = Intersector::new(a.order.clone());
        let s = intersection_series(&mut it, &EmbSum::single(&a), &EmbSum::single(&b), IntKind::Signed, 30).unwrap();
        for n in 1..=30 {
            prop_assert_eq!(s.asserted(n), n % 3 != 0);
        }
    }
}

#[test]
fn level_three_series_lie_in_the_newform_span() {
    let o = order14_3();
    let e = embeddings14_3(&o);
    let basis = [qexp("14.2.a.a").unwrap(), qexp("42.2.a.a").unwrap()];
    let mask = coprime_mask(40, 3);
    let mut it = Intersector::new(o.clone());
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let s = intersection_series(
            &mut it,
            &EmbSum::single(&e[i]),
            &EmbSum::single(&e[j]),
            IntKind::Signed,
            40,
        )
        .unwrap();
        let m = match_series(&s, &basis, &mask);
        assert!(matches!(m, Match::Unique(_)), "pair ({i}, {j}): {m:?}");
    }
}
