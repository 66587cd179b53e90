mod common;

use common::pool;
use hecke_emb::arith::{gcd_u64, rat};
use hecke_emb::emb::{reduce_c, Embedding};
use hecke_emb::hecke::{conjugates, hecke_t, weight_w, EmbSum};
use hecke_emb::qnum::Discriminant;
use proptest::prelude::*;

fn pick(max_d: u64) -> impl Strategy<Value = Embedding> {
    (0usize..2, any::<prop::sample::Index>()).prop_map(move |(o, i)| {
        let es: Vec<&Embedding> = pool()[o].1.iter().filter(|e| e.d.get() <= max_d).collect();
        es[i.index(es.len())].clone()
    })
}

fn disc(e: &Embedding) -> u64 {
    e.order.alg.discriminant() * e.order.level
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hecke_operators_commute(phi in pick(60), m in 2u64..=10, n in 2u64..=10) {
        prop_assume!(gcd_u64(m * n, phi.order.level) == 1);
        let a = EmbSum::single(&phi);
        prop_assert_eq!(hecke_t(m, &hecke_t(n, &a)), hecke_t(n, &hecke_t(m, &a)));
    }

    #[test]
    fn hecke_is_multiplicative(phi in pick(60), m in 2u64..=10, n in 2u64..=10) {
        prop_assume!(gcd_u64(m, n) == 1 && gcd_u64(m * n, phi.order.level) == 1);
        let a = EmbSum::single(&phi);
        prop_assert_eq!(hecke_t(m * n, &a), hecke_t(m, &hecke_t(n, &a)));
    }

    #[test]
    fn hecke_prime_power_recursion(phi in pick(40), p in prop::sample::select(vec![2u64, 3, 5]), k in 1u32..=3) {
        prop_assume!(!disc(&phi).is_multiple_of(p));
        let a = EmbSum::single(&phi);
        let lhs = hecke_t(p, &hecke_t(p.pow(k), &a));
        let rhs = hecke_t(p.pow(k + 1), &a).add(&hecke_t(p.pow(k - 1), &a).scale(&rat(p as i64)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_duality(phi in pick(80), n in 2u64..=7) {
        let o = &phi.order;
        prop_assume!(gcd_u64(n, o.level) == 1);
        for (d, y) in conjugates(o, n, phi.coords()).unwrap() {
            let sigma = Embedding::from_coords_unchecked(o.clone(), Discriminant::new(d as u64).unwrap(), reduce_c(o, &y));
            let fwd = weight_w(o, n, &phi, &sigma).unwrap();
            let back = weight_w(o, n, &sigma, &phi).unwrap();
            prop_assert!(fwd > 0);
            prop_assert_eq!(fwd > 0, back > 0);
        }
    }
}
