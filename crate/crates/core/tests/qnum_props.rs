use hecke_emb::qnum::{
    fundamental_unit, is_discriminant, kronecker, narrow_class_number, reduced_forms, tower_exponent, unit_power, Bqf,
    Discriminant,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn disc_in(lo: u64, hi: u64) -> impl Strategy<Value = Discriminant> {
    (lo..=hi).prop_filter_map("not a discriminant", |d| {
        if is_discriminant(d as i128) {
            Discriminant::new(d).ok()
        } else {
            None
        }
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_powers_solve_pell(d in disc_in(2, 2000), i in 1u32..8) {
        let u = fundamental_unit(d);
        let (t, v) = unit_power(&u, i);
        prop_assert_eq!(&t * &t - BigInt::from(d.get()) * &v * &v, BigInt::from(4));
    }

    #[test]
    fn tower_structure(d in disc_in(2, 500), p in prime()) {
        let e1 = tower_exponent(d, p, 1);
        let kr = kronecker(d.as_i128(), p);
        let bound = if kr == 0 { p } else { (p as i64 - kr as i64) as u64 };
        prop_assert_eq!(bound % e1, 0);
        let mut seen_p = false;
        for k in 2..=5 {
            let e = tower_exponent(d, p, k);
            prop_assert!(e == 1 || e == p);
            if seen_p {
                prop_assert_eq!(e, p);
            }
            seen_p |= e == p;
        }
    }

    #[test]
    fn class_number_ratio(d in disc_in(2, 150), p in prop::sample::select(vec![2u64, 3, 5])) {
        let big = Discriminant::new(d.get() * p * p).unwrap();
        let kr = kronecker(d.as_i128(), p) as i64;
        let lhs = narrow_class_number(big) * tower_exponent(d, p, 1);
        let rhs = narrow_class_number(d) * (p as i64 - kr) as u64;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_a_group_law(d in disc_in(5, 400), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let forms: Vec<Bqf> = reduced_forms(d).into_iter().filter(Bqf::is_primitive).collect();
        let pick = |n: usize| forms[n % forms.len()];
        let (f, g, h) = (pick(i), pick(j), pick(k));
        let one = Bqf::principal(d.as_i128());
        prop_assert!(f.compose(&one).equivalent(&f));
        prop_assert!(f.compose(&g).equivalent(&g.compose(&f)));
        prop_assert!(f.compose(&g).compose(&h).equivalent(&f.compose(&g.compose(&h))));
        prop_assert_eq!(f.compose(&g).disc(), d.as_i128());
    }
}
