mod common;

use common::pool;
use hecke_emb::emb::Embedding;
use hecke_emb::hecke::weight_w;
use hecke_emb::pgraph::build_graph;
use hecke_emb::qnum::{is_p_fundamental, kronecker, tower_exponent};
use proptest::prelude::*;

fn pick() -> impl Strategy<Value = Embedding> {
    (0usize..2, any::<prop::sample::Index>()).prop_map(|(o, i)| {
        let es: Vec<&Embedding> = pool()[o].1.iter().filter(|e| e.d.get() <= 60).collect();
        es[i.index(es.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn level_sizes_follow_the_tower(phi in pick(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let o = &phi.order;
        prop_assume!((o.alg.discriminant() * o.level) % p != 0 && is_p_fundamental(phi.d, p));
        let g = build_graph(&phi, p, 3).unwrap();
        prop_assert!(g.validate_shape().is_empty());
        let kr = kronecker(phi.d.as_i128(), p);
        let mut expect = g.level_count(0) as u64 * (p as i64 - kr as i64) as u64 / tower_exponent(phi.d, p, 1);
        for k in 1..=3u32 {
            prop_assert_eq!(g.level_count(k) as u64, expect, "level {}", k);
            expect = expect * p / tower_exponent(phi.d, p, k + 1);
        }
    }

    #[test]
    fn graph_edges_are_undirected(phi in pick(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let o = &phi.order;
        prop_assume!((o.alg.discriminant() * o.level) % p != 0 && is_p_fundamental(phi.d, p));
        let g = build_graph(&phi, p, 2).unwrap();
        for (u, vu) in g.vertices.iter().enumerate() {
            for (v, vv) in g.vertices.iter().enumerate() {
                if u == v || !vu.expanded || !vv.expanded {
                    continue;
                }
                let (eu, ev) = (g.embedding(u), g.embedding(v));
                let fwd = weight_w(o, p, &eu, &ev).unwrap() > 0;
                let back = weight_w(o, p, &ev, &eu).unwrap() > 0;
                prop_assert_eq!(fwd, back);
                prop_assert_eq!(fwd, g.neighbors(u).contains_key(&v));
            }
        }
    }
}
