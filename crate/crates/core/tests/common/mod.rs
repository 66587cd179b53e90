#![allow(dead_code)]

use hecke_emb::emb::{find_embeddings, reduce_c, Embedding};
use hecke_emb::qnum::{is_discriminant, Discriminant};
use hecke_emb::quat::EichlerOrder;
use std::sync::Arc;

/// Positive non-square discriminants in [lo, hi].
pub fn discriminants(lo: u64, hi: u64) -> Vec<Discriminant> {
    (lo..=hi)
        .filter(|&d| is_discriminant(d as i128))
        .filter_map(|d| Discriminant::new(d).ok())
        .collect()
}

/// One small optimal embedding of discriminant D, if the box of height h has one.
pub fn small_embedding(order: &Arc<EichlerOrder>, d: Discriminant, h: i128) -> Option<Embedding> {
    let e = find_embeddings(order, d, h).into_iter().next()?;
    let g = reduce_c(order, e.coords());
    Some(Embedding::from_coords_unchecked(order.clone(), d, g))
}

/// The first `count` discriminants in [lo, hi] that embed, one embedding each.
pub fn sample_embeddings(order: &Arc<EichlerOrder>, lo: u64, hi: u64, count: usize) -> Vec<Embedding> {
    discriminants(lo, hi)
        .into_iter()
        .filter_map(|d| small_embedding(order, d, 4))
        .take(count)
        .collect()
}

/// Cached embeddings with D ≤ 120 in each fixture order; index 0 is the 35 order.
pub fn pool() -> &'static [(Arc<EichlerOrder>, Vec<Embedding>); 2] {
    static POOL: std::sync::OnceLock<[(Arc<EichlerOrder>, Vec<Embedding>); 2]> = std::sync::OnceLock::new();
    POOL.get_or_init(|| {
        [hecke_emb::fixtures::order35(), hecke_emb::fixtures::order14_3()].map(|o| {
            let es = sample_embeddings(&o, 5, 120, usize::MAX);
            (o, es)
        })
    })
}
