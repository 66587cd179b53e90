//! Worked example data: two orders with embeddings and vendored q-expansions.

use crate::arith::{rat, rat_frac};
use crate::emb::{make_embedding, Embedding};
use crate::quat::{EichlerOrder, QuatAlgebra, QuatElem};
use crate::series::{parse_qexp, QSeries};
use std::sync::Arc;

/// Maximal order {1, i, (1+j)/2, (i+k)/2} of (7,5/ℚ), discriminant 35.
pub fn order35() -> Arc<EichlerOrder> {
    let alg = QuatAlgebra::new(7, 5).expect("indefinite");
    let h = rat_frac(1, 2);
    let basis = vec![
        QuatElem::from_ints([1, 0, 0, 0]),
        QuatElem::from_ints([0, 1, 0, 0]),
        QuatElem::new([h.clone(), rat(0), h.clone(), rat(0)]),
        QuatElem::new([rat(0), h.clone(), rat(0), h]),
    ];
    Arc::new(EichlerOrder::new(alg, basis, 1).expect("valid order"))
}

/// Level 3 Eichler order {1, i, 3j, (1+i+j+k)/2} of (7,-1/ℚ), discriminant 14.
pub fn order14_3() -> Arc<EichlerOrder> {
    let alg = QuatAlgebra::new(7, -1).expect("indefinite");
    let h = rat_frac(1, 2);
    let basis = vec![
        QuatElem::from_ints([1, 0, 0, 0]),
        QuatElem::from_ints([0, 1, 0, 0]),
        QuatElem::from_ints([0, 0, 3, 0]),
        QuatElem::new([h.clone(), h.clone(), h.clone(), h]),
    ];
    Arc::new(EichlerOrder::new(alg, basis, 3).expect("valid order"))
}

fn emb(o: &Arc<EichlerOrder>, c: [i64; 4]) -> Embedding {
    make_embedding(o, &QuatElem::from_ints(c)).expect("fixture embedding")
}

/// Embeddings of discriminants 5, 12, 173 into `order35`.
pub fn embeddings35(o: &Arc<EichlerOrder>) -> [Embedding; 3] {
    [emb(o, [0, 0, -1, 0]), emb(o, [0, -1, -8, 3]), emb(o, [0, -2, 27, 10])]
}

/// Embeddings of discriminants 13, 24, 45 into `order14_3`.
pub fn embeddings14_3(o: &Arc<EichlerOrder>) -> [Embedding; 3] {
    [emb(o, [0, 1, 1, 1]), emb(o, [0, 0, -2, -2]), emb(o, [0, 3, -5, 1])]
}

macro_rules! qexp {
    ($name:literal) => {
        include_str!(concat!("../fixtures/", $name, ".qexp"))
    };
}

/// Vendored q-expansions by name.
pub const QEXP: &[(&str, &str)] = &[
    ("35.2.a.a", qexp!("35.2.a.a")),
    ("35.2.a.b-trace", qexp!("35.2.a.b-trace")),
    ("35.2.a.b-sqrt17", qexp!("35.2.a.b-sqrt17")),
    ("ex61-is12", qexp!("ex61-is12")),
    ("ex61-is23", qexp!("ex61-is23")),
    ("14.2.a.a", qexp!("14.2.a.a")),
    ("14.2.a.a-3", qexp!("14.2.a.a-3")),
    ("14.2.a.a-9", qexp!("14.2.a.a-9")),
    ("42.2.a.a", qexp!("42.2.a.a")),
    ("ex62-is12", qexp!("ex62-is12")),
    ("ex62-is23", qexp!("ex62-is23")),
];

pub fn qexp(name: &str) -> Option<QSeries> {
    QEXP.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| parse_qexp(t).expect("vendored file parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        let o = order35();
        assert_eq!(embeddings35(&o).map(|e| e.d.get()), [5, 12, 173]);
        let o = order14_3();
        assert_eq!(o.reduced_discriminant(), 42);
        assert_eq!(embeddings14_3(&o).map(|e| e.d.get()), [13, 24, 45]);
        let f = qexp("35.2.a.a").unwrap();
        assert_eq!(f.order(), 50);
        assert_eq!([1, 3, 4, 5].map(|n| f.get(n)), [1, 1, -2, -1].map(rat));
        let f = qexp("14.2.a.a").unwrap();
        assert_eq!([1, 2, 3].map(|n| f.get(n)), [1, -1, -2].map(rat));
        assert_eq!(QEXP.len(), 11);
    }
}
