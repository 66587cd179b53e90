//! JSON encodings of algebras, orders, elements, embeddings and sums.
//! Rationals are written as "p/q" strings.

use crate::arith::{fmt_rat, parse_rat, Rat};
use crate::emb::{make_embedding, Embedding};
use crate::error::{Error, Result};
use crate::hecke::EmbSum;
use crate::quat::{EichlerOrder, QuatAlgebra, QuatElem};
use serde_json::{json, Value};
use std::sync::Arc;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        msg: msg.into(),
    }
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).ok_or_else(|| bad(format!("bad rational {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(crate::arith::rat)
            .ok_or_else(|| bad(format!("bad integer {n}"))),
        _ => Err(bad(format!("expected a rational, found {v}"))),
    }
}

pub fn elem_to_json(x: &QuatElem) -> Value {
    Value::Array(x.0.iter().map(|c| Value::String(fmt_rat(c))).collect())
}

pub fn elem_from_json(v: &Value) -> Result<QuatElem> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| bad("an element has four coordinates"))?;
    let c: Vec<Rat> = arr.iter().map(rat_from_json).collect::<Result<_>>()?;
    Ok(QuatElem::new([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]))
}

fn int_field(v: &Value, key: &str) -> Result<i64> {
    let r = rat_from_json(v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))?)?;
    crate::arith::rat_to_i128(&r)
        .and_then(|x| i64::try_from(x).ok())
        .ok_or_else(|| bad(format!("{key:?} must be an integer")))
}

/// Parse {"algebra": {"a", "b"}, "order": {"level", "basis"}}.
pub fn order_from_json(v: &Value) -> Result<EichlerOrder> {
    let alg = v.get("algebra").ok_or_else(|| bad("missing \"algebra\""))?;
    let alg = QuatAlgebra::new(int_field(alg, "a")?, int_field(alg, "b")?)?;
    let ord = v.get("order").ok_or_else(|| bad("missing \"order\""))?;
    let level = ord.get("level").and_then(Value::as_u64).unwrap_or(1);
    let basis = ord
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"basis\""))?
        .iter()
        .map(elem_from_json)
        .collect::<Result<Vec<_>>>()?;
    EichlerOrder::new(alg, basis, level)
}

pub fn order_to_json(o: &EichlerOrder) -> Value {
    json!({
        "algebra": {"a": o.alg.a.to_string(), "b": o.alg.b.to_string()},
        "order": {
            "level": o.level,
            "basis": o.basis().iter().map(elem_to_json).collect::<Vec<_>>(),
        },
        "discriminant": o.alg.discriminant(),
        "ramified": o.alg.ramified(),
    })
}

/// Parse {"g": [...], "D": optional} or {"embedding": {...}}.
pub fn embedding_from_json(order: &Arc<EichlerOrder>, v: &Value) -> Result<Embedding> {
    let v = v.get("embedding").unwrap_or(v);
    let g = elem_from_json(v.get("g").ok_or_else(|| bad("missing \"g\""))?)?;
    let e = make_embedding(order, &g)?;
    if let Some(d) = v.get("D") {
        let d = d.as_u64().ok_or_else(|| bad("\"D\" must be a positive integer"))?;
        if d != e.d.get() {
            return Err(Error::NormMismatch {
                expected: d.to_string(),
                found: e.d.to_string(),
            });
        }
    }
    Ok(e)
}

pub fn embedding_to_json(e: &Embedding) -> Value {
    json!({"g": elem_to_json(&e.g), "D": e.d.get()})
}

pub fn embsum_to_json(s: &EmbSum) -> Value {
    Value::Array(
        s.sorted()
            .iter()
            .map(|(e, c)| json!({"g": elem_to_json(&e.g), "D": e.d.get(), "coeff": fmt_rat(c)}))
            .collect(),
    )
}

/// Parse an `embsum_to_json` array, or a single embedding with coefficient 1.
pub fn embsum_from_json(order: &Arc<EichlerOrder>, v: &Value) -> Result<EmbSum> {
    let Some(arr) = v.as_array() else {
        return Ok(EmbSum::single(&embedding_from_json(order, v)?));
    };
    let mut s = EmbSum::zero(order.clone());
    for t in arr {
        let e = embedding_from_json(order, t)?;
        let c = match t.get("coeff") {
            Some(c) => rat_from_json(c)?,
            None => crate::arith::rat(1),
        };
        s.add_term(&e, &c);
    }
    Ok(s)
}
