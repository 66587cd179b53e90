//! Optimal embeddings of real quadratic orders into Eichler orders of indefinite
//! quaternion algebras over Q, Hecke operators on them, and intersection series
//! of the associated closed geodesics.

pub mod arith;
pub mod emb;
pub mod error;
pub mod fixtures;
pub mod geo;
pub mod hecke;
pub mod interval;
pub mod io;
pub mod linalg;
pub mod pgraph;
pub mod qnum;
pub mod quat;
pub mod series;

pub use error::{Error, Result};
