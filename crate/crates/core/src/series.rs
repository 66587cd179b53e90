//! Truncated q-series: intersection series, q-expansion files and exact
//! linear matching against a basis of expansions.

use crate::arith::{fmt_rat, gcd_u64, parse_rat, Rat};
use crate::error::{Error, Result};
use crate::geo::{IntKind, Intersector};
use crate::hecke::{hecke_t, EmbSum};
use crate::linalg::{kernel, rref, RatMatrix};
use num_traits::{One, Zero};
use std::fmt;
use std::path::Path;

/// Σ_{n ≤ N} a_n qⁿ, with a mask of indices whose coefficient is asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rat>,
    mask: Vec<bool>,
}

impl QSeries {
    pub fn zero(n: usize) -> Self {
        QSeries {
            coeffs: vec![Rat::zero(); n],
            mask: vec![true; n],
        }
    }

    pub fn from_coeffs(cs: Vec<Rat>) -> Self {
        let n = cs.len();
        QSeries {
            coeffs: cs,
            mask: vec![true; n],
        }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        QSeries::from_coeffs(cs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// a_n for 1 ≤ n ≤ N, zero beyond.
    pub fn get(&self, n: usize) -> Rat {
        if n == 0 || n > self.coeffs.len() {
            Rat::zero()
        } else {
            self.coeffs[n - 1].clone()
        }
    }

    pub fn set(&mut self, n: usize, c: Rat) {
        self.coeffs[n - 1] = c;
        self.mask[n - 1] = true;
    }

    /// Store 0 at n and flag it unasserted.
    pub fn unassert(&mut self, n: usize) {
        self.coeffs[n - 1] = Rat::zero();
        self.mask[n - 1] = false;
    }

    pub fn asserted(&self, n: usize) -> bool {
        n >= 1 && n <= self.mask.len() && self.mask[n - 1]
    }

    pub fn truncate(&self, n: usize) -> QSeries {
        let n = n.min(self.order());
        QSeries {
            coeffs: self.coeffs[..n].to_vec(),
            mask: self.mask[..n].to_vec(),
        }
    }

    pub fn scale(&self, s: &Rat) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            mask: self.mask.clone(),
        }
    }

    /// f(dτ) truncated at the same order.
    pub fn dilate(&self, d: usize) -> QSeries {
        let mut out = QSeries::zero(self.order());
        for n in 1..=self.order() / d {
            out.coeffs[n * d - 1] = self.get(n);
        }
        out
    }

    /// Text form: "N <order>" then "n a_n" for nonzero asserted coefficients.
    pub fn to_text(&self) -> String {
        let mut s = format!("N {}\n", self.order());
        for n in 1..=self.order() {
            if !self.asserted(n) {
                s.push_str(&format!("# {n} unasserted\n"));
            } else if !self.coeffs[n - 1].is_zero() {
                s.push_str(&format!("{n} {}\n", fmt_rat(&self.coeffs[n - 1])));
            }
        }
        s
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in 1..=self.order() {
            let c = &self.coeffs[n - 1];
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            let mag = if a.is_one() { String::new() } else { fmt_rat(&a) };
            write!(f, "{sep}{mag}q^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// Parse the q-expansion text format.
pub fn parse_qexp(text: &str) -> Result<QSeries> {
    let mut order: Option<usize> = None;
    let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let mut parts = l.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected two fields, found {l:?}")));
        };
        if a == "N" {
            if order.is_some() {
                return Err(err("duplicate N header".into()));
            }
            order = Some(b.parse().map_err(|_| err(format!("bad order {b:?}")))?);
            continue;
        }
        let n: usize = a.parse().map_err(|_| err(format!("bad index {a:?}")))?;
        let c = parse_rat(b).ok_or_else(|| err(format!("bad coefficient {b:?}")))?;
        if n == 0 {
            return Err(err("indices start at 1".into()));
        }
        entries.push((line, n, c));
    }
    let Some(order) = order else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: "missing N header".into(),
        });
    };
    let mut s = QSeries::zero(order);
    for (line, n, c) in entries {
        if n > order {
            return Err(Error::Parse {
                line,
                msg: format!("index {n} exceeds N = {order}"),
            });
        }
        s.set(n, c);
    }
    Ok(s)
}

pub fn load_qexp(path: impl AsRef<Path>) -> Result<QSeries> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("{}: {e}", p.display()),
    })?;
    parse_qexp(&text)
}

/// IS^f_{α₁,α₂}: coefficient n is ⟨α₁, T_n α₂⟩_f, unasserted when gcd(n, 𝔐) > 1.
pub fn intersection_series(
    it: &mut Intersector,
    a1: &EmbSum,
    a2: &EmbSum,
    kind: IntKind,
    n_max: usize,
) -> Result<QSeries> {
    let level = it.order().level;
    let mut s = QSeries::zero(n_max);
    for n in 1..=n_max {
        if gcd_u64(n as u64, level) != 1 {
            s.unassert(n);
            continue;
        }
        let t = hecke_t(n as u64, a2);
        s.set(n, it.pairing(a1, &t, kind)?);
    }
    Ok(s)
}

/// Outcome of solving target = Σ c_i basis_i on a set of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Match {
    Unique(Vec<Rat>),
    /// A particular solution and the dimension of the solution space.
    Underdetermined(Vec<Rat>, usize),
    NoSolution,
}

/// Indices 1..=n with gcd(n, m) = 1.
pub fn coprime_mask(n: usize, m: u64) -> Vec<usize> {
    (1..=n).filter(|&k| gcd_u64(k as u64, m) == 1).collect()
}

pub fn match_series(target: &QSeries, basis: &[QSeries], mask: &[usize]) -> Match {
    let k = basis.len();
    let mut m: RatMatrix = mask
        .iter()
        .map(|&n| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b.get(n)).collect();
            row.push(target.get(n));
            row
        })
        .collect();
    let coeff_part: RatMatrix = m.iter().map(|r| r[..k].to_vec()).collect();
    let piv = rref(&mut m);
    if piv.contains(&k) {
        return Match::NoSolution;
    }
    let mut sol = vec![Rat::zero(); k];
    for (row, &c) in piv.iter().enumerate() {
        sol[c] = m[row][k].clone();
    }
    let free = if coeff_part.is_empty() {
        k
    } else {
        kernel(&coeff_part).len()
    };
    if free == 0 {
        Match::Unique(sol)
    } else {
        Match::Underdetermined(sol, free)
    }
}

/// Whether a and b agree at every index in `mask`.
pub fn agree_on(a: &QSeries, b: &QSeries, mask: &[usize]) -> bool {
    mask.iter().all(|&n| a.get(n) == b.get(n))
}

/// Σ c_i s_i.
pub fn combine(basis: &[QSeries], c: &[Rat]) -> QSeries {
    let n = basis.iter().map(QSeries::order).max().unwrap_or(0);
    let mut out = QSeries::zero(n);
    for (s, ci) in basis.iter().zip(c) {
        for k in 1..=n {
            out.coeffs[k - 1] += s.get(k) * ci;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn parse_roundtrip() {
        let s = parse_qexp("# f\nN 5\n1 1\n3 -1/2\n").unwrap();
        assert_eq!(s.get(3), crate::arith::rat_frac(-1, 2));
        assert_eq!(s.get(2), rat(0));
        assert_eq!(parse_qexp(&s.to_text()).unwrap(), s);
        assert_eq!(s.to_string(), "q^1 - 1/2q^3 + O(q^6)");
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_qexp(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_qexp("N 3\n1 1\n2 x\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_qexp("N 3\n\n9 1\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn matching() {
        let a = QSeries::from_ints(&[1, 0, 2, 1]);
        let b = QSeries::from_ints(&[0, 1, 1, 0]);
        let t = combine(&[a.clone(), b.clone()], &[rat(2), rat(-3)]);
        let mask: Vec<usize> = (1..=4).collect();
        assert_eq!(
            match_series(&t, &[a.clone(), b.clone()], &mask),
            Match::Unique(vec![rat(2), rat(-3)])
        );
        assert_eq!(
            match_series(&a, &[a.clone(), b.clone()], &mask),
            Match::Unique(vec![rat(1), rat(0)])
        );
        let c = QSeries::from_ints(&[0, 0, 0, 1]);
        assert_eq!(match_series(&c, &[a.clone(), b.clone()], &mask), Match::NoSolution);
        assert!(matches!(
            match_series(&a, &[a.clone(), a.clone()], &mask),
            Match::Underdetermined(_, 1)
        ));
    }

    #[test]
    fn dilation() {
        let a = QSeries::from_ints(&[1, -1, 2, 0, 0, 5]);
        assert_eq!(a.dilate(3), QSeries::from_ints(&[0, 0, 1, 0, 0, -1]));
    }
}
