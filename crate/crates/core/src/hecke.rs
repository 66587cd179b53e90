//! Formal rational sums of embedding classes and the Hecke operators on them.

use crate::arith::{factor, gcd_u64, is_prime, rat, Rat};
use crate::emb::{conjugate_c, equivalent_c, reduce_c, Embedding};
use crate::error::{Error, Result};
use crate::qnum::{is_discriminant, unit_index, Discriminant};
use crate::quat::{Coords, EichlerOrder};
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Write D = f² d with d a fundamental discriminant.
pub fn conductor_split(d: u64) -> (u64, u64) {
    let mut cur = d;
    let mut f = 1;
    for (p, e) in factor(d) {
        for _ in 0..e / 2 {
            if cur.is_multiple_of(p * p) && is_discriminant((cur / (p * p)) as i128) {
                cur /= p * p;
                f *= p;
            }
        }
    }
    (cur, f)
}

/// log ε_{D1} / log ε_{D2} for discriminants in the same quadratic field.
pub fn log_ratio(d1: u64, d2: u64) -> Rat {
    if d1 == d2 {
        return rat(1);
    }
    let (f1d, f1) = conductor_split(d1);
    let (f2d, f2) = conductor_split(d2);
    assert_eq!(f1d, f2d, "discriminants {d1} and {d2} lie in different fields");
    let g = gcd_u64(f1, f2);
    let base = Discriminant::new(f1d * g * g).expect("valid discriminant");
    let e1 = unit_index(base, f1 / g);
    let e2 = unit_index(base, f2 / g);
    Rat::new(e1.into(), e2.into())
}

/// Embedding classes keyed by discriminant, each represented by its first member seen.
#[derive(Debug)]
pub struct ClassRegistry {
    order: Arc<EichlerOrder>,
    reps: Vec<(i128, Coords)>,
    by_disc: HashMap<i128, Vec<usize>>,
    seen: HashMap<Coords, usize>,
}

impl ClassRegistry {
    pub fn new(order: Arc<EichlerOrder>) -> Self {
        ClassRegistry {
            order,
            reps: Vec::new(),
            by_disc: HashMap::new(),
            seen: HashMap::new(),
        }
    }

    pub fn order(&self) -> &Arc<EichlerOrder> {
        &self.order
    }

    /// Class id of the optimal element g (order coordinates), registering it if new.
    pub fn classify(&mut self, g: &Coords) -> usize {
        if let Some(&id) = self.seen.get(g) {
            return id;
        }
        let d = -self.order.nrd_c(g);
        let ids = self.by_disc.entry(d).or_default();
        for &id in ids.iter() {
            if equivalent_c(&self.order, &self.reps[id].1, g) {
                self.seen.insert(*g, id);
                return id;
            }
        }
        let id = self.reps.len();
        self.reps.push((d, *g));
        ids.push(id);
        self.seen.insert(*g, id);
        id
    }

    pub fn rep(&self, id: usize) -> &Coords {
        &self.reps[id].1
    }

    pub fn disc(&self, id: usize) -> i128 {
        self.reps[id].0
    }

    pub fn embedding(&self, id: usize) -> Embedding {
        let (d, g) = self.reps[id];
        Embedding::from_coords_unchecked(self.order.clone(), Discriminant::new(d as u64).unwrap(), g)
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Σ c_i [φ_i] with pairwise inequivalent φ_i and nonzero c_i.
#[derive(Clone, Debug)]
pub struct EmbSum {
    pub order: Arc<EichlerOrder>,
    terms: Vec<(Embedding, Rat)>,
}

impl EmbSum {
    pub fn zero(order: Arc<EichlerOrder>) -> Self {
        EmbSum {
            order,
            terms: Vec::new(),
        }
    }

    pub fn single(phi: &Embedding) -> Self {
        let mut s = EmbSum::zero(phi.order.clone());
        s.add_term(phi, &rat(1));
        s
    }

    pub fn terms(&self) -> &[(Embedding, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, phi: &Embedding, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let pos = self
            .terms
            .iter()
            .position(|(e, _)| e.d == phi.d && equivalent_c(&self.order, e.coords(), phi.coords()));
        match pos {
            Some(i) => {
                self.terms[i].1 += c;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            None => self.terms.push((phi.clone(), c.clone())),
        }
    }

    pub fn add(&self, o: &EmbSum) -> EmbSum {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> EmbSum {
        let mut out = EmbSum::zero(self.order.clone());
        for (e, c) in &self.terms {
            out.add_term(e, &(c * s));
        }
        out
    }

    /// Coefficient of the class of φ.
    pub fn coeff(&self, phi: &Embedding) -> Rat {
        self.terms
            .iter()
            .find(|(e, _)| e.d == phi.d && equivalent_c(&self.order, e.coords(), phi.coords()))
            .map_or_else(Rat::zero, |(_, c)| c.clone())
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> Rat {
        self.terms.iter().map(|(_, c)| c.clone()).sum()
    }

    /// Terms sorted by discriminant then element height.
    pub fn sorted(&self) -> Vec<(Embedding, Rat)> {
        let mut t = self.terms.clone();
        t.sort_by_key(|(e, _)| (e.d, e.coords().iter().map(|c| c.abs()).max().unwrap_or(0), *e.coords()));
        t
    }
}

impl PartialEq for EmbSum {
    fn eq(&self, o: &Self) -> bool {
        *self.order == *o.order && self.terms.len() == o.terms.len() && self.terms.iter().all(|(e, c)| o.coeff(e) == *c)
    }
}

impl fmt::Display for EmbSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted().iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*[D={}: {}]", crate::arith::fmt_rat(c), e.d, e.g)?;
        }
        Ok(())
    }
}

/// Conjugates φ_O^π for π ∈ Θ(n), as (discriminant, optimal element).
pub fn conjugates(order: &EichlerOrder, n: u64, phi: &Coords) -> Result<Vec<(i128, Coords)>> {
    Ok(order.theta_c(n)?.iter().map(|pi| conjugate_c(order, phi, pi)).collect())
}

/// w_n(φ, σ).
pub fn weight_w(order: &EichlerOrder, n: u64, phi: &Embedding, sigma: &Embedding) -> Result<u64> {
    let d = sigma.d.as_i128();
    Ok(conjugates(order, n, phi.coords())?
        .iter()
        .filter(|(dd, y)| *dd == d && equivalent_c(order, y, sigma.coords()))
        .count() as u64)
}

fn apply(alpha: &EmbSum, reps: &[Coords], coeff: impl Fn(u64, u64) -> Rat) -> EmbSum {
    let order = &alpha.order;
    let mut out = EmbSum::zero(order.clone());
    for (phi, c) in &alpha.terms {
        for pi in reps {
            let (d, y) = conjugate_c(order, phi.coords(), pi);
            let y = reduce_c(order, &y);
            let du = d as u64;
            let e = Embedding::from_coords_unchecked(order.clone(), Discriminant::new(du).unwrap(), y);
            out.add_term(&e, &(c * coeff(phi.d.get(), du)));
        }
    }
    out
}

/// T_n α, with coefficients log ε_D / log ε_{D'}; zero when gcd(n, 𝔐) > 1.
pub fn hecke_t(n: u64, alpha: &EmbSum) -> EmbSum {
    let order = &alpha.order;
    if gcd_u64(n, order.level) != 1 {
        return EmbSum::zero(order.clone());
    }
    let reps = order.theta_c(n).expect("gcd checked");
    apply(alpha, &reps, log_ratio)
}

/// T'_n α with integer multiplicities.
pub fn naive_t(n: u64, alpha: &EmbSum) -> Result<EmbSum> {
    let reps = alpha.order.theta_c(n)?;
    Ok(apply(alpha, &reps, |_, _| rat(1)))
}

/// W_p α: conjugation by ω_p for p | 𝔇.
pub fn atkin_lehner_w(p: u64, alpha: &EmbSum) -> Result<EmbSum> {
    let order = &alpha.order;
    if !is_prime(p) || !order.alg.discriminant().is_multiple_of(p) {
        return Err(Error::Precondition(format!("{p} does not divide the discriminant")));
    }
    let w = order.normalizer_element_c(p)?;
    Ok(apply(alpha, &[w], |_, _| rat(1)))
}
