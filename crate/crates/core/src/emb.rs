//! Optimal embeddings of real quadratic orders into an Eichler order.
//!
//! An embedding φ is stored as g = φ(√D), an order element of trace 0 and
//! reduced norm -D with (p_D + g)/2 in the order.

use crate::arith::{big_to_i128, gcd_i128, rat, rat_gcd, rat_to_i128, Rat};
use crate::error::{Error, Result};
use crate::linalg::{kernel, saturate, RatMatrix};
use crate::qnum::{Bqf, Discriminant};
use crate::quat::{Coords, EichlerOrder, QuatElem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Embedding {
    pub order: Arc<EichlerOrder>,
    pub d: Discriminant,
    pub g: QuatElem,
    gc: Coords,
}

impl PartialEq for Embedding {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d && self.gc == o.gc && *self.order == *o.order
    }
}

impl Embedding {
    /// g in order coordinates.
    pub fn coords(&self) -> &Coords {
        &self.gc
    }

    /// φ((p_D + √D)/2).
    pub fn omega(&self) -> QuatElem {
        let p = rat((self.d.get() % 2) as i64);
        QuatElem::scalar(p).add(&self.g).scale(&crate::arith::rat_frac(1, 2))
    }

    /// Build from order coordinates of an element already known to be optimal.
    pub fn from_coords_unchecked(order: Arc<EichlerOrder>, d: Discriminant, gc: Coords) -> Self {
        let g = order.elem(&gc);
        Embedding { order, d, g, gc }
    }
}

/// Validate g as an optimal embedding of discriminant -nrd(g).
pub fn make_embedding(order: &Arc<EichlerOrder>, g: &QuatElem) -> Result<Embedding> {
    if !g.trd().is_zero() {
        return Err(Error::BadTrace);
    }
    let n = order.alg.nrd(g);
    if !n.is_negative() {
        return Err(Error::Degenerate(crate::arith::fmt_rat(&n)));
    }
    let d = rat_to_i128(&-n).ok_or_else(|| Error::NotIntegral("reduced norm is not an integer".into()))?;
    let disc = Discriminant::new(d as u64).map_err(|_| Error::NotIntegral(format!("{d} is not a discriminant")))?;
    let gc = order
        .coords(g)
        .ok_or_else(|| Error::NotIntegral(format!("{g} is not in the order")))?;
    let p = d % 2;
    let mut half = gc;
    half[0] += p;
    if half.iter().any(|c| c % 2 != 0) {
        return Err(Error::NotIntegral(format!(
            "(p_D + g)/2 is not in the order for g = {g}"
        )));
    }
    let (d2, _) = assoc_c(order, &gc);
    if d2 != d {
        return Err(Error::NotOptimal(format!(
            "{g} has associated discriminant {d2}, not {d}"
        )));
    }
    Ok(Embedding {
        order: order.clone(),
        d: disc,
        g: g.clone(),
        gc,
    })
}

/// Associated discriminant and optimal element of a trace-zero element in
/// order coordinates (or any rational multiple of one).
pub fn assoc_c(order: &EichlerOrder, w: &Coords) -> (i128, Coords) {
    let gcd = gcd_i128(gcd_i128(w[1], w[2]), w[3]);
    assert!(gcd != 0, "degenerate element");
    let y: Coords = [0, 1, 2, 3].map(|i| 2 * w[i] / gcd);
    debug_assert!(w.iter().all(|c| (2 * c) % gcd == 0));
    let d = -order.nrd_c(&y);
    (d, y)
}

fn check_degenerate(order: &EichlerOrder, g: &QuatElem) -> Result<Rat> {
    if !g.trd().is_zero() {
        return Err(Error::BadTrace);
    }
    let n = order.alg.nrd(g);
    if !n.is_negative() {
        return Err(Error::Degenerate(crate::arith::fmt_rat(&n)));
    }
    Ok(-n)
}

/// D_O^φ: discriminant of {u + v g ∈ O}.
pub fn assoc_discriminant(order: &EichlerOrder, g: &QuatElem) -> Result<Discriminant> {
    let d0 = check_degenerate(order, g)?;
    let c = order.rat_coords(g);
    let v0 = rat_gcd(c[1..].iter()).recip();
    let d = rat(4) * &v0 * &v0 * d0;
    let d = rat_to_i128(&d).ok_or_else(|| Error::Internal("non-integral discriminant".into()))?;
    Discriminant::new(d as u64)
}

/// The optimal embedding λ g (λ > 0) associated to g.
pub fn assoc_optimal(order: &Arc<EichlerOrder>, g: &QuatElem) -> Result<Embedding> {
    check_degenerate(order, g)?;
    let c = order.rat_coords(g);
    let v0 = rat_gcd(c[1..].iter()).recip();
    let y = g.scale(&(rat(2) * v0));
    make_embedding(order, &y)
}

/// The optimal embedding associated to π φ π⁻¹.
pub fn conjugate(phi: &Embedding, pi: &QuatElem) -> Result<Embedding> {
    let alg = &phi.order.alg;
    let inv = alg.inverse(pi)?;
    let h = alg.mul(&alg.mul(pi, &phi.g), &inv);
    assoc_optimal(&phi.order, &h)
}

/// Conjugate by an order element π in coordinates: the optimal element of π g π̄.
pub fn conjugate_c(order: &EichlerOrder, g: &Coords, pi: &Coords) -> (i128, Coords) {
    let w = order.mul_c(&order.mul_c(pi, g), &order.conj_c(pi));
    assoc_c(order, &w)
}

/// A small representative of the class of g: conjugate by short norm-1 units
/// while the Frobenius norm of ι(g) decreases.
pub fn reduce_c(order: &EichlerOrder, g: &Coords) -> Coords {
    let units = order.short_units();
    let mut cur = *g;
    let mut h = order.frobenius(&cur);
    loop {
        let mut best: Option<(f64, Coords)> = None;
        for u in units {
            let y = order.mul_c(&order.mul_c(u, &cur), &order.conj_c(u));
            let hy = order.frobenius(&y);
            if hy < h * (1.0 - 1e-12) && best.is_none_or(|(hb, _)| hy < hb) {
                best = Some((hy, y));
            }
        }
        match best {
            Some((hb, y)) => {
                h = hb;
                cur = y;
            }
            None => return cur,
        }
    }
}

/// Whether some r ∈ O of norm 1 satisfies r g_φ r⁻¹ = g_σ.
pub fn equivalent(phi: &Embedding, sigma: &Embedding) -> Result<bool> {
    if *phi.order != *sigma.order {
        return Err(Error::OrderMismatch);
    }
    if phi.d != sigma.d {
        return Ok(false);
    }
    Ok(equivalent_c(&phi.order, &phi.gc, &sigma.gc))
}

/// Binary form nrd restricted to {r ∈ O : g_σ r = r g_φ}.
pub fn intertwiner_form(order: &EichlerOrder, g_phi: &Coords, g_sigma: &Coords) -> Bqf {
    let d = -order.nrd_c(g_phi);
    let mut r0 = order.mul_c(g_sigma, g_phi);
    r0[0] += d;
    let r1: Coords = [0, 1, 2, 3].map(|i| g_sigma[i] + g_phi[i]);
    let span = if independent(&r0, &r1) {
        vec![r0.to_vec(), r1.to_vec()]
    } else {
        rational_intertwiners(order, g_phi, g_sigma)
    };
    let (a, b) = gauss_reduce(to_coords(&span[0]), to_coords(&span[1]));
    let sat = saturate(&[a.to_vec(), b.to_vec()], 4);
    assert_eq!(sat.len(), 2, "intertwiner space must be two dimensional");
    let (e1, e2) = gauss_reduce(to_coords(&sat[0]), to_coords(&sat[1]));
    Bqf::new(order.nrd_c(&e1), order.bil_c(&e1, &e2), order.nrd_c(&e2))
}

fn to_coords(v: &[i128]) -> Coords {
    [v[0], v[1], v[2], v[3]]
}

fn independent(a: &Coords, b: &Coords) -> bool {
    (0..4).any(|i| (i + 1..4).any(|j| a[i] * b[j] != a[j] * b[i]))
}

/// Integral basis of the rational solution space of g_σ r = r g_φ.
fn rational_intertwiners(order: &EichlerOrder, g_phi: &Coords, g_sigma: &Coords) -> Vec<Vec<i128>> {
    let mut m: RatMatrix = vec![vec![Rat::zero(); 4]; 4];
    for i in 0..4 {
        let mut e = [0i128; 4];
        e[i] = 1;
        let l = order.mul_c(g_sigma, &e);
        let r = order.mul_c(&e, g_phi);
        for k in 0..4 {
            m[k][i] = Rat::from_integer((l[k] - r[k]).into());
        }
    }
    let ker = kernel(&m);
    assert_eq!(ker.len(), 2, "intertwiner space must be two dimensional");
    ker.iter()
        .map(|v| {
            let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.iter()
                .map(|x| big_to_i128(&(x * Rat::from_integer(den.clone())).to_integer()))
                .collect()
        })
        .collect()
}

/// Lagrange-Gauss reduction of a rank-2 lattice in Z^4 (Euclidean norm).
fn gauss_reduce(mut a: Coords, mut b: Coords) -> (Coords, Coords) {
    let dot = |x: &Coords, y: &Coords| -> i128 { (0..4).map(|i| x[i] * y[i]).sum() };
    if dot(&a, &a) > dot(&b, &b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let aa = dot(&a, &a);
        let ab = dot(&a, &b);
        let mu = (2 * ab + aa).div_euclid(2 * aa);
        if mu != 0 {
            for i in 0..4 {
                b[i] -= mu * a[i];
            }
        }
        if dot(&b, &b) >= aa {
            return (a, b);
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Equivalence for embeddings of equal discriminant given in coordinates.
pub fn equivalent_c(order: &EichlerOrder, g_phi: &Coords, g_sigma: &Coords) -> bool {
    if g_phi == g_sigma {
        return true;
    }
    if order.nrd_c(g_phi) != order.nrd_c(g_sigma) {
        return false;
    }
    let f = intertwiner_form(order, g_phi, g_sigma);
    f.is_primitive() && f.is_principal()
}

/// Search the box of height h for optimal embeddings of discriminant D.
pub fn find_embeddings(order: &Arc<EichlerOrder>, d: Discriminant, h: i128) -> Vec<Embedding> {
    let dd = d.as_i128();
    let p = dd % 2;
    let n = (p * p - dd) / 4;
    let mut out = Vec::new();
    order.enumerate_norm_with(n, h, |x| {
        if order.trd_c(x) == p {
            let mut y = [0, 1, 2, 3].map(|i| 2 * x[i]);
            y[0] -= p;
            if assoc_c(order, &y).0 == dd {
                out.push(Embedding::from_coords_unchecked(order.clone(), d, y));
            }
        }
        true
    });
    out
}

/// First optimal embedding of discriminant D found with escalating height.
pub fn find_embedding(order: &Arc<EichlerOrder>, d: Discriminant) -> Result<Embedding> {
    let dd = d.as_i128();
    let p = dd % 2;
    let n = (p * p - dd) / 4;
    let mut h = 4;
    while h <= 256 {
        let mut found = None;
        order.enumerate_norm_with(n, h, |x| {
            if order.trd_c(x) == p {
                let mut y = [0, 1, 2, 3].map(|i| 2 * x[i]);
                y[0] -= p;
                if assoc_c(order, &y).0 == dd {
                    found = Some(y);
                    return false;
                }
            }
            true
        });
        if let Some(y) = found {
            return Ok(Embedding::from_coords_unchecked(order.clone(), d, y));
        }
        h *= 2;
    }
    Err(Error::NotFound(format!(
        "no optimal embedding of discriminant {d} in the search box"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;
    use crate::quat::QuatAlgebra;

    fn ex61() -> Arc<EichlerOrder> {
        let alg = QuatAlgebra::new(7, 5).unwrap();
        let h = rat_frac(1, 2);
        let basis = vec![
            QuatElem::from_ints([1, 0, 0, 0]),
            QuatElem::from_ints([0, 1, 0, 0]),
            QuatElem::new([h.clone(), rat(0), h.clone(), rat(0)]),
            QuatElem::new([rat(0), h.clone(), rat(0), h]),
        ];
        Arc::new(EichlerOrder::new(alg, basis, 1).unwrap())
    }

    #[test]
    fn fixture_embeddings() {
        let o = ex61();
        let e1 = make_embedding(&o, &QuatElem::from_ints([0, 0, -1, 0])).unwrap();
        assert_eq!(e1.d.get(), 5);
        assert_eq!(
            e1.omega(),
            QuatElem::new([rat_frac(1, 2), rat(0), rat_frac(-1, 2), rat(0)])
        );
        let e2 = make_embedding(&o, &QuatElem::from_ints([0, -1, -8, 3])).unwrap();
        assert_eq!(e2.d.get(), 12);
        assert_eq!(
            make_embedding(&o, &QuatElem::from_ints([1, 1, 0, 0])),
            Err(Error::BadTrace)
        );
        assert!(!equivalent(&e1, &e2).unwrap());
        assert!(equivalent(&e1, &e1).unwrap());
    }

    #[test]
    fn associated_discriminants() {
        let o = ex61();
        let g = QuatElem::from_ints([0, 0, -3, 0]);
        assert_eq!(assoc_discriminant(&o, &g).unwrap().get(), 5);
        let e = assoc_optimal(&o, &g).unwrap();
        assert_eq!(e.g, QuatElem::from_ints([0, 0, -1, 0]));
        assert!(matches!(
            make_embedding(&o, &g),
            Err(Error::NotOptimal(_)) | Err(Error::NotIntegral(_))
        ));
    }

    #[test]
    fn conjugation_by_theta_two() {
        let o = ex61();
        let e1 = make_embedding(&o, &QuatElem::from_ints([0, 0, -1, 0])).unwrap();
        for pi in o.theta(2).unwrap() {
            let c = conjugate(&e1, &pi).unwrap();
            assert_eq!(c.d.get(), 20);
            let back = conjugate(&c, &pi.conj()).unwrap();
            assert!(equivalent(&back, &e1).unwrap());
        }
    }

    #[test]
    fn negation_is_handled() {
        let o = ex61();
        let g = [0, 0, -1, 0].map(|x: i64| x);
        let e = make_embedding(&o, &QuatElem::from_ints(g)).unwrap();
        let neg: Coords = e.coords().map(|c| -c);
        // φ and its negative are equivalent iff the form represents 1; either way no panic
        let _ = equivalent_c(&o, e.coords(), &neg);
    }
}
