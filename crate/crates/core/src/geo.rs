//! Root geodesics, their crossings, and intersection numbers.
//!
//! For a pair of embeddings with g₁ = φ₁(√D₁), g₂ = φ₂(√D₂) the linkage is
//! x = ½ trd(g₁g₂); the root geodesics cross iff x² < D₁D₂. The element
//! g₁g₂ - x is then a positive-norm element fixing the crossing point.

use crate::arith::{big_to_i128, gcd_i128, isqrt_i128, rat, valuation_u64, Rat};
use crate::emb::{assoc_c, reduce_c, Embedding};
use crate::error::{Error, Result};
use crate::hecke::{ClassRegistry, EmbSum};
use crate::interval::Interval;
use crate::linalg::solve_integer;
use crate::qnum::{fundamental_unit, Discriminant};
use crate::quat::{Coords, EichlerOrder, QuatElem};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

/// Which function of a crossing is summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntKind {
    Unsigned,
    Signed,
    /// sign · (1 + v_q(ℓ)).
    Weighted(u64),
}

/// One crossing of φ₁ with a conjugate φ₂' = (w) of φ₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub x: i128,
    pub sign: i32,
    pub level: u64,
    /// φ₂'(√D₂) in order coordinates.
    pub w: Coords,
}

impl Crossing {
    pub fn value(&self, kind: IntKind) -> i64 {
        match kind {
            IntKind::Unsigned => 1,
            IntKind::Signed => self.sign as i64,
            IntKind::Weighted(q) => self.sign as i64 * (1 + valuation_u64(self.level, q) as i64),
        }
    }

    /// Discriminant of the negative order at the crossing.
    pub fn negative_disc(&self, d1: u64, d2: u64) -> i128 {
        let l = self.level as i128;
        (self.x * self.x - d1 as i128 * d2 as i128) / (l * l)
    }
}

/// ½ trd(g₁ g₂).
pub fn linkage(phi1: &Embedding, phi2: &Embedding) -> Rat {
    phi1.order.alg.mul(&phi1.g, &phi2.g).trd() / rat(2)
}

pub fn transversal(phi1: &Embedding, phi2: &Embedding) -> bool {
    let x = linkage(phi1, phi2);
    &x * &x < rat(phi1.d.get() as i64) * rat(phi2.d.get() as i64)
}

/// Sign of sqrt(a)-twisted c-entry p - q√a of ι, decided exactly.
fn sign_minus_sqrt(p: &Rat, q: &Rat, a: i128) -> i32 {
    let sp = sign_of(p);
    let sq = sign_of(q);
    if sq == 0 {
        return sp;
    }
    if sp != sq {
        return if sp == 0 { -sq } else { sp };
    }
    let lhs = p * p;
    let rhs = q * q * Rat::from_integer(a.into());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sp,
        Ordering::Less => -sp,
        Ordering::Equal => 0,
    }
}

fn sign_of(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_of_elem(order: &EichlerOrder, z: &QuatElem) -> i32 {
    sign_minus_sqrt(&z.0[2], &z.0[3], order.alg.a)
}

/// Topological sign of the crossing of the root geodesics of φ₁ and φ₂.
///
/// +1 iff, reading ∂ℍ counterclockwise from the repelling end of φ₁, the
/// repelling end of φ₂ comes before its attracting end.
pub fn crossing_sign(phi1: &Embedding, phi2: &Embedding) -> Result<i32> {
    if !transversal(phi1, phi2) {
        return Err(Error::NonTransversal);
    }
    let alg = &phi1.order.alg;
    let x = linkage(phi1, phi2);
    let z = alg.mul(&phi1.g, &phi2.g).sub(&QuatElem::scalar(x));
    Ok(sign_of_elem(&phi1.order, &z))
}

/// Level ℓ of the crossing: (x² - D₁D₂)/ℓ² is the discriminant of the
/// optimal negative order attached to g₁g₂ - x.
pub fn intersection_level(phi1: &Embedding, phi2: &Embedding) -> Result<u64> {
    if !transversal(phi1, phi2) {
        return Err(Error::NonTransversal);
    }
    let o = &phi1.order;
    let x = crate::arith::rat_to_i128(&linkage(phi1, phi2))
        .ok_or_else(|| Error::Internal("non-integral linkage".into()))?;
    let mut z = o.mul_c(phi1.coords(), phi2.coords());
    z[0] -= x;
    Ok(level_of(&z))
}

fn level_of(z: &Coords) -> u64 {
    (gcd_i128(gcd_i128(z[1], z[2]), z[3]) / 2) as u64
}

/// An endpoint of a root geodesic on ℝ ∪ {∞}.
#[derive(Clone, Debug)]
pub enum Endpoint {
    Finite(Interval),
    Infinity,
}

/// Repelling and attracting endpoints of the root geodesic of φ, as
/// intervals of width about 2^-bits.
pub fn endpoints(phi: &Embedding, bits: u32) -> (Endpoint, Endpoint) {
    let alg = &phi.order.alg;
    let m = alg.real_embedding(&phi.g, bits);
    let [[p, q], [r, _]] = &m.0;
    let sd = Interval::sqrt_of(&rat(phi.d.get() as i64), bits);
    let c_zero = phi.g.0[2].is_zero() && phi.g.0[3].is_zero();
    let point = |lam: &Interval| -> Endpoint {
        if c_zero {
            // ι(g) diagonal: eigenvalue p at ∞, -p at -q/2p.
            let p_pos = phi.g.0[1].is_positive();
            let lam_pos = lam.sign() == Some(1);
            if p_pos == lam_pos {
                Endpoint::Infinity
            } else {
                let two_p = p + p;
                Endpoint::Finite((-q).div(&two_p).expect("p is nonzero"))
            }
        } else {
            Endpoint::Finite((lam + p).div(r).expect("c-entry is nonzero"))
        }
    };
    (point(&-&sd), point(&sd))
}

fn cmp_end(a: &Endpoint, b: &Endpoint) -> Option<Ordering> {
    match (a, b) {
        (Endpoint::Infinity, Endpoint::Infinity) => Some(Ordering::Equal),
        (Endpoint::Infinity, _) => Some(Ordering::Greater),
        (_, Endpoint::Infinity) => Some(Ordering::Less),
        (Endpoint::Finite(x), Endpoint::Finite(y)) => x.cmp_strict(y),
    }
}

/// Position of p on the circle read counterclockwise from `start`, as a
/// (wrapped, value) pair comparable with `cyc_lt`.
fn cyc_lt(start: &Endpoint, p: &Endpoint, q: &Endpoint) -> Option<bool> {
    let wp = cmp_end(p, start)? != Ordering::Greater;
    let wq = cmp_end(q, start)? != Ordering::Greater;
    if wp != wq {
        return Some(!wp);
    }
    Some(cmp_end(p, q)? == Ordering::Less)
}

/// Crossing sign computed from interval endpoints, or `None` when the
/// geodesics do not cross. Precision doubles until all comparisons resolve.
pub fn geometric_sign(phi1: &Embedding, phi2: &Embedding) -> Option<i32> {
    let mut bits = 128;
    loop {
        let (r1, a1) = endpoints(phi1, bits);
        let (r2, a2) = endpoints(phi2, bits);
        let resolved = (|| {
            let r2_in = cyc_lt(&r1, &r2, &a1)?;
            let a2_in = cyc_lt(&r1, &a2, &a1)?;
            if r2_in == a2_in {
                return Some(None);
            }
            Some(Some(if cyc_lt(&r1, &r2, &a2)? { 1 } else { -1 }))
        })();
        if let Some(r) = resolved {
            return r;
        }
        if bits >= 8192 {
            // Shared endpoints: the geodesics coincide or meet at infinity.
            return None;
        }
        bits *= 2;
    }
}

/// Precomputed data for crossings against one fixed embedding φ₁.
struct Anchor {
    g: Coords,
    d: i128,
    gamma: Coords,
    gamma_bar: Coords,
    /// Off-diagonal eigen-coordinates (s, t) of each basis element.
    st: [(f64, f64); 4],
    eps: f64,
}

impl Anchor {
    fn new(order: &EichlerOrder, phi: &Embedding) -> Result<Self> {
        let g = *phi.coords();
        let d = phi.d.as_i128();
        let unit = fundamental_unit(phi.d);
        let (t, u) = (big_to_i128(&unit.t), big_to_i128(&unit.u));
        let mut gamma = g.map(|c| c * u);
        gamma[0] += t;
        if gamma.iter().any(|c| c % 2 != 0) {
            return Err(Error::Internal("unit is not in the order".into()));
        }
        let gamma = gamma.map(|c| c / 2);
        let gamma_bar = order.conj_c(&gamma);
        let alg = &order.alg;
        let gm = alg.real_embedding_f64(&phi.g);
        let sd = (d as f64).sqrt();
        let eig = |lam: f64| -> [f64; 2] {
            let v1 = [gm[0][1], lam - gm[0][0]];
            let v2 = [lam - gm[1][1], gm[1][0]];
            if v1[0].hypot(v1[1]) >= v2[0].hypot(v2[1]) {
                v1
            } else {
                v2
            }
        };
        let (vp, vm) = (eig(sd), eig(-sd));
        let det = vp[0] * vm[1] - vm[0] * vp[1];
        let mut st = [(0.0, 0.0); 4];
        for (j, e) in order.basis().iter().enumerate() {
            let m = alg.real_embedding_f64(e);
            let apply = |v: [f64; 2]| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
            // Components in the basis (v+, v-).
            let split = |w: [f64; 2]| ((w[0] * vm[1] - vm[0] * w[1]) / det, (vp[0] * w[1] - w[0] * vp[1]) / det);
            let s = split(apply(vp)).1;
            let t = split(apply(vm)).0;
            st[j] = (s, t);
        }
        Ok(Anchor {
            g,
            d,
            gamma,
            gamma_bar,
            st,
            eps: unit.log().exp(),
        })
    }

    fn s_t(&self, o: &[i128]) -> (f64, f64) {
        let mut s = 0.0;
        let mut t = 0.0;
        for j in 0..4 {
            s += o[j] as f64 * self.st[j].0;
            t += o[j] as f64 * self.st[j].1;
        }
        (s, t)
    }

    /// All ⟨γ⟩-orbits of ω₂ = (p + w)/2 in O with trd(g ω₂) = x and norm (p² - D₂)/4.
    fn orbits(&self, order: &EichlerOrder, d2: i128, x: i128) -> Vec<Coords> {
        let p2 = d2 % 2;
        let rows: Vec<Vec<i128>> = vec![
            (0..4).map(|j| order.trd_c(&unit(j))).collect(),
            (0..4).map(|j| order.trd_c(&order.mul_c(&self.g, &unit(j)))).collect(),
        ];
        let Some((o0, ker)) = solve_integer(&rows, &[p2, x]) else {
            return Vec::new();
        };
        let o0 = to_coords(&o0);
        let (k1, k2) = (to_coords(&ker[0]), to_coords(&ker[1]));
        let target = (p2 * p2 - d2) / 4;
        let c = (d2 as f64 - (x * x) as f64 / self.d as f64) / 4.0;
        let r = c.sqrt() * self.eps * (1.0 + 1e-6) + 1e-6;
        let (s0, t0) = self.s_t(&o0);
        let (s1, t1) = self.s_t(&k1);
        let (s2, t2) = self.s_t(&k2);
        let det = s1 * t2 - s2 * t1;
        let (i00, i01) = (t2 / det, -s2 / det);
        let uc = -(i00 * s0 + i01 * t0);
        let uw = r * (i00.abs() + i01.abs()) + 1.0;
        // nrd(o0 + u k1 + v k2) - target = a v² + (b0 + b1 u) v + (c0 + c1 u + c2 u²).
        let a = order.nrd_c(&k2);
        let (b0, b1) = (order.bil_c(&o0, &k2), order.bil_c(&k1, &k2));
        let (c0, c1, c2) = (order.nrd_c(&o0) - target, order.bil_c(&o0, &k1), order.nrd_c(&k1));
        let lo = (uc - uw).floor() as i128;
        let hi = (uc + uw).ceil() as i128;
        let mut pts: Vec<Coords> = Vec::new();
        for u in lo..=hi {
            let b = b0 + b1 * u;
            let c = c0 + u * (c1 + c2 * u);
            let disc = b * b - 4 * a * c;
            if disc < 0 || !maybe_square(disc) {
                continue;
            }
            let Some(sq) = crate::arith::is_square_i128(disc) else {
                continue;
            };
            let roots = if sq == 0 { &[-b][..] } else { &[-b + sq, -b - sq][..] };
            for &num in roots {
                if num % (2 * a) != 0 {
                    continue;
                }
                let v = num / (2 * a);
                let o: Coords = [0, 1, 2, 3].map(|i| o0[i] + u * k1[i] + v * k2[i]);
                let (s, t) = self.s_t(&o);
                if s.abs() <= r && t.abs() <= r {
                    pts.push(o);
                }
            }
        }
        // Union points related by conjugation with γ.
        let index: HashMap<Coords, usize> = pts.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut parent: Vec<usize> = (0..pts.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for (i, o) in pts.iter().enumerate() {
            let y = order.mul_c(&order.mul_c(&self.gamma, o), &self.gamma_bar);
            if let Some(&j) = index.get(&y) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
        (0..pts.len())
            .filter(|&i| find(&mut parent, i) == i)
            .map(|i| pts[i])
            .collect()
    }

    /// Crossings with optimal conjugates of discriminant d2, one per ⟨γ⟩-orbit.
    fn crossings(&self, order: &EichlerOrder, d2: i128) -> Vec<Crossing> {
        let n = self.d * d2;
        let m = isqrt_i128(n - 1);
        let xs: Vec<i128> = (-m..=m).filter(|x| (x - n).rem_euclid(2) == 0).collect();
        xs.par_iter()
            .flat_map_iter(|&x| {
                self.orbits(order, d2, x).into_iter().filter_map(move |o| {
                    let mut w = o.map(|c| 2 * c);
                    w[0] -= d2 % 2;
                    if assoc_c(order, &w).0 != d2 {
                        return None;
                    }
                    let mut z = order.mul_c(&self.g, &w);
                    z[0] -= x;
                    let sign = sign_of_elem(order, &order.elem(&z));
                    Some(Crossing {
                        x,
                        sign,
                        level: level_of(&z),
                        w,
                    })
                })
            })
            .collect()
    }
}

/// Cheap filter: false only if n is certainly not a square.
fn maybe_square(n: i128) -> bool {
    const fn table(m: usize) -> [bool; 128] {
        let mut t = [false; 128];
        let mut i = 0;
        while i < m {
            t[(i * i) % m] = true;
            i += 1;
        }
        t
    }
    const T64: [bool; 128] = table(64);
    const T63: [bool; 128] = table(63);
    const T65: [bool; 128] = table(65);
    const T11: [bool; 128] = table(11);
    T64[(n % 64) as usize] && T63[(n % 63) as usize] && T65[(n % 65) as usize] && T11[(n % 11) as usize]
}

fn unit(j: usize) -> Coords {
    let mut e = [0; 4];
    e[j] = 1;
    e
}

fn to_coords(v: &[i128]) -> Coords {
    [v[0], v[1], v[2], v[3]]
}

/// Intersection numbers with shared class bookkeeping and a crossing cache
/// keyed by (anchor, discriminant of the second argument).
pub struct Intersector {
    order: Arc<EichlerOrder>,
    registry: ClassRegistry,
    anchors: HashMap<Coords, Arc<Anchor>>,
    cache: HashMap<(Coords, i128), Arc<Vec<(usize, Crossing)>>>,
    unit_logs: HashMap<u64, f64>,
}

impl Intersector {
    pub fn new(order: Arc<EichlerOrder>) -> Self {
        Intersector {
            registry: ClassRegistry::new(order.clone()),
            order,
            anchors: HashMap::new(),
            cache: HashMap::new(),
            unit_logs: HashMap::new(),
        }
    }

    pub fn order(&self) -> &Arc<EichlerOrder> {
        &self.order
    }

    fn anchor(&mut self, phi: &Embedding) -> Result<Arc<Anchor>> {
        if let Some(a) = self.anchors.get(phi.coords()) {
            return Ok(a.clone());
        }
        let a = Arc::new(Anchor::new(&self.order, phi)?);
        self.anchors.insert(*phi.coords(), a.clone());
        Ok(a)
    }

    /// Class-tagged crossings of φ₁ with every optimal embedding of discriminant d2.
    fn tagged(&mut self, phi1: &Embedding, d2: Discriminant) -> Result<Arc<Vec<(usize, Crossing)>>> {
        let key = (*phi1.coords(), d2.as_i128());
        if let Some(c) = self.cache.get(&key) {
            return Ok(c.clone());
        }
        let anchor = self.anchor(phi1)?;
        let list = anchor.crossings(&self.order, d2.as_i128());
        let reduced: Vec<Coords> = list.par_iter().map(|c| reduce_c(&self.order, &c.w)).collect();
        let tagged: Vec<(usize, Crossing)> = list
            .into_iter()
            .zip(reduced)
            .map(|(c, r)| (self.registry.classify(&r), c))
            .collect();
        let tagged = Arc::new(tagged);
        self.cache.insert(key, tagged.clone());
        Ok(tagged)
    }

    /// Crossings of φ₁ with conjugates of φ₂ up to simultaneous conjugation.
    pub fn crossings(&mut self, phi1: &Embedding, phi2: &Embedding) -> Result<Vec<Crossing>> {
        if *phi1.order != *self.order || *phi2.order != *self.order {
            return Err(Error::OrderMismatch);
        }
        let tagged = self.tagged(phi1, phi2.d)?;
        let id = self.registry.classify(&reduce_c(&self.order, phi2.coords()));
        Ok(tagged
            .iter()
            .filter(|(c, _)| *c == id)
            .map(|(_, x)| x.clone())
            .collect())
    }

    /// ⟨φ₁, φ₂⟩_kind. The enumeration is anchored on whichever side is
    /// cheaper; swapping negates signed values.
    pub fn number(&mut self, phi1: &Embedding, phi2: &Embedding, kind: IntKind) -> Result<Rat> {
        self.check_kind(kind)?;
        let (a, b, flip) = if self.cost(phi2, phi1) < self.cost(phi1, phi2) && !self.is_anchor(phi1, phi2.d) {
            (phi2, phi1, kind != IntKind::Unsigned)
        } else {
            (phi1, phi2, false)
        };
        let v: i64 = self.crossings(a, b)?.iter().map(|c| c.value(kind)).sum();
        Ok(rat(if flip { -v } else { v }))
    }

    fn is_anchor(&self, phi: &Embedding, d2: Discriminant) -> bool {
        self.cache.contains_key(&(*phi.coords(), d2.as_i128()))
    }

    /// Log of the work to enumerate crossings anchored at `anchor`.
    fn cost(&mut self, anchor: &Embedding, other: &Embedding) -> f64 {
        let le = *self
            .unit_logs
            .entry(anchor.d.get())
            .or_insert_with(|| fundamental_unit(anchor.d).log());
        le + (other.d.get() as f64).ln() + 0.5 * (anchor.d.get() as f64).ln()
    }

    /// Bilinear extension to formal sums.
    pub fn pairing(&mut self, a1: &EmbSum, a2: &EmbSum, kind: IntKind) -> Result<Rat> {
        self.check_kind(kind)?;
        let mut total = Rat::zero();
        for (p1, c1) in a1.terms() {
            for (p2, c2) in a2.terms() {
                let v = self.number(p1, p2, kind)?;
                if !v.is_zero() {
                    total += c1 * c2 * v;
                }
            }
        }
        Ok(total)
    }

    fn check_kind(&self, kind: IntKind) -> Result<()> {
        if let IntKind::Weighted(q) = kind {
            let dm = self.order.alg.discriminant() * self.order.level;
            if q < 2 || !dm.is_multiple_of(q) {
                return Err(Error::Precondition(format!(
                    "{q} does not divide the discriminant times the level"
                )));
            }
        }
        Ok(())
    }
}

/// ⟨φ₁, φ₂⟩ for the chosen kind.
pub fn intersection_number(phi1: &Embedding, phi2: &Embedding, kind: IntKind) -> Result<Rat> {
    Intersector::new(phi1.order.clone()).number(phi1, phi2, kind)
}

/// Approximate crossing point in ℍ.
pub fn crossing_point(phi1: &Embedding, phi2: &Embedding) -> Option<(f64, f64)> {
    let x = linkage(phi1, phi2).to_f64()?;
    let alg = &phi1.order.alg;
    let z = alg.mul(&phi1.g, &phi2.g).sub(&QuatElem::scalar(linkage(phi1, phi2)));
    let m = alg.real_embedding_f64(&z);
    let n = phi1.d.get() as f64 * phi2.d.get() as f64 - x * x;
    if n <= 0.0 || m[1][0] == 0.0 {
        return None;
    }
    // Fixed point of the elliptic matrix in the upper half plane.
    let re = (m[0][0] - m[1][1]) / (2.0 * m[1][0]);
    let im = n.sqrt() / m[1][0].abs();
    Some((re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;
    use crate::emb::{conjugate, make_embedding};
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

    fn emb(o: &Arc<EichlerOrder>, c: [i64; 4]) -> Embedding {
        make_embedding(o, &QuatElem::from_ints(c)).unwrap()
    }

    #[test]
    fn linkage_and_parity() {
        let o = ex61();
        let p1 = emb(&o, [0, 0, -1, 0]);
        let p2 = emb(&o, [0, -1, -8, 3]);
        let x = linkage(&p1, &p2);
        assert!(x.is_integer());
        assert_eq!(crate::arith::rat_to_i128(&x).unwrap().rem_euclid(2), 0);
        assert_eq!(linkage(&p1, &p1), rat(5));
        assert!(!transversal(&p1, &p1));
    }

    #[test]
    fn exact_sign_matches_endpoints() {
        let o = ex61();
        let p1 = emb(&o, [0, 0, -1, 0]);
        let p2 = emb(&o, [0, -1, -8, 3]);
        let p3 = emb(&o, [0, -2, 27, 10]);
        for u in o.enumerate_norm(1, 2) {
            let q = conjugate(&p2, &o.elem(&u)).unwrap();
            assert_eq!(geometric_sign(&p1, &q).is_some(), transversal(&p1, &q));
        }
        let mut it = Intersector::new(o.clone());
        let cs = it.crossings(&p2, &p3).unwrap();
        assert!(!cs.is_empty());
        for c in cs {
            let q = Embedding::from_coords_unchecked(o.clone(), p3.d, c.w);
            let s = geometric_sign(&p2, &q).expect("crossing");
            assert_eq!(crossing_sign(&p2, &q).unwrap(), s);
            assert_eq!(crossing_sign(&q, &p2).unwrap(), -s);
            assert_eq!(c.sign, s);
            assert_eq!(intersection_level(&p2, &q).unwrap(), c.level);
            let nd = c.negative_disc(12, 173);
            assert!(nd < 0 && nd.rem_euclid(4) <= 1);
        }
    }

    #[test]
    fn small_numbers() {
        let o = ex61();
        let p1 = emb(&o, [0, 0, -1, 0]);
        let p2 = emb(&o, [0, -1, -8, 3]);
        let p3 = emb(&o, [0, -2, 27, 10]);
        let mut it = Intersector::new(o.clone());
        assert_eq!(it.number(&p1, &p2, IntKind::Signed).unwrap(), rat(0));
        let s23 = it.number(&p2, &p3, IntKind::Signed).unwrap();
        assert_eq!(s23.abs(), rat(2));
        let s32 = it.number(&p3, &p2, IntKind::Signed).unwrap();
        assert_eq!(s32, -s23);
        let u23 = it.number(&p2, &p3, IntKind::Unsigned).unwrap();
        assert_eq!(u23, it.number(&p3, &p2, IntKind::Unsigned).unwrap());
        assert!(it.number(&p1, &p2, IntKind::Weighted(3)).is_err());
    }
}
