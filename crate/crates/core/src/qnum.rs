//! Real quadratic orders: Kronecker symbols, fundamental units, unit towers,
//! indefinite binary quadratic forms and narrow class groups.

use crate::arith::{gcd_i128, is_prime, isqrt_i128, xgcd_i128};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Discriminant of a real quadratic order: positive, non-square, 0 or 1 mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Discriminant(u64);

impl Discriminant {
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 || d % 4 > 1 || isqrt_i128(d as i128).pow(2) == d as i128 {
            return Err(Error::InvalidDiscriminant(d as i128));
        }
        Ok(Discriminant(d))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_i128(self) -> i128 {
        self.0 as i128
    }

    /// Parity p_D in {0, 1} with p_D ≡ D (mod 2).
    pub fn parity(self) -> i128 {
        (self.0 % 2) as i128
    }
}

impl TryFrom<u64> for Discriminant {
    type Error = Error;
    fn try_from(d: u64) -> Result<Self> {
        Discriminant::new(d)
    }
}

impl From<Discriminant> for u64 {
    fn from(d: Discriminant) -> u64 {
        d.0
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_discriminant(d: i128) -> bool {
    d > 0 && d.rem_euclid(4) <= 1 && isqrt_i128(d).pow(2) != d
}

/// Kronecker symbol (D/p) for a prime p.
pub fn kronecker(d: i128, p: u64) -> i32 {
    assert!(is_prime(p), "kronecker symbol needs a prime modulus");
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let p128 = p as i128;
    let r = d.rem_euclid(p128);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p128 - 1) / 2, p128) == 1 {
        1
    } else {
        -1
    }
}

fn pow_mod(mut b: i128, mut e: i128, m: i128) -> i128 {
    let mut r = 1i128;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// ε = (T + U√D)/2 with norm +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadUnit {
    pub t: BigInt,
    pub u: BigInt,
    pub d: Discriminant,
}

impl QuadUnit {
    pub fn norm_ok(&self) -> bool {
        let d = BigInt::from(self.d.get());
        &self.t * &self.t - &d * &self.u * &self.u == BigInt::from(4)
    }

    pub fn log(&self) -> f64 {
        let t = self.t.to_f64().unwrap_or(f64::INFINITY);
        let u = self.u.to_f64().unwrap_or(f64::INFINITY);
        ((t + u * (self.d.get() as f64).sqrt()) / 2.0).ln()
    }
}

/// Fundamental unit of positive norm of the order of discriminant `d`.
///
/// Uses the continued fraction of the reduced number (P + √D)/2; a Pell
/// search is used only if the expansion ever produced a wrong unit.
pub fn fundamental_unit(d: Discriminant) -> QuadUnit {
    let (t, u, norm) = cf_unit(d.as_i128());
    let unit = if norm == 1 {
        QuadUnit { t, u, d }
    } else {
        let dd = BigInt::from(d.get());
        let t2 = (&t * &t + &dd * &u * &u) / 2;
        let u2 = &t * &u;
        QuadUnit { t: t2, u: u2, d }
    };
    if unit.norm_ok() {
        unit
    } else {
        assert!(d.get() < 1_000_000, "continued fraction produced a non-unit");
        pell_brute_force(d, 1 << 40).expect("no Pell solution found")
    }
}

/// (T, U, norm) of the fundamental unit of the order (any sign of norm).
fn cf_unit(d: i128) -> (BigInt, BigInt, i32) {
    let s = isqrt_i128(d);
    let mut p0 = s;
    if (p0 - d).rem_euclid(2) != 0 {
        p0 -= 1;
    }
    let q0 = 2i128;
    let (mut p, mut q) = (p0, q0);
    // q_{k-1}, q_{k-2} convergent denominators
    let (mut qk1, mut qk2) = (BigInt::zero(), BigInt::one());
    let mut len = 0usize;
    loop {
        let a = (p + s).div_euclid(q);
        let qk = BigInt::from(a) * &qk1 + &qk2;
        qk2 = std::mem::replace(&mut qk1, qk);
        len += 1;
        let np = a * q - p;
        let nq = (d - np * np) / q;
        p = np;
        q = nq;
        if p == p0 && q == q0 {
            break;
        }
    }
    // ε = q_{l-1} x0 + q_{l-2}, x0 = (P0 + √D)/2
    let t = &qk1 * BigInt::from(p0) + BigInt::from(2) * &qk2;
    let u = qk1;
    let norm = if len.is_multiple_of(2) { 1 } else { -1 };
    (t, u, norm)
}

/// Smallest U in 1..=max_u with D U^2 + 4 a perfect square.
pub fn pell_brute_force(d: Discriminant, max_u: i128) -> Option<QuadUnit> {
    let dd = d.as_i128();
    for u in 1i128..=max_u {
        let v = dd.checked_mul(u * u)?.checked_add(4)?;
        let t = isqrt_i128(v);
        if t * t == v {
            return Some(QuadUnit {
                t: t.into(),
                u: u.into(),
                d,
            });
        }
    }
    None
}

/// Coefficients (T_i, U_i) of ε^i.
pub fn unit_power(unit: &QuadUnit, i: u32) -> (BigInt, BigInt) {
    assert!(i >= 1);
    let d = BigInt::from(unit.d.get());
    let (mut ti, mut ui) = (unit.t.clone(), unit.u.clone());
    for _ in 1..i {
        let nt = (&unit.t * &ti + &d * &unit.u * &ui) / 2;
        let nu = (&unit.t * &ui + &unit.u * &ti) / 2;
        ti = nt;
        ui = nu;
    }
    (ti, ui)
}

/// Element A + Bω of Z[ω], ω = (p + √D)/2, reduced modulo `m`.
#[derive(Clone, Copy)]
struct ModElt {
    a: i128,
    b: i128,
}

struct ModRing {
    p: i128,
    c0: i128,
    m: i128,
}

impl ModRing {
    fn new(d: Discriminant, m: i128) -> Self {
        let p = d.parity();
        ModRing {
            p,
            c0: (d.as_i128() - p * p) / 4,
            m,
        }
    }

    fn from_unit(&self, unit: &QuadUnit) -> ModElt {
        let m = BigInt::from(self.m);
        let b = unit.u.mod_floor(&m);
        // A = (T - pU)/2
        let a: BigInt = (&unit.t - BigInt::from(self.p) * &unit.u) / 2;
        let a = a.mod_floor(&m);
        ModElt {
            a: a.to_i128().unwrap(),
            b: b.to_i128().unwrap(),
        }
    }

    fn mul(&self, x: ModElt, y: ModElt) -> ModElt {
        let m = self.m;
        let bb = x.b * y.b % m;
        let a = (x.a * y.a + bb * self.c0.rem_euclid(m)).rem_euclid(m);
        let b = (x.a * y.b + x.b * y.a + bb * self.p).rem_euclid(m);
        ModElt { a, b }
    }
}

/// Smallest i >= 1 with f | U_i, i.e. ε_{f²D} = ε_D^i.
pub fn unit_index(d: Discriminant, f: u64) -> u64 {
    if f == 1 {
        return 1;
    }
    let unit = fundamental_unit(d);
    let ring = ModRing::new(d, f as i128);
    let e = ring.from_unit(&unit);
    let mut x = e;
    let mut i = 1u64;
    while x.b != 0 {
        x = ring.mul(x, e);
        i += 1;
    }
    i
}

/// e_k^p(D): ε_{p^{2k}D} = ε_{p^{2k-2}D}^{e_k}.
pub fn tower_exponent(d: Discriminant, p: u64, k: u32) -> u64 {
    assert!(k >= 1 && is_prime(p));
    let pk = p.pow(k) as i128;
    let unit = fundamental_unit(d);
    let ring = ModRing::new(d, pk);
    let e = ring.from_unit(&unit);
    // ε^{e_1⋯e_{k-1}}
    let mut base = e;
    let pm = |j: u32| p.pow(j) as i128;
    let mut exps = Vec::new();
    for level in 1..=k {
        let modulus = pm(level);
        let mut x = base;
        let mut i = 1u64;
        while x.b % modulus != 0 {
            x = ring.mul(x, base);
            i += 1;
        }
        exps.push(i);
        base = x;
    }
    exps[k as usize - 1]
}

/// Write D = p^{2k} D' with D' p-fundamental.
pub fn p_fundamental_part(d: Discriminant, p: u64) -> (Discriminant, u32) {
    let mut cur = d.get();
    let mut k = 0;
    let p2 = p * p;
    while cur.is_multiple_of(p2) && is_discriminant((cur / p2) as i128) {
        cur /= p2;
        k += 1;
    }
    (Discriminant(cur), k)
}

pub fn is_p_fundamental(d: Discriminant, p: u64) -> bool {
    p_fundamental_part(d, p).1 == 0
}

/// Binary quadratic form a x^2 + b x y + c y^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bqf {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Bqf {
    pub fn new(a: i128, b: i128, c: i128) -> Self {
        Bqf { a, b, c }
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i128 {
        gcd_i128(gcd_i128(self.a, self.b), self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn principal(d: i128) -> Self {
        let p = d.rem_euclid(2);
        Bqf::new(1, p, (p - d) / 4)
    }

    /// Reducedness for indefinite forms: 0 < b < √D and √D - b < 2|a| < √D + b.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        let a2 = 2 * self.a.abs();
        self.b > 0
            && self.b * self.b < d
            && (a2 + self.b) * (a2 + self.b) > d
            && (a2 <= self.b || (a2 - self.b) * (a2 - self.b) < d)
    }

    /// One reduction step ρ, a proper equivalence.
    pub fn rho(&self) -> Bqf {
        let d = self.disc();
        let s = isqrt_i128(d);
        let c = self.c;
        let ac = c.abs();
        let m = 2 * ac;
        let r = if ac <= s {
            s - (s + self.b).rem_euclid(m)
        } else {
            // -|c| < r <= |c|, r ≡ -b (mod 2|c|)
            let mut r = (-self.b).rem_euclid(m);
            if r > ac {
                r -= m;
            }
            r
        };
        Bqf::new(c, r, (r * r - d) / (4 * c))
    }

    pub fn reduce(&self) -> Bqf {
        let mut f = *self;
        let mut steps = 0;
        while !f.is_reduced() {
            f = f.rho();
            steps += 1;
            assert!(steps < 100_000, "reduction did not terminate");
        }
        f
    }

    /// The ρ-cycle of a reduced form.
    pub fn cycle(&self) -> Vec<Bqf> {
        let start = self.reduce();
        let mut out = vec![start];
        let mut f = start.rho();
        while f != start {
            out.push(f);
            f = f.rho();
        }
        out
    }

    /// Proper (narrow) equivalence of two indefinite forms.
    pub fn equivalent(&self, other: &Bqf) -> bool {
        if self.disc() != other.disc() {
            return false;
        }
        let target = other.reduce();
        self.cycle().contains(&target)
    }

    /// Whether the form is properly equivalent to the principal form,
    /// i.e. whether it represents 1.
    pub fn is_principal(&self) -> bool {
        if !self.is_primitive() {
            return false;
        }
        self.cycle().iter().any(|f| f.a == 1)
    }

    /// Gauss composition of two primitive forms of the same discriminant.
    pub fn compose(&self, other: &Bqf) -> Bqf {
        let d = self.disc();
        assert_eq!(d, other.disc(), "composition needs equal discriminants");
        let (a1, b1) = (self.a, self.b);
        let (a2, b2) = (other.a, other.b);
        let s = (b1 + b2) / 2;
        let (g0, x0, y0) = xgcd_i128(a1, a2);
        let (e, u, z) = xgcd_i128(g0, s);
        let (x, y) = (u * x0, u * y0);
        let a3 = a1 * a2 / (e * e);
        let num = x * a1 * b2 + y * a2 * b1 + z * (b1 * b2 + d) / 2;
        let m = 2 * a3.abs();
        let b3 = (num / e).rem_euclid(m);
        let c3 = (b3 * b3 - d) / (4 * a3);
        Bqf::new(a3, b3, c3)
    }
}

/// Reduced primitive forms of discriminant d.
pub fn reduced_forms(d: Discriminant) -> Vec<Bqf> {
    let dd = d.as_i128();
    let mut out = Vec::new();
    let s = isqrt_i128(dd);
    let mut b = d.parity();
    if b == 0 {
        b = 2;
    }
    while b <= s {
        let n = (b * b - dd) / 4;
        let na = n.abs();
        let mut a = 1;
        while a * a <= na {
            if na % a == 0 {
                for aa in [a, na / a] {
                    for sa in [aa, -aa] {
                        let f = Bqf::new(sa, b, n / sa);
                        if f.is_primitive() && f.is_reduced() && !out.contains(&f) {
                            out.push(f);
                        }
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out
}

/// Narrow class number h⁺(D) by counting ρ-cycles of reduced forms.
pub fn narrow_class_number(d: Discriminant) -> u64 {
    let mut forms = reduced_forms(d);
    let mut count = 0;
    while let Some(f) = forms.pop() {
        let cyc = f.cycle();
        forms.retain(|g| !cyc.contains(g));
        count += 1;
    }
    count
}

/// Primitive form (p, b, c) of discriminant D representing p.
pub fn prime_form(d: Discriminant, p: u64) -> Result<Bqf> {
    let dd = d.as_i128();
    let p = p as i128;
    for b in 0..2 * p {
        if (b * b - dd).rem_euclid(4 * p) == 0 {
            let f = Bqf::new(p, b, (b * b - dd) / (4 * p));
            if f.is_primitive() {
                return Ok(f);
            }
            return Err(Error::NoPrimeForm {
                d: d.get(),
                p: p as u64,
            });
        }
    }
    Err(Error::NoPrimeForm {
        d: d.get(),
        p: p as u64,
    })
}

/// Order of the class of a prime above p in Cl⁺(D); 1 when p is inert.
pub fn prime_form_order(d: Discriminant, p: u64) -> Result<u64> {
    if kronecker(d.as_i128(), p) == -1 {
        return Ok(1);
    }
    let f = prime_form(d, p)?;
    let mut acc = f.reduce();
    let mut n = 1;
    while !acc.is_principal() {
        acc = acc.compose(&f).reduce();
        n += 1;
        if n > 1_000_000 {
            return Err(Error::Internal("prime form order search diverged".into()));
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: u64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    /// Residue oracle: is d a square modulo n?
    fn is_qr(d: i128, n: i128) -> bool {
        (0..n).any(|x| (x * x - d).rem_euclid(n) == 0)
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(5, 5), 0);
        // 5 mod 8 is not a square mod 8 among odd residues
        assert!(!is_qr(5, 8));
        assert_eq!(kronecker(5, 2), -1);
        assert!(is_qr(5, 11));
        assert_eq!(kronecker(5, 11), 1);
    }

    #[test]
    fn discriminant_validation() {
        assert!(Discriminant::new(5).is_ok());
        assert!(Discriminant::new(3).is_err());
        assert!(Discriminant::new(16).is_err());
        assert!(Discriminant::new(0).is_err());
    }

    #[test]
    fn fundamental_units() {
        for (d, t, u) in [(5u64, 3i64, 1i64), (8, 6, 2), (12, 4, 1)] {
            let e = fundamental_unit(disc(d));
            assert_eq!((e.t.clone(), e.u.clone()), (BigInt::from(t), BigInt::from(u)));
            assert_eq!(pell_brute_force(disc(d), 100).unwrap(), e);
        }
        for d in 5..400u64 {
            if let Ok(dd) = Discriminant::new(d) {
                let e = fundamental_unit(dd);
                assert!(e.norm_ok());
                if let Some(b) = pell_brute_force(dd, 200_000) {
                    assert_eq!(e, b, "D = {d}");
                } else {
                    assert!(e.u > BigInt::from(200_000));
                }
            }
        }
    }

    #[test]
    fn unit_powers() {
        let e = fundamental_unit(disc(5));
        assert_eq!(unit_power(&e, 1), (3.into(), 1.into()));
        assert_eq!(unit_power(&e, 2), (7.into(), 3.into()));
        assert_eq!(unit_power(&e, 3), (18.into(), 8.into()));
        let (t3, u3) = unit_power(&e, 3);
        assert_eq!(&t3 * &t3 - BigInt::from(5) * &u3 * &u3, BigInt::from(4));
    }

    #[test]
    fn tower_examples() {
        assert_eq!(tower_exponent(disc(5), 3, 1), 2);
        assert_eq!(tower_exponent(disc(5), 2, 1), 3);
        assert_eq!(tower_exponent(disc(5), 5, 1), 5);
        assert_eq!(unit_index(disc(5), 2), 3);
    }

    #[test]
    fn class_numbers() {
        assert_eq!(narrow_class_number(disc(5)), 1);
        assert_eq!(narrow_class_number(disc(12)), 2);
        assert_eq!(narrow_class_number(disc(40)), 2);
        assert_eq!(narrow_class_number(disc(13)), 1);
    }

    #[test]
    fn prime_form_orders() {
        assert_eq!(prime_form_order(disc(13), 3).unwrap(), 1);
        assert_eq!(prime_form_order(disc(12), 2).unwrap(), 2);
        assert_eq!(prime_form_order(disc(5), 11).unwrap(), 1);
        assert_eq!(prime_form_order(disc(33), 3).unwrap(), 1);
    }

    #[test]
    fn p_fundamental() {
        assert_eq!(p_fundamental_part(disc(45), 3), (disc(5), 1));
        assert_eq!(p_fundamental_part(disc(5), 3), (disc(5), 0));
        assert_eq!(p_fundamental_part(disc(48), 2), (disc(12), 1));
    }

    #[test]
    fn principal_form_is_identity() {
        let d = 60i128;
        let f = Bqf::new(2, 6, -3);
        assert_eq!(f.disc(), d);
        assert!(f.compose(&Bqf::principal(d)).equivalent(&f));
        assert!(Bqf::principal(d).is_principal());
    }
}
