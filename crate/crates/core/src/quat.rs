//! Indefinite quaternion algebras over Q, their orders, and coset spaces Θ(n).

use crate::arith::{factor, gcd_u64, rat, Rat};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix};
use crate::linalg::{column_echelon, det, inverse, RatMatrix};
use crate::qnum::kronecker;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// The algebra (a, b | Q): i² = a, j² = b, k = ij = -ji, normalized to a > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatAlgebra {
    pub a: i128,
    pub b: i128,
    disc: u64,
    ramified: Vec<u64>,
}

impl QuatAlgebra {
    /// Build the algebra, swapping i and j if a < 0 < b. Definite algebras are rejected.
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::Precondition("a and b must be nonzero".into()));
        }
        let (a, b) = if a < 0 { (b, a) } else { (a, b) };
        if a < 0 {
            return Err(Error::DefiniteAlgebra);
        }
        let ramified = ramified_primes(a, b)?;
        let disc = ramified.iter().product();
        Ok(QuatAlgebra {
            a: a as i128,
            b: b as i128,
            disc,
            ramified,
        })
    }

    pub fn discriminant(&self) -> u64 {
        self.disc
    }

    pub fn ramified(&self) -> &[u64] {
        &self.ramified
    }

    pub fn mul(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        let a = Rat::from_integer(self.a.into());
        let b = Rat::from_integer(self.b.into());
        let ab = &a * &b;
        let [x0, x1, x2, x3] = &x.0;
        let [y0, y1, y2, y3] = &y.0;
        QuatElem([
            x0 * y0 + &a * x1 * y1 + &b * x2 * y2 - &ab * x3 * y3,
            x0 * y1 + x1 * y0 - &b * x2 * y3 + &b * x3 * y2,
            x0 * y2 + x2 * y0 + &a * x1 * y3 - &a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }

    pub fn nrd(&self, x: &QuatElem) -> Rat {
        let a = Rat::from_integer(self.a.into());
        let b = Rat::from_integer(self.b.into());
        let [x0, x1, x2, x3] = &x.0;
        x0 * x0 - &a * x1 * x1 - &b * x2 * x2 + &a * &b * x3 * x3
    }

    pub fn inverse(&self, x: &QuatElem) -> Result<QuatElem> {
        let n = self.nrd(x);
        if n.is_zero() {
            return Err(Error::ZeroNorm);
        }
        Ok(x.conj().scale(&n.recip()))
    }

    /// ι(x) with ι(i) = diag(√a, -√a), ι(j) = [[0, b], [1, 0]].
    pub fn real_embedding(&self, x: &QuatElem, bits: u32) -> IntervalMatrix {
        let s = Interval::sqrt_of(&Rat::from_integer(self.a.into()), bits);
        let p = |q: &Rat| Interval::point(q.clone());
        let [x0, x1, x2, x3] = &x.0;
        let b = p(&Rat::from_integer(self.b.into()));
        let s1 = &p(x1) * &s;
        let s3 = &p(x3) * &s;
        IntervalMatrix([[&p(x0) + &s1, &b * &(&p(x2) + &s3)], [&p(x2) - &s3, &p(x0) - &s1]])
    }

    /// ι(x) in floating point.
    pub fn real_embedding_f64(&self, x: &QuatElem) -> [[f64; 2]; 2] {
        let s = (self.a as f64).sqrt();
        let f = |q: &Rat| q.to_f64().unwrap_or(f64::NAN);
        let [x0, x1, x2, x3] = [f(&x.0[0]), f(&x.0[1]), f(&x.0[2]), f(&x.0[3])];
        let b = self.b as f64;
        [[x0 + x1 * s, b * (x2 + x3 * s)], [x2 - x3 * s, x0 - x1 * s]]
    }
}

/// Hilbert symbol (a, b)_p for a prime p.
pub fn hilbert_symbol(a: i64, b: i64, p: u64) -> i32 {
    let split = |x: i64| {
        let mut u = x;
        let mut v = 0u32;
        while u % p as i64 == 0 {
            u /= p as i64;
            v += 1;
        }
        (v, u)
    };
    let (al, u) = split(a);
    let (be, v) = split(b);
    if p == 2 {
        let eps = |x: i64| (x - 1).div_euclid(2).rem_euclid(2);
        let omega = |x: i64| {
            let x = x as i128;
            ((x * x - 1) / 8).rem_euclid(2) as i64
        };
        let e = eps(u) * eps(v) + al as i64 * omega(v) + be as i64 * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let leg = |x: i64| kronecker(x as i128, p);
        let mut s = if (al as u64 * be as u64 * ((p - 1) / 2)).is_multiple_of(2) {
            1
        } else {
            -1
        };
        if be % 2 == 1 {
            s *= leg(u);
        }
        if al % 2 == 1 {
            s *= leg(v);
        }
        s
    }
}

/// Finite primes at which (a, b | Q) ramifies.
pub fn ramified_primes(a: i64, b: i64) -> Result<Vec<u64>> {
    if a < 0 && b < 0 {
        return Err(Error::DefiniteAlgebra);
    }
    let mut cands: Vec<u64> = vec![2];
    for x in [a, b] {
        for (p, _) in factor(x.unsigned_abs()) {
            if !cands.contains(&p) {
                cands.push(p);
            }
        }
    }
    cands.sort_unstable();
    let out: Vec<u64> = cands.into_iter().filter(|&p| hilbert_symbol(a, b, p) == -1).collect();
    debug_assert!(out.len().is_multiple_of(2));
    Ok(out)
}

/// x0 + x1 i + x2 j + x3 k with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuatElem(pub [Rat; 4]);

impl QuatElem {
    pub fn new(c: [Rat; 4]) -> Self {
        QuatElem(c)
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        QuatElem(c.map(rat))
    }

    pub fn scalar(x: Rat) -> Self {
        QuatElem([x, Rat::zero(), Rat::zero(), Rat::zero()])
    }

    pub fn one() -> Self {
        QuatElem::scalar(Rat::one())
    }

    pub fn trd(&self) -> Rat {
        &self.0[0] * rat(2)
    }

    pub fn conj(&self) -> Self {
        QuatElem([self.0[0].clone(), -&self.0[1], -&self.0[2], -&self.0[3]])
    }

    pub fn scale(&self, s: &Rat) -> Self {
        QuatElem(self.0.clone().map(|x| x * s))
    }

    pub fn add(&self, o: &QuatElem) -> Self {
        QuatElem([0, 1, 2, 3].map(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &QuatElem) -> Self {
        QuatElem([0, 1, 2, 3].map(|i| &self.0[i] - &o.0[i]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

impl fmt::Display for QuatElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        let mut first = true;
        for (c, n) in self.0.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let coef = crate::arith::fmt_rat(&abs);
            match (n.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{coef}")?,
                (false, true) => write!(f, "{n}")?,
                (false, false) => write!(f, "{coef}{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integer coordinates in an order basis.
pub type Coords = [i128; 4];

/// An Eichler order given by a Z-basis whose first element is 1.
#[derive(Clone, Debug)]
pub struct EichlerOrder {
    pub alg: QuatAlgebra,
    pub level: u64,
    basis: Vec<QuatElem>,
    basis_inv: RatMatrix,
    mult: [[[i128; 4]; 4]; 4],
    tr: [i128; 4],
    bil: [[i128; 4]; 4],
    basis_f64: [[f64; 4]; 4],
    units: std::sync::OnceLock<Vec<Coords>>,
}

impl PartialEq for EichlerOrder {
    fn eq(&self, o: &Self) -> bool {
        self.alg == o.alg && self.level == o.level && self.basis == o.basis
    }
}

impl EichlerOrder {
    /// Validate a lattice as an order of reduced discriminant 𝔇·level.
    pub fn new(alg: QuatAlgebra, basis: Vec<QuatElem>, level: u64) -> Result<Self> {
        if basis.len() != 4 {
            return Err(Error::Precondition("an order basis has four elements".into()));
        }
        if gcd_u64(level, alg.discriminant()) != 1 {
            return Err(Error::GcdViolation {
                n: level,
                m: alg.discriminant(),
            });
        }
        let m: RatMatrix = basis.iter().map(|e| e.0.to_vec()).collect();
        let inv = inverse(&m).ok_or_else(|| Error::Precondition("basis is not of full rank".into()))?;
        let basis = canonical_basis(&basis, &inv)?;
        let m: RatMatrix = basis.iter().map(|e| e.0.to_vec()).collect();
        let inv = inverse(&m).unwrap();
        let coords = |x: &QuatElem| -> Option<Coords> {
            let v = crate::linalg::vec_mat(&x.0, &inv);
            let mut out = [0i128; 4];
            for (o, c) in out.iter_mut().zip(&v) {
                *o = crate::arith::rat_to_i128(c)?;
            }
            Some(out)
        };
        let mut mult = [[[0i128; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                mult[i][j] = coords(&alg.mul(&basis[i], &basis[j])).ok_or(Error::NotARing)?;
            }
        }
        let mut tr = [0i128; 4];
        for (i, e) in basis.iter().enumerate() {
            let t = e.trd();
            let n = alg.nrd(e);
            if !t.is_integer() || !n.is_integer() {
                return Err(Error::NotIntegral(format!("basis element {e}")));
            }
            tr[i] = crate::arith::rat_to_i128(&t).unwrap();
        }
        let mut bil = [[0i128; 4]; 4];
        let mut gram: RatMatrix = vec![vec![Rat::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let p = alg.mul(&basis[i], &basis[j].conj());
                bil[i][j] = crate::arith::rat_to_i128(&p.trd()).ok_or(Error::NotARing)?;
                gram[i][j] = alg.mul(&basis[i], &basis[j]).trd();
            }
        }
        let d2 = det(&gram).abs();
        let expected = alg.discriminant() as i128 * level as i128;
        let found = crate::arith::is_square_big(d2.numer())
            .filter(|_| d2.is_integer())
            .and_then(|s| s.to_i128());
        if found != Some(expected) {
            let shown = match found {
                Some(f) => f.to_string(),
                None => format!("sqrt({})", crate::arith::fmt_rat(&d2)),
            };
            return Err(Error::LevelMismatch {
                found: shown,
                expected: expected.to_string(),
            });
        }
        let mut basis_f64 = [[0f64; 4]; 4];
        for (row, e) in basis_f64.iter_mut().zip(&basis) {
            for (x, c) in row.iter_mut().zip(&e.0) {
                *x = c.to_f64().unwrap();
            }
        }
        let units = std::sync::OnceLock::new();
        Ok(EichlerOrder {
            alg,
            level,
            basis,
            basis_inv: inv,
            mult,
            tr,
            bil,
            basis_f64,
            units,
        })
    }

    pub fn basis(&self) -> &[QuatElem] {
        &self.basis
    }

    /// Reduced discriminant 𝔇·𝔐.
    pub fn reduced_discriminant(&self) -> u64 {
        self.alg.discriminant() * self.level
    }

    pub fn rat_coords(&self, x: &QuatElem) -> Vec<Rat> {
        crate::linalg::vec_mat(&x.0, &self.basis_inv)
    }

    /// Integer coordinates of x, or `None` if x is not in the order.
    pub fn coords(&self, x: &QuatElem) -> Option<Coords> {
        let v = self.rat_coords(x);
        let mut out = [0i128; 4];
        for (o, c) in out.iter_mut().zip(&v) {
            *o = crate::arith::rat_to_i128(c)?;
        }
        Some(out)
    }

    pub fn contains(&self, x: &QuatElem) -> bool {
        self.coords(x).is_some()
    }

    pub fn elem(&self, c: &Coords) -> QuatElem {
        let mut out = QuatElem::scalar(Rat::zero());
        for (ci, e) in c.iter().zip(&self.basis) {
            if *ci != 0 {
                out = out.add(&e.scale(&Rat::from_integer(BigInt::from(*ci))));
            }
        }
        out
    }

    /// Coordinates in 1, i, j, k as floats.
    pub fn std_f64(&self, c: &Coords) -> [f64; 4] {
        let mut out = [0f64; 4];
        for (ci, row) in c.iter().zip(&self.basis_f64) {
            for k in 0..4 {
                out[k] += *ci as f64 * row[k];
            }
        }
        out
    }

    /// Squared Frobenius norm of ι(x).
    pub fn frobenius(&self, c: &Coords) -> f64 {
        let [x0, x1, x2, x3] = self.std_f64(c);
        let s = (self.alg.a as f64).sqrt();
        let b = self.alg.b as f64;
        let m = [x0 + x1 * s, b * (x2 + x3 * s), x2 - x3 * s, x0 - x1 * s];
        m.iter().map(|v| v * v).sum()
    }

    /// The shortest norm-1 elements other than ±1, by Frobenius norm of ι.
    pub fn short_units(&self) -> &[Coords] {
        self.units.get_or_init(|| {
            let mut us: Vec<(f64, Coords)> = self
                .enumerate_norm(1, 10)
                .into_iter()
                .filter(|u| u[1] != 0 || u[2] != 0 || u[3] != 0)
                .map(|u| (self.frobenius(&u), u))
                .collect();
            us.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            us.truncate(120);
            us.into_iter().map(|(_, u)| u).collect()
        })
    }

    pub fn mul_c(&self, x: &Coords, y: &Coords) -> Coords {
        let mut z = [0i128; 4];
        for i in 0..4 {
            if x[i] == 0 {
                continue;
            }
            for j in 0..4 {
                if y[j] == 0 {
                    continue;
                }
                let s = x[i] * y[j];
                let m = &self.mult[i][j];
                for k in 0..4 {
                    z[k] += s * m[k];
                }
            }
        }
        z
    }

    pub fn trd_c(&self, x: &Coords) -> i128 {
        (0..4).map(|i| self.tr[i] * x[i]).sum()
    }

    pub fn nrd_c(&self, x: &Coords) -> i128 {
        let mut n = 0;
        for i in 0..4 {
            n += self.bil[i][i] / 2 * x[i] * x[i];
            for j in i + 1..4 {
                n += self.bil[i][j] * x[i] * x[j];
            }
        }
        n
    }

    /// trd(x ȳ).
    pub fn bil_c(&self, x: &Coords, y: &Coords) -> i128 {
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                s += self.bil[i][j] * x[i] * y[j];
            }
        }
        s
    }

    pub fn conj_c(&self, x: &Coords) -> Coords {
        [self.trd_c(x) - x[0], -x[1], -x[2], -x[3]]
    }

    /// Whether O·x = O·y for x, y of norm n, i.e. x ȳ / n ∈ O.
    pub fn coset_equal_c(&self, x: &Coords, y: &Coords, n: i128) -> bool {
        self.mul_c(x, &self.conj_c(y)).iter().all(|c| c % n == 0)
    }

    pub fn coset_equal(&self, x: &QuatElem, y: &QuatElem, n: i64) -> Result<bool> {
        let nn = rat(n);
        for z in [x, y] {
            let m = self.alg.nrd(z);
            if m != nn {
                return Err(Error::NormMismatch {
                    expected: n.to_string(),
                    found: crate::arith::fmt_rat(&m),
                });
            }
        }
        let q = self.alg.mul(x, &y.conj()).scale(&nn.recip());
        Ok(self.contains(&q))
    }

    /// All elements of reduced norm n with coordinates in [-h, h].
    pub fn enumerate_norm(&self, n: i128, h: i128) -> Vec<Coords> {
        let mut out = Vec::new();
        self.enumerate_norm_with(n, h, |c| {
            out.push(*c);
            true
        });
        out
    }

    /// Calls `f` on each element of norm n in the box until it returns false.
    pub fn enumerate_norm_with(&self, n: i128, h: i128, mut f: impl FnMut(&Coords) -> bool) {
        // nrd is quadratic in the last coordinate: A t² + B t + C.
        let qa = self.bil[3][3] / 2;
        for c0 in -h..=h {
            for c1 in -h..=h {
                for c2 in -h..=h {
                    let base = [c0, c1, c2, 0];
                    let c = self.nrd_c(&base) - n;
                    let b = self.bil[0][3] * c0 + self.bil[1][3] * c1 + self.bil[2][3] * c2;
                    for t in solve_quadratic(qa, b, c) {
                        if t.abs() <= h && !f(&[c0, c1, c2, t]) {
                            return;
                        }
                    }
                }
            }
        }
    }

    /// Left coset representatives Θ(n) as order coordinates.
    pub fn theta_c(&self, n: u64) -> Result<Vec<Coords>> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        if gcd_u64(n, self.level) != 1 {
            return Err(Error::GcdViolation { n, m: self.level });
        }
        let mut reps: Vec<Coords> = vec![[1, 0, 0, 0]];
        let mut norm = 1i128;
        for (p, k) in factor(n) {
            let pk = self.theta_prime_power(p, k);
            let pkn = (p as i128).pow(k);
            let mut next = Vec::with_capacity(reps.len() * pk.len());
            for x in &reps {
                for y in &pk {
                    next.push(self.mul_c(x, y));
                }
            }
            norm *= pkn;
            reps = dedupe(self, next, norm);
        }
        debug_assert_eq!(reps.len() as u64, self.theta_size(n));
        Ok(reps)
    }

    pub fn theta(&self, n: u64) -> Result<Vec<QuatElem>> {
        Ok(self.theta_c(n)?.iter().map(|c| self.elem(c)).collect())
    }

    /// σ'(n): sum of the divisors of n coprime to 𝔇.
    pub fn theta_size(&self, n: u64) -> u64 {
        factor(n)
            .into_iter()
            .map(|(p, k)| {
                if self.alg.discriminant().is_multiple_of(p) {
                    1
                } else {
                    (0..=k).map(|i| p.pow(i)).sum()
                }
            })
            .product()
    }

    fn theta_prime(&self, p: u64) -> Vec<Coords> {
        let target = if self.alg.discriminant().is_multiple_of(p) {
            1
        } else {
            p as usize + 1
        };
        let pn = p as i128;
        let mut reps: Vec<Coords> = Vec::new();
        let mut h = 8;
        loop {
            self.enumerate_norm_with(pn, h, |c| {
                if !reps.iter().any(|r| self.coset_equal_c(r, c, pn)) {
                    reps.push(*c);
                }
                reps.len() < target
            });
            if reps.len() == target {
                return reps;
            }
            h *= 2;
            assert!(h <= 1 << 12, "Θ({p}) search exhausted");
        }
    }

    fn theta_prime_power(&self, p: u64, k: u32) -> Vec<Coords> {
        let base = self.theta_prime(p);
        let mut reps = base.clone();
        let mut norm = p as i128;
        for _ in 1..k {
            let mut next = Vec::new();
            for x in &reps {
                for y in &base {
                    next.push(self.mul_c(x, y));
                }
            }
            norm *= p as i128;
            reps = dedupe(self, next, norm);
        }
        reps
    }

    /// An element ω_p of norm p for p | 𝔇.
    pub fn normalizer_element(&self, p: u64) -> Result<QuatElem> {
        if !self.alg.discriminant().is_multiple_of(p) || !crate::arith::is_prime(p) {
            return Err(Error::Precondition(format!(
                "{p} is not a prime dividing the discriminant"
            )));
        }
        Ok(self.elem(&self.theta_prime(p)[0]))
    }

    pub fn normalizer_element_c(&self, p: u64) -> Result<Coords> {
        self.normalizer_element(p).map(|x| self.coords(&x).unwrap())
    }
}

fn dedupe(o: &EichlerOrder, xs: Vec<Coords>, n: i128) -> Vec<Coords> {
    let mut out: Vec<Coords> = Vec::new();
    for x in xs {
        if !out.iter().any(|r| o.coset_equal_c(r, &x, n)) {
            out.push(x);
        }
    }
    out
}

/// Integer roots of a t² + b t + c = 0.
pub fn solve_quadratic(a: i128, b: i128, c: i128) -> Vec<i128> {
    if a == 0 {
        if b == 0 {
            return Vec::new();
        }
        return if c % b == 0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4 * a * c;
    let Some(s) = crate::arith::is_square_i128(disc) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for num in [-b + s, -b - s] {
        if num % (2 * a) == 0 {
            let t = num / (2 * a);
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// Rewrite the basis so that its first element is 1.
fn canonical_basis(basis: &[QuatElem], inv: &RatMatrix) -> Result<Vec<QuatElem>> {
    if basis[0] == QuatElem::one() {
        return Ok(basis.to_vec());
    }
    let v = crate::linalg::vec_mat(&QuatElem::one().0, inv);
    let mut vi = Vec::with_capacity(4);
    for c in &v {
        vi.push(crate::arith::rat_to_i128(c).ok_or(Error::NotARing)?);
    }
    // v·u = (g, 0, 0, 0) with u unimodular; the rows of u⁻¹ start with v.
    let (h, u, _) = column_echelon(&[vi]);
    if h[0][0] != 1 {
        return Err(Error::NotARing);
    }
    let um: RatMatrix = u
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_integer((*x).into())).collect())
        .collect();
    let uinv = inverse(&um).unwrap();
    Ok(uinv
        .iter()
        .map(|row| {
            let mut e = QuatElem::scalar(Rat::zero());
            for (c, b) in row.iter().zip(basis) {
                e = e.add(&b.scale(c));
            }
            e
        })
        .collect())
}
