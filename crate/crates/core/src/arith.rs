//! Small integer and rational helpers shared by the number-theoretic modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn xgcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt_i128(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative number");
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let s = isqrt_i128(n);
    (s * s == n).then_some(s)
}

pub fn is_square_big(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as (prime, exponent) pairs in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// gcd of a list of rationals: gcd of numerators over lcm of denominators.
pub fn rat_gcd<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Rat {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        num = num.gcd(x.numer());
        den = den.lcm(x.denom());
    }
    Rat::new(num, den)
}

pub fn rat_to_i128(x: &Rat) -> Option<i128> {
    if !x.is_integer() {
        return None;
    }
    x.numer().to_i128()
}

pub fn big_to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("integer does not fit in i128")
}

/// Parse "p/q" or "n" into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xgcd_identity() {
        for (a, b) in [(12, 18), (-7, 5), (0, 3), (35, -14)] {
            let (g, x, y) = xgcd_i128(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, gcd_i128(a, b));
        }
    }

    #[test]
    fn isqrt_edges() {
        for n in 0..2000i128 {
            let s = isqrt_i128(n);
            assert!(s * s <= n && (s + 1) * (s + 1) > n);
        }
        let big = (1i128 << 100) + 12345;
        let s = isqrt_i128(big);
        assert!(s * s <= big && (s + 1) * (s + 1) > big);
    }

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert!(is_prime(97) && !is_prime(91));
    }

    #[test]
    fn rational_parse_roundtrip() {
        let q = parse_rat("-3/6").unwrap();
        assert_eq!(fmt_rat(&q), "-1/2");
        assert_eq!(fmt_rat(&parse_rat("7").unwrap()), "7");
        assert!(parse_rat("1/0").is_none());
        assert_eq!(rat_gcd([&rat_frac(1, 2), &rat_frac(3, 4)]), rat_frac(1, 4));
    }
}
