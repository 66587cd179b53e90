//! Certified real intervals with exact rational endpoints.
//!
//! Square roots are enclosed by dyadic rationals at a caller-chosen number of
//! fractional bits, so every interval produced here provably contains the
//! real value it stands for.

use crate::arith::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// Enclosure of sqrt(x) for x >= 0 using `bits` fractional bits.
    pub fn sqrt_of(x: &Rat, bits: u32) -> Self {
        assert!(!x.is_negative(), "sqrt of negative rational");
        if x.is_zero() {
            return Interval::point(Rat::zero());
        }
        let scale = BigInt::one() << (2 * bits as usize);
        // floor(sqrt(x * 4^bits)) bounds via the numerator/denominator split.
        let scaled = x * Rat::from_integer(scale);
        let lo_int = scaled.floor().to_integer().sqrt();
        let hi_int = {
            let c = scaled.ceil().to_integer();
            let s = c.sqrt();
            if &s * &s == c {
                s
            } else {
                s + 1
            }
        };
        let den = BigInt::one() << bits as usize;
        Interval::new(Rat::new(lo_int, den.clone()), Rat::new(hi_int, den))
    }

    /// Enclosure of sqrt of an interval with non-negative lower end.
    pub fn sqrt(&self, bits: u32) -> Self {
        let lo = Interval::sqrt_of(&self.lo, bits).lo;
        let hi = Interval::sqrt_of(&self.hi, bits).hi;
        Interval::new(lo, hi)
    }

    /// Reciprocal; `None` if the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Interval::new(self.hi.recip(), self.lo.recip()))
        } else {
            None
        }
    }

    pub fn div(&self, other: &Interval) -> Option<Self> {
        Some(self * &other.recip()?)
    }

    /// Strict comparison, or `None` if the intervals overlap.
    pub fn cmp_strict(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Sign if determined.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl From<Rat> for Interval {
    fn from(x: Rat) -> Self {
        Interval::point(x)
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.lo_f64(), self.hi_f64())
    }
}

impl Interval {
    fn lo_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.lo.to_f64().unwrap_or(f64::NAN)
    }
    fn hi_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}

/// A 2x2 matrix of intervals.
#[derive(Clone, Debug)]
pub struct IntervalMatrix(pub [[Interval; 2]; 2]);

impl IntervalMatrix {
    pub fn trace(&self) -> Interval {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn det(&self) -> Interval {
        &(&self.0[0][0] * &self.0[1][1]) - &(&self.0[0][1] * &self.0[1][0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    #[test]
    fn sqrt_encloses() {
        for n in [2i64, 3, 5, 7, 173] {
            let iv = Interval::sqrt_of(&rat(n), 64);
            assert!(&iv.lo * &iv.lo <= rat(n));
            assert!(&iv.hi * &iv.hi >= rat(n));
            assert!(iv.width() <= rat_frac(1, 1 << 62));
        }
        let four = Interval::sqrt_of(&rat(4), 10);
        assert_eq!(four, Interval::point(rat(2)));
    }

    #[test]
    fn arithmetic_contains_exact() {
        let a = Interval::new(rat(-1), rat(2));
        let b = Interval::new(rat(3), rat(4));
        let p = &a * &b;
        assert_eq!(p, Interval::new(rat(-4), rat(8)));
        assert!(a.recip().is_none());
        assert_eq!(b.recip().unwrap(), Interval::new(rat_frac(1, 4), rat_frac(1, 3)));
        assert_eq!(a.cmp_strict(&b), Some(Ordering::Less));
        assert_eq!(a.cmp_strict(&Interval::point(rat(0))), None);
        assert_eq!(Interval::point(rat(5)).cmp_strict(&b), Some(Ordering::Greater));
    }
}
