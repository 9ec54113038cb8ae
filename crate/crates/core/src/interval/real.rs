use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};

/// Closed real interval with dyadic endpoints.
///
/// Every operation rounds its endpoints outward to `prec` bits, so the
/// result always contains the exact image of the inputs.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Interval::new(x.clone(), x, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(n), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_ratio(num, den, prec, Round::Down),
            hi: Dyadic::from_ratio(num, den, prec, Round::Up),
            prec,
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval::from_ratio(q.numer(), q.denom(), prec)
    }

    /// Midpoint-radius construction.
    pub fn ball(mid: &Dyadic, rad: &Dyadic, prec: u32) -> Self {
        let r = rad.abs();
        Interval::new(mid.sub(&r), mid.add(&r), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    /// Upper bound on the distance from the midpoint to either endpoint.
    pub fn rad(&self) -> Dyadic {
        self.width().mul_pow2(-1)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let lo = BigRational::new(self.lo.ratio().0, self.lo.ratio().1);
        let hi = BigRational::new(self.hi.ratio().0, self.hi.ratio().1);
        &lo <= q && q <= &hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    /// `true` when the width is at most `2^-bits`.
    pub fn width_at_most_pow2(&self, bits: i64) -> bool {
        let w = self.width();
        w.is_zero() || w.msb() <= -bits
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = self.lo.abs().max(self.hi.clone());
            Interval { lo: Dyadic::zero(), hi: m, prec: self.prec }
        } else if self.hi.is_negative() || (self.hi.is_zero() && self.lo.is_negative()) {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Interval {
        let a = self.abs();
        Interval::new(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.prec)
    }

    pub fn pow(&self, n: u32) -> Interval {
        let mut acc = Interval::from_int(1, self.prec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_int(&self, n: &BigInt) -> Interval {
        self * &Interval::from_int(n.clone(), self.prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Interval {
        Interval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    /// `None` when the divisor contains zero.
    pub fn checked_div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let p = self.prec.max(other.prec);
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = cands.iter().map(|(a, b)| a.div(b, p, Round::Down)).min().unwrap();
        let hi = cands.iter().map(|(a, b)| a.div(b, p, Round::Up)).max().unwrap();
        Some(Interval { lo, hi, prec: p })
    }

    pub fn div_int(&self, n: &BigInt) -> Interval {
        self.checked_div(&Interval::from_int(n.clone(), self.prec)).expect("division by zero integer")
    }

    /// Square root; negative parts are clamped to zero. `None` if entirely negative.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_negative() { Dyadic::zero() } else { self.lo.sqrt(self.prec, Round::Down) };
        Some(Interval { lo, hi: self.hi.sqrt(self.prec, Round::Up), prec: self.prec })
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl<'a> Add<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let p = self.prec.max(rhs.prec);
        Interval::new(self.lo.add(&rhs.lo), self.hi.add(&rhs.hi), p)
    }
}

impl<'a> Sub<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        let p = self.prec.max(rhs.prec);
        Interval::new(self.lo.sub(&rhs.hi), self.hi.sub(&rhs.lo), p)
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let p = self.prec.max(rhs.prec);
        let prods = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let lo = prods.iter().min().unwrap().clone();
        let hi = prods.iter().max().unwrap().clone();
        Interval::new(lo, hi, p)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: f64) -> Interval {
        Interval::point(Dyadic::from_f64(x), 64)
    }

    #[test]
    fn arithmetic_encloses() {
        let third = Interval::from_ratio(&1.into(), &3.into(), 64);
        let one = &third.mul_int(&3.into()) - &iv(1.0);
        assert!(one.contains_zero());
        let q = iv(1.0).checked_div(&iv(3.0)).unwrap();
        assert!(q.overlaps(&third));
        assert!(iv(1.0).checked_div(&Interval::new(Dyadic::from_f64(-1.0), Dyadic::one(), 64)).is_none());
    }

    #[test]
    fn sqrt_two_squared() {
        let s = iv(2.0).sqrt().unwrap();
        let back = s.square();
        assert!(back.contains(&Dyadic::from_int(2)));
        assert!(back.width_at_most_pow2(60));
    }

    #[test]
    fn abs_and_square_of_straddling() {
        let x = Interval::new(Dyadic::from_f64(-2.0), Dyadic::from_f64(1.0), 32);
        let a = x.abs();
        assert_eq!(a.lo(), &Dyadic::zero());
        assert_eq!(a.hi(), &Dyadic::from_int(2));
        assert_eq!(x.square().hi(), &Dyadic::from_int(4));
    }
}
