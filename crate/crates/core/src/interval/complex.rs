use std::fmt;

use super::dyadic::Dyadic;
use super::real::Interval;

/// Rectangular complex interval.
#[derive(Clone, PartialEq, Eq)]
pub struct CInterval {
    re: Interval,
    im: Interval,
}

impl CInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        CInterval { re, im }
    }

    pub fn point(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        CInterval { re: Interval::point(re, prec), im: Interval::point(im, prec) }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.prec();
        CInterval { re, im: Interval::from_int(0, p) }
    }

    pub fn re(&self) -> &Interval {
        &self.re
    }

    pub fn im(&self) -> &Interval {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        CInterval { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add(&self, o: &CInterval) -> CInterval {
        CInterval { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &CInterval) -> CInterval {
        CInterval { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn neg(&self) -> CInterval {
        CInterval { re: -&self.re, im: -&self.im }
    }

    pub fn mul(&self, o: &CInterval) -> CInterval {
        CInterval {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale(&self, k: &Interval) -> CInterval {
        CInterval { re: &self.re * k, im: &self.im * k }
    }

    pub fn norm_sqr(&self) -> Interval {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> Interval {
        self.norm_sqr().sqrt().expect("nonnegative")
    }

    pub fn checked_div(&self, o: &CInterval) -> Option<CInterval> {
        let d = o.norm_sqr();
        if d.contains_zero() {
            return None;
        }
        let conj = CInterval { re: o.re.clone(), im: -&o.im };
        let n = self.mul(&conj);
        Some(CInterval { re: n.re.checked_div(&d)?, im: n.im.checked_div(&d)? })
    }

    /// A continuous branch of the square root over the box.
    ///
    /// Uses the principal branch when the box avoids the closed negative real
    /// axis, otherwise `i * sqrt(-z)`. Returns `None` if the box contains 0.
    pub fn sqrt_branch(&self) -> Option<CInterval> {
        if self.contains_zero() {
            return None;
        }
        let on_cut = !self.re.lo().is_positive() && self.im.contains_zero();
        if on_cut {
            let s = self.neg().principal_sqrt()?;
            // i * (a + bi) = -b + ai
            Some(CInterval { re: -&s.im, im: s.re })
        } else {
            self.principal_sqrt()
        }
    }

    fn principal_sqrt(&self) -> Option<CInterval> {
        let m = self.abs();
        if self.re.is_positive() {
            let re = (&m + &self.re).mul_pow2(-1).sqrt()?;
            let im = self.im.checked_div(&re.mul_pow2(1))?;
            Some(CInterval { re, im })
        } else {
            // left half-plane: the imaginary part has a fixed sign here
            if self.im.contains_zero() {
                return None;
            }
            let mut im = (&m - &self.re).mul_pow2(-1).sqrt()?;
            if self.im.is_negative() {
                im = -&im;
            }
            let re = self.im.checked_div(&im.mul_pow2(1))?;
            Some(CInterval { re, im })
        }
    }

    pub fn mid(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }

    pub fn overlaps(&self, o: &CInterval) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for CInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?} i)", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> CInterval {
        CInterval::point(Dyadic::from_f64(x), Dyadic::from_f64(y), 80)
    }

    #[test]
    fn mul_div() {
        let a = c(1.0, 2.0);
        let b = c(-3.0, 0.5);
        let q = a.mul(&b).checked_div(&b).unwrap();
        assert!(q.re().contains(&Dyadic::one()));
        assert!(q.im().contains(&Dyadic::from_int(2)));
    }

    #[test]
    fn sqrt_branches_square_back() {
        for (x, y) in [(3.0, 4.0), (-4.0, 0.0), (-1.0, 1e-30), (0.0, -2.0)] {
            let z = c(x, y);
            let s = z.sqrt_branch().unwrap();
            let back = s.mul(&s);
            assert!(back.re().contains(&Dyadic::from_f64(x)), "{x} {y}");
            assert!(back.im().contains(&Dyadic::from_f64(y)), "{x} {y}");
        }
        assert!(c(0.0, 0.0).sqrt_branch().is_none());
    }
}
