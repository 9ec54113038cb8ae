//! Certified elementary constants and functions on intervals.

use num_bigint::BigInt;

use super::dyadic::Dyadic;
use super::real::Interval;
use super::complex::CInterval;

const GUARD: u32 = 24;

fn work(prec: u32) -> u32 {
    prec + GUARD
}

/// Sum of `u^(2j+1) / (2j+1)` with alternating signs when `alternating`.
/// Requires `|u| <= 1/2`; the tail is enclosed by a symmetric error term.
fn odd_series(u: &Interval, alternating: bool, prec: u32) -> Interval {
    let u2 = u.square();
    let mut term = u.clone();
    let mut sum = Interval::from_int(0, prec);
    let mut j: u64 = 0;
    loop {
        let t = term.div_int(&BigInt::from(2 * j + 1));
        sum = if alternating && j % 2 == 1 { &sum - &t } else { &sum + &t };
        term = &term * &u2;
        j += 1;
        let mag = term.abs();
        if mag.hi().is_zero() || mag.hi().msb() < -(prec as i64 + 4) {
            // geometric tail bound: |tail| <= |term| / (1 - u^2) <= 2 |term|
            let r = mag.hi().mul_pow2(1);
            return &sum + &Interval::ball(&Dyadic::zero(), &r, prec);
        }
    }
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2(prec: u32) -> Interval {
    let w = work(prec);
    let third = Interval::from_ratio(&1.into(), &3.into(), w);
    odd_series(&third, false, w).mul_pow2(1).with_prec(prec)
}

/// pi via Machin's formula.
pub fn pi(prec: u32) -> Interval {
    let w = work(prec);
    let a = odd_series(&Interval::from_ratio(&1.into(), &5.into(), w), true, w);
    let b = odd_series(&Interval::from_ratio(&1.into(), &239.into(), w), true, w);
    (&a.mul_int(&16.into()) - &b.mul_int(&4.into())).with_prec(prec)
}

fn ln_point(x: &Dyadic, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of nonpositive value");
    let w = work(prec);
    let k = x.msb() - 1;
    let y = Interval::point(x.mul_pow2(-k), w);
    let one = Interval::from_int(1, w);
    let u = (&y - &one).checked_div(&(&y + &one)).expect("y + 1 > 0");
    let lny = odd_series(&u, false, w).mul_pow2(1);
    let res = &lny + &ln2(w).mul_int(&BigInt::from(k));
    res.with_prec(prec)
}

/// Natural logarithm of a positive interval.
pub fn ln(x: &Interval) -> Option<Interval> {
    if !x.is_positive() {
        return None;
    }
    let p = x.prec();
    let lo = ln_point(x.lo(), p);
    let hi = ln_point(x.hi(), p);
    Some(Interval::new(lo.lo().clone(), hi.hi().clone(), p))
}

/// atan on an interval contained in [-1, 1].
fn atan_small(u: &Interval) -> Interval {
    let w = u.prec();
    let one = Interval::from_int(1, w);
    let mut v = u.clone();
    // two half-angle reductions bring |v| below tan(pi/16)
    for _ in 0..2 {
        let s = (&one + &v.square()).sqrt().expect("positive");
        v = v.checked_div(&(&one + &s)).expect("positive");
    }
    odd_series(&v, true, w).mul_pow2(2)
}

fn atan_point(x: &Dyadic, prec: u32) -> Interval {
    let w = work(prec);
    let one = Dyadic::one();
    let r = if x.abs() <= one {
        atan_small(&Interval::point(x.clone(), w))
    } else {
        let inv = Interval::from_int(1, w).checked_div(&Interval::point(x.clone(), w)).unwrap();
        let half_pi = pi(w).mul_pow2(-1);
        let base = atan_small(&inv);
        if x.is_positive() {
            &half_pi - &base
        } else {
            &(-&half_pi) - &base
        }
    };
    r.with_prec(prec)
}

/// Arctangent of an interval (monotone, so endpoints suffice).
pub fn atan(x: &Interval) -> Interval {
    let p = x.prec();
    let lo = atan_point(x.lo(), p);
    let hi = atan_point(x.hi(), p);
    Interval::new(lo.lo().clone(), hi.hi().clone(), p)
}

fn atan2_point(y: &Dyadic, x: &Dyadic, prec: u32) -> Interval {
    let w = work(prec);
    let r = if x.is_zero() {
        let h = pi(w).mul_pow2(-1);
        if y.is_negative() {
            -&h
        } else {
            h
        }
    } else {
        let q = Interval::point(y.clone(), w).checked_div(&Interval::point(x.clone(), w)).unwrap();
        let base = atan(&q);
        if x.is_positive() {
            base
        } else if y.is_negative() {
            &base - &pi(w)
        } else {
            &base + &pi(w)
        }
    };
    r.with_prec(prec)
}

/// Enclosure of the argument of every point of a complex box.
///
/// Inside `(-pi, pi]` when the box stays off the negative real axis;
/// otherwise the enclosure is centred on `pi` and may exceed it.
pub fn arg(z: &CInterval) -> Option<Interval> {
    if z.contains_zero() {
        return None;
    }
    let p = z.prec();
    let crosses_cut = !z.re().lo().is_positive() && z.im().contains_zero();
    let (re, im, shift) = if crosses_cut {
        (-z.re(), -z.im(), true)
    } else {
        (z.re().clone(), z.im().clone(), false)
    };
    let corners = [
        (im.lo(), re.lo()),
        (im.lo(), re.hi()),
        (im.hi(), re.lo()),
        (im.hi(), re.hi()),
    ];
    let mut acc: Option<Interval> = None;
    for (y, x) in corners {
        let a = atan2_point(y, x, p);
        acc = Some(match acc {
            None => a,
            Some(b) => b.hull(&a),
        });
    }
    let a = acc.unwrap();
    Some(if shift { &a + &pi(p) } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let p = pi(200);
        assert!(p.contains(&Dyadic::from_f64(std::f64::consts::PI)) || (p.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.width_at_most_pow2(190));
        let l = ln2(128);
        assert!((l.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l.width_at_most_pow2(120));
    }

    #[test]
    fn ln_values() {
        for x in [0.5, 1.0, 2.0, 10.0, 12345.678] {
            let v = ln(&Interval::point(Dyadic::from_f64(x), 100)).unwrap();
            assert!((v.to_f64() - x.ln()).abs() < 1e-13, "ln {x}");
            assert!(v.width_at_most_pow2(90));
        }
        assert!(ln(&Interval::from_int(0, 64)).is_none());
    }

    #[test]
    fn atan_values() {
        for x in [-5.0, -1.0, -0.3, 0.0, 0.7, 1.0, 3.0, 1e6] {
            let v = atan(&Interval::point(Dyadic::from_f64(x), 100));
            assert!((v.to_f64() - f64::atan(x)).abs() < 1e-14, "atan {x}");
        }
    }

    #[test]
    fn arg_quadrants() {
        let mk = |x: f64, y: f64| CInterval::point(Dyadic::from_f64(x), Dyadic::from_f64(y), 80);
        for (x, y) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -2.0), (0.0, 1.0)] {
            let a = arg(&mk(x, y)).unwrap();
            assert!((a.to_f64() - f64::atan2(y, x)).abs() < 1e-14, "arg {x} {y}");
        }
        let a = arg(&mk(-1.0, 0.0)).unwrap();
        assert!((a.to_f64() - std::f64::consts::PI).abs() < 1e-14);
    }
}
