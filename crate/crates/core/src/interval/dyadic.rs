use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact dyadic operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

/// An exact binary fraction `man * 2^exp`.
///
/// Normalized so that `man` is odd, or zero with `exp == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

fn div_round(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => -((-num).div_floor(den)),
        Round::Nearest => {
            let twice: BigInt = num * 2 + den;
            twice.div_floor(&(den * 2))
        }
    }
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let raw = x.to_bits();
        let sign = if raw >> 63 == 1 { -1 } else { 1 };
        let biased = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (man, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Dyadic::new(BigInt::from(man) * sign, exp)
    }

    /// `num / den` rounded to `prec` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        if num.is_zero() {
            return Dyadic::zero();
        }
        let shift = prec as i64 + bits(&den) as i64 - bits(&num) as i64 + 2;
        let shift = shift.max(0);
        let q = div_round(&(num << shift as usize), &den, dir);
        Dyadic::new(q, -shift).round(prec, dir)
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz as usize;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Position of the most significant bit: `2^(msb-1) <= |x| < 2^msb`.
    pub fn msb(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + bits(&self.man) as i64
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let b = bits(&self.man);
        if b <= prec as u64 {
            return self.clone();
        }
        let shift = (b - prec as u64) as usize;
        let den = BigInt::one() << shift;
        let q = div_round(&self.man, &den, dir);
        Dyadic::new(q, self.exp + shift as i64)
    }

    /// Round to an integer multiple of `2^exp`.
    pub fn round_to_exp(&self, exp: i64, dir: Round) -> Self {
        if self.exp >= exp {
            return self.clone();
        }
        let shift = (exp - self.exp) as usize;
        let den = BigInt::one() << shift;
        Dyadic::new(div_round(&self.man, &den, dir), exp)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    /// `self / other` rounded to `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "division by zero");
        let q = Dyadic::from_ratio(&self.man, &other.man, prec, dir);
        q.mul_pow2(self.exp - other.exp)
    }

    /// Square root of a nonnegative value rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * prec as i64 + 4;
        let mut shift = (want - bits(&self.man) as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.man << shift as usize;
        let e = (self.exp - shift) / 2;
        let r = m.sqrt();
        let r = match dir {
            Round::Down | Round::Nearest => r,
            Round::Up => {
                if &r * &r == m {
                    r
                } else {
                    r + 1
                }
            }
        };
        Dyadic::new(r, e).round(prec, dir)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, Round::Nearest);
        let m = r.man.to_f64().unwrap_or(f64::NAN);
        let e = r.exp.clamp(-2200, 2200) as i32;
        m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    /// Floor to an integer.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            self.man.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    /// Decimal rendering with `digits` significant digits (round to nearest).
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let a = self.abs();
        // scale by 10^k so that the integer part has `digits` digits
        let approx_log10 = (a.msb() as f64) * std::f64::consts::LOG10_2;
        let mut k = digits as i64 - approx_log10.ceil() as i64;
        let scaled = |k: i64| -> BigInt {
            let (num, den) = a.ratio();
            let (num, den) = if k >= 0 {
                (num * BigInt::from(10u32).pow(k as u32), den)
            } else {
                (num, den * BigInt::from(10u32).pow((-k) as u32))
            };
            div_round(&num, &den, Round::Nearest)
        };
        let mut s = scaled(k);
        let limit = BigInt::from(10u32).pow(digits as u32);
        if s >= limit {
            k -= 1;
            s = scaled(k);
        } else if s < BigInt::from(10u32).pow(digits as u32 - 1) {
            k += 1;
            s = scaled(k);
        }
        let text = s.to_string();
        let body = if k <= 0 {
            let mut t = text;
            t.push_str(&"0".repeat((-k) as usize));
            t
        } else if (k as usize) < text.len() {
            let (int, frac) = text.split_at(text.len() - k as usize);
            format!("{int}.{frac}")
        } else {
            format!("0.{}{}", "0".repeat(k as usize - text.len()), text)
        };
        let body = trim_decimal(&body);
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Exact value as `num / den` with `den` a power of two.
    pub fn ratio(&self) -> (BigInt, BigInt) {
        if self.exp >= 0 {
            (&self.man << self.exp as usize, BigInt::one())
        } else {
            (self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }
}

fn trim_decimal(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s1 = self.signum();
        let s2 = other.signum();
        if s1 != s2 {
            return s1.cmp(&s2);
        }
        if s1 == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes cheaply when exponents are far apart
        let (m1, m2) = (self.msb(), other.msb());
        if m1 != m2 {
            let mag = m1.cmp(&m2);
            return if s1 > 0 { mag } else { mag.reverse() };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}
