use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::int::IntPolynomial;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; panics on zero.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

pub fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced residue fits u64")
}

/// Polynomial over the prime field with `p` elements, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPolynomial {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPolynomial { p, coeffs: c }
    }

    pub fn from_int(f: &IntPolynomial, p: u64) -> Self {
        ModPolynomial::new(p, f.coeffs().iter().map(|c| reduce_bigint(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        ModPolynomial { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        ModPolynomial::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPolynomial::new(p, vec![0, 1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        ModPolynomial::new(p, vec![c])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> Self {
        ModPolynomial::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, k, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        ModPolynomial::new(self.p, (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        ModPolynomial::new(self.p, (0..n).map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ModPolynomial::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        ModPolynomial::new(self.p, acc.into_iter().map(|x| x as u64).collect())
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let p = self.p;
        let inv = inv_mod(d.lc(), p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (ModPolynomial::zero(p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, p);
            q[k] = c;
            if c != 0 {
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mul_mod(c, dc, p)) % p;
                }
            }
        }
        r.truncate(dd);
        (ModPolynomial::new(p, q), ModPolynomial::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        ModPolynomial::new(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p)).collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn mul_mod_poly(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = ModPolynomial::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod_poly(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod_poly(&base, m);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, e: u64, m: &Self) -> Self {
        self.pow_mod(&BigUint::from(e), m)
    }

    /// If every exponent is a multiple of `p`, the polynomial `g` with `g(x^p) = self`.
    pub fn pth_root(&self) -> Option<Self> {
        let p = self.p as usize;
        if self.coeffs.iter().enumerate().any(|(i, &c)| c != 0 && i % p != 0) {
            return None;
        }
        // coefficients of the prime field are fixed by Frobenius
        Some(ModPolynomial::new(self.p, self.coeffs.iter().step_by(p).copied().collect()))
    }

    /// Lift to integer coefficients in `[0, p)`.
    pub fn to_int(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_string_in(&self, var: char) -> String {
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            match i {
                0 => out.push_str(&c.to_string()),
                _ => {
                    if c != 1 {
                        out.push_str(&c.to_string());
                    }
                    out.push(var);
                    if i > 1 {
                        out.push('^');
                        out.push_str(&i.to_string());
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Canonical order: by degree, then by coefficient sequence (lowest first).
impl Ord for ModPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for ModPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in('x'))
    }
}

impl fmt::Debug for ModPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self, self.p)
    }
}
