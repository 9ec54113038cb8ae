use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::parse::{parse_rational_poly, write_poly};
use crate::error::{Error, Result};

/// Polynomial with integer coefficients, lowest degree first.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient
/// is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl From<IntPolynomial> for Vec<String> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPolynomial {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        IntPolynomial::new(vec![c.into()])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        IntPolynomial::from_i64(&[0, 1])
    }

    /// Parse either `"x^3 - x + 1"` (in variable `var`) or `"[1, -1, 0, 1]"`.
    pub fn parse_in(text: &str, var: char) -> Result<Self> {
        let q = parse_rational_poly(text, var)?;
        let mut coeffs = Vec::with_capacity(q.len());
        for c in q {
            if !c.is_integer() {
                return Err(Error::Parse(format!("non-integer coefficient {c} in {text:?}")));
            }
            coeffs.push(c.to_integer());
        }
        Ok(IntPolynomial::new(coeffs))
    }

    pub fn parse(text: &str) -> Result<Self> {
        IntPolynomial::parse_in(text, 'x')
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        IntPolynomial::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a = q * b + r`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo_rem by zero");
        let mut r = self.clone();
        let lb = b.lc();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc();
            let shift = dr - db;
            let mut next = r.scale(&lb);
            for (j, c) in b.coeffs.iter().enumerate() {
                next.coeffs[j + shift] -= &lr * c;
            }
            r = IntPolynomial::new(next.coeffs);
        }
        r
    }

    /// Exact remainder modulo a monic polynomial.
    pub fn rem_monic(&self, m: &Self) -> Self {
        assert!(m.is_monic(), "rem_monic needs a monic modulus");
        let dm = m.degree().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dm && !r.is_empty() {
            let top = r.len() - 1;
            let c = r[top].clone();
            if !c.is_zero() {
                for (j, mc) in m.coeffs.iter().enumerate() {
                    r[top - dm + j] -= &c * mc;
                }
            }
            r.pop();
        }
        IntPolynomial::new(r)
    }

    /// Exact division by a monic polynomial, when it divides.
    pub fn div_exact_monic(&self, m: &Self) -> Option<Self> {
        let dm = m.degree()?;
        let ds = match self.degree() {
            None => return Some(IntPolynomial::zero()),
            Some(d) => d,
        };
        if ds < dm {
            return None;
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); ds - dm + 1];
        for k in (0..=ds - dm).rev() {
            let c = r[k + dm].clone();
            q[k] = c.clone();
            if !c.is_zero() {
                for (j, mc) in m.coeffs.iter().enumerate() {
                    r[k + j] -= &c * mc;
                }
            }
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPolynomial::new(q))
        } else {
            None
        }
    }

    /// Primitive gcd over the rationals (primitive polynomial remainder sequence).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Resultant via the Sylvester matrix (fraction-free elimination).
    pub fn resultant(&self, other: &Self) -> BigInt {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return BigInt::zero(),
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        bareiss_det(mat)
    }

    /// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f); 1 in degree 1.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree().expect("discriminant of zero polynomial");
        if n == 0 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative());
        let d = r / self.lc();
        if (n * (n - 1) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn to_string_in(&self, var: char) -> String {
        let q: Vec<BigRational> =
            self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        write_poly(&q, var)
    }
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in('x'))
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    #[test]
    fn discriminants() {
        assert_eq!(p("x^3 - x + 1").discriminant(), BigInt::from(-23));
        assert_eq!(p("x^2 + 1").discriminant(), BigInt::from(-4));
        assert_eq!(p("x^3 - 2").discriminant(), BigInt::from(-108));
        assert_eq!(p("x").discriminant(), BigInt::from(1));
        assert_eq!(p("x^2 - 5").discriminant(), BigInt::from(20));
        // x^4 + 1: 256
        assert_eq!(p("x^4 + 1").discriminant(), BigInt::from(256));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p("x^3 - x");
        let b = p("x^2 + 2x + 1");
        assert_eq!(a.gcd(&b), p("x + 1"));
        assert!(p("x^3 - 2").is_squarefree());
        assert!(!p("x^3 - 3x + 2").is_squarefree());
    }

    #[test]
    fn division_by_monic() {
        let f = p("x^3 - 2");
        let g = p("x^4 + x + 7");
        let r = g.rem_monic(&f);
        assert_eq!(r, p("2x + x + 7"));
        let prod = p("x^2 + 1").mul(&p("x - 3"));
        assert_eq!(prod.div_exact_monic(&p("x - 3")), Some(p("x^2 + 1")));
        assert_eq!(prod.div_exact_monic(&p("x - 2")), None);
    }

    #[test]
    fn display_roundtrip() {
        for s in ["x^3 - x + 1", "-x^2 + 7", "x", "0", "3x^5 - 2x^2 - 1"] {
            let q = p(s);
            assert_eq!(p(&q.to_string()), q);
        }
        assert_eq!(p("[1, -1, 0, 1]"), p("x^3 - x + 1"));
    }
}
