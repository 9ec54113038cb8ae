use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumberField;
use crate::error::{Error, Result};
use crate::poly::{parse_rational_poly, write_poly, IntPolynomial};

/// Symbol for the field generator in element syntax.
pub const GENERATOR: char = 'a';

/// `numerator(θ) / denominator`, numerator of degree below the field degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: IntPolynomial,
    den: BigInt,
}

impl FieldElement {
    /// Reduce `num / den` modulo the defining polynomial and normalize.
    pub fn new(k: &NumberField, num: IntPolynomial, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let num = num.rem_monic(k.polynomial());
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: IntPolynomial, den: BigInt) -> Self {
        let (mut num, mut den) = (num, den);
        if den.is_negative() {
            num = num.neg();
            den = -den;
        }
        let g = num.coeffs().iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            num = IntPolynomial::new(num.coeffs().iter().map(|c| c / &g).collect());
            den /= &g;
        }
        if num.is_zero() {
            den = BigInt::one();
        }
        FieldElement { num, den }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        FieldElement { num: IntPolynomial::constant(n), den: BigInt::one() }
    }

    pub fn from_rational(k: &NumberField, coeffs: &[BigRational]) -> Result<Self> {
        let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = IntPolynomial::new(coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect());
        FieldElement::new(k, num, den)
    }

    /// Parse polynomial syntax in the generator `a`, e.g. `a^2 - 4` or `[1/2, 1]`.
    pub fn parse(k: &NumberField, text: &str) -> Result<Self> {
        let coeffs = parse_rational_poly(text, GENERATOR)?;
        FieldElement::from_rational(k, &coeffs)
    }

    pub fn generator(k: &NumberField) -> Self {
        FieldElement::new(k, IntPolynomial::x(), BigInt::one()).expect("nonzero denominator")
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.num.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(BigRational::new(self.num.coeff(0), self.den.clone())),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = self.num.scale(&o.den).add(&o.num.scale(&self.den));
        Self::normalized(num, &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        FieldElement { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, k: &NumberField, o: &Self) -> Self {
        let num = self.num.mul(&o.num).rem_monic(k.polynomial());
        Self::normalized(num, &self.den * &o.den)
    }

    pub fn square(&self, k: &NumberField) -> Self {
        self.mul(k, self)
    }

    /// `t^2 - 4`, the radicand attached to a trace.
    pub fn trace_radicand(&self, k: &NumberField) -> Self {
        self.square(k).sub(&FieldElement::from_int(4))
    }

    pub fn to_rational_coeffs(&self) -> Vec<BigRational> {
        self.num.coeffs().iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_poly(&self.to_rational_coeffs(), GENERATOR))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}
