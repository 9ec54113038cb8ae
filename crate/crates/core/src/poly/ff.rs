use num_bigint::BigUint;
use num_traits::One;

use super::modp::ModPolynomial;
use crate::error::{Error, Result};

/// Element of F_p[x]/(g) for an irreducible `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFieldElement {
    modulus: ModPolynomial,
    value: ModPolynomial,
}

impl FiniteFieldElement {
    /// `g` is trusted to be irreducible; use [`FiniteFieldElement::checked`] to verify.
    pub fn new(g: &ModPolynomial, value: &ModPolynomial) -> Self {
        assert_eq!(g.modulus(), value.modulus(), "mismatched characteristic");
        FiniteFieldElement { modulus: g.monic(), value: value.rem(g) }
    }

    pub fn checked(g: &ModPolynomial, value: &ModPolynomial) -> Result<Self> {
        if !super::factor::is_irreducible_mod_p(g) {
            return Err(Error::InvalidInput(format!("{g:?} is not irreducible")));
        }
        Ok(FiniteFieldElement::new(g, value))
    }

    pub fn value(&self) -> &ModPolynomial {
        &self.value
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus.modulus()
    }

    /// Number of elements of the field.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.modulus.degree().unwrap() as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        FiniteFieldElement { modulus: self.modulus.clone(), value: self.value.mul_mod_poly(&o.value, &self.modulus) }
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        FiniteFieldElement { modulus: self.modulus.clone(), value: self.value.pow_mod(e, &self.modulus) }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(&(self.order() - BigUint::from(2u32))))
    }

    /// Euler criterion in odd characteristic: `Some(true)` for nonzero squares,
    /// `Some(false)` for non-squares, `None` for zero.
    pub fn is_square(&self) -> Option<bool> {
        assert!(self.characteristic() != 2, "Euler criterion needs odd characteristic");
        if self.is_zero() {
            return None;
        }
        let e = (self.order() - BigUint::one()) >> 1;
        Some(self.pow(&e).is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_in_f9() {
        // F_9 = F_3[x]/(x^2+1); exactly 4 nonzero squares
        let g = ModPolynomial::new(3, vec![1, 0, 1]);
        let mut squares = 0;
        for a in 0..3 {
            for b in 0..3 {
                let e = FiniteFieldElement::checked(&g, &ModPolynomial::new(3, vec![a, b])).unwrap();
                if e.is_square() == Some(true) {
                    squares += 1;
                }
                if let Some(inv) = e.inverse() {
                    assert!(inv.mul(&e).is_one());
                }
            }
        }
        assert_eq!(squares, 4);
    }

    #[test]
    fn rejects_reducible_modulus() {
        let g = ModPolynomial::new(5, vec![1, 0, 1]);
        assert!(FiniteFieldElement::checked(&g, &ModPolynomial::x(5)).is_err());
    }
}
