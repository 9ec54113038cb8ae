use num_bigint::BigInt;

use crate::poly::{factor_mod_p, IntPolynomial, ModPolynomial};

/// Dedekind's criterion: is Z[θ] maximal at `p` for `θ` a root of the monic `f`?
pub fn is_p_maximal(f: &IntPolynomial, p: u64) -> bool {
    let fac = factor_mod_p(f, p).expect("monic polynomial is nonzero mod p");
    if fac.iter().all(|(_, e)| *e == 1) {
        return true;
    }
    let mut g = ModPolynomial::one(p);
    let mut h = ModPolynomial::one(p);
    for (gi, e) in &fac {
        g = g.mul(gi);
        for _ in 1..*e {
            h = h.mul(gi);
        }
    }
    let lifted = g.to_int().mul(&h.to_int());
    let diff = lifted.sub(f);
    let pb = BigInt::from(p);
    let quotient = IntPolynomial::new(diff.coeffs().iter().map(|c| c / &pb).collect());
    debug_assert_eq!(quotient.scale(&pb), diff);
    let fbar = ModPolynomial::from_int(&quotient, p);
    fbar.gcd(&g).gcd(&h).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max(s: &str, p: u64) -> bool {
        is_p_maximal(&IntPolynomial::parse(s).unwrap(), p)
    }

    #[test]
    fn classical_cases() {
        assert!(max("x^2 + 1", 2));
        assert!(!max("x^2 - 5", 2));
        assert!(!max("x^2 + 3", 2));
        assert!(max("x^3 - 2", 2));
        assert!(max("x^3 - 2", 3));
        // Z[cbrt(10)] is not 3-maximal since 10 = 1 mod 9
        assert!(!max("x^3 - 10", 3));
        assert!(max("x^2 - 7", 2));
        assert!(!max("x^2 - 8", 2));
    }
}
