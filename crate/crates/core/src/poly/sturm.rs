use num_traits::{Signed, Zero};

use super::int::IntPolynomial;
use crate::error::{Error, Result};

/// Sturm sequence with primitive pseudo-remainders (signs preserved).
fn sturm_sequence(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut seq = vec![f.primitive(), f.derivative().primitive()];
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        let r = a.pseudo_rem(b);
        if r.is_zero() {
            break;
        }
        // lc(b)^k r has the sign of r unless lc(b) < 0 and k is odd
        let k = a.degree().unwrap() - b.degree().unwrap() + 1;
        let flip = b.lc().is_negative() && k % 2 == 1;
        let mut next = r.primitive();
        // primitive() normalizes lc > 0; restore the sign of -rem
        let orig_sign_positive = r.lc().is_positive() != flip;
        if orig_sign_positive {
            next = next.neg();
        }
        seq.push(next);
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_at_infinity(p: &IntPolynomial, negative: bool) -> i32 {
    let lc = p.lc();
    let s = if lc.is_positive() { 1 } else if lc.is_zero() { 0 } else { -1 };
    let d = p.degree().unwrap_or(0);
    if negative && d % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(f: &IntPolynomial) -> Result<usize> {
    match f.degree() {
        None => return Err(Error::InvalidInput("zero polynomial".into())),
        Some(0) => return Ok(0),
        _ => {}
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let seq = sturm_sequence(f);
    let at_neg = sign_changes(seq.iter().map(|p| sign_at_infinity(p, true)));
    let at_pos = sign_changes(seq.iter().map(|p| sign_at_infinity(p, false)));
    Ok(at_neg - at_pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Result<usize> {
        count_real_roots(&IntPolynomial::parse(s).unwrap())
    }

    #[test]
    fn documented_examples() {
        assert_eq!(c("x^3 - 2").unwrap(), 1);
        assert_eq!(c("x^2 + 1").unwrap(), 0);
        assert_eq!(c("x^2 - 5").unwrap(), 2);
    }

    #[test]
    fn more_counts() {
        assert_eq!(c("x").unwrap(), 1);
        assert_eq!(c("x^3 - x + 1").unwrap(), 1);
        assert_eq!(c("x^4 - 10x^2 + 1").unwrap(), 4);
        assert_eq!(c("-x^3 + 3x - 1").unwrap(), 3);
        assert_eq!(c("x^5 - x - 1").unwrap(), 1);
    }

    #[test]
    fn not_squarefree() {
        assert_eq!(c("x^2 - 2x + 1"), Err(Error::NotSquarefree));
    }
}
