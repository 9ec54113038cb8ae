//! Irreducibility over the rationals.
//!
//! A degree sieve over several primes settles most inputs. The rest go
//! through Hensel lifting and recombination of modular factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::factor::{factor_degrees, factor_modpoly, is_prime_u64};
use super::int::IntPolynomial;
use super::modp::{reduce_bigint, ModPolynomial};
use crate::error::{Error, Result};

const SIEVE_PRIMES: usize = 12;

/// `Ok(())` if `f` is irreducible over Q, `Err(Reducible(g))` with a proper factor otherwise.
pub fn check_irreducible(f: &IntPolynomial) -> Result<()> {
    match find_factor(f)? {
        None => Ok(()),
        Some(g) => Err(Error::Reducible(format!("{} has the factor {}", f, g))),
    }
}

pub fn is_irreducible_over_q(f: &IntPolynomial) -> Result<bool> {
    Ok(find_factor(f)?.is_none())
}

/// A proper factor of positive degree, if one exists.
pub fn find_factor(f: &IntPolynomial) -> Result<Option<IntPolynomial>> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::InvalidInput("constant polynomial".into())),
        Some(n) => n,
    };
    let f = f.primitive();
    if n == 1 {
        return Ok(None);
    }
    let g = f.gcd(&f.derivative());
    if g.degree().unwrap_or(0) > 0 {
        return Ok(Some(g.primitive()));
    }
    let lc = f.lc();
    let disc = f.discriminant();
    // bit i set if some factor of degree i is still possible
    let full = mask(n);
    let mut possible = full;
    let mut best: Option<(u64, Vec<(ModPolynomial, usize)>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < SIEVE_PRIMES {
        p += 1;
        if !is_prime_u64(p) || (&lc % p).is_zero() || (&disc % p).is_zero() {
            continue;
        }
        tried += 1;
        let fp = ModPolynomial::from_int(&f, p).monic();
        let degs = factor_degrees(&fp);
        let mut sums: u128 = 1;
        for d in &degs {
            sums |= sums << d;
        }
        possible &= sums;
        if possible & !(1 | (1u128 << n)) == 0 {
            return Ok(None);
        }
        if best.as_ref().is_none_or(|(_, fs)| degs.len() < fs.len()) {
            best = Some((p, Vec::new()));
            best.as_mut().unwrap().1 = factor_modpoly(&fp);
        }
    }
    let (p, factors) = best.expect("sieve found a good prime");
    let factors: Vec<ModPolynomial> = factors.into_iter().map(|(g, _)| g).collect();
    Ok(zassenhaus(&f, p, &factors, possible))
}

fn mask(n: usize) -> u128 {
    assert!(n < 127, "degree too large for the irreducibility sieve");
    (1u128 << (n + 1)) - 1
}

/// Bound on the absolute value of every coefficient of any factor of `f`.
fn factor_coefficient_bound(f: &IntPolynomial) -> BigInt {
    let n = f.degree().unwrap();
    let l1: BigInt = f.coeffs().iter().map(|c| c.abs()).sum();
    (BigInt::one() << n) * l1
}

fn zassenhaus(f: &IntPolynomial, p: u64, factors: &[ModPolynomial], possible: u128) -> Option<IntPolynomial> {
    let r = factors.len();
    if r <= 1 {
        return None;
    }
    let lc = f.lc();
    let bound = factor_coefficient_bound(f) * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        k += 1;
    }
    // monic target lc^{-1} f mod p^k
    let lc_inv = lc.mod_floor(&m).modpow(&(&m / &pb * (&pb - 1) - 1), &m);
    let target = reduce(&f.scale(&lc_inv), &m);
    let lifted = lift_all(&target, factors, p, k);

    for size in 1..=r / 2 {
        for subset in combinations(r, size) {
            let deg: usize = subset.iter().map(|&i| factors[i].degree().unwrap()).sum();
            if possible & (1u128 << deg) == 0 {
                continue;
            }
            let mut g = IntPolynomial::constant(lc.clone());
            for &i in &subset {
                g = reduce(&g.mul(&lifted[i]), &m);
            }
            let g = symmetric(&g, &m);
            if div_exact(&f.scale(&lc), &g).is_some() {
                return Some(g.primitive());
            }
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn reduce(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    IntPolynomial::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(f: &IntPolynomial, m: &BigInt) -> IntPolynomial {
    let half = m / 2;
    IntPolynomial::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Exact quotient `a / b` over Z, if it exists.
pub fn div_exact(a: &IntPolynomial, b: &IntPolynomial) -> Option<IntPolynomial> {
    let db = b.degree()?;
    let bl = b.lc();
    let mut r: Vec<BigInt> = a.coeffs().to_vec();
    let na = match a.degree() {
        None => return Some(IntPolynomial::zero()),
        Some(n) => n,
    };
    if na < db {
        return None;
    }
    let mut q = vec![BigInt::zero(); na - db + 1];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(&bl);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, bc) in b.coeffs().iter().enumerate() {
                r[k + j] -= &c * bc;
            }
        }
        q[k] = c;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(IntPolynomial::new(q))
}

fn from_mod(g: &ModPolynomial) -> IntPolynomial {
    g.to_int()
}

fn to_mod(f: &IntPolynomial, p: u64) -> ModPolynomial {
    ModPolynomial::new(p, f.coeffs().iter().map(|c| reduce_bigint(c, p)).collect())
}

/// `s, t` with `s a + t b = 1` over F_p for coprime `a, b`.
fn xgcd(a: &ModPolynomial, b: &ModPolynomial) -> (ModPolynomial, ModPolynomial) {
    let p = a.modulus();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (ModPolynomial::one(p), ModPolynomial::zero(p));
    let (mut t0, mut t1) = (ModPolynomial::zero(p), ModPolynomial::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        let t2 = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    assert_eq!(r0.degree(), Some(0), "factors must be coprime");
    let inv = super::modp::inv_mod(r0.lc(), p);
    (s0.scale(inv), t0.scale(inv))
}

/// Lift monic `F = g h mod p` to `F = G H mod p^k`, `G, H` monic.
fn lift_pair(target: &IntPolynomial, g: &ModPolynomial, h: &ModPolynomial, p: u64, k: u32) -> (IntPolynomial, IntPolynomial) {
    let (s, t) = xgcd(g, h);
    let pb = BigInt::from(p);
    let mut gg = from_mod(g);
    let mut hh = from_mod(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff = target.sub(&gg.mul(&hh));
        let e = IntPolynomial::new(diff.coeffs().iter().map(|c| c.div_floor(&pj)).collect());
        let e = to_mod(&e, p);
        let (q, r) = t.mul(&e).divrem(g);
        let u = s.mul(&e).add(&q.mul(h)).rem(h);
        gg = gg.add(&from_mod(&r).scale(&pj));
        hh = hh.add(&from_mod(&u).scale(&pj));
        pj *= &pb;
    }
    (reduce(&gg, &pj), reduce(&hh, &pj))
}

fn lift_all(target: &IntPolynomial, factors: &[ModPolynomial], p: u64, k: u32) -> Vec<IntPolynomial> {
    if factors.len() == 1 {
        return vec![target.clone()];
    }
    let g = &factors[0];
    let mut h = ModPolynomial::one(p);
    for f in &factors[1..] {
        h = h.mul(f);
    }
    let (gg, hh) = lift_pair(target, g, &h, p, k);
    let mut out = vec![gg];
    out.extend(lift_all(&hh, &factors[1..], p, k));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    #[test]
    fn irreducible_examples() {
        for s in ["x^2 + 1", "x^3 - 2", "x^3 - x + 1", "x^4 + 1", "x^4 - 10x^2 + 1", "x^5 - x - 1", "x^6 + x^3 + 1", "2x^2 + 3"] {
            assert!(is_irreducible_over_q(&ip(s)).unwrap(), "{s}");
        }
    }

    #[test]
    fn reducible_examples() {
        for (s, d) in [("x^2 - 1", 1), ("x^4 + 4", 2), ("x^4 - 4", 2), ("x^6 - 1", 0)] {
            let f = ip(s);
            match find_factor(&f).unwrap() {
                Some(g) => {
                    assert!(div_exact(&f, &g).is_some(), "{s}: {g} does not divide");
                    if d > 0 {
                        assert_eq!(g.degree().unwrap().min(f.degree().unwrap() - g.degree().unwrap()), d.min(4 - d));
                    }
                }
                None => panic!("{s} reported irreducible"),
            }
        }
    }

    #[test]
    fn swinnerton_dyer_like() {
        // product of two irreducible quartics with identical mod-p patterns
        let a = ip("x^4 - 10x^2 + 1");
        let b = ip("x^4 - 16x^2 + 4");
        let f = a.mul(&b);
        let g = find_factor(&f).unwrap().expect("reducible");
        assert_eq!(g.degree(), Some(4));
        assert!(div_exact(&f, &g).is_some());
        assert!(is_irreducible_over_q(&ip("x^8 - 40x^6 + 352x^4 - 960x^2 + 576")).unwrap());
    }

    #[test]
    fn non_monic_factor() {
        let f = ip("2x - 1").mul(&ip("3x^2 + x + 5"));
        let g = find_factor(&f).unwrap().unwrap();
        assert!(div_exact(&f, &g).is_some());
    }
}
