//! Factorization over prime fields.
//!
//! Squarefree decomposition, then distinct-degree splitting, then
//! equal-degree splitting. Equal-degree splitting is randomized, but the
//! generator is seeded from the input and the output is sorted, so results
//! are reproducible.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::int::IntPolynomial;
use super::modp::ModPolynomial;
use crate::error::{Error, Result};

/// Above this `p * deg`, linear factors are found by random splitting
/// instead of exhaustive root search.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000;

/// Monic irreducible factors of `f mod p` with multiplicities, sorted canonically.
pub fn factor_mod_p(f: &IntPolynomial, p: u64) -> Result<Vec<(ModPolynomial, usize)>> {
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let g = ModPolynomial::from_int(f, p);
    if g.is_zero() {
        return Err(Error::InvalidInput(format!("polynomial vanishes mod {p}")));
    }
    Ok(factor_modpoly(&g))
}

/// Factor a nonzero polynomial over F_p into monic irreducibles.
pub fn factor_modpoly(f: &ModPolynomial) -> Vec<(ModPolynomial, usize)> {
    let f = f.monic();
    let mut out: Vec<(ModPolynomial, usize)> = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    for (part, mult) in squarefree_decomposition(&f) {
        for (prod, d) in distinct_degree(&part) {
            for g in equal_degree(&prod, d) {
                out.push((g, mult));
            }
        }
    }
    out.sort();
    // an irreducible can only show up once in a proper decomposition; merge defensively
    out.dedup_by(|b, a| {
        if a.0 == b.0 {
            a.1 += b.1;
            true
        } else {
            false
        }
    });
    out
}

/// `f = prod part_i^(mult_i)` with each part squarefree and pairwise coprime.
pub fn squarefree_decomposition(f: &ModPolynomial) -> Vec<(ModPolynomial, usize)> {
    let p = f.modulus();
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        let root = f.pth_root().expect("zero derivative implies p-th power");
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.divrem(&y).0.monic();
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.divrem(&w).0;
        i += 1;
    }
    if !c.monic().is_one() {
        let root = c.monic().pth_root().expect("remaining cofactor is a p-th power");
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Split a squarefree monic `f` into products of irreducibles of equal degree.
pub fn distinct_degree(f: &ModPolynomial) -> Vec<(ModPolynomial, usize)> {
    let p = f.modulus();
    let x = ModPolynomial::x(p);
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod_u64(p, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

/// Degrees of the irreducible factors of a squarefree `f`, without splitting.
pub fn factor_degrees(f: &ModPolynomial) -> Vec<usize> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f) {
        let n = g.degree().unwrap() / d;
        out.extend(std::iter::repeat_n(d, n));
    }
    out
}

/// Split a product of distinct irreducibles of degree `d`.
pub fn equal_degree(f: &ModPolynomial, d: usize) -> Vec<ModPolynomial> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return vec![];
    }
    if n == d {
        return vec![f.monic()];
    }
    let p = f.modulus();
    if d == 1 && p.saturating_mul(n as u64) <= BRUTE_FORCE_LIMIT {
        return (0..p)
            .filter(|&a| f.eval(a) == 0)
            .map(|a| ModPolynomial::new(p, vec![(p - a) % p, 1]))
            .collect();
    }
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&p.to_le_bytes());
    for (i, c) in f.coeffs().iter().take(3).enumerate() {
        seed[8 + 8 * i..16 + 8 * i].copy_from_slice(&c.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let mut out = Vec::new();
    let mut stack = vec![f.monic()];
    let exp = if p == 2 {
        BigUint::one()
    } else {
        (BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1
    };
    while let Some(g) = stack.pop() {
        let gd = g.degree().unwrap();
        if gd == d {
            out.push(g);
            continue;
        }
        loop {
            let h = ModPolynomial::new(p, (0..gd).map(|_| rng.gen_range(0..p)).collect());
            if h.degree().unwrap_or(0) == 0 {
                continue;
            }
            let t = if p == 2 {
                // absolute trace from F_{2^d} to F_2
                let mut acc = h.rem(&g);
                let mut cur = acc.clone();
                for _ in 1..d {
                    cur = cur.mul_mod_poly(&cur, &g);
                    acc = acc.add(&cur);
                }
                acc
            } else {
                h.pow_mod(&exp, &g).sub(&ModPolynomial::one(p))
            };
            let s = g.gcd(&t);
            let sd = s.degree().unwrap_or(0);
            if sd > 0 && sd < gd {
                let other = g.divrem(&s).0.monic();
                stack.push(s);
                stack.push(other);
                break;
            }
        }
    }
    out.sort();
    out
}

/// True iff the monic `f` has no nontrivial factorization over F_p.
pub fn is_irreducible_mod_p(f: &ModPolynomial) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let p = f.modulus();
    let f = f.monic();
    let x = ModPolynomial::x(p);
    // Rabin: x^(p^n) = x mod f, and gcd(x^(p^(n/q)) - x, f) = 1 for primes q | n
    let mut frob = vec![x.clone()];
    for _ in 0..n {
        let next = frob.last().unwrap().pow_mod_u64(p, &f);
        frob.push(next);
    }
    if frob[n] != x.rem(&f) {
        return false;
    }
    prime_divisors(n as u64).into_iter().all(|q| {
        let k = n / q as usize;
        f.gcd(&frob[k].sub(&x)).is_one()
    })
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct prime divisors of a nonzero integer, ascending.
///
/// Trial division removes small factors and Pollard's rho splits the rest;
/// `None` if a cofactor above 64 bits remains.
pub fn prime_divisors_big(n: &BigInt) -> Option<Vec<u64>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d < 1 << 16 {
        let db = BigInt::from(d);
        if (&n % &db).is_zero() {
            out.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
        }
        if BigInt::from(d) * d > n {
            break;
        }
        d += 1;
    }
    if n > BigInt::one() {
        let m = n.to_u64()?;
        let mut stack = vec![m];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u64(m) {
                out.push(m);
                continue;
            }
            let f = pollard_rho(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

fn pollard_rho(n: u64) -> u64 {
    use super::modp::mul_mod;
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let step = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = step(x);
            y = step(step(y));
            d = num_integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = super::modp::pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = super::modp::mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
