//! Splitting of prime ideals in quadratic extensions `K(sqrt d)`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{FieldElement, NumberField, Place, PrimeIdeal};
use crate::poly::modp::{inv_mod, pow_mod, reduce_bigint};
use crate::poly::{FiniteFieldElement, ModPolynomial};
use crate::sieve::{map_prime_segments, DEFAULT_SEGMENT};

/// Largest norm searched for an inert witness when certifying non-squareness.
pub const NON_SQUARE_SEARCH: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitSymbol {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for SplitSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitSymbol::Split => "split",
            SplitSymbol::Inert => "inert",
            SplitSymbol::Ramified => "ramified",
        })
    }
}

/// `K(sqrt d)` with a certificate that `d` is not a square in `K`.
#[derive(Debug, Clone)]
pub struct QuadraticExtension {
    radicand: FieldElement,
    label: String,
    inert_witness: PrimeIdeal,
}

impl QuadraticExtension {
    pub fn new(k: &NumberField, radicand: FieldElement, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if radicand.is_zero() {
            return Err(Error::InvalidInput(format!("extension {label}: radicand is zero")));
        }
        let witness = find_inert_witness(k, &radicand)?
            .ok_or_else(|| Error::PossiblyTrivialExtension(format!("{label} = sqrt({radicand})")))?;
        Ok(QuadraticExtension { radicand, label, inert_witness: witness })
    }

    /// `K(sqrt(t^2 - 4))`, the field generated by an eigenvalue of trace `t`.
    pub fn from_trace(k: &NumberField, trace: &FieldElement, label: impl Into<String>) -> Result<Self> {
        QuadraticExtension::new(k, trace.trace_radicand(k), label)
    }

    pub fn radicand(&self) -> &FieldElement {
        &self.radicand
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// A prime ideal inert in the extension.
    pub fn inert_witness(&self) -> &PrimeIdeal {
        &self.inert_witness
    }
}

fn find_inert_witness(k: &NumberField, d: &FieldElement) -> Result<Option<PrimeIdeal>> {
    for p in crate::sieve::primes_up_to(NON_SQUARE_SEARCH) {
        if k.is_excluded(p) || (d.denominator() % p) == 0u32.into() {
            continue;
        }
        for prime in k.factor_prime(p)? {
            if prime.norm() > NON_SQUARE_SEARCH.into() {
                continue;
            }
            if symbol(k, &prime, d)? == SplitSymbol::Inert {
                return Ok(Some(prime));
            }
        }
    }
    Ok(None)
}

/// Image of `x` in the residue field of `prime`.
pub fn residue(k: &NumberField, x: &FieldElement, prime: &PrimeIdeal) -> Result<ModPolynomial> {
    let p = prime.prime();
    if k.is_excluded(p) {
        return Err(Error::ExcludedPrime(p));
    }
    let den = reduce_bigint(x.denominator(), p);
    if den == 0 {
        return Err(Error::DenominatorNotCoprime(p));
    }
    let num = ModPolynomial::from_int(x.numerator(), p);
    Ok(num.scale(inv_mod(den, p)).rem(prime.factor()))
}

fn symbol(k: &NumberField, prime: &PrimeIdeal, d: &FieldElement) -> Result<SplitSymbol> {
    let r = residue(k, d, prime)?;
    if r.is_zero() {
        return Ok(SplitSymbol::Ramified);
    }
    let square = if prime.inertia_degree() == 1 {
        let p = prime.prime();
        pow_mod(r.coeff(0), (p - 1) / 2, p) == 1
    } else {
        FiniteFieldElement::new(prime.factor(), &r).is_square() == Some(true)
    };
    Ok(if square { SplitSymbol::Split } else { SplitSymbol::Inert })
}

/// Behavior of `prime` in `L`, by the Euler criterion in the residue field.
pub fn split_symbol(k: &NumberField, prime: &PrimeIdeal, l: &QuadraticExtension) -> Result<SplitSymbol> {
    symbol(k, prime, &l.radicand)
}

/// Behavior of the real place `index` in `L`: split iff the radicand is positive there.
pub fn split_symbol_real(k: &NumberField, index: usize, l: &QuadraticExtension) -> Result<SplitSymbol> {
    let mut bits = 32;
    loop {
        match k.evaluate_at_place(&l.radicand, Place::Real(index), bits) {
            Ok(v) => {
                if v.re().is_positive() {
                    return Ok(SplitSymbol::Split);
                }
                if v.re().is_negative() {
                    return Ok(SplitSymbol::Inert);
                }
            }
            Err(Error::PrecisionExhausted { .. }) => return Err(Error::IndeterminateSign(index)),
            Err(e) => return Err(e),
        }
        bits *= 2;
    }
}

/// Inert/split pattern in an ordered list of quadratic extensions (bit `i` set = inert in `L_i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrobeniusVector {
    bits: u64,
    len: usize,
}

impl FrobeniusVector {
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= 64, "at most 64 extensions");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        FrobeniusVector { bits: bits & mask, len }
    }

    pub fn from_slice(v: &[u8]) -> Self {
        let bits = v.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64 & 1) << i));
        FrobeniusVector::new(bits, v.len())
    }

    /// All coordinates inert.
    pub fn all_inert(len: usize) -> Self {
        FrobeniusVector::new(u64::MAX, len)
    }

    /// Parse `1,0,1` or `(1,0,1)`.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim();
        let inner = inner.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(inner);
        let mut v = Vec::new();
        for t in inner.split(',').map(str::trim) {
            match t {
                "0" => v.push(0),
                "1" => v.push(1),
                _ => return Err(Error::Parse(format!("target vector {text:?} must be 0/1 entries separated by commas"))),
            }
        }
        Ok(FrobeniusVector::from_slice(&v))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn xor(&self, o: &Self) -> Self {
        FrobeniusVector::new(self.bits ^ o.bits, self.len)
    }
}

impl fmt::Display for FrobeniusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_vec().iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for FrobeniusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FrobeniusVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Frobenius {
    Vector(FrobeniusVector),
    /// Indices of the extensions in which the prime ramifies.
    Ramified(Vec<usize>),
}

pub fn frobenius_vector(k: &NumberField, prime: &PrimeIdeal, ls: &[QuadraticExtension]) -> Result<Frobenius> {
    let mut bits = 0u64;
    let mut ramified = Vec::new();
    for (i, l) in ls.iter().enumerate() {
        match split_symbol(k, prime, l)? {
            SplitSymbol::Inert => bits |= 1 << i,
            SplitSymbol::Split => {}
            SplitSymbol::Ramified => ramified.push(i),
        }
    }
    if ramified.is_empty() {
        Ok(Frobenius::Vector(FrobeniusVector::new(bits, ls.len())))
    } else {
        Ok(Frobenius::Ramified(ramified))
    }
}

/// Rational primes below which an extension's radicand has a denominator factor.
fn denominator_primes(ls: &[QuadraticExtension]) -> impl Fn(u64) -> bool + '_ {
    move |p| ls.iter().any(|l| (l.radicand.denominator() % p) == 0u32.into())
}

/// All prime ideals of norm at most `x` above non-excluded primes, ordered by norm then label.
pub fn prime_ideals_up_to(k: &NumberField, x: u64, exec: Exec) -> Result<Vec<PrimeIdeal>> {
    let chunks = map_prime_segments(x, DEFAULT_SEGMENT, exec, |ps| {
        let mut out = Vec::new();
        for &p in ps {
            if k.is_excluded(p) {
                continue;
            }
            match k.factor_prime(p) {
                Ok(v) => out.extend(v.into_iter().filter(|q| q.norm_u64().is_some_and(|n| n <= x)).map(Ok)),
                Err(e) => out.push(Err(e)),
            }
        }
        out
    });
    let mut v = chunks.into_iter().collect::<Result<Vec<_>>>()?;
    v.sort();
    Ok(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct CompositumCheck {
    /// Elements of the observed subgroup of `(Z/2)^r`, ascending.
    pub subgroup: Vec<FrobeniusVector>,
    pub full: bool,
    pub primes_sampled: usize,
}

/// Span of the Frobenius vectors of unramified prime ideals of norm at most `x`.
pub fn compositum_degree_check(k: &NumberField, ls: &[QuadraticExtension], x: u64, exec: Exec) -> Result<CompositumCheck> {
    if ls.is_empty() {
        return Err(Error::InvalidInput("compositum check needs at least one extension".into()));
    }
    let r = ls.len();
    let skip = denominator_primes(ls);
    let primes = prime_ideals_up_to(k, x, exec)?;
    let primes: Vec<PrimeIdeal> = primes.into_iter().filter(|p| !skip(p.prime())).collect();
    let vectors = exec.map(&primes, |p| frobenius_vector(k, p, ls));
    let mut seen = BTreeSet::new();
    let mut sampled = 0;
    for v in vectors {
        if let Frobenius::Vector(v) = v? {
            seen.insert(v);
            sampled += 1;
        }
    }
    let mut span: BTreeSet<FrobeniusVector> = [FrobeniusVector::new(0, r)].into_iter().collect();
    for v in seen {
        if !span.contains(&v) {
            let shifted: Vec<FrobeniusVector> = span.iter().map(|s| s.xor(&v)).collect();
            span.extend(shifted);
        }
    }
    let full = r < 64 && span.len() == 1usize << r;
    Ok(CompositumCheck { subgroup: span.into_iter().collect(), full, primes_sampled: sampled })
}

/// Require a full compositum, else `CompositumDegenerate`.
pub fn require_full_compositum(k: &NumberField, ls: &[QuadraticExtension], x: u64, exec: Exec) -> Result<CompositumCheck> {
    let c = compositum_degree_check(k, ls, x, exec)?;
    if !c.full {
        return Err(Error::CompositumDegenerate { observed: c.subgroup.len(), expected: 1 << ls.len() });
    }
    Ok(c)
}

/// Default sample height for the cyclotomic degree test.
pub const CYCLOTOMIC_HEIGHT: u64 = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct CyclotomicDegrees {
    /// `n` with an observed norm subgroup of order 2 at height `x`.
    pub degrees: Vec<u64>,
    pub height: u64,
    /// Whether the answer at height `2x` agrees.
    pub stable: bool,
}

/// Subgroup of `(Z/n)*` generated by the residues of the units among `norms`.
fn generated_subgroup(norms: &[u64], n: u64) -> BTreeSet<u64> {
    let gens: BTreeSet<u64> = norms.iter().filter(|&&m| num_integer::gcd(m, n) == 1).map(|&m| m % n).collect();
    let mut group: BTreeSet<u64> = [1 % n].into_iter().collect();
    for g in gens {
        if group.contains(&g) {
            continue;
        }
        let mut frontier: Vec<u64> = group.iter().copied().collect();
        while let Some(h) = frontier.pop() {
            let m = h * g % n;
            if group.insert(m) {
                frontier.push(m);
            }
        }
    }
    group
}

fn degrees_at(norms: &[u64], n_max: u64) -> Vec<u64> {
    (3..=n_max).filter(|n| n % 4 != 2).filter(|&n| generated_subgroup(norms, n).len() == 2).collect()
}

/// The `n <= n_max` (not `2 mod 4`) with `[K(zeta_n) : K] = 2`, judged from
/// the norms of prime ideals up to `x`. May overreport when `x` is small.
pub fn cyclotomic_quadratic_degrees(k: &NumberField, n_max: u64, x: u64, exec: Exec) -> Result<CyclotomicDegrees> {
    if n_max < 3 {
        return Err(Error::InvalidInput("n_max must be at least 3".into()));
    }
    let all = prime_ideals_up_to(k, 2 * x, exec)?;
    let norms2: Vec<u64> = all.iter().filter_map(|p| p.norm_u64()).collect();
    let norms: Vec<u64> = norms2.iter().copied().filter(|&n| n <= x).collect();
    let degrees = degrees_at(&norms, n_max);
    let doubled = degrees_at(&norms2, n_max);
    Ok(CyclotomicDegrees { stable: degrees == doubled, degrees, height: x })
}

/// Observed norm subgroup of `(Z/n)*` from the given prime ideals, ascending.
pub fn norm_subgroup(primes: &[PrimeIdeal], n: u64) -> Vec<u64> {
    let norms: Vec<u64> = primes.iter().filter_map(|p| p.norm().to_u64()).collect();
    generated_subgroup(&norms, n).into_iter().collect()
}
