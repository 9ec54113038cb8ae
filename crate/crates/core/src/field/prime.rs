use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::ModPolynomial;

/// A prime ideal of the equation order away from the excluded primes:
/// the rational prime `p` together with a monic irreducible factor of `f mod p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrimeIdeal {
    p: u64,
    index: usize,
    factor: ModPolynomial,
}

impl PrimeIdeal {
    pub(crate) fn new(p: u64, index: usize, factor: ModPolynomial) -> Self {
        PrimeIdeal { p, index, factor }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn factor(&self) -> &ModPolynomial {
        &self.factor
    }

    pub fn inertia_degree(&self) -> usize {
        self.factor.degree().unwrap()
    }

    pub fn norm(&self) -> BigUint {
        BigUint::from(self.p).pow(self.inertia_degree() as u32)
    }

    /// Norm as a machine integer, if it fits.
    pub fn norm_u64(&self) -> Option<u64> {
        self.norm().to_u64()
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.p, self.index)
    }

    pub fn parse_label(label: &str) -> Result<(u64, usize)> {
        let bad = || Error::Parse(format!("prime label {label:?} is not of the form p:index"));
        let (p, i) = label.trim().split_once(':').ok_or_else(bad)?;
        Ok((p.trim().parse().map_err(|_| bad())?, i.trim().parse().map_err(|_| bad())?))
    }
}

/// Ordered by norm, then label.
impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.norm().cmp(&other.norm()).then(self.p.cmp(&other.p)).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for PrimeIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// `N(P) mod m`, defined when `gcd(N(P), m) = 1`.
pub fn residue_norm_mod(prime: &PrimeIdeal, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let n = prime.norm();
    let r = (&n % m).to_u64().unwrap();
    if r.gcd(&m) != 1 && m != 1 {
        return Err(Error::NotCoprime { value: n.to_string(), modulus: m });
    }
    Ok(r)
}

/// Splitting shape of a rational prime: `(inertia degree, ramification index)` pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalShape(Vec<(u32, u32)>);

impl LocalShape {
    pub fn new(mut parts: Vec<(u32, u32)>) -> Self {
        parts.sort_unstable();
        LocalShape(parts)
    }

    pub fn parts(&self) -> &[(u32, u32)] {
        &self.0
    }

    /// `sum f_i e_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(f, e)| f * e).sum()
    }

    /// Parse `f^e` items separated by commas, e.g. `1^2, 1` or `2`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (f, e) = match item.split_once('^') {
                Some((f, e)) => (f.trim(), e.trim()),
                None => (item, "1"),
            };
            let f: u32 = f.parse().map_err(|_| Error::Parse(format!("bad shape item {item:?}")))?;
            let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad shape item {item:?}")))?;
            if f == 0 || e == 0 {
                return Err(Error::Parse(format!("bad shape item {item:?}")));
            }
            parts.push((f, e));
        }
        if parts.is_empty() {
            return Err(Error::Parse("empty shape".into()));
        }
        Ok(LocalShape::new(parts))
    }
}

impl fmt::Display for LocalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> =
            self.0.iter().map(|(d, e)| if *e == 1 { d.to_string() } else { format!("{d}^{e}") }).collect();
        f.write_str(&items.join(", "))
    }
}
