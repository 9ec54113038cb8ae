//! Number fields presented by a monic irreducible polynomial.

mod dedekind;
mod element;
mod file;
mod place;
mod prime;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::factor::prime_divisors_big;
use crate::poly::rational::check_irreducible;
use crate::poly::{count_real_roots, factor_mod_p, is_prime_u64, IntPolynomial, RootBox};

pub use dedekind::is_p_maximal;
pub use element::{FieldElement, GENERATOR};
pub use file::FieldDescriptor;
pub use place::{Place, RealPlace};
pub use prime::{residue_norm_mod, LocalShape, PrimeIdeal};

/// How the field discriminant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscriminantSource {
    /// disc(f) is squarefree.
    Squarefree,
    /// Z[θ] is maximal at every p with p^2 | disc(f).
    Certified,
    Supplied,
}

#[derive(Debug, Clone)]
pub struct NumberField {
    poly: IntPolynomial,
    degree: usize,
    poly_disc: BigInt,
    disc: BigInt,
    disc_source: DiscriminantSource,
    signature: (usize, usize),
    excluded: BTreeSet<u64>,
    shapes: BTreeMap<u64, LocalShape>,
    roots: Arc<Mutex<BTreeMap<u32, Arc<Vec<RootBox>>>>>,
}

impl NumberField {
    /// Build the field, verifying irreducibility and settling the discriminant.
    pub fn new(f: IntPolynomial, disc: Option<BigInt>) -> Result<Self> {
        let degree = match f.degree() {
            None | Some(0) => return Err(Error::InvalidInput("defining polynomial must have positive degree".into())),
            Some(n) => n,
        };
        if !f.is_monic() {
            return Err(Error::InvalidInput(format!("defining polynomial {f} is not monic")));
        }
        check_irreducible(&f)?;
        let poly_disc = f.discriminant();
        let mut excluded: BTreeSet<u64> = [2].into_iter().collect();
        let disc_primes = prime_divisors_big(&poly_disc)
            .ok_or_else(|| Error::InvalidInput(format!("cannot factor disc(f) = {poly_disc}")))?;
        excluded.extend(disc_primes);
        let squared: Vec<u64> = excluded.iter().copied().filter(|&p| (&poly_disc % (p * p)).is_zero()).collect();

        let (disc, disc_source) = match disc {
            Some(d) => {
                check_square_quotient(&poly_disc, &d)?;
                (d, DiscriminantSource::Supplied)
            }
            None if squared.is_empty() => (poly_disc.clone(), DiscriminantSource::Squarefree),
            None => {
                let bad: Vec<u64> = squared.iter().copied().filter(|&p| !is_p_maximal(&f, p)).collect();
                if !bad.is_empty() {
                    return Err(Error::DiscriminantRequired(bad));
                }
                (poly_disc.clone(), DiscriminantSource::Certified)
            }
        };

        // local shapes at excluded primes where the equation order is maximal
        let mut shapes = BTreeMap::new();
        for &p in &excluded {
            if is_p_maximal(&f, p) {
                let fac = factor_mod_p(&f, p)?;
                shapes.insert(p, LocalShape::new(fac.iter().map(|(g, e)| (g.degree().unwrap() as u32, *e as u32)).collect()));
            }
        }

        let r1 = count_real_roots(&f)?;
        let signature = (r1, (degree - r1) / 2);
        Ok(NumberField {
            poly: f,
            degree,
            poly_disc,
            disc,
            disc_source,
            signature,
            excluded,
            shapes,
            roots: Arc::new(Mutex::new(BTreeMap::new())),
        })
    }

    /// The field of rational numbers, presented by `x`.
    pub fn rationals() -> Self {
        NumberField::new(IntPolynomial::x(), None).expect("x defines Q")
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self> {
        let mut k = NumberField::new(d.poly.clone(), d.disc.clone())?;
        for (&p, shape) in &d.shapes {
            k.declare_shape(p, shape.clone())?;
        }
        Ok(k)
    }

    /// Declare the splitting shape at an excluded prime (used only by the zeta product).
    pub fn declare_shape(&mut self, p: u64, shape: LocalShape) -> Result<()> {
        if !self.excluded.contains(&p) {
            return Err(Error::InvalidInput(format!("shape declared at non-excluded prime {p}")));
        }
        if shape.degree() != self.degree as u32 {
            return Err(Error::InvalidInput(format!("shape at {p} has total degree {} not {}", shape.degree(), self.degree)));
        }
        if let Some(known) = self.shapes.get(&p) {
            if known != &shape {
                return Err(Error::InvalidInput(format!("declared shape at {p} contradicts the certified shape {known}")));
            }
        }
        self.shapes.insert(p, shape);
        Ok(())
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poly_discriminant(&self) -> &BigInt {
        &self.poly_disc
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn discriminant_source(&self) -> DiscriminantSource {
        self.disc_source
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn excluded_primes(&self) -> &BTreeSet<u64> {
        &self.excluded
    }

    pub fn is_excluded(&self, p: u64) -> bool {
        self.excluded.contains(&p)
    }

    /// Splitting shape at an excluded prime, if known.
    pub fn local_shape(&self, p: u64) -> Option<&LocalShape> {
        self.shapes.get(&p)
    }

    /// Canonical descriptor used for field identity.
    pub fn canonical_polynomial(&self) -> String {
        self.poly.to_string()
    }

    /// Prime ideals above `p`, in canonical order.
    pub fn factor_prime(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if self.is_excluded(p) {
            return Err(Error::ExcludedPrime(p));
        }
        let fac = factor_mod_p(&self.poly, p)?;
        debug_assert!(fac.iter().all(|(_, e)| *e == 1));
        Ok(fac.into_iter().enumerate().map(|(i, (g, _))| PrimeIdeal::new(p, i, g)).collect())
    }

    /// Resolve a `"p:index"` label.
    pub fn prime_from_label(&self, label: &str) -> Result<PrimeIdeal> {
        let (p, i) = PrimeIdeal::parse_label(label)?;
        let primes = self.factor_prime(p)?;
        primes
            .into_iter()
            .nth(i)
            .ok_or_else(|| Error::InvalidInput(format!("no prime with label {label}: index out of range")))
    }

    /// Root disks of the defining polynomial, each of radius at most `2^-(bits+1)`.
    pub(crate) fn roots(&self, bits: u32, cap: u32) -> Result<Arc<Vec<RootBox>>> {
        let mut cache = self.roots.lock().expect("root cache poisoned");
        if let Some((_, r)) = cache.range(bits..).next() {
            return Ok(r.clone());
        }
        let r = Arc::new(crate::poly::isolate_complex_roots_with_cap(&self.poly, bits, cap)?);
        cache.insert(bits, r.clone());
        Ok(r)
    }
}

fn check_square_quotient(poly_disc: &BigInt, d: &BigInt) -> Result<()> {
    let mismatch = || Error::DiscriminantMismatch { supplied: d.to_string(), poly_disc: poly_disc.to_string() };
    if d.is_zero() || !(poly_disc % d).is_zero() {
        return Err(mismatch());
    }
    let q = poly_disc / d;
    if !q.is_positive() {
        return Err(mismatch());
    }
    let s = q.sqrt();
    if &s * &s != q {
        return Err(mismatch());
    }
    Ok(())
}
