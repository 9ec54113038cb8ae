//! Covolumes of maximal-order unit groups and geodesic data from traces.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{FieldElement, NumberField};
use crate::interval::elementary::{arg, ln, pi};
use crate::interval::{CInterval, DecimalBall, Dyadic, Interval, Round};
use crate::poly::factor::factor_degrees;
use crate::poly::roots::DEFAULT_PRECISION_CAP;
use crate::poly::ModPolynomial;
use crate::quaternion::RamificationSet;
use crate::sieve::{map_prime_segments, DEFAULT_SEGMENT};

pub const DEFAULT_ZETA_CUTOFF: u64 = 1_000_000;
pub const DEFAULT_PRECISION: u32 = 128;
const MIN_CUTOFF: u64 = 100;

/// How the local factor at an excluded prime was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcludedFactor {
    pub prime: u64,
    /// The splitting shape, or `None` when the factor is bracketed.
    pub shape: Option<String>,
}

/// `zeta_K(2)` enclosed in `value`; the truncated product lies in the lower
/// part and `epsilon` bounds the contribution of primes above the cutoff.
#[derive(Debug, Clone)]
pub struct ZetaValue {
    pub value: Interval,
    pub cutoff: u64,
    pub epsilon: Dyadic,
    pub excluded: Vec<ExcludedFactor>,
}

impl ZetaValue {
    pub fn view(&self, digits: usize) -> ZetaView {
        ZetaView {
            value: DecimalBall::from_interval(&self.value, digits),
            cutoff: self.cutoff,
            tail_bound: format!("{:.3e}", self.epsilon.to_f64()),
            excluded: self.excluded.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaView {
    pub value: DecimalBall,
    pub cutoff: u64,
    pub tail_bound: String,
    pub excluded: Vec<ExcludedFactor>,
}

/// `prod (1 - q^-2)^-1` over the given norms.
fn local_product(norms: impl IntoIterator<Item = BigUint>, w: u32) -> Interval {
    let mut acc = Interval::from_int(1, w);
    for q in norms {
        let q2 = BigInt::from(&q * &q);
        let f = Interval::from_ratio(&q2, &(&q2 - 1), w);
        acc = &acc * &f;
    }
    acc
}

fn pow_big(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// Euler product for `zeta_K(2)` over `p <= x` with a rigorous tail bound.
///
/// Block products are combined in prime order, so the endpoints do not
/// depend on `exec`.
pub fn dedekind_zeta_2(k: &NumberField, x: u64, precision: u32, exec: Exec) -> Result<ZetaValue> {
    if x < MIN_CUTOFF {
        return Err(Error::InvalidInput(format!("zeta cutoff {x} is below {MIN_CUTOFF}")));
    }
    let n = k.degree();
    let w = precision + 32;
    let blocks = map_prime_segments(x, DEFAULT_SEGMENT, exec, |ps| {
        let norms = ps.iter().filter(|&&p| !k.is_excluded(p)).flat_map(|&p| {
            let f = ModPolynomial::from_int(k.polynomial(), p);
            factor_degrees(&f).into_iter().map(move |d| pow_big(p, d as u32))
        });
        vec![local_product(norms, w)]
    });
    let mut product = Interval::from_int(1, w);
    for b in &blocks {
        product = &product * b;
    }

    let mut excluded = Vec::new();
    for &p in k.excluded_primes().iter().filter(|&&p| p <= x) {
        match k.local_shape(p) {
            Some(shape) => {
                let norms = shape.parts().iter().map(|&(f, _)| pow_big(p, f));
                product = &product * &local_product(norms, w);
                excluded.push(ExcludedFactor { prime: p, shape: Some(shape.to_string()) });
            }
            None => {
                // between inert (one prime of norm p^n) and fully split (n primes of norm p)
                let inert = local_product([pow_big(p, n as u32)], w);
                let split = local_product(std::iter::repeat_n(BigUint::from(p), n), w);
                product = Interval::new(
                    (&product * &inert).lo().clone(),
                    (&product * &split).hi().clone(),
                    w,
                );
                excluded.push(ExcludedFactor { prime: p, shape: None });
            }
        }
    }

    // log of the tail is at most t = n/(x-1); the tail factor is at most 1/(1-t)
    let t = Interval::from_ratio(&BigInt::from(n), &BigInt::from(x - 1), w);
    let one = Interval::from_int(1, w);
    let ratio = t.checked_div(&(&one - &t)).expect("tail below 1 for x >= 100");
    let epsilon = (&Interval::point(product.hi().clone(), w) * &ratio).hi().round(precision, Round::Up);
    let value = Interval::new(product.lo().clone(), product.hi().add(&epsilon), precision);
    Ok(ZetaValue { value, cutoff: x, epsilon, excluded })
}

/// A Borel covolume: `field_factor * norm_factor`.
#[derive(Debug, Clone)]
pub struct Volume {
    /// `|Delta|^(3/2) zeta_K(2) / (4 pi^2)^(n-1)`.
    pub field_factor: Interval,
    /// `prod (N(P) - 1)` over the finite ramified primes, exact.
    pub norm_factor: BigUint,
    pub value: Interval,
}

impl Volume {
    pub fn view(&self, digits: usize) -> VolumeView {
        VolumeView { value: DecimalBall::from_interval(&self.value, digits), norm_factor: self.norm_factor.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VolumeView {
    pub value: DecimalBall,
    pub norm_factor: String,
}

/// `|Delta|^(3/2) zeta_K(2) / (4 pi^2)^(n-1)`.
pub fn field_factor(k: &NumberField, zeta: &ZetaValue) -> Interval {
    let w = zeta.value.prec() + 16;
    let d = Interval::point(Dyadic::from_int(k.discriminant().abs()), w);
    let d32 = &d * &d.sqrt().expect("nonzero discriminant");
    let p = pi(w);
    let four_pi2 = (&p * &p).mul_pow2(2);
    let denom = four_pi2.pow(k.degree() as u32 - 1);
    let num = &d32 * &zeta.value.with_prec(w);
    num.checked_div(&denom).expect("positive denominator").with_prec(zeta.value.prec())
}

/// The covolume formula for a maximal order of the algebra ramified at `ram`.
pub fn borel_volume(k: &NumberField, ram: &RamificationSet, zeta: &ZetaValue) -> Result<Volume> {
    let mut norm_factor = BigUint::one();
    for p in ram.finite() {
        norm_factor *= p.norm() - 1u32;
    }
    for o in ram.opaque() {
        let n = o.norm.ok_or_else(|| Error::UnknownNorm(o.label.clone()))?;
        norm_factor *= n - 1;
    }
    let field_factor = field_factor(k, zeta);
    let value = field_factor.mul_int(&BigInt::from(norm_factor.clone()));
    Ok(Volume { field_factor, norm_factor, value })
}

/// Base volume, the constructed volumes, and their span.
#[derive(Debug, Clone)]
pub struct VolumeReport {
    pub base: Volume,
    pub algebras: Vec<Volume>,
    /// `max - min` of the algebra volumes.
    pub span: Interval,
    /// `max - min` of the exact norm factors.
    pub span_factor: BigUint,
}

impl VolumeReport {
    /// All volumes must share the base's field factor.
    pub fn new(base: Volume, algebras: Vec<Volume>) -> Self {
        let max = algebras.iter().map(|v| &v.norm_factor).max().cloned().unwrap_or_default();
        let min = algebras.iter().map(|v| &v.norm_factor).min().cloned().unwrap_or_default();
        let span_factor = max - min;
        let span = base.field_factor.mul_int(&BigInt::from(span_factor.clone()));
        VolumeReport { base, algebras, span, span_factor }
    }
}

/// Translation length and rotation angle of a loxodromic element.
#[derive(Debug, Clone)]
pub struct GeodesicDatum {
    pub trace: FieldElement,
    pub radicand: FieldElement,
    /// Eigenvalue of modulus above 1.
    pub lambda: CInterval,
    /// `2 log |lambda|`.
    pub length: Interval,
    /// `arg(lambda^2)`; may poke past `pi` by its radius when `lambda^2` is negative real.
    pub angle: Interval,
}

impl GeodesicDatum {
    pub fn view(&self, digits: usize) -> GeodesicView {
        GeodesicView {
            trace: self.trace.to_string(),
            radicand: self.radicand.to_string(),
            length: DecimalBall::from_interval(&self.length, digits),
            angle: DecimalBall::from_interval(&self.angle, digits),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicView {
    pub trace: String,
    pub radicand: String,
    pub length: DecimalBall,
    pub angle: DecimalBall,
}

/// Whether an enclosure of `t` is certainly off the segment `[-2, 2]`.
fn off_segment(t: &CInterval) -> bool {
    let two = Dyadic::from_int(2);
    !t.im().contains_zero() || t.re().lo() > &two || t.re().hi() < &two.neg()
}

/// Geodesic length and holonomy of an element with trace `t` at the complex place.
pub fn trace_to_geodesic(k: &NumberField, t: &FieldElement, precision: u32) -> Result<GeodesicDatum> {
    let place = k.unique_complex_place()?;
    let radicand = t.trace_radicand(k);
    if let Some(q) = t.as_rational() {
        let two = num_rational::BigRational::from_integer(2.into());
        if q.abs() <= two {
            return Err(Error::NotLoxodromic);
        }
    }
    let cap = DEFAULT_PRECISION_CAP.max(4 * precision);
    let mut w = precision + 16;
    loop {
        if w > cap {
            return Err(Error::NotLoxodromic);
        }
        let tz = k.evaluate_at_place(t, place, w)?;
        if !off_segment(&tz) {
            w *= 2;
            continue;
        }
        if let Some(g) = geodesic_at(&tz, precision) {
            return Ok(GeodesicDatum { trace: t.clone(), radicand, lambda: g.0, length: g.1, angle: g.2 });
        }
        w *= 2;
    }
}

/// `(lambda, length, angle)` from an enclosure of the trace, or `None` if too coarse.
fn geodesic_at(tz: &CInterval, precision: u32) -> Option<(CInterval, Interval, Interval)> {
    let w = tz.prec();
    let four = CInterval::real(Interval::from_int(4, w));
    let s = tz.mul(tz).sub(&four).sqrt_branch()?;
    let a = tz.add(&s).scale(&Interval::from_int(1, w).mul_pow2(-1));
    let b = tz.sub(&s).scale(&Interval::from_int(1, w).mul_pow2(-1));
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    let lambda = if na.lo() > nb.hi() {
        a
    } else if nb.lo() > na.hi() {
        b
    } else {
        return None;
    };
    let modsq = lambda.norm_sqr();
    let length = ln(&modsq)?;
    let angle = arg(&lambda.mul(&lambda))?;
    let target = precision as i64;
    (length.width_at_most_pow2(target) && angle.width_at_most_pow2(target)).then(|| {
        (lambda, length.with_prec(precision + 8), angle.with_prec(precision + 8))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPolynomial;

    fn field(s: &str) -> NumberField {
        NumberField::new(IntPolynomial::parse(s).unwrap(), None).unwrap()
    }

    #[test]
    fn zeta_of_rationals() {
        let z = dedekind_zeta_2(&NumberField::rationals(), 10_000, 96, Exec::Sequential).unwrap();
        let target = std::f64::consts::PI.powi(2) / 6.0;
        assert!(z.value.lo().to_f64() <= target && target <= z.value.hi().to_f64());
        assert!(z.epsilon.to_f64() < 2e-4);
        assert_eq!(z.excluded, vec![ExcludedFactor { prime: 2, shape: Some("1".into()) }]);
        assert!(dedekind_zeta_2(&NumberField::rationals(), 99, 64, Exec::Sequential).is_err());
    }

    #[test]
    fn zeta_is_exec_independent() {
        let k = field("x^3 - x + 1");
        let a = dedekind_zeta_2(&k, 50_000, 128, Exec::Sequential).unwrap();
        let b = dedekind_zeta_2(&k, 50_000, 128, Exec::Parallel).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn gaussian_volume() {
        let g = field("x^2 + 1");
        let z = dedekind_zeta_2(&g, 100_000, 128, Exec::default()).unwrap();
        let ram = RamificationSet::from_spec(&g, &[], &["3:0", "7:0"], &[]).unwrap();
        let v = borel_volume(&g, &ram, &z).unwrap();
        assert_eq!(v.norm_factor, BigUint::from(8u32 * 48));
        // zeta(2) L(2, chi_-4) summed independently
        let zeta_k = 1.644_934_066_848_226 * 0.915_965_594_177_219;
        let expect = 8.0 * zeta_k / (4.0 * std::f64::consts::PI.powi(2)) * 384.0;
        assert!(v.value.lo().to_f64() <= expect && expect <= v.value.hi().to_f64());
        let opaque = RamificationSet::from_spec(&g, &[], &["3:0"], &["w"]).unwrap();
        assert_eq!(borel_volume(&g, &opaque, &z).err(), Some(Error::UnknownNorm("w".into())));
    }

    #[test]
    fn golden_geodesic() {
        let q = NumberField::new(IntPolynomial::parse("x^2 + x + 1").unwrap(), None).unwrap();
        let t = FieldElement::from_int(3);
        let g = trace_to_geodesic(&q, &t, 64).unwrap();
        let expect = 2.0 * ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((g.length.mid().to_f64() - expect).abs() < 1e-12);
        assert!(g.angle.contains(&Dyadic::zero()));
        assert_eq!(trace_to_geodesic(&q, &FieldElement::from_int(2), 64).err(), Some(Error::NotLoxodromic));
        assert_eq!(trace_to_geodesic(&q, &FieldElement::from_int(-1), 64).err(), Some(Error::NotLoxodromic));
    }

    #[test]
    fn imaginary_trace() {
        // sqrt(-3) = 2a + 1 in Q(a), a^2 + a + 1 = 0
        let q = NumberField::new(IntPolynomial::parse("x^2 + x + 1").unwrap(), None).unwrap();
        let t = FieldElement::parse(&q, "2a + 1").unwrap();
        let g = trace_to_geodesic(&q, &t, 64).unwrap();
        let y = 3f64.sqrt();
        let expect = 2.0 * ((y + (y * y + 4.0).sqrt()) / 2.0).ln();
        assert!((g.length.mid().to_f64() - expect).abs() < 1e-12);
        assert!((g.angle.mid().to_f64().abs() - std::f64::consts::PI).abs() < 1e-12);
        let real = field("x^2 - 2");
        assert_eq!(trace_to_geodesic(&real, &t, 64).err(), Some(Error::NotOneComplexPlace(0)));
    }

    #[test]
    fn cubic_generator_is_loxodromic() {
        let k = NumberField::new(IntPolynomial::parse("x^3 - 2").unwrap(), None).unwrap();
        let g = trace_to_geodesic(&k, &FieldElement::generator(&k), 80).unwrap();
        assert!(g.length.is_positive());
        // lambda + 1/lambda = t
        let tz = k.evaluate_at_place(&FieldElement::generator(&k), crate::field::Place::Complex(0), 80).unwrap();
        let inv = CInterval::real(Interval::from_int(1, 200)).checked_div(&g.lambda).unwrap();
        assert!(g.lambda.add(&inv).overlaps(&tz));
    }
}
