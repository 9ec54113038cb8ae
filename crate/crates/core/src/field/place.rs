use super::{FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::interval::{CInterval, Interval};
use crate::poly::roots::DEFAULT_PRECISION_CAP;

/// An archimedean place: a real root (ascending order) or an upper-half-plane root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real(usize),
    Complex(usize),
}

/// A real embedding with a certified enclosure of the image of the generator.
#[derive(Debug, Clone)]
pub struct RealPlace {
    pub index: usize,
    pub root: Interval,
}

impl NumberField {
    /// The real places, roots enclosed to `precision` bits.
    pub fn real_places(&self, precision: u32) -> Result<Vec<RealPlace>> {
        let roots = self.roots(precision, precision.max(DEFAULT_PRECISION_CAP))?;
        let w = precision + 8;
        Ok(roots
            .iter()
            .filter(|r| r.is_real)
            .enumerate()
            .map(|(index, r)| RealPlace { index, root: r.real_interval(w) })
            .collect())
    }

    fn check_place(&self, place: Place) -> Result<()> {
        let (r1, r2) = self.signature();
        match place {
            Place::Real(i) if i >= r1 => Err(Error::InvalidInput(format!("real place {i} out of range (r1 = {r1})"))),
            Place::Complex(j) if j >= r2 => Err(Error::InvalidInput(format!("complex place {j} out of range (r2 = {r2})"))),
            _ => Ok(()),
        }
    }

    /// Enclosure of `x` under the embedding `place`, each part of width at most `2^-precision`.
    ///
    /// Real places give an exactly real result.
    pub fn evaluate_at_place(&self, x: &FieldElement, place: Place, precision: u32) -> Result<CInterval> {
        self.check_place(place)?;
        let cap = DEFAULT_PRECISION_CAP.max(4 * precision);
        let extra = x.numerator().coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as u32;
        let mut w = precision + 16 + extra;
        loop {
            if w > cap {
                return Err(Error::PrecisionExhausted { cap });
            }
            let roots = self.roots(w, cap)?;
            let (r1, _) = self.signature();
            let z = match place {
                Place::Real(i) => CInterval::real(roots[i].real_interval(w + 8)),
                Place::Complex(j) => roots[r1 + 2 * j].to_box(w + 8),
            };
            let v = eval_element(x, &z, matches!(place, Place::Real(_)));
            let ok = v.re().width_at_most_pow2(precision as i64 + 1) && v.im().width_at_most_pow2(precision as i64 + 1);
            if ok {
                return Ok(v);
            }
            w *= 2;
        }
    }

    pub fn evaluate_real(&self, x: &FieldElement, index: usize, precision: u32) -> Result<Interval> {
        Ok(self.evaluate_at_place(x, Place::Real(index), precision)?.re().clone())
    }

    /// The unique complex place, when there is exactly one.
    pub fn unique_complex_place(&self) -> Result<Place> {
        match self.signature().1 {
            1 => Ok(Place::Complex(0)),
            r2 => Err(Error::NotOneComplexPlace(r2)),
        }
    }
}

fn eval_element(x: &FieldElement, z: &CInterval, real: bool) -> CInterval {
    let p = z.prec();
    let den = Interval::from_int(x.denominator().clone(), p);
    if real {
        let t = z.re();
        let mut acc = Interval::from_int(0, p);
        for c in x.numerator().coeffs().iter().rev() {
            acc = &(&acc * t) + &Interval::from_int(c.clone(), p);
        }
        return CInterval::real(acc.checked_div(&den).expect("positive denominator"));
    }
    let mut acc = CInterval::real(Interval::from_int(0, p));
    for c in x.numerator().coeffs().iter().rev() {
        acc = acc.mul(z).add(&CInterval::real(Interval::from_int(c.clone(), p)));
    }
    let inv = Interval::from_int(1, p).checked_div(&den).expect("positive denominator");
    acc.scale(&inv)
}
