//! Binary interval arithmetic with directed rounding.

mod complex;
mod dyadic;
pub mod elementary;
mod real;

pub use complex::CInterval;
pub use dyadic::{Dyadic, Round};
pub use real::Interval;

use serde::{Deserialize, Serialize};

/// Decimal rendering of an interval: midpoint plus a radius that bounds
/// the distance to both endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalBall {
    pub mid: String,
    pub rad: String,
}

impl DecimalBall {
    pub fn from_interval(x: &Interval, digits: usize) -> Self {
        // the decimal midpoint is itself rounded, so the radius absorbs that error
        let mid = x.mid();
        let shown = mid.to_decimal(digits);
        let rounding = if mid.is_zero() { Dyadic::zero() } else { Dyadic::one().mul_pow2(mid.msb() - 3 * digits as i64 + 4) };
        let rad = x.rad().add(&rounding).round(12, Round::Up);
        DecimalBall { mid: shown, rad: sci(&rad) }
    }
}

fn sci(x: &Dyadic) -> String {
    if x.is_zero() {
        return "0".into();
    }
    // round up to 3 significant digits in scientific notation
    let v = x.to_f64();
    let e = v.abs().log10().floor() as i32;
    let m = v / 10f64.powi(e);
    let m = (m * 100.0).ceil() / 100.0;
    format!("{m:.2}e{e}")
}
