//! Certified isolation of all complex roots of a squarefree integer polynomial.
//!
//! Approximations come from Aberth iteration (first in `f64`, then at the
//! working precision). Certification uses inclusion disks of radius
//! `n * |f(z_i) / (lc * prod_{j != i} (z_i - z_j))|`: the union of the disks
//! contains every root and each connected component holds as many roots as
//! disks. Pairwise disjoint disks therefore isolate one root each. A disk
//! centred on the real axis that meets no other disk holds a real root,
//! since the polynomial has real coefficients.

use num_complex::Complex64;

use super::int::IntPolynomial;
use crate::error::{Error, Result};
use crate::interval::{CInterval, Dyadic, Interval, Round};

/// Default cap for the doubling working precision.
pub const DEFAULT_PRECISION_CAP: u32 = 512;

/// A certified root: the closed disk `|z - center| <= radius` contains
/// exactly one root of the polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBox {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
    pub is_real: bool,
}

impl RootBox {
    /// The square circumscribing the disk (on the real axis for real roots).
    pub fn to_box(&self, prec: u32) -> CInterval {
        let re = Interval::ball(&self.re, &self.radius, prec);
        let im = if self.is_real {
            Interval::from_int(0, prec)
        } else {
            Interval::ball(&self.im, &self.radius, prec)
        };
        CInterval::new(re, im)
    }

    pub fn real_interval(&self, prec: u32) -> Interval {
        Interval::ball(&self.re, &self.radius, prec)
    }

    pub fn approx(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

fn horner_c(f: &IntPolynomial, z: &CInterval) -> CInterval {
    let p = z.prec();
    let mut acc = CInterval::real(Interval::from_int(0, p));
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&CInterval::real(Interval::from_int(c.clone(), p)));
    }
    acc
}

/// Evaluate `f` on a complex box by interval Horner.
pub fn eval_on_box(f: &IntPolynomial, z: &CInterval) -> CInterval {
    horner_c(f, z)
}

fn aberth_f64(f: &IntPolynomial) -> Vec<Complex64> {
    let n = f.degree().unwrap();
    let c: Vec<f64> = f.coeffs().iter().map(|x| Dyadic::from_int(x.clone()).to_f64()).collect();
    let lc = c[n];
    let bound = 1.0 + c[..n].iter().map(|a| (a / lc).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

struct Approx {
    re: Dyadic,
    im: Dyadic,
}

fn to_cbox(a: &Approx, prec: u32) -> CInterval {
    CInterval::point(a.re.clone(), a.im.clone(), prec)
}

/// Aberth steps at working precision `w`, collapsing to midpoints each step.
fn refine(f: &IntPolynomial, zs: &mut [Approx], w: u32) {
    let n = zs.len();
    let df = f.derivative();
    for _ in 0..200 {
        let mut worst: i64 = i64::MIN;
        for i in 0..n {
            let z = to_cbox(&zs[i], w);
            let v = horner_c(f, &z);
            let d = horner_c(&df, &z);
            let ratio = match v.checked_div(&d) {
                Some(r) => r,
                None => continue,
            };
            let mut s = CInterval::real(Interval::from_int(0, w));
            let mut ok = true;
            for (j, zj) in zs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let diff = z.sub(&to_cbox(zj, w));
                match CInterval::real(Interval::from_int(1, w)).checked_div(&diff) {
                    Some(q) => s = s.add(&q),
                    None => ok = false,
                }
            }
            let step = if ok {
                let denom = CInterval::real(Interval::from_int(1, w)).sub(&ratio.mul(&s));
                ratio.checked_div(&denom)
            } else {
                Some(ratio)
            };
            let step = match step {
                Some(s) => s,
                None => continue,
            };
            let (sr, si) = step.mid();
            let new_re = zs[i].re.sub(&sr).round(w, Round::Nearest);
            let new_im = zs[i].im.sub(&si).round(w, Round::Nearest);
            let mag = sr.msb().max(si.msb());
            let scale = new_re.msb().max(new_im.msb()).max(0);
            worst = worst.max(mag - scale);
            zs[i] = Approx { re: new_re, im: new_im };
        }
        if worst < -(w as i64 - 8) {
            break;
        }
    }
}

/// Try to certify the approximations at working precision `w`.
fn certify(f: &IntPolynomial, zs: &[Approx], w: u32) -> Option<Vec<RootBox>> {
    let n = zs.len();
    let lc = Interval::from_int(f.lc(), w);
    let mut boxes = Vec::with_capacity(n);
    for i in 0..n {
        let z = to_cbox(&zs[i], w);
        let mut denom = CInterval::real(lc.clone());
        for (j, zj) in zs.iter().enumerate() {
            if j != i {
                denom = denom.mul(&z.sub(&to_cbox(zj, w)));
            }
        }
        let weierstrass = horner_c(f, &z).checked_div(&denom)?;
        let r = weierstrass.abs().hi().mul(&Dyadic::from_int(n as i64)).round(w, Round::Up);
        let is_real = zs[i].im.is_zero();
        if !is_real && zs[i].im.abs() <= r {
            return None;
        }
        boxes.push(RootBox { re: zs[i].re.clone(), im: zs[i].im.clone(), radius: r, is_real });
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = to_cbox(&zs[i], w).sub(&to_cbox(&zs[j], w)).abs();
            if d.lo() <= &boxes[i].radius.add(&boxes[j].radius) {
                return None;
            }
        }
    }
    Some(boxes)
}

/// Replace each lower-half-plane approximation by the exact conjugate of
/// its nearest upper-half-plane partner.
fn symmetrize(zs: &mut [Approx]) {
    let uppers: Vec<usize> = (0..zs.len()).filter(|&i| zs[i].im.is_positive()).collect();
    let lowers: Vec<usize> = (0..zs.len()).filter(|&i| zs[i].im.is_negative()).collect();
    if uppers.len() != lowers.len() {
        return;
    }
    let mut used = vec![false; lowers.len()];
    let mut pairs = Vec::new();
    for &u in &uppers {
        let target = (zs[u].re.to_f64(), -zs[u].im.to_f64());
        let best = lowers
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .min_by(|(_, &a), (_, &b)| {
                let da = (zs[a].re.to_f64() - target.0).hypot(zs[a].im.to_f64() - target.1);
                let db = (zs[b].re.to_f64() - target.0).hypot(zs[b].im.to_f64() - target.1);
                da.total_cmp(&db)
            })
            .map(|(k, _)| k);
        match best {
            Some(k) => {
                used[k] = true;
                pairs.push((u, lowers[k]));
            }
            None => return,
        }
    }
    for (u, l) in pairs {
        zs[l] = Approx { re: zs[u].re.clone(), im: zs[u].im.neg() };
    }
}

fn sort_boxes(mut boxes: Vec<RootBox>) -> Vec<RootBox> {
    boxes.sort_by(|a, b| {
        b.is_real
            .cmp(&a.is_real)
            .then(a.re.cmp(&b.re))
            .then(a.im.abs().cmp(&b.im.abs()))
            .then(b.im.cmp(&a.im))
    });
    boxes
}

/// Isolate every root of the squarefree `f` in a disk of diameter at most
/// `2^-precision`, escalating the working precision up to `cap` bits.
///
/// Output: real roots in increasing order, then non-real roots ordered by
/// real part, each upper-half-plane root followed by its conjugate.
pub fn isolate_complex_roots_with_cap(f: &IntPolynomial, precision: u32, cap: u32) -> Result<Vec<RootBox>> {
    let n = match f.degree() {
        None => return Err(Error::InvalidInput("zero polynomial".into())),
        Some(0) => return Ok(vec![]),
        Some(n) => n,
    };
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let start = aberth_f64(f);
    let mut w = (precision + 32).max(64);
    let mut zs: Vec<Approx> =
        start.iter().map(|c| Approx { re: Dyadic::from_f64(c.re), im: Dyadic::from_f64(c.im) }).collect();
    loop {
        if w > cap {
            return Err(Error::PrecisionExhausted { cap });
        }
        refine(f, &mut zs, w);
        // snap approximations that sit numerically on the real axis
        let snap = -(w as i64 / 2);
        let mut snapped: Vec<Approx> = zs
            .iter()
            .map(|a| {
                let im = if a.im.msb() < snap + a.re.msb().max(0) { Dyadic::zero() } else { a.im.clone() };
                Approx { re: a.re.clone(), im }
            })
            .collect();
        symmetrize(&mut snapped);
        if n == 1 {
            // the root is rational: -a0 / a1
            let c = f.coeffs();
            snapped[0].re = Dyadic::from_ratio(&(-&c[0]), &c[1], w, Round::Nearest);
        }
        if let Some(boxes) = certify(f, &snapped, w) {
            let target = Dyadic::one().mul_pow2(-(precision as i64) - 1);
            if boxes.iter().all(|b| b.radius <= target) {
                return Ok(sort_boxes(boxes));
            }
        }
        zs = snapped;
        w *= 2;
    }
}

pub fn isolate_complex_roots(f: &IntPolynomial, precision: u32) -> Result<Vec<RootBox>> {
    isolate_complex_roots_with_cap(f, precision, DEFAULT_PRECISION_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(s: &str, bits: u32) -> Vec<RootBox> {
        isolate_complex_roots(&IntPolynomial::parse(s).unwrap(), bits).unwrap()
    }

    #[test]
    fn gaussian_roots() {
        let r = iso("x^2 + 1", 30);
        assert_eq!(r.len(), 2);
        assert!(!r[0].is_real && !r[1].is_real);
        assert!((r[0].approx() - Complex64::new(0.0, 1.0)).norm() < 1e-9);
        assert!((r[1].approx() - Complex64::new(0.0, -1.0)).norm() < 1e-9);
    }

    #[test]
    fn cube_root_of_two() {
        let r = iso("x^3 - 2", 30);
        assert!(r[0].is_real);
        assert!((r[0].re.to_f64() - 2f64.cbrt()).abs() < 1e-9);
        let w = Complex64::from_polar(2f64.cbrt(), 2.0 * std::f64::consts::PI / 3.0);
        assert!((r[1].approx() - w).norm() < 1e-9);
        assert!((r[2].approx() - w.conj()).norm() < 1e-9);
    }

    #[test]
    fn sqrt_five() {
        let r = iso("x^2 - 5", 30);
        assert!(r[0].is_real && r[1].is_real);
        assert!((r[0].re.to_f64() + 5f64.sqrt()).abs() < 1e-9);
        assert!((r[1].re.to_f64() - 2.2360679).abs() < 1e-7);
        for b in &r {
            assert!(b.radius.msb() <= -31);
        }
    }

    #[test]
    fn boxes_contain_zeros_of_f() {
        for s in ["x^3 - x + 1", "x^4 - 10x^2 + 1", "x^5 - x - 1", "x", "3x^2 - 1"] {
            let f = IntPolynomial::parse(s).unwrap();
            for b in isolate_complex_roots(&f, 80).unwrap() {
                let v = eval_on_box(&f, &b.to_box(200));
                assert!(v.contains_zero(), "{s}");
            }
        }
    }

    #[test]
    fn high_precision_and_errors() {
        let r = iso("x^2 - 2", 300);
        assert!(r[1].radius.msb() <= -301);
        let e = isolate_complex_roots(&IntPolynomial::parse("x^2 - 2x + 1").unwrap(), 30);
        assert_eq!(e, Err(Error::NotSquarefree));
        let e = isolate_complex_roots_with_cap(&IntPolynomial::parse("x^2 - 2").unwrap(), 600, 64);
        assert!(matches!(e, Err(Error::PrecisionExhausted { .. })));
    }
}
