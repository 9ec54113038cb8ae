use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use lenspec::exec::Exec;
use lenspec::field::{FieldElement, NumberField, PrimeIdeal};
use lenspec::interval::Interval;
use lenspec::poly::factor::factor_mod_p;
use lenspec::poly::{IntPolynomial, ModPolynomial};
use lenspec::quaternion::{extend_ramification, QuaternionAlgebra, RamificationSet};
use lenspec::search::{enumerate_target_primes, find_bounded_gap_tuples, OverlapPolicy, SearchSpec};
use lenspec::sieve::{primes_in_segment, primes_up_to};
use lenspec::splitting::{prime_ideals_up_to, split_symbol, FrobeniusVector, QuadraticExtension};
use lenspec::volume::{borel_volume, dedekind_zeta_2, trace_to_geodesic};

fn field(s: &str) -> NumberField {
    NumberField::new(IntPolynomial::parse(s).unwrap(), None).unwrap()
}

/// `m + n a`.
fn elem(k: &NumberField, m: i64, n: i64) -> FieldElement {
    FieldElement::new(k, IntPolynomial::from_i64(&[m, n]), BigInt::from(1)).unwrap()
}

/// Every monic polynomial of degree `d` over `F_p`.
fn monic_of_degree(p: u64, d: usize) -> Vec<ModPolynomial> {
    let count = p.pow(d as u32);
    (0..count)
        .map(|mut n| {
            let mut c: Vec<u64> = (0..d)
                .map(|_| {
                    let r = n % p;
                    n /= p;
                    r
                })
                .collect();
            c.push(1);
            ModPolynomial::new(p, c)
        })
        .collect()
}

fn irreducible_by_trial(g: &ModPolynomial) -> bool {
    let d = g.degree().unwrap();
    (1..=d / 2).all(|e| monic_of_degree(g.modulus(), e).iter().all(|h| !g.rem(h).is_zero()))
}

fn naive_primes(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_mod_p_is_complete_and_irreducible(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        coeffs in prop::collection::vec(-20i64..20, 1..=4),
    ) {
        let mut c = coeffs.clone();
        c.push(1);
        let f = IntPolynomial::from_i64(&c);
        let factors = factor_mod_p(&f, p).unwrap();
        let mut product = ModPolynomial::one(p);
        for (g, e) in &factors {
            prop_assert!(g.is_monic());
            prop_assert!(irreducible_by_trial(g), "{} reducible mod {}", g.to_string_in('x'), p);
            for _ in 0..*e {
                product = product.mul(g);
            }
        }
        prop_assert_eq!(product, ModPolynomial::from_int(&f, p));
    }

    #[test]
    fn segmented_sieve_matches_trial_division(lo in 0u64..3000, len in 0u64..500) {
        let base = primes_up_to(60);
        let hi = lo + len;
        let want: Vec<u64> = naive_primes(hi).into_iter().filter(|&q| q >= lo && q < hi).collect();
        prop_assert_eq!(primes_in_segment(lo, hi, &base), want);
    }

    #[test]
    fn split_symbol_ignores_square_factors(d in prop::sample::select(vec![-3i64, -1, 2, 3, 5, 7]), c in 2i64..12) {
        let k = field("x^2 + 1");
        let base = QuadraticExtension::new(&k, elem(&k, d, 1), "d").unwrap();
        let scaled = elem(&k, c * c * d, c * c);
        let scaled = QuadraticExtension::new(&k, scaled, "c^2 d").unwrap();
        for prime in prime_ideals_up_to(&k, 400, Exec::Sequential).unwrap() {
            if (c as u64).is_multiple_of(prime.prime()) {
                continue;
            }
            prop_assert_eq!(split_symbol(&k, &prime, &base).unwrap(), split_symbol(&k, &prime, &scaled).unwrap());
        }
    }

    #[test]
    fn frobenius_vectors_round_trip(bits in prop::collection::vec(0u8..2, 1..12), other in any::<u64>()) {
        let v = FrobeniusVector::from_slice(&bits);
        prop_assert_eq!(FrobeniusVector::parse(&v.to_string()).unwrap(), v);
        let w = FrobeniusVector::new(other & ((1u64 << bits.len()) - 1), bits.len());
        prop_assert_eq!(v.xor(&w).xor(&w), v);
    }

    #[test]
    fn interval_ops_enclose_exact_values(a in -10_000i64..10_000, b in 1i64..10_000, c in -10_000i64..10_000, d in 1i64..10_000) {
        let x = BigRational::new(a.into(), b.into());
        let y = BigRational::new(c.into(), d.into());
        let ix = Interval::from_rational(&x, 64);
        let iy = Interval::from_rational(&y, 64);
        prop_assert!((&ix + &iy).contains_rational(&(&x + &y)));
        prop_assert!((&ix - &iy).contains_rational(&(&x - &y)));
        prop_assert!((&ix * &iy).contains_rational(&(&x * &y)));
        if c != 0 {
            prop_assert!(ix.checked_div(&iy).unwrap().contains_rational(&(&x / &y)));
        }
    }

    #[test]
    fn sliding_tuples_are_exactly_the_short_windows(height in 20u64..2000, k in 2usize..4, window in 0u64..40) {
        let q = NumberField::rationals();
        let l = QuadraticExtension::new(&q, FieldElement::from_int(5), "5").unwrap();
        let mut spec = SearchSpec::new(vec![l], FrobeniusVector::parse("1").unwrap(), height, k, window);
        spec.policy = OverlapPolicy::Sliding;
        let stream = enumerate_target_primes(&q, &spec, Exec::Sequential).unwrap();
        let norms: Vec<u64> = stream.iter().map(PrimeIdeal::prime).collect();
        let want: Vec<Vec<u64>> = norms.windows(k).filter(|w| w[k - 1] - w[0] <= window).map(|w| w.to_vec()).collect();
        let got: Vec<Vec<u64>> = find_bounded_gap_tuples(&stream, &spec).iter().map(|t| t.norms()).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn geodesic_eigenvalue_reconstructs_trace(m in -30i64..30, n in -30i64..30) {
        prop_assume!(n != 0 || m.abs() > 2);
        let k = field("x^2 + 1");
        let t = elem(&k, m, n);
        let g = trace_to_geodesic(&k, &t, 64).unwrap();
        let place = k.unique_complex_place().unwrap();
        let tz = k.evaluate_at_place(&t, place, 96).unwrap();
        let sum = g.lambda.add(&lenspec::interval::CInterval::real(Interval::from_int(1, 64)).checked_div(&g.lambda).unwrap());
        prop_assert!(sum.overlaps(&tz));
        prop_assert!(g.length.is_positive());
    }
}

#[test]
fn odd_ramification_is_rejected() {
    let k = field("x^3 - 2");
    let primes = prime_ideals_up_to(&k, 50, Exec::Sequential).unwrap();
    for n in 0..4 {
        let finite: Vec<PrimeIdeal> = primes.iter().take(n).cloned().collect();
        for real in [vec![], vec![0]] {
            let ok = RamificationSet::new(&k, real.clone(), finite.clone(), vec![]).is_ok();
            assert_eq!(ok, (n + real.len()) % 2 == 0, "n = {n}, real = {real:?}");
        }
    }
}

#[test]
fn volume_ratios_multiply() {
    let k = field("x^2 + 1");
    let zeta = dedekind_zeta_2(&k, 500, 96, Exec::Sequential).unwrap();
    let primes = prime_ideals_up_to(&k, 200, Exec::Sequential).unwrap();
    let base = QuaternionAlgebra::new(RamificationSet::new(&k, vec![], vec![], vec![]).unwrap());
    let v0 = borel_volume(&k, base.ramification(), &zeta).unwrap();
    for w in primes.windows(4).step_by(3) {
        let b1 = extend_ramification(&base, &w[0], &w[1]).unwrap();
        let b2 = extend_ramification(&b1, &w[2], &w[3]).unwrap();
        let v1 = borel_volume(&k, b1.ramification(), &zeta).unwrap();
        let v2 = borel_volume(&k, b2.ramification(), &zeta).unwrap();
        let r = |a: &num_bigint::BigUint, b: &num_bigint::BigUint| {
            BigRational::new(BigInt::from(a.clone()), BigInt::from(b.clone()))
        };
        assert_eq!(r(&v2.norm_factor, &v0.norm_factor), r(&v2.norm_factor, &v1.norm_factor) * r(&v1.norm_factor, &v0.norm_factor));
        let n = |p: &PrimeIdeal| BigInt::from(p.norm()) - 1;
        assert_eq!(r(&v2.norm_factor, &v1.norm_factor), BigRational::from_integer(n(&w[2]) * n(&w[3])));
    }
}

#[test]
fn zeta_enclosures_nest_toward_the_limit() {
    let q = NumberField::rationals();
    let target = std::f64::consts::PI.powi(2) / 6.0;
    let mut prev_eps = f64::INFINITY;
    for x in [100u64, 1000, 10_000, 100_000] {
        let z = dedekind_zeta_2(&q, x, 96, Exec::Sequential).unwrap();
        assert!(z.value.lo().to_f64() <= target + 1e-15 && target - 1e-15 <= z.value.hi().to_f64());
        let eps = z.epsilon.to_f64();
        assert!(eps < prev_eps);
        prev_eps = eps;
    }
}
