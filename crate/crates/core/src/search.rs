//! Degree-1 prime ideals with a prescribed Frobenius vector, and k-tuples of
//! them whose norms fit in a window.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{NumberField, PrimeIdeal};
use crate::sieve::{map_prime_segments, DEFAULT_SEGMENT};
use crate::splitting::{require_full_compositum, split_symbol, FrobeniusVector, QuadraticExtension, SplitSymbol};

/// Fewer stream primes than this flags the statistics as low-confidence.
pub const LOW_CONFIDENCE_COUNT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapPolicy {
    Sliding,
    Disjoint,
}

impl std::str::FromStr for OverlapPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sliding" => Ok(OverlapPolicy::Sliding),
            "disjoint" => Ok(OverlapPolicy::Disjoint),
            other => Err(Error::Parse(format!("unknown overlap policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub extensions: Vec<QuadraticExtension>,
    pub target: FrobeniusVector,
    pub height: u64,
    /// Labels `p:index` never emitted.
    pub avoid: BTreeSet<String>,
    pub k: usize,
    pub window: u64,
    pub policy: OverlapPolicy,
    pub segment: u64,
}

impl SearchSpec {
    pub fn new(extensions: Vec<QuadraticExtension>, target: FrobeniusVector, height: u64, k: usize, window: u64) -> Self {
        SearchSpec {
            extensions,
            target,
            height,
            avoid: BTreeSet::new(),
            k,
            window,
            policy: OverlapPolicy::Sliding,
            segment: DEFAULT_SEGMENT,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidInput("tuple size k must be at least 1".into()));
        }
        if self.height < 3 {
            return Err(Error::InvalidInput("search height must be at least 3".into()));
        }
        if self.target.len() != self.extensions.len() {
            return Err(Error::InvalidInput(format!(
                "target vector has {} entries for {} extensions",
                self.target.len(),
                self.extensions.len()
            )));
        }
        Ok(())
    }
}

/// Height used for the compositum check before a scan.
pub(crate) fn compositum_height(x: u64) -> u64 {
    x.clamp(1_000, 10_000)
}

/// Whether `prime` has Frobenius vector `target`; `None` if it ramifies somewhere.
pub(crate) fn matches_target(k: &NumberField, prime: &PrimeIdeal, ls: &[QuadraticExtension], target: FrobeniusVector) -> Result<Option<bool>> {
    for (i, l) in ls.iter().enumerate() {
        let want = if target.get(i) == 1 { SplitSymbol::Inert } else { SplitSymbol::Split };
        match split_symbol(k, prime, l)? {
            SplitSymbol::Ramified => return Ok(None),
            s if s != want => return Ok(Some(false)),
            _ => {}
        }
    }
    Ok(Some(true))
}

/// One prime ideal per qualifying rational prime, ascending in norm.
pub fn enumerate_target_primes(k: &NumberField, spec: &SearchSpec, exec: Exec) -> Result<Vec<PrimeIdeal>> {
    spec.validate()?;
    if !spec.extensions.is_empty() {
        require_full_compositum(k, &spec.extensions, compositum_height(spec.height), exec)?;
    }
    scan(k, spec, exec)
}

fn scan(k: &NumberField, spec: &SearchSpec, exec: Exec) -> Result<Vec<PrimeIdeal>> {
    let ls = &spec.extensions;
    let out = map_prime_segments(spec.height, spec.segment, exec, |ps| {
        let mut found = Vec::new();
        for &p in ps {
            if k.is_excluded(p) || ls.iter().any(|l| (l.radicand().denominator() % p) == 0u32.into()) {
                continue;
            }
            let primes = match k.factor_prime(p) {
                Ok(v) => v,
                Err(e) => {
                    found.push(Err(e));
                    continue;
                }
            };
            for prime in primes.into_iter().filter(|q| q.inertia_degree() == 1) {
                if spec.avoid.contains(&prime.label()) {
                    continue;
                }
                match matches_target(k, &prime, ls, spec.target) {
                    Ok(Some(true)) => {
                        found.push(Ok(prime));
                        break;
                    }
                    Ok(_) => {}
                    Err(e) => {
                        found.push(Err(e));
                        break;
                    }
                }
            }
        }
        found
    });
    out.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeTuple {
    pub primes: Vec<PrimeIdeal>,
    pub vectors: Vec<FrobeniusVector>,
    pub span: u64,
}

impl PrimeTuple {
    pub fn norms(&self) -> Vec<u64> {
        self.primes.iter().map(|p| p.prime()).collect()
    }
}

/// Windows of `k` consecutive stream primes with norm span at most `window`.
pub fn find_bounded_gap_tuples(stream: &[PrimeIdeal], spec: &SearchSpec) -> Vec<PrimeTuple> {
    let k = spec.k;
    let mut out = Vec::new();
    if k == 0 || stream.len() < k {
        return out;
    }
    let norm = |i: usize| stream[i].prime();
    let mut i = 0;
    while i + k <= stream.len() {
        let span = norm(i + k - 1) - norm(i);
        if span <= spec.window {
            out.push(PrimeTuple {
                primes: stream[i..i + k].to_vec(),
                vectors: vec![spec.target; k],
                span,
            });
            i += match spec.policy {
                OverlapPolicy::Sliding => 1,
                OverlapPolicy::Disjoint => k,
            };
        } else {
            i += 1;
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GapStatistics {
    pub height: u64,
    pub count: usize,
    /// Non-excluded rational primes up to the height.
    pub rational_primes: usize,
    pub empirical_density: f64,
    pub chebotarev_density: f64,
    /// `(count - n q) / sqrt(n q (1 - q))` with `q` the Chebotarev density.
    pub z_score: f64,
    /// Consecutive gap -> number of occurrences.
    pub gap_histogram: BTreeMap<u64, usize>,
    /// `min_span[j]` is the smallest norm span of `j + 1` consecutive stream primes.
    pub min_span: Vec<Option<u64>>,
    pub low_confidence: bool,
}

pub fn gap_statistics(k: &NumberField, stream: &[PrimeIdeal], spec: &SearchSpec) -> GapStatistics {
    let rational_primes = crate::sieve::primes_up_to(spec.height).into_iter().filter(|&p| !k.is_excluded(p)).count();
    let q = 0.5f64.powi(spec.extensions.len() as i32);
    let n = rational_primes as f64;
    let count = stream.len();
    let sd = (n * q * (1.0 - q)).sqrt();
    let z_score = if sd > 0.0 { (count as f64 - n * q) / sd } else { 0.0 };
    let norms: Vec<u64> = stream.iter().map(|p| p.prime()).collect();
    let mut gap_histogram = BTreeMap::new();
    for w in norms.windows(2) {
        *gap_histogram.entry(w[1] - w[0]).or_insert(0) += 1;
    }
    let min_span = (1..=spec.k.max(1))
        .map(|j| norms.windows(j).map(|w| w[j - 1] - w[0]).min())
        .collect();
    GapStatistics {
        height: spec.height,
        count,
        rational_primes,
        empirical_density: if n > 0.0 { count as f64 / n } else { 0.0 },
        chebotarev_density: q,
        z_score,
        gap_histogram,
        min_span,
        low_confidence: count < LOW_CONFIDENCE_COUNT,
    }
}
