//! Segmented sieve of Eratosthenes.

use crate::exec::Exec;

pub const DEFAULT_SEGMENT: u64 = 1 << 20;

/// Primes `p` with `p <= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return vec![];
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primes in `[lo, hi)` given all base primes up to `sqrt(hi)`.
pub fn primes_in_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    if hi <= lo {
        return vec![];
    }
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    (0..len).filter(|&i| !composite[i] && lo + i as u64 >= 2).map(|i| lo + i as u64).collect()
}

/// Half-open segments `[lo, hi)` covering `[2, limit]`.
pub fn segments(limit: u64, segment: u64) -> Vec<(u64, u64)> {
    let segment = segment.max(1);
    let mut out = Vec::new();
    let mut lo = 2;
    while lo <= limit {
        let hi = (lo + segment).min(limit + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Primes per unit of scheduled work.
const WORK_CHUNK: usize = 2048;

/// Run `f` on consecutive blocks of the primes up to `limit` and concatenate
/// the results in prime order.
///
/// Segments are sieved one at a time to bound memory; the blocks of each
/// segment are handed to `exec`.
pub fn map_prime_segments<R, F>(limit: u64, segment: u64, exec: Exec, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&[u64]) -> Vec<R> + Sync + Send,
{
    let base = primes_up_to(isqrt(limit) + 1);
    let mut out = Vec::new();
    for (lo, hi) in segments(limit, segment) {
        let primes = primes_in_segment(lo, hi, &base);
        let blocks: Vec<&[u64]> = primes.chunks(WORK_CHUNK).collect();
        out.extend(exec.map(&blocks, |b| f(b)).into_iter().flatten());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_counts() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(100_000).len(), 9592);
        let seg = map_prime_segments(100_000, 777, Exec::Sequential, |ps| ps.to_vec());
        assert_eq!(seg, primes_up_to(100_000));
        assert_eq!(map_prime_segments(1_000_000, DEFAULT_SEGMENT, Exec::default(), |ps| vec![ps.len()]).iter().sum::<usize>(), 78498);
    }

    #[test]
    fn tiny_limits() {
        assert!(primes_up_to(1).is_empty());
        assert_eq!(map_prime_segments(2, 10, Exec::Sequential, |ps| ps.to_vec()), vec![2]);
        assert!(map_prime_segments(1, 10, Exec::Sequential, |ps| ps.to_vec()).is_empty());
    }
}
