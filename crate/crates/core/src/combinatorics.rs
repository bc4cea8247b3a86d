//! Exact integer combinatorics.
//!
//! `binomial` follows the weak-composition convention: `C(n, 0) = 1` for every
//! integer `n`, and `C(n, k) = 0` whenever `k > 0` and `n < k` (in particular
//! for every negative `n`). With this convention the general constant reduces
//! to its `M = 0` and `M = N` special cases without separate branches.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::One;

/// Exact non-negative count.
pub type BigCount = BigUint;

/// Binomials with `n` up to this value are memoized.
const CACHE_LIMIT: u64 = 4096;

/// Above this `n` the prime-factorization route beats the multiplicative one.
const FACTORIZE_THRESHOLD: u64 = 512;

type BinomialCache = RwLock<HashMap<(u64, u64), BigCount>>;

fn cache() -> &'static BinomialCache {
    static CACHE: OnceLock<BinomialCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

pub fn binomial(n: i64, k: u64) -> BigCount {
    if k == 0 {
        return BigCount::one();
    }
    if n < 0 || (n as u64) < k {
        return BigCount::ZERO;
    }
    let n = n as u64;
    let k = k.min(n - k);
    if k == 0 {
        return BigCount::one();
    }

    if n > CACHE_LIMIT {
        return binomial_uncached(n, k);
    }
    if let Some(hit) = cache().read().ok().and_then(|c| c.get(&(n, k)).cloned()) {
        return hit;
    }
    let value = binomial_uncached(n, k);
    if let Ok(mut c) = cache().write() {
        c.insert((n, k), value.clone());
    }
    value
}

fn binomial_uncached(n: u64, k: u64) -> BigCount {
    if n >= FACTORIZE_THRESHOLD && k > 16 {
        binomial_by_primes(n, k)
    } else {
        binomial_multiplicative(n, k)
    }
}

/// `prod_{i=1}^{k} (n-k+i)/i`; every prefix is itself a binomial so the
/// division is exact.
pub(crate) fn binomial_multiplicative(n: u64, k: u64) -> BigCount {
    let mut acc = BigCount::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// Legendre's formula: the exponent of prime `q` in `C(n, k)` is the number
/// of borrows when subtracting `k` from `n` in base `q`.
pub(crate) fn binomial_by_primes(n: u64, k: u64) -> BigCount {
    let mut factors = Vec::new();
    for q in primes_up_to(n) {
        let mut exponent = 0u32;
        let mut power = q;
        loop {
            exponent += (n / power - k / power - (n - k) / power) as u32;
            match power.checked_mul(q) {
                Some(next) if next <= n => power = next,
                _ => break,
            }
        }
        for _ in 0..exponent {
            factors.push(q);
        }
    }
    product_tree(&factors)
}

pub fn weak_composition_count(s: u64, parts: u64) -> BigCount {
    binomial(s as i64 + parts as i64 - 1, s)
}

pub fn factorial(n: u64) -> BigCount {
    let factors: Vec<u64> = (2..=n).collect();
    product_tree(&factors)
}

/// Balanced product so that the big multiplications happen between
/// operands of similar size.
fn product_tree(factors: &[u64]) -> BigCount {
    match factors.len() {
        0 => BigCount::one(),
        1 => BigCount::from(factors[0]),
        len if len <= 16 => factors.iter().fold(BigCount::one(), |acc, &f| acc * f),
        len => {
            let (lo, hi) = factors.split_at(len / 2);
            product_tree(lo) * product_tree(hi)
        }
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}
