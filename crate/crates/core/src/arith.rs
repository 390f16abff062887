//! Word-size modular arithmetic, primality and small sieves.

use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn reduce_i64(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n == b {
            return true;
        }
        if n.is_multiple_of(b) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first twelve prime bases. Deterministic below
/// 3.3e24, a strong probable-prime test beyond.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of a word-size integer.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn mult_order(a: u64, p: u64) -> u64 {
    let a = a % p;
    debug_assert!(a != 0);
    let mut order = p - 1;
    for l in prime_factors(p - 1) {
        while order.is_multiple_of(l) && pow_mod(a, order / l, p) == 1 {
            order /= l;
        }
    }
    order
}

/// Smallest positive primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&l| pow_mod(g, (p - 1) / l, p) != 1))
        .expect("every prime has a primitive root")
}

pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

pub fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
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

const CACHE_LIMIT: u64 = 1 << 24;

type PrimeCache = Option<(u64, Arc<Vec<u64>>)>;

static PRIME_CACHE: RwLock<PrimeCache> = RwLock::new(None);

/// Shared table of all primes up to at least `limit` (capped at 2^24).
fn cached_primes(limit: u64) -> Arc<Vec<u64>> {
    if let Some((sieved, primes)) = PRIME_CACHE.read().unwrap().as_ref() {
        if *sieved >= limit {
            return Arc::clone(primes);
        }
    }
    let mut guard = PRIME_CACHE.write().unwrap();
    let sieved = guard.as_ref().map_or(0, |(b, _)| *b);
    if sieved < limit {
        let target = limit
            .max(sieved.saturating_mul(4))
            .clamp(1 << 10, CACHE_LIMIT);
        *guard = Some((target, Arc::new(sieve(target))));
    }
    Arc::clone(&guard.as_ref().unwrap().1)
}

/// Trial-division candidates up to `bound`: primes up to 2^24 from a shared
/// cache, then numbers coprime to 6.
pub fn trial_divisors(bound: u64) -> impl Iterator<Item = u64> {
    let cached_to = bound.min(CACHE_LIMIT);
    let primes = cached_primes(cached_to);
    let end = primes.partition_point(|&q| q <= cached_to);
    let tail_start = if bound > CACHE_LIMIT {
        CACHE_LIMIT + 1
    } else {
        bound + 1
    };
    let tail = (tail_start..=bound).filter(|d| d % 6 == 1 || d % 6 == 5);
    (0..end).map(move |i| primes[i]).chain(tail)
}

pub fn big_mod_u64(n: &BigUint, m: u64) -> u64 {
    (n % m).to_u64().expect("remainder below modulus")
}
