#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub fn modpow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

pub fn mulq(a: u64, b: u64, q: u64) -> u64 {
    (a as u128 * b as u128 % q as u128) as u64
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Exponent e with v^((q−1)/p) = w^e in F_q.
pub fn euler_symbol(v: u64, w: u64, p: u64, q: u64) -> Option<u64> {
    let s = modpow(v, (q - 1) / p, q);
    (0..p).find(|&e| modpow(w, e, q) == s)
}

/// Akiyama–Tanigawa, which produces B_1 = +1/2.
pub fn akiyama_tanigawa(n_max: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(n_max + 1);
    let mut out = Vec::with_capacity(n_max + 1);
    for m in 0..=n_max {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = BigRational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    out
}

/// Recomputes the Vandiver symbol from (p, k, g, q, w) with plain modular
/// arithmetic: ϖ_g at ζ ↦ w^a is w^{a(1−g)/2}·(1 + w^a + … + w^{a(g−1)}).
pub fn vandiver_recheck(p: u64, k: u64, g: u64, q: u64, w: u64) -> u64 {
    let inv2 = p.div_ceil(2);
    let shift = (1 + p - g) % p * inv2 % p;
    let mut u = 1u64;
    for a in 1..p {
        let wa = modpow(w, a, q);
        let mut geom = 0u64;
        let mut pw = 1u64;
        for _ in 0..g {
            geom = (geom + pw) % q;
            pw = mulq(pw, wa, q);
        }
        let r = mulq(modpow(wa, shift, q), geom, q);
        let n = modpow(modpow(a, p - 2, p), k, p);
        u = mulq(u, modpow(r, n, q), q);
    }
    euler_symbol(u, w, p, q).expect("u^((q-1)/p) is a power of w")
}
