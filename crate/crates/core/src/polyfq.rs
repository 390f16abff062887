//! Dense polynomials over a prime field F_q, coefficients low-to-high.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rand::Rng;

use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, with deg(0) = None.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], q: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            add_mod(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
                q,
            )
        })
        .collect();
    trim(out)
}

pub fn sub(a: &[u64], b: &[u64], q: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            sub_mod(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
                q,
            )
        })
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], q: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, q), q);
        }
    }
    trim(out)
}

/// Quotient and remainder of `a` by nonzero `b`.
pub fn div_rem(a: &[u64], b: &[u64], q: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], q).expect("field");
    let mut rem = trim(a.to_vec());
    let Some(da) = degree(&rem) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = mul_mod(rem[i + db], lead_inv, q);
        quot[i] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b[..=db].iter().enumerate() {
            rem[i + j] = sub_mod(rem[i + j], mul_mod(c, bj, q), q);
        }
    }
    (trim(quot), trim(rem))
}

pub fn rem(a: &[u64], b: &[u64], q: u64) -> Poly {
    div_rem(a, b, q).1
}

pub fn monic(a: &[u64], q: u64) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = inv_mod(a[d], q).expect("field");
            a[..=d].iter().map(|&c| mul_mod(c, inv, q)).collect()
        }
    }
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], q: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, q);
        x = y;
        y = r;
    }
    monic(&x, q)
}

pub fn mul_mod_poly(a: &[u64], b: &[u64], modulus: &[u64], q: u64) -> Poly {
    rem(&mul(a, b, q), modulus, q)
}

/// a^e mod `modulus`, exponent given as little-endian bits of a BigUint.
pub fn pow_mod_poly(a: &[u64], e: &BigUint, modulus: &[u64], q: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let base = rem(a, modulus, q);
    for i in (0..e.bits()).rev() {
        acc = mul_mod_poly(&acc, &acc, modulus, q);
        if e.bit(i) {
            acc = mul_mod_poly(&acc, &base, modulus, q);
        }
    }
    rem(&acc, modulus, q)
}

pub fn pow_mod_poly_u128(a: &[u64], e: u128, modulus: &[u64], q: u64) -> Poly {
    pow_mod_poly(a, &BigUint::from(e), modulus, q)
}

/// Φ_p(t) = 1 + t + … + t^{p-1} reduced mod q.
pub fn cyclotomic(p: u64, q: u64) -> Poly {
    vec![1 % q; p as usize]
}

/// Canonical total order: compare as base-q digit strings, highest degree
/// first. For constants this is the numeric order.
pub fn canonical_cmp(a: &[u64], b: &[u64]) -> Ordering {
    let n = a.len().max(b.len());
    for i in (0..n).rev() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Splits a squarefree product of irreducibles all of degree `f` into its
/// monic factors (Cantor–Zassenhaus), sorted in coefficient-vector order.
pub fn equal_degree_factors<R: Rng>(h: &[u64], f: usize, q: u64, rng: &mut R) -> Vec<Poly> {
    let h = monic(h, q);
    let mut out = Vec::new();
    edf(h, f, q, rng, &mut out);
    out.sort_by(|a, b| lex_cmp(a, b));
    out
}

/// Coefficient-vector (lexicographic, constant term first) order.
pub fn lex_cmp(a: &[u64], b: &[u64]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn edf<R: Rng>(h: Poly, f: usize, q: u64, rng: &mut R, out: &mut Vec<Poly>) {
    let n = degree(&h).unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == f {
        out.push(h);
        return;
    }
    let half = if q == 2 {
        None
    } else {
        Some((BigUint::from(q).pow(f as u32) - 1u32) / 2u32)
    };
    loop {
        let r: Poly = trim((0..n).map(|_| rng.gen_range(0..q)).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let probe = match &half {
            Some(e) => sub(&pow_mod_poly(&r, e, &h, q), &[1], q),
            None => {
                // absolute trace r + r^2 + … + r^{2^{f-1}}
                let mut acc = Vec::new();
                let mut term = rem(&r, &h, q);
                for _ in 0..f {
                    acc = add(&acc, &term, q);
                    term = mul_mod_poly(&term, &term, &h, q);
                }
                acc
            }
        };
        let g = gcd(&h, &probe, q);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let (cofactor, _) = div_rem(&h, &g, q);
            edf(g, f, q, rng, out);
            edf(monic(&cofactor, q), f, q, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn division_identity() {
        let q = 13;
        let a = vec![3, 0, 5, 7, 1];
        let b = vec![2, 1, 1];
        let (quo, r) = div_rem(&a, &b, q);
        assert!(degree(&r).unwrap_or(0) < 2);
        assert_eq!(add(&mul(&quo, &b, q), &r, q), trim(a));
    }

    #[test]
    fn gcd_of_products() {
        let q = 7;
        let f = vec![1, 1]; // t + 1
        let g = vec![1, 0, 1]; // t^2 + 1, irreducible mod 7
        let h = vec![2, 1]; // t + 2
        let a = mul(&f, &g, q);
        let b = mul(&f, &h, q);
        assert_eq!(gcd(&a, &b, q), vec![1, 1]);
    }

    #[test]
    fn phi5_mod_19_splits_into_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = equal_degree_factors(&cyclotomic(5, 19), 2, 19, &mut rng);
        assert_eq!(fac.len(), 2);
        let prod = mul(&fac[0], &fac[1], 19);
        assert_eq!(prod, cyclotomic(5, 19));
        assert!(lex_cmp(&fac[0], &fac[1]).is_lt());
    }

    #[test]
    fn phi7_mod_2_splits_into_cubics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = equal_degree_factors(&cyclotomic(7, 2), 3, 2, &mut rng);
        // t^3 + t^2 + 1 precedes t^3 + t + 1 in coefficient-vector order
        assert_eq!(fac, vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1]]);
    }

    #[test]
    fn factors_do_not_depend_on_seed() {
        let a = equal_degree_factors(&cyclotomic(11, 3), 5, 3, &mut ChaCha8Rng::seed_from_u64(1));
        let b = equal_degree_factors(&cyclotomic(11, 3), 5, 3, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }
}
