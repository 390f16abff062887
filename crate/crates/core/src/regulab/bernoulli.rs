use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};

// B_0, B_1, … computed so far.
static TABLE: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// Exact Bernoulli number B_n with B_1 = −1/2, from
/// Σ_{j=0}^{n} C(n+1, j) B_j = 0.
pub fn bernoulli(n: usize) -> BigRational {
    let mut table = TABLE.lock().unwrap();
    while table.len() <= n {
        let m = table.len();
        let next = if m == 0 {
            BigRational::one()
        } else if m > 1 && m % 2 == 1 {
            BigRational::zero()
        } else {
            // binom walks C(m+1, j) for j = 0..m-1
            let mut binom = BigInt::one();
            let mut sum = BigRational::zero();
            for (j, b) in table.iter().enumerate() {
                if !b.is_zero() {
                    sum += b * BigRational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            -sum / BigRational::from_integer(BigInt::from(m + 1))
        };
        table.push(next);
    }
    table[n].clone()
}

/// (p, k) with k even, 2 ≤ k ≤ p − 3 and p | numerator(B_k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IrregularPair {
    pub p: u64,
    pub k: u64,
}

pub fn irregular_pairs(p: u64) -> Result<Vec<IrregularPair>> {
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let modulus = BigInt::from(p);
    Ok((2..=p.saturating_sub(3))
        .step_by(2)
        .filter(|&k| bernoulli(k as usize).numer().mod_floor(&modulus).is_zero())
        .map(|k| IrregularPair { p, k })
        .collect())
}

pub fn is_regular(p: u64) -> Result<bool> {
    Ok(irregular_pairs(p)?.is_empty())
}
