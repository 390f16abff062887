//! The totally real cyclotomic units
//!
//! ϖ_a = ζ^{(1−a)/2}·(1 − ζ^a)/(1 − ζ),  ε_a = ζ^{(1−a)/2}·(1 + ζ^a)/(1 + ζ),
//!
//! for 1 ≤ a ≤ p − 1, with the half-integer exponent read mod p.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::mul_mod;
use crate::cycint::{CycInt, FieldCtx};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    Varpi,
    Epsilon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycUnitLabel {
    pub kind: UnitKind,
    pub a: u64,
}

impl CycUnitLabel {
    pub fn eval(self, ctx: &FieldCtx) -> Result<CycInt> {
        match self.kind {
            UnitKind::Varpi => varpi(ctx, self.a),
            UnitKind::Epsilon => epsilon(ctx, self.a),
        }
    }
}

impl fmt::Display for CycUnitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            UnitKind::Varpi => write!(f, "varpi_{}", self.a),
            UnitKind::Epsilon => write!(f, "epsilon_{}", self.a),
        }
    }
}

fn check_index(ctx: &FieldCtx, a: u64) -> Result<()> {
    if a == 0 || a >= ctx.p() {
        return Err(Error::IndexOutOfRange {
            index: a,
            max: ctx.p() - 1,
        });
    }
    Ok(())
}

/// (1 − a)/2 mod p.
pub fn half_shift(ctx: &FieldCtx, a: u64) -> u64 {
    let p = ctx.p();
    mul_mod((1 + p - a % p) % p, ctx.inv2(), p)
}

/// ϖ_a, with (1 − ζ^a)/(1 − ζ) expanded as 1 + ζ + … + ζ^{a−1}.
pub fn varpi(ctx: &FieldCtx, a: u64) -> Result<CycInt> {
    check_index(ctx, a)?;
    let s = half_shift(ctx, a) as i64;
    let raw: Vec<(i64, BigInt)> = (0..a as i64).map(|i| (s + i, BigInt::from(1))).collect();
    Ok(CycInt::new(ctx, &raw))
}

/// ε_a, using the cached exact inverse of the unit 1 + ζ.
pub fn epsilon(ctx: &FieldCtx, a: u64) -> Result<CycInt> {
    check_index(ctx, a)?;
    let s = half_shift(ctx, a) as i64;
    let numer = CycInt::from_terms(ctx, &[(s, 1), (s + a as i64, 1)]);
    Ok(numer.mul(&ctx.one_plus_zeta_inv()))
}

/// Checks ∏_{a=1}^{p−1} ε_a · (1 + ζ)^{p−1} = ζ^{−1/2} exactly.
pub fn unit_product_check(ctx: &FieldCtx) -> Result<bool> {
    let p = ctx.p();
    let mut acc = CycInt::one(ctx);
    for a in 1..p {
        acc = acc.mul(&epsilon(ctx, a)?);
    }
    let lhs = acc.mul(&CycInt::from_terms(ctx, &[(0, 1), (1, 1)]).pow(p - 1));
    let rhs = CycInt::zeta_pow(ctx, -(ctx.inv2() as i64));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycint::GaloisElt;
    use num_traits::Signed;

    fn ctx(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn first_units_are_one() {
        for p in [5u64, 7, 11, 13] {
            let k = ctx(p);
            assert!(varpi(&k, 1).unwrap().is_one());
            assert!(epsilon(&k, 1).unwrap().is_one());
        }
    }

    #[test]
    fn varpi_small_cases() {
        let k = ctx(5);
        assert_eq!(varpi(&k, 2).unwrap().coeffs(), ints(&[0, 0, 1, 1]));
        let k7 = ctx(7);
        assert_eq!(varpi(&k7, 3).unwrap(), -&varpi(&k7, 4).unwrap());
    }

    #[test]
    fn epsilon_small_cases() {
        let k7 = ctx(7);
        assert_eq!(epsilon(&k7, 3).unwrap(), epsilon(&k7, 4).unwrap());
        let k5 = ctx(5);
        let i = crate::resfield::PrimeIdealRep::degree_one(&k5, 31, 16).unwrap();
        assert_eq!(
            i.residue(&epsilon(&k5, 2).unwrap()).unwrap().as_scalar(),
            Some(17)
        );
    }

    #[test]
    fn index_range() {
        let k = ctx(5);
        assert!(varpi(&k, 0).is_err());
        assert!(varpi(&k, 5).is_err());
        assert!(epsilon(&k, 5).is_err());
        let label = CycUnitLabel {
            kind: UnitKind::Epsilon,
            a: 3,
        };
        assert_eq!(label.to_string(), "epsilon_3");
        assert_eq!(label.eval(&k).unwrap(), epsilon(&k, 3).unwrap());
    }

    #[test]
    fn product_identity() {
        for p in [5u64, 7, 11, 13, 17] {
            assert!(unit_product_check(&ctx(p)).unwrap(), "p={p}");
        }
    }

    #[test]
    fn symmetric_and_real_units() {
        for p in [5u64, 7, 11, 13, 17, 19] {
            let k = ctx(p);
            let conj = GaloisElt::conjugation(&k);
            for a in 1..p {
                let v = varpi(&k, a).unwrap();
                let e = epsilon(&k, a).unwrap();
                assert_eq!(v, -&varpi(&k, p - a).unwrap());
                assert_eq!(e, epsilon(&k, p - a).unwrap());
                assert_eq!(v.galois(conj), v);
                assert_eq!(e.galois(conj), e);
                assert!(v.norm().unwrap().abs() == BigInt::from(1));
                assert!(e.norm().unwrap().abs() == BigInt::from(1));
            }
        }
    }

    #[test]
    fn one_minus_zeta_power_unwinds() {
        for p in [5u64, 7, 11] {
            let k = ctx(p);
            let one_minus = CycInt::from_terms(&k, &[(0, 1), (1, -1)]);
            for a in 1..p {
                let lhs = CycInt::from_terms(&k, &[(0, 1), (a as i64, -1)]);
                let shift = mul_mod(a - 1, k.inv2(), p) as i64;
                let rhs = varpi(&k, a)
                    .unwrap()
                    .mul(&CycInt::zeta_pow(&k, shift))
                    .mul(&one_minus);
                assert_eq!(lhs, rhs);
            }
        }
    }
}
