//! p-th power residue symbols (α/𝔮)_K.
//!
//! A symbol is recorded by its exponent: (α/𝔮) = ζ^e is stored as e ∈ Z/p,
//! so the trivial symbol 1 is e = 0 and multiplication of symbols is
//! addition of exponents. The value is the unique e with
//! α^{(N𝔮−1)/p} ≡ ζ^e (mod 𝔮), read off in the residue field through ζ ↦ w.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::resfield::{PrimeIdealRep, ResElt};

/// Symbols beyond f = 1 are only evaluated for residue degree up to this.
pub const MAX_SYMBOL_DEGREE: u32 = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolExp {
    p: u64,
    e: u64,
}

impl SymbolExp {
    pub fn new(p: u64, e: i64) -> SymbolExp {
        SymbolExp {
            p,
            e: (e as i128).rem_euclid(p as i128) as u64,
        }
    }

    pub fn trivial(p: u64) -> SymbolExp {
        SymbolExp { p, e: 0 }
    }

    #[inline]
    pub fn e(self) -> u64 {
        self.e
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    pub fn is_trivial(self) -> bool {
        self.e == 0
    }

    /// k·e mod p, the symbol of α^k.
    pub fn scale(self, k: i64) -> SymbolExp {
        let k = (k as i128).rem_euclid(self.p as i128) as u64;
        SymbolExp {
            p: self.p,
            e: (self.e * k) % self.p,
        }
    }
}

impl Add for SymbolExp {
    type Output = SymbolExp;
    fn add(self, rhs: SymbolExp) -> SymbolExp {
        debug_assert_eq!(self.p, rhs.p);
        SymbolExp {
            p: self.p,
            e: (self.e + rhs.e) % self.p,
        }
    }
}

impl Neg for SymbolExp {
    type Output = SymbolExp;
    fn neg(self) -> SymbolExp {
        SymbolExp {
            p: self.p,
            e: (self.p - self.e) % self.p,
        }
    }
}

impl Sub for SymbolExp {
    type Output = SymbolExp;
    fn sub(self, rhs: SymbolExp) -> SymbolExp {
        self + (-rhs)
    }
}

impl fmt::Debug for SymbolExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ^{} (mod {})", self.e, self.p)
    }
}

/// Precomputed exponent (N𝔮 − 1)/p and the table w^0..w^{p-1} for one ideal.
pub struct SymbolEvaluator<'a> {
    ideal: &'a PrimeIdealRep,
    exponent: u128,
    w_powers: Vec<ResElt>,
}

impl<'a> SymbolEvaluator<'a> {
    pub fn new(ideal: &'a PrimeIdealRep) -> Result<SymbolEvaluator<'a>> {
        if ideal.f() > MAX_SYMBOL_DEGREE {
            return Err(Error::Unsupported(format!(
                "symbols need residue degree ≤ {MAX_SYMBOL_DEGREE}, q={} has f={}",
                ideal.q(),
                ideal.f()
            )));
        }
        let norm = ideal.norm().ok_or_else(|| {
            Error::Unsupported(format!("q^f does not fit in 128 bits (q={})", ideal.q()))
        })?;
        let p = ideal.ctx().p();
        let mut w_powers = Vec::with_capacity(p as usize);
        let mut cur = ideal.one();
        for _ in 0..p {
            w_powers.push(cur.clone());
            cur = ideal.mul(&cur, ideal.w());
        }
        Ok(SymbolEvaluator {
            ideal,
            exponent: (norm - 1) / p as u128,
            w_powers,
        })
    }

    pub fn ideal(&self) -> &PrimeIdealRep {
        self.ideal
    }

    /// Symbol of a nonzero residue-field element.
    pub fn of_residue(&self, r: &ResElt) -> Result<SymbolExp> {
        if r.is_zero() {
            return Err(Error::NotCoprime);
        }
        let pow = self.ideal.pow(r, self.exponent);
        let p = self.ideal.ctx().p();
        self.w_powers
            .iter()
            .position(|wp| *wp == pow)
            .map(|e| SymbolExp::new(p, e as i64))
            .ok_or_else(|| Error::Internal(format!("{pow:?} is not a power of w")))
    }

    pub fn of(&self, a: &CycInt) -> Result<SymbolExp> {
        self.of_residue(&self.ideal.residue(a)?)
    }
}

/// (a/𝔮)_K as an exponent of ζ.
pub fn symbol(a: &CycInt, ideal: &PrimeIdealRep) -> Result<SymbolExp> {
    SymbolEvaluator::new(ideal)?.of(a)
}

/// (ζ/𝔮)_K, which is ζ^{(N𝔮−1)/p}; trivial exactly when p² | N𝔮 − 1.
pub fn zeta_symbol(ideal: &PrimeIdealRep) -> SymbolExp {
    let p = ideal.ctx().p();
    let norm = BigUint::from(ideal.q()).pow(ideal.f());
    let e = ((norm - 1u32) / p % p).to_u64().expect("reduced mod p");
    SymbolExp::new(p, e as i64)
}

/// Elementwise symbols sharing one evaluator. Fails with the index of the
/// first item that is not coprime to the ideal.
pub fn symbol_vector(items: &[CycInt], ideal: &PrimeIdealRep) -> Result<Vec<SymbolExp>> {
    let ev = SymbolEvaluator::new(ideal)?;
    items
        .iter()
        .enumerate()
        .map(|(i, a)| match ev.of(a) {
            Err(Error::NotCoprime) => Err(Error::NotCoprimeAt(i)),
            other => other,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{pow_mod, sieve};
    use crate::cycint::{FieldCtx, GaloisElt};
    use crate::cycunits::{epsilon, varpi};
    use crate::resfield::split_prime;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ctx(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    fn ideal(p: u64, q: u64, w: u64) -> PrimeIdealRep {
        PrimeIdealRep::degree_one(&ctx(p), q, w).unwrap()
    }

    #[test]
    fn euler_criterion_examples() {
        let k = ctx(5);
        // 2^2 = 4 = 3^4 mod 11
        assert_eq!(
            symbol(&CycInt::from_int(&k, 2), &ideal(5, 11, 3))
                .unwrap()
                .e(),
            4
        );
        // 7^2 = 49 = 5 mod 11
        let a = CycInt::from_terms(&k, &[(0, 2), (1, 1)]);
        assert_eq!(symbol(&a, &ideal(5, 11, 5)).unwrap().e(), 1);
        let i = ideal(5, 11, 5);
        assert!(symbol(&a.pow(5), &i).unwrap().is_trivial());
        assert_eq!(
            symbol(&CycInt::from_terms(&k, &[(1, 1), (0, -5)]), &i),
            Err(Error::NotCoprime)
        );
    }

    #[test]
    fn zeta_symbol_examples() {
        let k = ctx(5);
        assert_eq!(zeta_symbol(&ideal(5, 11, 3)).e(), 2);
        assert_eq!(zeta_symbol(&ideal(5, 31, 16)).e(), 1);
        let i101 = &split_prime(&k, 101).unwrap()[0];
        assert_eq!(zeta_symbol(i101).e(), 0);
    }

    #[test]
    fn zeta_symbol_matches_symbol_of_zeta() {
        for p in [5u64, 7, 11] {
            let k = ctx(p);
            let z = CycInt::zeta_pow(&k, 1);
            for q in sieve(300) {
                if q == p {
                    continue;
                }
                for i in split_prime(&k, q).unwrap() {
                    if i.f() > MAX_SYMBOL_DEGREE {
                        continue;
                    }
                    let zs = zeta_symbol(&i);
                    assert_eq!(symbol(&z, &i).unwrap(), zs, "p={p} q={q}");
                    let n = (q as u128).pow(i.f());
                    assert_eq!(zs.is_trivial(), (n - 1) % (p as u128 * p as u128) == 0);
                }
            }
        }
    }

    #[test]
    fn vector_examples() {
        let k = ctx(5);
        let ones = vec![CycInt::one(&k); 3];
        let v = symbol_vector(&ones, &ideal(5, 11, 5)).unwrap();
        assert!(v.iter().all(|s| s.is_trivial()));

        let two_plus_zeta = CycInt::from_terms(&k, &[(0, 2), (1, 1)]);
        let v = symbol_vector(
            &[two_plus_zeta.clone(), varpi(&k, 2).unwrap()],
            &ideal(5, 11, 5),
        )
        .unwrap();
        assert_eq!(v.iter().map(|s| s.e()).collect::<Vec<_>>(), vec![1, 1]);

        let items = [
            two_plus_zeta,
            CycInt::from_int(&k, 3),
            epsilon(&k, 2).unwrap(),
        ];
        let v = symbol_vector(&items, &ideal(5, 31, 16)).unwrap();
        assert_eq!(v.iter().map(|s| s.e()).collect::<Vec<_>>(), vec![1, 1, 2]);

        let bad = [CycInt::one(&k), CycInt::from_int(&k, 11)];
        assert_eq!(
            symbol_vector(&bad, &ideal(5, 11, 5)),
            Err(Error::NotCoprimeAt(1))
        );
    }

    #[test]
    fn symbol_of_p_is_sum_over_one_minus_zeta_powers() {
        for p in [5u64, 7, 11, 13] {
            let k = ctx(p);
            for q in sieve(400) {
                if q % p != 1 {
                    continue;
                }
                for i in split_prime(&k, q).unwrap() {
                    let total = (1..p as i64)
                        .map(|j| symbol(&CycInt::from_terms(&k, &[(0, 1), (j, -1)]), &i).unwrap())
                        .fold(SymbolExp::trivial(p), |a, b| a + b);
                    assert_eq!(symbol(&CycInt::from_int(&k, p as i64), &i).unwrap(), total);
                }
            }
        }
    }

    #[test]
    fn higher_degree_symbols() {
        // p=5, q=19 (f=2) and q=7 (f=4): multiplicativity and p-th powers
        let k = ctx(5);
        let a = CycInt::from_terms(&k, &[(0, 3), (1, 1), (3, -2)]);
        let b = CycInt::from_terms(&k, &[(0, 1), (2, 4)]);
        for q in [19u64, 7, 29, 2, 3] {
            for i in split_prime(&k, q).unwrap() {
                let sa = symbol(&a, &i).unwrap();
                let sb = symbol(&b, &i).unwrap();
                assert_eq!(symbol(&a.mul(&b), &i).unwrap(), sa + sb);
                assert!(symbol(&a.pow(5), &i).unwrap().is_trivial());
            }
        }
        // f = 10 exceeds the supported degree
        let k11 = ctx(11);
        let i = &split_prime(&k11, 2).unwrap()[0];
        assert!(matches!(
            symbol(&CycInt::one(&k11), i),
            Err(Error::Unsupported(_))
        ));
    }

    /// Exhaustive oracle: the set of nonzero p-th powers in F_q.
    fn pth_powers(p: u64, q: u64) -> Vec<bool> {
        let mut is_pow = vec![false; q as usize];
        for u in 1..q {
            is_pow[pow_mod(u, p, q) as usize] = true;
        }
        is_pow
    }

    #[test]
    fn trivial_symbol_iff_pth_power_small() {
        let k = ctx(5);
        let pw = pth_powers(5, 31);
        for i in split_prime(&k, 31).unwrap() {
            for c in 1..31i64 {
                let s = symbol(&CycInt::from_int(&k, c), &i).unwrap();
                assert_eq!(s.is_trivial(), pw[c as usize]);
            }
        }
    }

    fn arb_case() -> impl Strategy<Value = (u64, u64, usize, Vec<i64>, Vec<i64>, u64)> {
        let cases: Vec<(u64, u64)> = [5u64, 7]
            .iter()
            .flat_map(|&p| {
                sieve(200)
                    .into_iter()
                    .filter(move |&q| q % p == 1)
                    .map(move |q| (p, q))
            })
            .collect();
        prop::sample::select(cases).prop_flat_map(|(p, q)| {
            let n = (p - 1) as usize;
            (
                Just(p),
                Just(q),
                0..(p - 1) as usize,
                prop::collection::vec(-30i64..30, n),
                prop::collection::vec(-30i64..30, n),
                1..p,
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn multiplicative_and_galois_equivariant((p, q, idx, a, b, k) in arb_case()) {
            let kctx = ctx(p);
            let to = |v: &Vec<i64>| CycInt::from_coeffs(&kctx, v.iter().map(|&c| BigInt::from(c)).collect()).unwrap();
            let (a, b) = (to(&a), to(&b));
            let ideal = &split_prime(&kctx, q).unwrap()[idx];
            if let (Ok(sa), Ok(sb)) = (symbol(&a, ideal), symbol(&b, ideal)) {
                prop_assert_eq!(symbol(&a.mul(&b), ideal).unwrap(), sa + sb);
                let s = GaloisElt::new(&kctx, k as i64).unwrap();
                let image = ideal.conjugate(s);
                prop_assert_eq!(symbol(&a.galois(s), &image).unwrap(), sa.scale(k as i64));
                // residue-level cross check of the conjugate ideal
                let ra = ideal.residue(&a).unwrap().as_scalar().unwrap();
                let rc = image.residue(&a.galois(s)).unwrap().as_scalar().unwrap();
                prop_assert_eq!(ra, rc);
            }
        }
    }
}
