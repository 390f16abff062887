//! Exact arithmetic in the ring of integers Z[ζ] of the p-th cyclotomic field.
//!
//! Elements are stored on the power basis 1, ζ, …, ζ^{p-2}. The relation
//! ζ^{p-1} = -(1 + ζ + … + ζ^{p-2}) makes this representation canonical, so
//! equality of elements is equality of coefficient vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::arith::{inv_mod, is_prime_u64, primitive_root};
use crate::error::{Error, Result};

struct CtxInner {
    p: u64,
    inv2: u64,
    // (1 + ζ)^{-1} on the power basis
    one_plus_zeta_inv: Vec<BigInt>,
}

/// The field Q(ζ_p) for an odd prime p > 3. Cheap to clone.
#[derive(Clone)]
pub struct FieldCtx(Arc<CtxInner>);

impl FieldCtx {
    pub fn new(p: u64) -> Result<FieldCtx> {
        if p <= 3 || !is_prime_u64(p) {
            return Err(Error::BadFieldPrime(p));
        }
        let inv2 = inv_mod(2, p).expect("p odd");
        // (1 + ζ)(1 + ζ^2 + ζ^4 + … + ζ^{p-1}) = 1 + ζ + … + ζ^p = ζ^p = 1
        let mut raw = vec![BigInt::zero(); p as usize];
        for j in 0..=(p - 1) / 2 {
            raw[(2 * j) as usize] += 1;
        }
        let one_plus_zeta_inv = fold_top(raw);
        let ctx = FieldCtx(Arc::new(CtxInner {
            p,
            inv2,
            one_plus_zeta_inv,
        }));
        let check = CycInt::from_terms(&ctx, &[(0, 1), (1, 1)])
            .mul(&ctx.one_plus_zeta_inv())
            .is_one();
        if !check {
            return Err(Error::Internal("(1+ζ)·u ≠ 1".into()));
        }
        Ok(ctx)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Inverse of 2 modulo p.
    #[inline]
    pub fn inv2(&self) -> u64 {
        self.0.inv2
    }

    /// Dimension of the power basis, p − 1.
    #[inline]
    pub fn dim(&self) -> usize {
        (self.0.p - 1) as usize
    }

    pub fn one_plus_zeta_inv(&self) -> CycInt {
        CycInt {
            ctx: self.clone(),
            coeffs: self.0.one_plus_zeta_inv.clone(),
        }
    }

    fn same(&self, other: &FieldCtx) -> Result<()> {
        if self.0.p == other.0.p {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.0.p,
                right: other.0.p,
            })
        }
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(p={})", self.0.p)
    }
}

/// An automorphism s_k : ζ ↦ ζ^k, 1 ≤ k ≤ p − 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaloisElt(u64);

impl GaloisElt {
    pub fn new(ctx: &FieldCtx, k: i64) -> Result<GaloisElt> {
        let p = ctx.p();
        let k = (k as i128).rem_euclid(p as i128) as u64;
        if k == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                max: p - 1,
            });
        }
        Ok(GaloisElt(k))
    }

    /// Complex conjugation s_{-1}.
    pub fn conjugation(ctx: &FieldCtx) -> GaloisElt {
        GaloisElt(ctx.p() - 1)
    }

    #[inline]
    pub fn k(self) -> u64 {
        self.0
    }

    pub fn compose(self, other: GaloisElt, ctx: &FieldCtx) -> GaloisElt {
        GaloisElt(crate::arith::mul_mod(self.0, other.0, ctx.p()))
    }

    pub fn inverse(self, ctx: &FieldCtx) -> GaloisElt {
        GaloisElt(inv_mod(self.0, ctx.p()).expect("k is a unit"))
    }
}

/// Folds a length-p vector on 1..ζ^{p-1} onto the power basis.
fn fold_top(mut raw: Vec<BigInt>) -> Vec<BigInt> {
    let top = raw.pop().expect("length p");
    if !top.is_zero() {
        for c in raw.iter_mut() {
            *c -= &top;
        }
    }
    raw
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycInt {
    ctx: FieldCtx,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    /// Σ c_i ζ^{e_i} for arbitrary integer exponents.
    pub fn new(ctx: &FieldCtx, raw: &[(i64, BigInt)]) -> CycInt {
        let p = ctx.p();
        let mut buf = vec![BigInt::zero(); p as usize];
        for (e, c) in raw {
            let idx = (*e as i128).rem_euclid(p as i128) as usize;
            buf[idx] += c;
        }
        CycInt {
            ctx: ctx.clone(),
            coeffs: fold_top(buf),
        }
    }

    pub fn from_terms(ctx: &FieldCtx, raw: &[(i64, i64)]) -> CycInt {
        let raw: Vec<(i64, BigInt)> = raw.iter().map(|&(e, c)| (e, BigInt::from(c))).collect();
        CycInt::new(ctx, &raw)
    }

    pub fn from_coeffs(ctx: &FieldCtx, coeffs: Vec<BigInt>) -> Result<CycInt> {
        if coeffs.len() != ctx.dim() {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                ctx.dim(),
                coeffs.len()
            )));
        }
        Ok(CycInt {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn zero(ctx: &FieldCtx) -> CycInt {
        CycInt {
            ctx: ctx.clone(),
            coeffs: vec![BigInt::zero(); ctx.dim()],
        }
    }

    pub fn from_int(ctx: &FieldCtx, n: impl Into<BigInt>) -> CycInt {
        let mut z = CycInt::zero(ctx);
        z.coeffs[0] = n.into();
        z
    }

    pub fn one(ctx: &FieldCtx) -> CycInt {
        CycInt::from_int(ctx, 1)
    }

    /// ζ^e for any integer e.
    pub fn zeta_pow(ctx: &FieldCtx, e: i64) -> CycInt {
        CycInt::from_terms(ctx, &[(e, 1)])
    }

    /// x + ζ^k y
    pub fn binomial(ctx: &FieldCtx, x: impl Into<BigInt>, k: i64, y: impl Into<BigInt>) -> CycInt {
        CycInt::new(ctx, &[(0, x.into()), (k, y.into())])
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational integer, if it lies in Z.
    pub fn as_rational(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn try_add(&self, other: &CycInt) -> Result<CycInt> {
        self.ctx.same(&other.ctx)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.ctx.same(&other.ctx)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycInt {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.ctx.same(&other.ctx)?;
        let p = self.ctx.p() as usize;
        let coeffs = match small_product(&self.coeffs, &other.coeffs, p) {
            Some(c) => c,
            None => {
                let mut buf = vec![BigInt::zero(); p];
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in other.coeffs.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let idx = (i + j) % p;
                        buf[idx] += a * b;
                    }
                }
                fold_top(buf)
            }
        };
        Ok(CycInt {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: &BigInt) -> CycInt {
        CycInt {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> CycInt {
        let mut acc = CycInt::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Image under s_k : ζ ↦ ζ^k.
    pub fn galois(&self, s: GaloisElt) -> CycInt {
        let p = self.ctx.p();
        let mut buf = vec![BigInt::zero(); p as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = crate::arith::mul_mod(i as u64, s.k(), p) as usize;
            buf[idx] = c.clone();
        }
        CycInt {
            ctx: self.ctx.clone(),
            coeffs: fold_top(buf),
        }
    }

    /// Field norm N(a) = ∏_{k=1}^{p-1} s_k(a).
    ///
    /// The conjugates are multiplied along powers of a primitive root g by
    /// doubling: P_{2m} = P_m · s_{g^m}(P_m), P_{m+1} = a · s_g(P_m).
    pub fn norm(&self) -> Result<BigInt> {
        let ctx = &self.ctx;
        let p = ctx.p();
        let g = primitive_root(p);
        let s_g = GaloisElt(g);
        let n = p - 1;
        let mut acc = self.clone();
        let mut m = 1u64;
        for bit in (0..(63 - n.leading_zeros())).rev() {
            let shift = GaloisElt(crate::arith::pow_mod(g, m, p));
            acc = acc.mul(&acc.galois(shift));
            m *= 2;
            if (n >> bit) & 1 == 1 {
                acc = self.mul(&acc.galois(s_g));
                m += 1;
            }
        }
        debug_assert_eq!(m, n);
        match acc.as_rational() {
            Some(v) => Ok(v.clone()),
            None => Err(Error::Internal(format!("norm of {self:?} is not rational"))),
        }
    }

    /// Decimal-string JSON array, little-endian in powers of ζ.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect(),
        )
    }

    /// Parses a JSON array of p − 1 integers, given as decimal strings or
    /// JSON numbers.
    pub fn from_json(ctx: &FieldCtx, v: &Value) -> Result<CycInt> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("element must be a JSON array".into()))?;
        let coeffs = arr
            .iter()
            .map(|c| match c {
                Value::String(s) => s
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidInput(format!("bad integer {s:?}"))),
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::InvalidInput(format!("bad integer {n}"))),
                other => Err(Error::InvalidInput(format!("bad coefficient {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        CycInt::from_coeffs(ctx, coeffs)
    }

    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

/// Product with i128 accumulators when every partial sum provably fits.
fn small_product(a: &[BigInt], b: &[BigInt], p: usize) -> Option<Vec<BigInt>> {
    let a_bits = a.iter().map(|c| c.bits()).max().unwrap_or(0);
    let b_bits = b.iter().map(|c| c.bits()).max().unwrap_or(0);
    let len_bits = 64 - (p as u64).leading_zeros() as u64;
    if a_bits > 62 || b_bits > 62 || a_bits + b_bits + len_bits + 1 > 126 {
        return None;
    }
    let a: Vec<i64> = a.iter().map(|c| c.to_i64().unwrap()).collect();
    let b: Vec<i64> = b.iter().map(|c| c.to_i64().unwrap()).collect();
    let mut buf = vec![0i128; p];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let idx = if i + j >= p { i + j - p } else { i + j };
            buf[idx] += x as i128 * y as i128;
        }
    }
    let top = buf[p - 1];
    Some(
        buf[..p - 1]
            .iter()
            .map(|&c| BigInt::from(c - top))
            .collect(),
    )
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt(p={}, {:?})", self.ctx.p(), self.coeffs)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let term = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "ζ".to_string(),
                (1, false) => format!("{mag}ζ"),
                (_, true) => format!("ζ^{i}"),
                (_, false) => format!("{mag}ζ^{i}"),
            };
            write!(f, "{sign}{term}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator forms panic on a context mismatch; use the `try_*` methods when
// operands may come from different fields.
impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.try_add(rhs).expect("same field")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.try_sub(rhs).expect("same field")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.try_mul(rhs).expect("same field")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl CycInt {
    pub fn mul(&self, rhs: &CycInt) -> CycInt {
        self * rhs
    }
}
