//! Prime ideals above a rational prime q ≠ p and their residue fields.
//!
//! An ideal 𝔮 above q is realized as the kernel of a ring map
//! Z[ζ] → F_q[t]/(modulus), ζ ↦ w. For residue degree f = 1 the modulus is
//! t − w and w is a root of Φ_p in F_q; for f > 1 the modulus is an
//! irreducible degree-f factor of Φ_p mod q.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign as BigSign};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, inv_mod, is_prime_u64, mul_mod, mult_order, pow_mod};
use crate::cycint::{CycInt, FieldCtx, GaloisElt};
use crate::error::{Error, Result};
use crate::polyfq::{self, Poly};

/// Sign choice in x·ζ ± y and (x^p ± y^p)/(x ± y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            _ => Err(Error::InvalidInput(format!(
                "sign must be plus or minus, got {s:?}"
            ))),
        }
    }
}

/// Element of a residue field F_q[t]/(modulus), trimmed coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResElt(pub Poly);

impl ResElt {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Value of a degree-0 element.
    pub fn as_scalar(&self) -> Option<u64> {
        match self.0.len() {
            0 => Some(0),
            1 => Some(self.0[0]),
            _ => None,
        }
    }

    pub fn canonical_cmp(&self, other: &ResElt) -> Ordering {
        polyfq::canonical_cmp(&self.0, &other.0)
    }

    /// Decimal string for scalars, comma-separated coefficients (low to
    /// high) otherwise.
    pub fn to_label(&self) -> String {
        match self.as_scalar() {
            Some(v) => v.to_string(),
            None => self
                .0
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PrimeIdealRep {
    ctx: FieldCtx,
    q: u64,
    f: u32,
    modulus: Poly,
    w: ResElt,
}

impl fmt::Debug for PrimeIdealRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PrimeIdealRep(p={}, q={}, f={}, w={}, modulus={:?})",
            self.ctx.p(),
            self.q,
            self.f,
            self.w.to_label(),
            self.modulus
        )
    }
}

/// JSON form `{"q": u64, "f": u32, "w": string, "modulus": [strings]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub q: u64,
    pub f: u32,
    pub w: String,
    pub modulus: Vec<String>,
}

impl PrimeIdealRep {
    /// Degree-1 ideal with ζ ↦ w.
    pub fn degree_one(ctx: &FieldCtx, q: u64, w: u64) -> Result<PrimeIdealRep> {
        check_q(ctx, q)?;
        let f = mult_order(q % ctx.p(), ctx.p()) as u32;
        if f != 1 {
            return Err(Error::NoDegreeOneIdeal { q, f });
        }
        let w = w % q;
        if w == 1 || pow_mod(w, ctx.p(), q) != 1 {
            return Err(Error::InvalidInput(format!(
                "w={w} is not a primitive {}-th root of unity mod {q}",
                ctx.p()
            )));
        }
        Ok(PrimeIdealRep {
            ctx: ctx.clone(),
            q,
            f,
            modulus: vec![(q - w) % q, 1],
            w: ResElt(vec![w]),
        })
    }

    /// General constructor: `modulus` must be a monic degree-f divisor of
    /// Φ_p mod q (hence irreducible) and `w` an element of order p.
    pub fn new(ctx: &FieldCtx, q: u64, modulus: Poly, w: Poly) -> Result<PrimeIdealRep> {
        check_q(ctx, q)?;
        let p = ctx.p();
        let f = mult_order(q % p, p) as u32;
        let modulus = polyfq::trim(modulus.into_iter().map(|c| c % q).collect());
        if polyfq::degree(&modulus) != Some(f as usize) || modulus[f as usize] != 1 {
            return Err(Error::InvalidInput(format!(
                "modulus must be monic of degree {f}"
            )));
        }
        if !polyfq::rem(&polyfq::cyclotomic(p, q), &modulus, q).is_empty() {
            return Err(Error::InvalidInput(
                "modulus does not divide Φ_p mod q".into(),
            ));
        }
        let w = ResElt(polyfq::rem(&w, &modulus, q));
        let ideal = PrimeIdealRep {
            ctx: ctx.clone(),
            q,
            f,
            modulus,
            w,
        };
        if ideal.w.0 == [1] || ideal.pow(&ideal.w, p as u128) != ideal.one() {
            return Err(Error::InvalidInput("w does not have order p".into()));
        }
        Ok(ideal)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn w(&self) -> &ResElt {
        &self.w
    }

    /// w as an element of F_q when f = 1.
    pub fn w_scalar(&self) -> Option<u64> {
        if self.f == 1 {
            self.w.as_scalar()
        } else {
            None
        }
    }

    /// Norm of the ideal, q^f, when it fits in 128 bits.
    pub fn norm(&self) -> Option<u128> {
        (self.q as u128).checked_pow(self.f)
    }

    pub fn one(&self) -> ResElt {
        ResElt(vec![1])
    }

    pub fn from_u64(&self, v: u64) -> ResElt {
        ResElt(polyfq::trim(vec![v % self.q]))
    }

    pub fn add(&self, a: &ResElt, b: &ResElt) -> ResElt {
        ResElt(polyfq::add(&a.0, &b.0, self.q))
    }

    pub fn mul(&self, a: &ResElt, b: &ResElt) -> ResElt {
        if self.f == 1 {
            let x = a.as_scalar().unwrap_or(0);
            let y = b.as_scalar().unwrap_or(0);
            return self.from_u64(mul_mod(x, y, self.q));
        }
        ResElt(polyfq::mul_mod_poly(&a.0, &b.0, &self.modulus, self.q))
    }

    pub fn pow(&self, a: &ResElt, e: u128) -> ResElt {
        if self.f == 1 {
            let x = a.as_scalar().unwrap_or(0);
            return self.from_u64(pow_mod_u128(x, e, self.q));
        }
        ResElt(polyfq::pow_mod_poly_u128(&a.0, e, &self.modulus, self.q))
    }

    /// Image of a ∈ Z[ζ] in the residue field (evaluate at w).
    pub fn residue(&self, a: &CycInt) -> Result<ResElt> {
        if a.ctx() != &self.ctx {
            return Err(Error::ContextMismatch {
                left: a.ctx().p(),
                right: self.ctx.p(),
            });
        }
        let q = self.q;
        if let Some(w) = self.w_scalar() {
            let mut acc = 0u64;
            for c in a.coeffs().iter().rev() {
                acc = add_mod(mul_mod(acc, w, q), reduce_big(c, q), q);
            }
            return Ok(self.from_u64(acc));
        }
        let mut acc = ResElt(Vec::new());
        for c in a.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, &self.w), &self.from_u64(reduce_big(c, q)));
        }
        Ok(acc)
    }

    /// The ideal s_k(𝔮). Its residue map sends s_k(a) to the residue of a,
    /// so ζ ↦ w^{k^{-1} mod p}.
    pub fn conjugate(&self, s: GaloisElt) -> PrimeIdealRep {
        let kinv = s.inverse(&self.ctx).k();
        let image = self.pow(&self.w, kinv as u128);
        let mut out = self.clone();
        match image.as_scalar() {
            Some(w) if self.f == 1 => out.modulus = vec![(self.q - w) % self.q, 1],
            _ => {}
        }
        out.w = if self.f > 1 {
            self.orbit_rep(&image)
        } else {
            image
        };
        out
    }

    /// Canonical representative of the Frobenius orbit of `x`.
    fn orbit_rep(&self, x: &ResElt) -> ResElt {
        let mut best = x.clone();
        let mut cur = x.clone();
        for _ in 1..self.f {
            cur = self.pow(&cur, self.q as u128);
            if cur.canonical_cmp(&best).is_lt() {
                best = cur.clone();
            }
        }
        best
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson {
            q: self.q,
            f: self.f,
            w: self.w.to_label(),
            modulus: self.modulus.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(ctx: &FieldCtx, j: &IdealJson) -> Result<PrimeIdealRep> {
        let parse = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad residue coefficient {s:?}")))
        };
        let modulus = j
            .modulus
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Poly>>()?;
        let w = j.w.split(',').map(parse).collect::<Result<Poly>>()?;
        let ideal = PrimeIdealRep::new(ctx, j.q, modulus, w)?;
        if ideal.f != j.f {
            return Err(Error::InvalidInput(format!(
                "recorded f={} but q={} has residue degree {}",
                j.f, j.q, ideal.f
            )));
        }
        Ok(ideal)
    }
}

fn pow_mod_u128(base: u64, e: u128, q: u64) -> u64 {
    match e.to_u64() {
        Some(e) => pow_mod(base, e, q),
        None => {
            let mut acc = 1u64;
            let mut b = base % q;
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod(acc, b, q);
                }
                b = mul_mod(b, b, q);
                e >>= 1;
            }
            acc
        }
    }
}

pub(crate) fn reduce_big(c: &BigInt, q: u64) -> u64 {
    if let Some(v) = c.to_i64() {
        return arith::reduce_i64(v, q);
    }
    let r = arith::big_mod_u64(c.magnitude(), q);
    if c.sign() == BigSign::Minus && r != 0 {
        q - r
    } else {
        r
    }
}

fn check_q(ctx: &FieldCtx, q: u64) -> Result<()> {
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q));
    }
    if q == ctx.p() {
        return Err(Error::Ramified(q));
    }
    Ok(())
}

/// All prime ideals above q, in canonical order.
pub fn split_prime(ctx: &FieldCtx, q: u64) -> Result<Vec<PrimeIdealRep>> {
    check_q(ctx, q)?;
    let p = ctx.p();
    let f = mult_order(q % p, p) as u32;
    if f == 1 {
        let base = (2..q)
            .map(|u| pow_mod(u, (q - 1) / p, q))
            .find(|&r| r != 1)
            .expect("F_q^× has elements of order p");
        let mut roots: Vec<u64> = (1..p).map(|i| pow_mod(base, i, q)).collect();
        roots.sort_unstable();
        return roots
            .into_iter()
            .map(|w| PrimeIdealRep::degree_one(ctx, q, w))
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ q);
    let factors = polyfq::equal_degree_factors(&polyfq::cyclotomic(p, q), f as usize, q, &mut rng);
    let modulus = factors[0].clone();
    let field = PrimeIdealRep {
        ctx: ctx.clone(),
        q,
        f,
        modulus: modulus.clone(),
        w: ResElt(vec![0, 1]),
    };
    let t = field.w.clone();
    let mut seen = vec![false; p as usize];
    let mut reps = Vec::new();
    for i in 1..p {
        if seen[i as usize] {
            continue;
        }
        let mut j = i;
        for _ in 0..f {
            seen[j as usize] = true;
            j = mul_mod(j, q, p);
        }
        reps.push(field.orbit_rep(&field.pow(&t, i as u128)));
    }
    reps.sort_by(|a, b| a.canonical_cmp(b));
    debug_assert_eq!(reps.len() as u64 * f as u64, p - 1);
    reps.into_iter()
        .map(|w| PrimeIdealRep::new(ctx, q, modulus.clone(), w.0))
        .collect()
}

/// The degree-1 ideal above q dividing x·ζ ± y, if there is one.
///
/// Requires q ∤ p·x·y. Returns `Ok(None)` when q splits completely but
/// −(±y)/x is not a nontrivial p-th root of unity mod q.
pub fn ideal_dividing(
    ctx: &FieldCtx,
    q: u64,
    x: &BigInt,
    y: &BigInt,
    sign: Sign,
) -> Result<Option<PrimeIdealRep>> {
    check_q(ctx, q)?;
    let p = ctx.p();
    let f = mult_order(q % p, p) as u32;
    let xr = reduce_big(x, q);
    let yr = reduce_big(y, q);
    if xr == 0 || yr == 0 {
        return Err(Error::InvalidInput(format!("q={q} divides x·y")));
    }
    if f != 1 {
        return Err(Error::NoDegreeOneIdeal { q, f });
    }
    let ratio = mul_mod(yr, inv_mod(xr, q).expect("q prime"), q);
    // x·w + y ≡ 0 ⇒ w = −y/x ; x·w − y ≡ 0 ⇒ w = y/x
    let w = match sign {
        Sign::Plus => (q - ratio) % q,
        Sign::Minus => ratio,
    };
    if w == 1 || pow_mod(w, p, q) != 1 {
        return Ok(None);
    }
    PrimeIdealRep::degree_one(ctx, q, w).map(Some)
}

/// Frobenius-consistent sanity checks every constructed ideal must pass.
pub fn check_ideal(ideal: &PrimeIdealRep) -> bool {
    let p = ideal.ctx.p() as u128;
    ideal.w != ideal.one() && !ideal.w.is_zero() && ideal.pow(&ideal.w, p) == ideal.one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    fn roots_by_search(p: u64, q: u64) -> Vec<u64> {
        (2..q).filter(|&w| pow_mod(w, p, q) == 1).collect()
    }

    #[test]
    fn split_examples() {
        let k = ctx(5);
        let ideals = split_prime(&k, 11).unwrap();
        assert_eq!(ideals.len(), 4);
        let ws: Vec<u64> = ideals.iter().map(|i| i.w_scalar().unwrap()).collect();
        assert_eq!(ws, roots_by_search(5, 11));
        assert_eq!(ws, vec![3, 4, 5, 9]);

        let ideals = split_prime(&k, 19).unwrap();
        assert_eq!(ideals.len(), 2);
        assert!(ideals.iter().all(|i| i.f() == 2));

        let ideals = split_prime(&k, 7).unwrap();
        assert_eq!(ideals.len(), 1);
        assert_eq!(ideals[0].f(), 4);
        assert_eq!(ideals[0].modulus(), &[1, 1, 1, 1, 1]);
    }

    #[test]
    fn split_rejects_bad_q() {
        let k = ctx(5);
        assert_eq!(split_prime(&k, 5), Err(Error::Ramified(5)));
        assert_eq!(split_prime(&k, 10), Err(Error::NotPrime(10)));
    }

    #[test]
    fn split_counts_and_orders() {
        for p in [5u64, 7, 11, 13] {
            let k = ctx(p);
            for q in crate::arith::sieve(120) {
                if q == p {
                    continue;
                }
                let ideals = split_prime(&k, q).unwrap();
                let f = ideals[0].f() as u64;
                assert_eq!(ideals.len() as u64 * f, p - 1, "p={p} q={q}");
                assert!(ideals.iter().all(check_ideal));
                for pair in ideals.windows(2) {
                    assert!(pair[0].w().canonical_cmp(pair[1].w()).is_lt());
                }
                // distinct ideals have distinct kernels: the same element
                // (ζ − w_i) vanishes only at its own ideal
                if f == 1 {
                    for (i, a) in ideals.iter().enumerate() {
                        let w = a.w_scalar().unwrap() as i64;
                        let e = CycInt::from_terms(&k, &[(1, 1), (0, -w)]);
                        for (j, b) in ideals.iter().enumerate() {
                            assert_eq!(b.residue(&e).unwrap().is_zero(), i == j);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn split_is_deterministic() {
        let k = ctx(11);
        assert_eq!(split_prime(&k, 3).unwrap(), split_prime(&k, 3).unwrap());
        assert_eq!(split_prime(&k, 2).unwrap().len(), 1);
        let k = ctx(7);
        let two = split_prime(&k, 2).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn residue_examples() {
        let k = ctx(5);
        let i = PrimeIdealRep::degree_one(&k, 11, 5).unwrap();
        let r = i
            .residue(&CycInt::from_terms(&k, &[(0, 2), (1, 1)]))
            .unwrap();
        assert_eq!(r.as_scalar(), Some(7));
        assert!(i.residue(&CycInt::zero(&k)).unwrap().is_zero());
        let varpi2 = CycInt::from_terms(&k, &[(2, 1), (3, 1)]);
        assert_eq!(i.residue(&varpi2).unwrap().as_scalar(), Some(7));
        let big = CycInt::new(&k, &[(0, BigInt::from(-1) - (BigInt::from(1) << 80u32))]);
        let expect = reduce_big(&(BigInt::from(-1) - (BigInt::from(1) << 80u32)), 11);
        assert_eq!(i.residue(&big).unwrap().as_scalar(), Some(expect));
        assert!(i.residue(&CycInt::one(&ctx(7))).is_err());
    }

    #[test]
    fn ideal_dividing_examples() {
        let k = ctx(5);
        let (x, y) = (BigInt::from(2), BigInt::from(1));
        let i = ideal_dividing(&k, 11, &x, &y, Sign::Plus).unwrap().unwrap();
        assert_eq!(i.w_scalar(), Some(5));
        let i = ideal_dividing(&k, 31, &x, &y, Sign::Minus)
            .unwrap()
            .unwrap();
        assert_eq!(i.w_scalar(), Some(16));
        assert_eq!(
            ideal_dividing(&k, 19, &x, &y, Sign::Plus),
            Err(Error::NoDegreeOneIdeal { q: 19, f: 2 })
        );
        // 41 splits completely but −1/2 ≡ 20 is not a 5th root of unity mod 41
        assert_eq!(ideal_dividing(&k, 41, &x, &y, Sign::Plus), Ok(None));
    }

    #[test]
    fn product_of_one_minus_zeta_residues_is_p() {
        for p in [5u64, 7, 11] {
            let k = ctx(p);
            let e = CycInt::from_terms(&k, &[(0, 1), (1, -1)]);
            for q in crate::arith::sieve(400) {
                if q % p != 1 {
                    continue;
                }
                let prod = split_prime(&k, q)
                    .unwrap()
                    .iter()
                    .map(|i| i.residue(&e).unwrap().as_scalar().unwrap())
                    .fold(1, |a, b| mul_mod(a, b, q));
                assert_eq!(prod, p % q);
            }
        }
    }

    #[test]
    fn conjugate_ideals_stay_canonical() {
        let k = ctx(11);
        let ideals = split_prime(&k, 3).unwrap();
        for i in &ideals {
            for s in 1..11 {
                let c = i.conjugate(GaloisElt::new(&k, s).unwrap());
                assert!(ideals.contains(&c));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let k = ctx(5);
        for q in [11u64, 19, 7] {
            for i in split_prime(&k, q).unwrap() {
                let j = i.to_json();
                assert_eq!(PrimeIdealRep::from_json(&k, &j).unwrap(), i);
            }
        }
        let j = PrimeIdealRep::degree_one(&k, 11, 5).unwrap().to_json();
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"q":11,"f":1,"w":"5","modulus":["6","1"]}"#
        );
    }

    fn arb_case() -> impl Strategy<Value = (u64, u64, Vec<i64>, Vec<i64>)> {
        let cases: Vec<(u64, u64)> = [5u64, 7]
            .iter()
            .flat_map(|&p| {
                crate::arith::sieve(100)
                    .into_iter()
                    .filter(move |&q| q != p)
                    .map(move |q| (p, q))
            })
            .collect();
        prop::sample::select(cases).prop_flat_map(|(p, q)| {
            let n = (p - 1) as usize;
            (
                Just(p),
                Just(q),
                prop::collection::vec(-50i64..50, n),
                prop::collection::vec(-50i64..50, n),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn residue_is_a_ring_homomorphism((p, q, a, b) in arb_case()) {
            let k = ctx(p);
            let to = |v: &Vec<i64>| CycInt::from_coeffs(&k, v.iter().map(|&c| BigInt::from(c)).collect()).unwrap();
            let (a, b) = (to(&a), to(&b));
            for ideal in split_prime(&k, q).unwrap() {
                let (ra, rb) = (ideal.residue(&a).unwrap(), ideal.residue(&b).unwrap());
                prop_assert_eq!(ideal.residue(&a.mul(&b)).unwrap(), ideal.mul(&ra, &rb));
                prop_assert_eq!(ideal.residue(&(&a + &b)).unwrap(), ideal.add(&ra, &rb));
            }
        }
    }

    #[test]
    fn zero_residue_reported() {
        let k = ctx(5);
        let i = PrimeIdealRep::degree_one(&k, 11, 5).unwrap();
        let e = CycInt::from_terms(&k, &[(1, 1), (0, -5)]);
        assert!(i.residue(&e).unwrap().is_zero());
    }
}
