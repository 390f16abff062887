//! One-sided certificates that a cyclotomic-unit eigencomponent is not a
//! p-th power.

use serde::Serialize;

use crate::arith::{inv_mod, is_prime_u64, pow_mod, primitive_root};
use crate::cycint::{FieldCtx, GaloisElt};
use crate::cycunits::varpi;
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::powsym::{SymbolEvaluator, SymbolExp};
use crate::resfield::{split_prime, IdealJson, PrimeIdealRep};

use super::bernoulli::{irregular_pairs, IrregularPair};

/// A degree-1 ideal at which the eigencomponent u_k = ∏_a s_a(ϖ_g)^{n_a}
/// has nontrivial symbol ζ^e.
#[derive(Clone, Debug)]
pub struct VandiverWitness {
    pub pair: IrregularPair,
    pub g: u64,
    pub q: u64,
    pub ideal: PrimeIdealRep,
    pub e: SymbolExp,
}

#[derive(Serialize)]
struct WitnessJson {
    p: u64,
    k: u64,
    g: u64,
    q: u64,
    w: String,
    e: u64,
    ideal: IdealJson,
}

impl VandiverWitness {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(WitnessJson {
            p: self.pair.p,
            k: self.pair.k,
            g: self.g,
            q: self.q,
            w: self.ideal.w().to_label(),
            e: self.e.e(),
            ideal: self.ideal.to_json(),
        })
        .expect("plain struct")
    }
}

/// n_a = a^{−k} mod p for a = 1..p−1, in [0, p).
pub fn eigen_exponents(p: u64, k: u64) -> Vec<u64> {
    (1..p)
        .map(|a| pow_mod(inv_mod(a, p).expect("p prime"), k, p))
        .collect()
}

/// Σ_a n_a·symbol(s_a(ϖ_g), 𝔮), each unit mapped to the residue field first.
pub fn eigen_symbol(
    ctx: &FieldCtx,
    g: u64,
    exps: &[u64],
    ideal: &PrimeIdealRep,
) -> Result<SymbolExp> {
    let p = ctx.p();
    let unit = varpi(ctx, g)?;
    let ev = SymbolEvaluator::new(ideal)?;
    let mut acc = SymbolExp::trivial(p);
    for (a, &n) in (1..p).zip(exps) {
        if n == 0 {
            continue;
        }
        let s = GaloisElt::new(ctx, a as i64)?;
        acc = acc + ev.of(&unit.galois(s))?.scale(n as i64);
    }
    Ok(acc)
}

/// Searches the first `candidates` primes q ≡ 1 mod p. `Ok(None)` means
/// every ideal tried gave a trivial symbol, which is inconclusive.
pub fn vandiver_witness(
    p: u64,
    k: u64,
    candidates: usize,
    exec: Exec,
) -> Result<Option<VandiverWitness>> {
    let pairs = irregular_pairs(p)?;
    if pairs.is_empty() {
        return Err(Error::NotIrregular(p));
    }
    let pair = IrregularPair { p, k };
    if !pairs.contains(&pair) {
        return Err(Error::InvalidInput(format!(
            "({p}, {k}) is not an irregular pair"
        )));
    }
    if candidates == 0 {
        return Err(Error::InvalidInput(
            "need at least one candidate prime".into(),
        ));
    }
    let ctx = FieldCtx::new(p)?;
    let g = primitive_root(p);
    let exps = eigen_exponents(p, k);
    let primes = (1u64..)
        .map(|t| t * 2 * p + 1)
        .filter(|&q| is_prime_u64(q))
        .take(candidates);
    for q in primes {
        let ideals = split_prime(&ctx, q)?;
        let symbols = exec.map(&ideals, |ideal| eigen_symbol(&ctx, g, &exps, ideal));
        for (ideal, e) in ideals.into_iter().zip(symbols) {
            let e = e?;
            if !e.is_trivial() {
                return Ok(Some(VandiverWitness {
                    pair,
                    g,
                    q,
                    ideal,
                    e,
                }));
            }
        }
    }
    Ok(None)
}
