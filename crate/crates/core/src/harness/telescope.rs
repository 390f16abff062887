//! Symbolic replay of the telescoping chains. Symbol exponents are linear
//! forms over Z/p in a formal zeta exponent t and unknowns u_i (the symbol
//! of the i-th unit). Unit facts the chains start from are checked by exact
//! arithmetic before they are substituted.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{add_mod, mul_mod, sub_mod};
use crate::cycint::{CycInt, FieldCtx};
use crate::cycunits::{epsilon, varpi};
use crate::error::Result;
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Form {
    t: u64,
    vars: BTreeMap<u64, u64>,
}

impl Form {
    fn zero() -> Form {
        Form {
            t: 0,
            vars: BTreeMap::new(),
        }
    }

    fn unknown(i: u64) -> Form {
        Form {
            t: 0,
            vars: BTreeMap::from([(i, 1)]),
        }
    }

    fn plus_t(mut self, c: u64, p: u64) -> Form {
        self.t = add_mod(self.t, c % p, p);
        self
    }

    /// The t-coefficient, once no unknowns remain.
    fn resolved(&self) -> Option<u64> {
        self.vars.is_empty().then_some(self.t)
    }
}

/// Known values of the unknowns; unset ones stay formal.
struct Engine {
    known: BTreeMap<u64, Form>,
}

impl Engine {
    fn new() -> Engine {
        Engine {
            known: BTreeMap::new(),
        }
    }

    fn get(&self, i: u64) -> Form {
        self.known
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Form::unknown(i))
    }

    fn set(&mut self, i: u64, f: Form) {
        self.known.insert(i, f);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainEntry {
    pub k_prime: u64,
    pub unit: String,
    /// t-exponent of the unit's symbol; absent if unknowns remain.
    pub exponent: Option<u64>,
    pub closed: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TelescopeReport {
    pub p: u64,
    /// ε_1 = ε_{p−1} = 1, ε_{p−a} = ε_a, ϖ_1 = 1, ϖ_{p−1} = −1 and
    /// ϖ_a = −ϖ_{p−a}, all checked exactly.
    pub unit_facts: bool,
    /// ε_{p−2k′−1} = ζ^{−k′(k′+1)}, for 1 ≤ k′ ≤ (p−3)/2.
    pub even_chain: Vec<ChainEntry>,
    /// ε_{p−2k′} = ζ^{1/4−k′²}, for 1 ≤ k′ ≤ (p−3)/2.
    pub odd_chain: Vec<ChainEntry>,
    /// The two chains assign equal exponents to ε_i and ε_{p−i}.
    pub chains_agree: bool,
    /// Replayed exponents of ϖ_1..ϖ_{p−1}.
    pub varpi_exponents: Vec<Option<u64>>,
    pub varpi_collapse: bool,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn unit_facts(ctx: &FieldCtx) -> Result<bool> {
    let p = ctx.p();
    let minus_one = CycInt::from_int(ctx, -1);
    let mut ok = epsilon(ctx, 1)?.is_one()
        && epsilon(ctx, p - 1)?.is_one()
        && varpi(ctx, 1)?.is_one()
        && varpi(ctx, p - 1)? == minus_one;
    for a in 1..p {
        ok &= epsilon(ctx, a)? == epsilon(ctx, p - a)?;
        ok &= varpi(ctx, a)? == -&varpi(ctx, p - a)?;
    }
    Ok(ok)
}

/// Replays both ε chains and the ϖ collapse for one p.
pub fn telescope_replay(ctx: &FieldCtx) -> Result<TelescopeReport> {
    let p = ctx.p();
    let facts = unit_facts(ctx)?;
    let top = (p - 3) / 2;
    let inv4 = mul_mod(ctx.inv2(), ctx.inv2(), p);

    // Relation: u_{p−k−1} = −k·t + u_{p−k+1} for k = 2..p−2.
    let mut even = Engine::new();
    if facts {
        even.set(p - 1, Form::zero());
    }
    let mut even_chain = Vec::new();
    for kp in 1..=top {
        let k = 2 * kp;
        let value = even.get(p - k + 1).plus_t(p - k, p);
        even.set(p - k - 1, value.clone());
        let closed = (p - mul_mod(kp, kp + 1, p)) % p;
        let exponent = value.resolved();
        even_chain.push(ChainEntry {
            k_prime: kp,
            unit: format!("epsilon_{}", p - k - 1),
            exponent,
            closed,
            ok: exponent == Some(closed),
        });
    }

    // Same relation at odd k = 2k′+1, solved upward from ε_1:
    // u_{p−2k′} = (2k′+1)·t + u_{p−2k′−2}.
    let mut odd = Engine::new();
    if facts {
        odd.set(1, Form::zero());
    }
    let mut odd_chain = Vec::new();
    for kp in (1..=top).rev() {
        let k = 2 * kp + 1;
        let value = odd.get(p - k - 1).plus_t(k, p);
        odd.set(p - k + 1, value.clone());
        let closed = sub_mod(inv4, mul_mod(kp, kp, p), p);
        let exponent = value.resolved();
        odd_chain.push(ChainEntry {
            k_prime: kp,
            unit: format!("epsilon_{}", p - 2 * kp),
            exponent,
            closed,
            ok: exponent == Some(closed),
        });
    }
    odd_chain.reverse();

    let chains_agree = even_chain.iter().all(|e| {
        let partner = (p - 1) / 2 - e.k_prime;
        odd_chain[(partner - 1) as usize].exponent == e.exponent
    });

    // ϖ: v_{p−k+1} = v_{p−k−1} for k = 2..p−2, from v_{p−1} (k even) and
    // from v_1 (k odd).
    let mut vp = Engine::new();
    if facts {
        vp.set(p - 1, Form::zero());
        vp.set(1, Form::zero());
    }
    for k in (2..=p - 3).step_by(2) {
        let v = vp.get(p - k + 1);
        vp.set(p - k - 1, v);
    }
    for k in (3..=p - 2).rev().step_by(2) {
        let v = vp.get(p - k - 1);
        vp.set(p - k + 1, v);
    }
    let varpi_exponents: Vec<Option<u64>> = (1..p).map(|i| vp.get(i).resolved()).collect();
    let varpi_collapse = varpi_exponents.iter().all(|e| *e == Some(0));

    let matches = even_chain.iter().chain(&odd_chain).all(|e| e.ok);
    Ok(TelescopeReport {
        p,
        unit_facts: facts,
        even_chain,
        odd_chain,
        chains_agree,
        varpi_exponents,
        varpi_collapse,
        matches,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TelescopeSweep {
    pub pmax: u64,
    pub primes: Vec<u64>,
    /// Every report matched, agreed across chains and collapsed the ϖ.
    #[serde(rename = "match")]
    pub matches: bool,
    pub reports: Vec<TelescopeReport>,
}

/// Replays every prime 5 ≤ p ≤ pmax.
pub fn telescope_sweep(pmax: u64, exec: Exec) -> Result<TelescopeSweep> {
    let primes: Vec<u64> = crate::arith::sieve(pmax)
        .into_iter()
        .filter(|&p| p >= 5)
        .collect();
    let reports = exec
        .map(&primes, |&p| telescope_replay(&FieldCtx::new(p)?))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let matches = reports
        .iter()
        .all(|r| r.matches && r.chains_agree && r.varpi_collapse && r.unit_facts);
    Ok(TelescopeSweep {
        pmax,
        primes,
        matches,
        reports,
    })
}
