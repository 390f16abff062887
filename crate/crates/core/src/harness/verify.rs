use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{add_mod, mul_mod};
use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::powsym::{zeta_symbol, SymbolEvaluator};
use crate::resfield::{reduce_big, Sign};

use super::scan::{scan_quotient, symbol_table, ScanRecord, SymbolTable};

/// Outcome of one identity at one k. `lhs`/`rhs` are residues for the
/// congruences and symbol exponents for the symbol identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub k: u64,
    pub status: String,
    pub lhs: Option<u64>,
    pub rhs: Option<u64>,
}

impl IdentityCheck {
    fn compare(k: u64, lhs: u64, rhs: u64) -> IdentityCheck {
        let status = if lhs == rhs { "pass" } else { "fail" };
        IdentityCheck {
            k,
            status: status.into(),
            lhs: Some(lhs),
            rhs: Some(rhs),
        }
    }

    fn skipped(k: u64) -> IdentityCheck {
        IdentityCheck {
            k,
            status: "skipped: not coprime".into(),
            lhs: None,
            rhs: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.status == "fail"
    }
}

fn count_failures(checks: &[IdentityCheck]) -> usize {
    checks.iter().filter(|c| c.failed()).count()
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub checks: Vec<IdentityCheck>,
    pub failures: usize,
}

/// x + ζ^k y ≡ x·(1 ∓ ζ^{k+1}) mod 𝔮 for k = 1..p−2, with − for plus-scans
/// (y ≡ −xζ) and + for minus-scans (y ≡ xζ).
pub fn verify_congruences(rec: &ScanRecord) -> Result<CongruenceReport> {
    let ctx = rec.ctx();
    let ideal = &rec.ideal;
    let sgn = match rec.sign {
        Sign::Plus => -1,
        Sign::Minus => 1,
    };
    let checks = (1..=rec.p - 2)
        .map(|k| {
            let lhs = ideal.residue(&CycInt::binomial(
                ctx,
                rec.x.clone(),
                k as i64,
                rec.y.clone(),
            ))?;
            let rhs_elt = CycInt::new(
                ctx,
                &[
                    (0, rec.x.clone()),
                    (k as i64 + 1, &rec.x * BigInt::from(sgn)),
                ],
            );
            let rhs = ideal.residue(&rhs_elt)?;
            let scalar = |r: &crate::resfield::ResElt| {
                r.as_scalar()
                    .ok_or_else(|| Error::Unsupported("congruences need a degree-1 ideal".into()))
            };
            Ok(IdentityCheck::compare(k, scalar(&lhs)?, scalar(&rhs)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CongruenceReport {
        failures: count_failures(&checks),
        checks,
    })
}

/// Whether the specialized form symbol(x+ζ^k y) = symbol(u_{k+1}) applies
/// (its guard) and, if so, whether it held for every k.
#[derive(Clone, Debug, Serialize)]
pub struct Specialization {
    pub guard: bool,
    pub holds: Option<bool>,
}

/// symbol(x+ζ^k y) = symbol(x+ζ^{p−k} y) for k = 2..p−2; reported only.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugateRelation {
    pub checked: usize,
    pub holds: usize,
    pub fails_at: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolIdentityReport {
    pub checks: Vec<IdentityCheck>,
    pub failures: usize,
    pub specialization: Specialization,
    pub conjugate_relation: ConjugateRelation,
}

/// symbol(x+ζ^k y) = symbol(x+y) + k·inv2·symbol(ζ) + symbol(u_{k+1}) for
/// k = 1..p−2, where u is ϖ for plus-scans and ε for minus-scans.
pub fn verify_symbol_identities(rec: &ScanRecord) -> Result<SymbolIdentityReport> {
    let table = symbol_table(rec.ctx(), &rec.x, &rec.y, rec.sign, &rec.ideal)?;
    Ok(symbol_identities_from(rec, &table))
}

fn symbol_identities_from(rec: &ScanRecord, t: &SymbolTable) -> SymbolIdentityReport {
    let p = rec.p;
    let inv2 = rec.ctx().inv2();
    let checks: Vec<IdentityCheck> = t
        .terms
        .iter()
        .zip(&t.units)
        .map(|(term, unit)| match term.e {
            None => IdentityCheck::skipped(term.k),
            Some(lhs) => {
                let shift = mul_mod(mul_mod(term.k, inv2, p), t.zeta, p);
                let rhs = add_mod(add_mod(t.x_plus_y, shift, p), unit.e, p);
                IdentityCheck::compare(term.k, lhs, rhs)
            }
        })
        .collect();

    let guard = t.x_plus_y == 0 && t.zeta == 0;
    let holds = guard.then(|| {
        t.terms
            .iter()
            .zip(&t.units)
            .all(|(term, unit)| term.e.is_none_or(|e| e == unit.e))
    });

    let term = |k: u64| t.terms[(k - 1) as usize].e;
    let mut conj = ConjugateRelation {
        checked: 0,
        holds: 0,
        fails_at: Vec::new(),
    };
    for k in 2..=p - 2 {
        if let (Some(a), Some(b)) = (term(k), term(p - k)) {
            conj.checked += 1;
            if a == b {
                conj.holds += 1;
            } else {
                conj.fails_at.push(k);
            }
        }
    }

    SymbolIdentityReport {
        failures: count_failures(&checks),
        checks,
        specialization: Specialization { guard, holds },
        conjugate_relation: conj,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FurtwanglerReport {
    pub q: u64,
    pub p2_divides_q_minus_1: bool,
    pub zeta_symbol: u64,
    pub symbol_p: u64,
    /// "1-zeta^j" for plus-scans, "1+zeta^j" for minus-scans, j = 1..p−1.
    pub family: String,
    pub family_symbols: Vec<u64>,
    /// zeta_symbol = 0 ⟺ p² | q − 1.
    pub consistent: bool,
    /// The conditional display: symbol(p) = symbol(1−ζ^j) for all j
    /// (plus-scans) or symbol(1+ζ^j) = 0 for all j (minus-scans).
    pub conditional_display_holds: bool,
}

pub fn furtwangler_report(rec: &ScanRecord) -> Result<FurtwanglerReport> {
    let p = rec.p;
    let ctx = rec.ctx();
    let ev = SymbolEvaluator::new(&rec.ideal)?;
    let zeta = zeta_symbol(&rec.ideal).e();
    let p2 = (rec.q - 1).is_multiple_of(p * p);
    let symbol_p = ev.of(&CycInt::from_int(ctx, p))?.e();
    let c = match rec.sign {
        Sign::Plus => -1,
        Sign::Minus => 1,
    };
    let family_symbols = (1..p)
        .map(|j| {
            ev.of(&CycInt::from_terms(ctx, &[(0, 1), (j as i64, c)]))
                .map(|s| s.e())
        })
        .collect::<Result<Vec<_>>>()?;
    let conditional_display_holds = match rec.sign {
        Sign::Plus => family_symbols.iter().all(|&e| e == symbol_p),
        Sign::Minus => family_symbols.iter().all(|&e| e == 0),
    };
    Ok(FurtwanglerReport {
        q: rec.q,
        p2_divides_q_minus_1: p2,
        zeta_symbol: zeta,
        symbol_p,
        family: if c < 0 { "1-zeta^j" } else { "1+zeta^j" }.into(),
        family_symbols,
        consistent: (zeta == 0) == p2,
        conditional_display_holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub pass: bool,
}

impl NamedCheck {
    fn new(name: &str, pass: bool) -> NamedCheck {
        NamedCheck {
            name: name.into(),
            pass,
        }
    }
}

/// Every check applied to a stored record by `verify`.
#[derive(Clone, Debug, Serialize)]
pub struct RecordVerdict {
    pub p: u64,
    pub x: String,
    pub y: String,
    pub sign: Sign,
    pub q: u64,
    pub checks: Vec<NamedCheck>,
    pub congruences: CongruenceReport,
    pub symbol_identities: SymbolIdentityReport,
    pub furtwangler: FurtwanglerReport,
    pub pass: bool,
}

/// Re-derives a record from its inputs and runs all identity checks.
pub fn verify_record(rec: &ScanRecord) -> Result<RecordVerdict> {
    let p = rec.p;
    let q = rec.q;
    let n = scan_quotient(p, &rec.x, &rec.y, rec.sign)?;
    let (xr, yr) = (reduce_big(&rec.x, q), reduce_big(&rec.y, q));
    let w = rec.ideal.w_scalar();
    let ideal_divides = w.is_some_and(|w| {
        let xw = mul_mod(xr, w, q);
        match rec.sign {
            Sign::Plus => add_mod(xw, yr, q) == 0,
            Sign::Minus => xw == yr,
        }
    });
    let fresh = symbol_table(rec.ctx(), &rec.x, &rec.y, rec.sign, &rec.ideal)?;
    let congruences = verify_congruences(rec)?;
    let symbol_identities = symbol_identities_from(rec, &fresh);
    let furtwangler = furtwangler_report(rec)?;
    let checks = vec![
        NamedCheck::new("n_matches", n == rec.n),
        NamedCheck::new("q_divides_n", reduce_big(&n, q) == 0),
        NamedCheck::new("q_1_mod_p", q % p == 1),
        NamedCheck::new("qmod_p2", q % (p * p) == rec.qmod_p2),
        NamedCheck::new("ideal_divides", ideal_divides),
        NamedCheck::new("stored_symbols", fresh == rec.symbols),
        NamedCheck::new("congruences", congruences.failures == 0),
        NamedCheck::new("symbol_identities", symbol_identities.failures == 0),
        NamedCheck::new(
            "specialization",
            symbol_identities.specialization.holds != Some(false),
        ),
        NamedCheck::new("furtwangler_consistency", furtwangler.consistent),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(RecordVerdict {
        p,
        x: rec.x.to_string(),
        y: rec.y.to_string(),
        sign: rec.sign,
        q,
        checks,
        congruences,
        symbol_identities,
        furtwangler,
        pass,
    })
}
