use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{is_probable_prime, trial_divisors};
use crate::cycint::{CycInt, FieldCtx};
use crate::cycunits::{CycUnitLabel, UnitKind};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::powsym::{zeta_symbol, SymbolEvaluator};
use crate::resfield::{ideal_dividing, reduce_big, IdealJson, PrimeIdealRep, Sign};

pub const MAX_TRIAL_BOUND: u64 = 1 << 40;

/// Symbol of x + ζ^k y; `e` is absent when the element is not coprime to 𝔮.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSymbol {
    pub k: u64,
    pub e: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSymbol {
    pub unit: String,
    pub e: u64,
}

/// Symbol exponents at 𝔮 for the elements a scan record tracks. `units`
/// holds ϖ_{k+1} (plus-scans) or ε_{k+1} (minus-scans) for k = 1..p−2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolTable {
    pub zeta: u64,
    #[serde(rename = "x+y")]
    pub x_plus_y: u64,
    #[serde(rename = "x-y")]
    pub x_minus_y: u64,
    pub terms: Vec<TermSymbol>,
    pub units: Vec<UnitSymbol>,
}

pub(crate) fn unit_kind(sign: Sign) -> UnitKind {
    match sign {
        Sign::Plus => UnitKind::Varpi,
        Sign::Minus => UnitKind::Epsilon,
    }
}

pub(crate) fn symbol_table(
    ctx: &FieldCtx,
    x: &BigInt,
    y: &BigInt,
    sign: Sign,
    ideal: &PrimeIdealRep,
) -> Result<SymbolTable> {
    let p = ctx.p();
    let ev = SymbolEvaluator::new(ideal)?;
    let of_int = |v: BigInt| ev.of(&CycInt::from_int(ctx, v)).map(|s| s.e());
    let terms = (1..=p - 2)
        .map(
            |k| match ev.of(&CycInt::binomial(ctx, x.clone(), k as i64, y.clone())) {
                Ok(s) => Ok(TermSymbol { k, e: Some(s.e()) }),
                Err(Error::NotCoprime) => Ok(TermSymbol { k, e: None }),
                Err(e) => Err(e),
            },
        )
        .collect::<Result<Vec<_>>>()?;
    let kind = unit_kind(sign);
    let units = (1..=p - 2)
        .map(|k| {
            let label = CycUnitLabel { kind, a: k + 1 };
            Ok(UnitSymbol {
                unit: label.to_string(),
                e: ev.of(&label.eval(ctx)?)?.e(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolTable {
        zeta: zeta_symbol(ideal).e(),
        x_plus_y: of_int(x + y)?,
        x_minus_y: of_int(x - y)?,
        terms,
        units,
    })
}

/// One prime q | N together with the ideal 𝔮 | x·ζ ± y and its symbol table.
#[derive(Clone, Debug)]
pub struct ScanRecord {
    pub p: u64,
    pub x: BigInt,
    pub y: BigInt,
    pub sign: Sign,
    pub n: BigInt,
    pub q: u64,
    pub ideal: PrimeIdealRep,
    pub qmod_p2: u64,
    /// N was not fully factored.
    pub partial: bool,
    pub symbols: SymbolTable,
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    kind: String,
    p: u64,
    x: String,
    y: String,
    sign: Sign,
    n: String,
    q: u64,
    ideal: IdealJson,
    qmod_p2: u64,
    partial: bool,
    symbols: SymbolTable,
}

fn parse_big(s: &str, what: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad integer for {what}: {s:?}")))
}

impl ScanRecord {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(RecordJson {
            kind: "record".into(),
            p: self.p,
            x: self.x.to_string(),
            y: self.y.to_string(),
            sign: self.sign,
            n: self.n.to_string(),
            q: self.q,
            ideal: self.ideal.to_json(),
            qmod_p2: self.qmod_p2,
            partial: self.partial,
            symbols: self.symbols.clone(),
        })
        .expect("plain struct")
    }

    /// Parses a record line. Only the stored fields are read; nothing is
    /// recomputed or checked beyond well-formedness of the ideal.
    pub fn from_json(v: &Value) -> Result<ScanRecord> {
        let r: RecordJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidInput(format!("bad scan record: {e}")))?;
        if r.kind != "record" {
            return Err(Error::InvalidInput(format!(
                "not a scan record: kind={}",
                r.kind
            )));
        }
        let ctx = FieldCtx::new(r.p)?;
        Ok(ScanRecord {
            p: r.p,
            x: parse_big(&r.x, "x")?,
            y: parse_big(&r.y, "y")?,
            sign: r.sign,
            n: parse_big(&r.n, "n")?,
            q: r.q,
            ideal: PrimeIdealRep::from_json(&ctx, &r.ideal)?,
            qmod_p2: r.qmod_p2,
            partial: r.partial,
            symbols: r.symbols,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.ideal.ctx()
    }
}

/// Part of N left after trial division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unfactored {
    pub value: BigUint,
    /// Passed the probable-prime test (but too large for a record).
    pub prime: bool,
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub p: u64,
    pub x: BigInt,
    pub y: BigInt,
    pub sign: Sign,
    pub n: BigInt,
    pub records: Vec<ScanRecord>,
    /// Prime factors of N dividing p·x·y·(x ± y); only p can occur.
    pub excluded: Vec<u64>,
    pub unfactored: Option<Unfactored>,
}

impl ScanResult {
    /// JSON lines: one per record, then one for an unfactored cofactor.
    pub fn json_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .records
            .iter()
            .map(|r| r.to_json().to_string())
            .collect();
        if let Some(u) = &self.unfactored {
            out.push(
                json!({
                    "kind": "unfactored",
                    "p": self.p,
                    "x": self.x.to_string(),
                    "y": self.y.to_string(),
                    "sign": self.sign,
                    "n": self.n.to_string(),
                    "cofactor": u.value.to_string(),
                    "prime": u.prime,
                })
                .to_string(),
            );
        }
        out
    }
}

/// (x^p ± y^p)/(x ± y), exactly.
pub(crate) fn scan_quotient(p: u64, x: &BigInt, y: &BigInt, sign: Sign) -> Result<BigInt> {
    let e = p as u32;
    let (num, den) = match sign {
        Sign::Plus => (x.pow(e) + y.pow(e), x + y),
        Sign::Minus => (x.pow(e) - y.pow(e), x - y),
    };
    if den.is_zero() {
        let rel = if sign == Sign::Plus {
            "x = -y"
        } else {
            "x = y"
        };
        return Err(Error::InvalidInput(format!(
            "{rel}: the quotient is undefined"
        )));
    }
    let (n, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Internal("x ± y does not divide x^p ± y^p".into()));
    }
    Ok(n)
}

fn strip(n: &mut BigUint, small: &mut Option<u64>, d: u64) -> bool {
    let hit = match small {
        Some(c) => *c % d == 0,
        None => (&*n % d).is_zero(),
    };
    if !hit {
        return false;
    }
    match small {
        Some(c) => {
            while *c % d == 0 {
                *c /= d;
            }
            *n = BigUint::from(*c);
        }
        None => {
            while (&*n % d).is_zero() {
                *n /= d;
            }
            *small = n.to_u64();
        }
    }
    true
}

/// Distinct prime factors up to `bound` and the remaining cofactor.
fn trial_factor(n: &BigUint, bound: u64) -> (Vec<u64>, BigUint) {
    let root = n.sqrt().to_u64().unwrap_or(u64::MAX);
    let mut cof = n.clone();
    let mut small = cof.to_u64();
    let mut found = Vec::new();
    for d in trial_divisors(bound.min(root)) {
        let square_exceeds = match small {
            Some(c) => d.saturating_mul(d) > c,
            None => BigUint::from(d) * d > cof,
        };
        if square_exceeds {
            break;
        }
        if strip(&mut cof, &mut small, d) {
            found.push(d);
        }
    }
    (found, cof)
}

fn build_record(
    ctx: &FieldCtx,
    x: &BigInt,
    y: &BigInt,
    sign: Sign,
    n: &BigInt,
    q: u64,
    partial: bool,
) -> Result<ScanRecord> {
    let p = ctx.p();
    if q % p != 1 {
        return Err(Error::Internal(format!(
            "prime {q} divides N but q ≢ 1 mod {p}"
        )));
    }
    let ideal = ideal_dividing(ctx, q, x, y, sign)?
        .ok_or_else(|| Error::Internal(format!("no ideal above {q} divides x·ζ ± y")))?;
    let symbols = symbol_table(ctx, x, y, sign, &ideal)?;
    Ok(ScanRecord {
        p,
        x: x.clone(),
        y: y.clone(),
        sign,
        n: n.clone(),
        q,
        ideal,
        qmod_p2: q % (p * p),
        partial,
        symbols,
    })
}

/// Factors N = (x^p ± y^p)/(x ± y) by trial division up to `trial_bound`
/// plus a primality test on the cofactor, and builds one record per prime
/// factor q ∤ p·x·y·(x ± y).
pub fn scan(
    ctx: &FieldCtx,
    x: &BigInt,
    y: &BigInt,
    sign: Sign,
    trial_bound: u64,
    exec: Exec,
) -> Result<ScanResult> {
    let p = ctx.p();
    if x.is_zero() || y.is_zero() {
        return Err(Error::InvalidInput("x and y must be nonzero".into()));
    }
    if !x.gcd(y).is_one() {
        return Err(Error::InvalidInput(format!("gcd({x}, {y}) ≠ 1")));
    }
    if trial_bound > MAX_TRIAL_BOUND {
        return Err(Error::InvalidInput(format!(
            "trial bound exceeds 2^40: {trial_bound}"
        )));
    }
    let n = scan_quotient(p, x, y, sign)?;
    if n.is_one() {
        return Err(Error::NothingToScan {
            sign: sign.as_char(),
        });
    }
    if n.sign() != BigSign::Plus {
        return Err(Error::Internal(format!("quotient {n} is not positive")));
    }
    let (mut primes, cof) = trial_factor(n.magnitude(), trial_bound);
    let mut unfactored = None;
    if !cof.is_one() {
        let prime = is_probable_prime(&cof);
        match cof.to_u64() {
            Some(q) if prime => primes.push(q),
            _ => {
                unfactored = Some(Unfactored {
                    value: cof.clone(),
                    prime,
                })
            }
        }
    }
    let partial = unfactored.is_some();
    let pm = match sign {
        Sign::Plus => x + y,
        Sign::Minus => x - y,
    };
    let (excluded, kept): (Vec<u64>, Vec<u64>) = primes.into_iter().partition(|&q| {
        q == p || reduce_big(x, q) == 0 || reduce_big(y, q) == 0 || reduce_big(&pm, q) == 0
    });
    let records = exec
        .map(&kept, |&q| build_record(ctx, x, y, sign, &n, q, partial))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult {
        p,
        x: x.clone(),
        y: y.clone(),
        sign,
        n,
        records,
        excluded,
        unfactored,
    })
}

/// All coprime (x, y) with 1 ≤ |x|, |y| ≤ bound.
pub fn coprime_pairs(bound: i64) -> Vec<(i64, i64)> {
    let range = (-bound..=bound).filter(|&v| v != 0);
    range
        .clone()
        .flat_map(|x| range.clone().map(move |y| (x, y)))
        .filter(|&(x, y)| x.gcd(&y) == 1)
        .collect()
}

/// Scans every pair with both signs, skipping the degenerate inputs
/// x = ∓y and N = 1. Results follow the input order, plus before minus.
pub fn sweep(
    ctx: &FieldCtx,
    pairs: &[(i64, i64)],
    trial_bound: u64,
    exec: Exec,
) -> Result<Vec<ScanResult>> {
    let jobs: Vec<(i64, i64, Sign)> = pairs
        .iter()
        .flat_map(|&(x, y)| [(x, y, Sign::Plus), (x, y, Sign::Minus)])
        .filter(|&(x, y, s)| match s {
            Sign::Plus => x + y != 0,
            Sign::Minus => x != y,
        })
        .collect();
    let results = exec.map(&jobs, |&(x, y, s)| {
        scan(
            ctx,
            &BigInt::from(x),
            &BigInt::from(y),
            s,
            trial_bound,
            Exec::Sequential,
        )
    });
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(res) => out.push(res),
            Err(Error::NothingToScan { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn ctx5() -> FieldCtx {
        FieldCtx::new(5).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn plus_example() {
        let res = scan(
            &ctx5(),
            &big(2),
            &big(1),
            Sign::Plus,
            1000,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(res.n, big(11));
        assert_eq!(res.records.len(), 1);
        let r = &res.records[0];
        assert_eq!((r.q, r.ideal.w_scalar(), r.qmod_p2), (11, Some(5), 11));
        assert_eq!(r.symbols.terms[0].e, Some(1));
        assert_eq!(r.symbols.x_plus_y, 4);
        assert_eq!(r.symbols.zeta, 2);
        assert_eq!(
            r.symbols.units[0],
            UnitSymbol {
                unit: "varpi_2".into(),
                e: 1
            }
        );
    }

    #[test]
    fn minus_example() {
        let res = scan(
            &ctx5(),
            &big(2),
            &big(1),
            Sign::Minus,
            1000,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(res.n, big(31));
        let r = &res.records[0];
        assert_eq!((r.q, r.ideal.w_scalar(), r.qmod_p2), (31, Some(16), 6));
        assert_eq!(r.symbols.terms[0].e, Some(1));
        assert_eq!(r.symbols.x_plus_y, 1);
        assert_eq!(r.symbols.zeta, 1);
        assert_eq!(r.symbols.units[0].e, 2);
    }

    #[test]
    fn degenerate_inputs() {
        let ctx = ctx5();
        let ex = Exec::Sequential;
        assert_eq!(
            scan(&ctx, &big(1), &big(1), Sign::Plus, 100, ex).unwrap_err(),
            Error::NothingToScan { sign: '+' }
        );
        assert!(scan(&ctx, &big(3), &big(-3), Sign::Plus, 100, ex).is_err());
        assert!(scan(&ctx, &big(2), &big(2), Sign::Minus, 100, ex).is_err());
        assert!(scan(&ctx, &big(4), &big(2), Sign::Plus, 100, ex).is_err());
        assert!(scan(&ctx, &big(0), &big(1), Sign::Plus, 100, ex).is_err());
    }

    #[test]
    fn p_is_excluded() {
        // (3^5 + 2^5)/5 = 55 = 5·11
        let res = scan(
            &ctx5(),
            &big(3),
            &big(2),
            Sign::Plus,
            1000,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(res.excluded, vec![5]);
        assert_eq!(
            res.records.iter().map(|r| r.q).collect::<Vec<_>>(),
            vec![11]
        );
    }

    #[test]
    fn large_prime_cofactor_becomes_record() {
        let ctx = FieldCtx::new(11).unwrap();
        let res = scan(&ctx, &big(29), &big(-30), Sign::Minus, 10, Exec::Sequential).unwrap();
        let product: BigInt = res
            .records
            .iter()
            .map(|r| {
                let mut m = res.n.clone();
                let mut k = 0u32;
                while (&m % r.q).is_zero() {
                    m /= r.q;
                    k += 1;
                }
                BigInt::from(r.q).pow(k)
            })
            .product();
        match &res.unfactored {
            None => assert_eq!(product, res.n),
            Some(u) => assert_eq!(product * BigInt::from(u.value.clone()), res.n),
        }
        assert!(res.records.iter().all(|r| r.q % 11 == 1));
    }

    #[test]
    fn json_round_trip() {
        let res = scan(
            &ctx5(),
            &big(7),
            &big(-3),
            Sign::Minus,
            1000,
            Exec::Sequential,
        )
        .unwrap();
        for r in &res.records {
            let back = ScanRecord::from_json(&r.to_json()).unwrap();
            assert_eq!(back.to_json(), r.to_json());
        }
    }

    #[test]
    fn pair_enumeration() {
        let pairs = coprime_pairs(2);
        assert!(pairs.contains(&(1, -2)));
        assert!(!pairs.contains(&(2, -2)));
        assert_eq!(pairs.len(), 12);
    }

    #[test]
    fn quotient_is_positive() {
        for (x, y) in coprime_pairs(6) {
            for s in [Sign::Plus, Sign::Minus] {
                if let Ok(n) = scan_quotient(7, &big(x), &big(y), s) {
                    assert!(n.is_positive(), "x={x} y={y} {s:?}");
                }
            }
        }
    }
}
