use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BarlowAbelReport {
    pub p: u64,
    pub x: String,
    pub y: String,
    pub z: String,
    pub checks: Vec<RelationCheck>,
}

impl BarlowAbelReport {
    pub fn holds(&self, relation: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.relation == relation)
            .map(|c| c.holds)
    }
}

pub const REL_SUM_POWER: &str = "x+y is a p-th power";
pub const REL_P_ADJUSTED: &str = "x+z = p^(nu*p-1) * (p-th power)";
pub const REL_Y_DIV_P: &str = "y = 0 mod p";
pub const REL_COPRIME: &str = "x, y, z pairwise coprime";
pub const REL_FERMAT: &str = "x^p+y^p+z^p = 0";

/// The p-th root of n when n is a perfect p-th power (p odd).
fn exact_root(n: &BigInt, p: u32) -> Option<BigInt> {
    let r = n.nth_root(p);
    (r.pow(p) == *n).then_some(r)
}

fn check(relation: &str, holds: bool, detail: String) -> RelationCheck {
    RelationCheck {
        relation: relation.into(),
        holds,
        detail,
    }
}

/// Evaluates each Barlow–Abel relation exactly on (x, y, z).
pub fn barlow_abel_check(p: u64, x: &BigInt, y: &BigInt, z: &BigInt) -> BarlowAbelReport {
    let e = p as u32;
    let pb = BigInt::from(p);
    let mut checks = Vec::new();

    let s = x + y;
    checks.push(match exact_root(&s, e) {
        Some(r) => check(REL_SUM_POWER, true, format!("x+y = {s} = {r}^{p}")),
        None => check(
            REL_SUM_POWER,
            false,
            format!("x+y = {s} is not a {p}-th power"),
        ),
    });

    let t = x + z;
    let adjusted = if t.is_zero() {
        check(REL_P_ADJUSTED, false, "x+z = 0".into())
    } else {
        let mut v = 0u64;
        let mut rest = t.clone();
        while rest.is_multiple_of(&pb) {
            rest /= &pb;
            v += 1;
        }
        let root = exact_root(&rest, e);
        match root {
            Some(r) if v % p == p - 1 => {
                let nu = (v + 1) / p;
                check(REL_P_ADJUSTED, true, format!("x+z = {t} = {p}^{v} * {r}^{p}, nu = {nu}"))
            }
            _ => check(
                REL_P_ADJUSTED,
                false,
                format!("x+z = {t} = {p}^{v} * {rest}; need exponent = -1 mod {p} and a {p}-th power cofactor"),
            ),
        }
    };
    checks.push(adjusted);

    let y_div = y.is_multiple_of(&pb);
    checks.push(check(
        REL_Y_DIV_P,
        y_div,
        format!("y mod {p} = {}", y.mod_floor(&pb)),
    ));

    let pairs = [
        ("x", "y", x.gcd(y)),
        ("y", "z", y.gcd(z)),
        ("x", "z", x.gcd(z)),
    ];
    let bad: Vec<String> = pairs
        .iter()
        .filter(|(_, _, g)| !g.is_one())
        .map(|(a, b, g)| format!("gcd({a},{b}) = {g}"))
        .collect();
    checks.push(check(
        REL_COPRIME,
        bad.is_empty(),
        if bad.is_empty() {
            "all gcds are 1".into()
        } else {
            bad.join(", ")
        },
    ));

    let total = x.pow(e) + y.pow(e) + z.pow(e);
    checks.push(check(
        REL_FERMAT,
        total.is_zero(),
        format!("x^p+y^p+z^p = {total}"),
    ));

    BarlowAbelReport {
        p,
        x: x.to_string(),
        y: y.to_string(),
        z: z.to_string(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn sum_power_example() {
        let r = barlow_abel_check(5, &big(31), &big(1), &big(-32));
        assert_eq!(r.holds(REL_SUM_POWER), Some(true));
        assert!(r.checks[0].detail.contains("2^5"));
    }

    #[test]
    fn fermat_sum_example() {
        let r = barlow_abel_check(5, &big(2), &big(3), &big(-4));
        assert_eq!(r.holds(REL_FERMAT), Some(false));
        assert_eq!(r.holds(REL_COPRIME), Some(false));
        assert!(r.checks[3].detail.contains("gcd(x,z) = 2"));
        assert_eq!(r.holds(REL_Y_DIV_P), Some(false));
    }

    #[test]
    fn p_adjusted_example() {
        let r = barlow_abel_check(5, &big(623), &big(5), &big(2));
        assert_eq!(r.holds(REL_P_ADJUSTED), Some(true));
        assert!(r.checks[1].detail.contains("nu = 1"));
        assert_eq!(r.holds(REL_Y_DIV_P), Some(true));
        // 5^3·1 has the wrong p-adic valuation
        let r = barlow_abel_check(5, &big(123), &big(5), &big(2));
        assert_eq!(r.holds(REL_P_ADJUSTED), Some(false));
    }

    #[test]
    fn negative_roots_and_exact_zero() {
        let r = barlow_abel_check(3, &big(-9), &big(1), &big(9));
        assert_eq!(r.holds(REL_SUM_POWER), Some(true));
        assert_eq!(r.holds(REL_FERMAT), Some(false));
        let r = barlow_abel_check(3, &big(1), &big(-1), &big(0));
        assert_eq!(r.holds(REL_FERMAT), Some(true));
        assert_eq!(r.holds(REL_P_ADJUSTED), Some(false));
    }
}
