//! Relative class number from h⁻ = 2p·∏_{χ odd} (−B_{1,χ}/2), with
//! B_{1,χ} = (1/p)·Σ_a χ(a)·a, evaluated in fixed-point complex arithmetic
//! with a tracked error bound.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{is_prime_u64, mul_mod, primitive_root};
use crate::error::{Error, Result};
use crate::par::Exec;

pub const MAX_PRECISION_BITS: u32 = 1 << 15;

const GUARD_BITS: u32 = 32;

/// One evaluation at a fixed working precision.
#[derive(Clone, Debug, Serialize)]
pub struct HMinusEval {
    pub p: u64,
    #[serde(serialize_with = "crate::bigjson::ser_bigint")]
    pub value: BigInt,
    pub bits: u32,
    /// log2 of the accumulated error bound on the unrounded value.
    pub log2_error: f64,
    /// log2 of the distance from the unrounded value to `value`.
    pub log2_distance: f64,
    pub certified: bool,
}

/// Upper bounds on magnitudes, stored as log2 (−∞ for zero).
#[derive(Clone, Copy, Debug)]
struct Bound(f64);

impl Bound {
    const ZERO: Bound = Bound(f64::NEG_INFINITY);

    fn ulps(n: f64, bits: u32) -> Bound {
        Bound(n.log2() - bits as f64)
    }

    fn add(self, o: Bound) -> Bound {
        let (hi, lo) = if self.0 >= o.0 {
            (self.0, o.0)
        } else {
            (o.0, self.0)
        };
        if hi == f64::NEG_INFINITY {
            return Bound::ZERO;
        }
        Bound(hi + (1.0 + (lo - hi).exp2()).log2() + 1e-12)
    }

    fn mul(self, o: Bound) -> Bound {
        Bound(self.0 + o.0)
    }

    fn scale(self, k: f64) -> Bound {
        Bound(self.0 + k.log2())
    }
}

/// log2 |x| / 2^bits, rounded up slightly.
fn log2_fixed(x: &BigInt, bits: u32) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let nb = x.bits();
    let shift = nb.saturating_sub(53);
    let top = (x.abs() >> shift).to_f64().expect("53-bit value");
    top.log2() + shift as f64 - bits as f64 + 1e-12
}

#[derive(Clone, Debug)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

impl Cx {
    fn mul(&self, o: &Cx, bits: u32) -> Cx {
        Cx {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits,
        }
    }

    /// Upper bound on |z|, from |z| ≤ √2·max(|re|, |im|).
    fn log2_abs(&self, bits: u32) -> Bound {
        let m = log2_fixed(&self.re, bits).max(log2_fixed(&self.im, bits));
        Bound(m + 0.5)
    }
}

fn atan_inv(x: u64, bits: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << bits) / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// π·2^bits, truncated.
fn pi_fixed(bits: u32) -> BigInt {
    (atan_inv(5, bits) * 16) - (atan_inv(239, bits) * 4)
}

/// (cos θ, sin θ)·2^bits for a fixed-point θ with |θ| ≤ π.
fn cos_sin(theta: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let t2 = (theta * theta) >> bits;
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term_c = BigInt::one() << bits;
    let mut term_s = theta.clone();
    let mut k = 0u64;
    while !term_c.is_zero() || !term_s.is_zero() {
        if k.is_multiple_of(2) {
            cos += &term_c;
            sin += &term_s;
        } else {
            cos -= &term_c;
            sin -= &term_s;
        }
        term_c = ((&term_c * &t2) >> bits) / BigInt::from((2 * k + 1) * (2 * k + 2));
        term_s = ((&term_s * &t2) >> bits) / BigInt::from((2 * k + 2) * (2 * k + 3));
        k += 1;
    }
    (cos, sin)
}

/// e^{2πi/n} at `bits` of precision, with an error bound of four ulps.
fn root_of_unity(n: u64, bits: u32) -> (Cx, Bound) {
    let wide = bits + GUARD_BITS;
    let theta = (pi_fixed(wide) * 2) / BigInt::from(n);
    let (c, s) = cos_sin(&theta, wide);
    let w = Cx {
        re: c >> GUARD_BITS,
        im: s >> GUARD_BITS,
    };
    (w, Bound::ulps(4.0, bits))
}

/// Discrete logarithms to base g: ind[a] for 1 ≤ a < p.
fn indices(p: u64, g: u64) -> Vec<u64> {
    let mut ind = vec![0u64; p as usize];
    let mut x = 1u64;
    for e in 0..p - 1 {
        ind[x as usize] = e;
        x = mul_mod(x, g, p);
    }
    ind
}

/// Heuristic f64 estimate of log2 h⁻, used to pick the starting precision.
fn estimate_log2(p: u64) -> f64 {
    let n = p - 1;
    let ind = indices(p, primitive_root(p));
    let mut total = 0.0;
    for j in (1..n).step_by(2) {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for a in 1..p {
            let ang = 2.0 * PI * ((j * ind[a as usize]) % n) as f64 / n as f64;
            re += a as f64 * ang.cos();
            im += a as f64 * ang.sin();
        }
        total += (re.hypot(im) / (2 * p) as f64).max(1e-300).log2();
    }
    total + ((2 * p) as f64).log2()
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Evaluates the analytic formula at `bits` fractional bits.
pub fn h_minus_at(p: u64, bits: u32, exec: Exec) -> Result<HMinusEval> {
    check_prime(p)?;
    let n = p - 1;
    let m = n / 2;
    let ind = indices(p, primitive_root(p));
    let (w, w_err) = root_of_unity(n, bits);
    let step = Bound::ulps(2.0, bits);

    let mut powers = Vec::with_capacity(n as usize);
    let mut errs = Vec::with_capacity(n as usize);
    powers.push(Cx {
        re: BigInt::one() << bits,
        im: BigInt::zero(),
    });
    errs.push(Bound::ZERO);
    for k in 1..n as usize {
        let prev = &powers[k - 1];
        let e_prev = errs[k - 1];
        // |w̃^{k-1}| ≤ 1 + e_prev
        let size = Bound(0.0).add(e_prev);
        errs.push(e_prev.add(size.mul(w_err)).add(step));
        powers.push(prev.mul(&w, bits));
    }
    let worst = errs
        .iter()
        .fold(Bound::ZERO, |acc, e| if e.0 > acc.0 { *e } else { acc });
    // S_j is an integer combination with Σ a = p(p−1)/2
    let sum_err = worst.scale((p * (p - 1) / 2) as f64);

    // pair χ^j with χ^{n−j}: S_j·S_{n−j} = |S_j|²
    let paired: Vec<u64> = (1..m).step_by(2).collect();
    let factors = exec.map(&paired, |&j| {
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        for a in 1..p {
            let z = &powers[((j * ind[a as usize]) % n) as usize];
            re += &z.re * a;
            im += &z.im * a;
        }
        let s = Cx { re, im };
        let size = s.log2_abs(bits);
        let sq = (&s.re * &s.re + &s.im * &s.im) >> bits;
        let err = sum_err
            .mul(size.scale(2.0).add(sum_err))
            .add(Bound::ulps(1.0, bits));
        (sq, err)
    });

    let one = BigInt::one() << bits;
    let mut prod = one;
    let mut prod_err = Bound::ZERO;
    for (f, f_err) in factors {
        let size_p = Bound(log2_fixed(&prod, bits));
        let size_f = Bound(log2_fixed(&f, bits));
        prod_err = size_p
            .mul(f_err)
            .add(size_f.mul(prod_err))
            .add(prod_err.mul(f_err))
            .add(Bound::ulps(1.0, bits));
        prod = (&prod * &f) >> bits;
    }
    if m % 2 == 1 {
        // the quadratic character is the unique real odd character
        let s: BigInt = (1..p)
            .map(|a| {
                if ind[a as usize].is_multiple_of(2) {
                    BigInt::from(a)
                } else {
                    -BigInt::from(a)
                }
            })
            .sum();
        prod_err = prod_err.scale(s.abs().to_f64().unwrap_or(f64::MAX).max(1.0));
        prod *= s;
    }

    // h = 2p·(−1)^m·P / (2p)^m
    let two_p = BigInt::from(2 * p);
    let mut num = prod * &two_p;
    if m % 2 == 1 {
        num = -num;
    }
    let den: BigInt = num_traits::pow(two_p, m as usize) << bits;
    let twice = &num * 2u32 + &den;
    let value = twice.div_floor(&(&den * 2u32));
    let dist = (&num - &value * &den).abs();
    let log2_distance = if dist.is_zero() {
        f64::NEG_INFINITY
    } else {
        log2_fixed(&dist, 0) - log2_fixed(&den, 0)
    };
    let log2_error = prod_err.0 + ((2 * p) as f64).log2() * (1.0 - m as f64);
    let certified = log2_error < -2.0 && log2_distance <= log2_error && value.is_positive();
    Ok(HMinusEval {
        p,
        value,
        bits,
        log2_error,
        log2_distance,
        certified,
    })
}

/// Adaptive evaluation: starts from an estimated precision and doubles until
/// the error bound certifies the rounding.
pub fn h_minus_eval(p: u64, exec: Exec) -> Result<HMinusEval> {
    check_prime(p)?;
    let need = estimate_log2(p).max(0.0) + 2.0 * (p as f64).log2() + 24.0;
    let mut bits = (((need / 32.0).ceil() as u32) * 32).max(64);
    loop {
        let eval = h_minus_at(p, bits, exec)?;
        if eval.certified {
            return Ok(eval);
        }
        if bits >= MAX_PRECISION_BITS {
            return Err(Error::PrecisionExhausted(bits));
        }
        bits = (bits * 2).min(MAX_PRECISION_BITS);
    }
}

pub fn h_minus(p: u64) -> Result<BigInt> {
    Ok(h_minus_eval(p, Exec::default())?.value)
}
