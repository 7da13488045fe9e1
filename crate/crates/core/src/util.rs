//! Small numeric helpers shared across modules.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Serialize a `BigUint` as a decimal string so JSON consumers never lose
/// precision.
pub mod big_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| de::Error::custom(format!("bad decimal integer `{s}`")))
    }
}

pub mod big_str_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(b) => s.serialize_some(&b.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigUint>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| {
            BigUint::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| de::Error::custom(format!("bad decimal integer `{s}`")))
        })
        .transpose()
    }
}

/// Base-2 logarithm of a positive big integer.
pub fn log2_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("finite");
    top.log2() + shift as f64
}

/// `log_n(value) - k`, the energy exponent; `None` for `n < 2`.
pub fn kappa(value: &BigUint, n: usize, k: u32) -> Option<f64> {
    if n < 2 || value.is_zero() {
        return None;
    }
    Some(log2_big(value) / (n as f64).log2() - k as f64)
}

pub fn pow_big(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Next float towards +inf (finite, non-NaN inputs).
pub fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

/// Upward-rounded arithmetic for bounds that must never be under-reported.
pub mod up {
    use super::next_up;

    pub fn sqrt(x: f64) -> f64 {
        next_up(x.sqrt())
    }

    pub fn pow(x: f64, e: f64) -> f64 {
        next_up(next_up(x.powf(e)))
    }

    pub fn add(a: f64, b: f64) -> f64 {
        next_up(a + b)
    }

    pub fn mul(a: f64, b: f64) -> f64 {
        next_up(a * b)
    }

    pub fn div(a: f64, b: f64) -> f64 {
        next_up(a / b)
    }
}

/// A nonnegative rational exponent such as `δ = 1/4`, parsed from `"1/4"`,
/// `"0.25"` or `"0.25e0"`-free decimals. Exact comparisons against powers of
/// integers use its numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    num: u64,
    den: u64,
}

const MAX_EXPONENT_DEN: u64 = 1_000_000;

impl Exponent {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("exponent denominator is zero"));
        }
        let g = gcd_u64(num, den).max(1);
        let (num, den) = (num / g, den / g);
        if den > MAX_EXPONENT_DEN {
            return Err(Error::invalid(format!(
                "exponent denominator {den} exceeds {MAX_EXPONENT_DEN}"
            )));
        }
        Ok(Exponent { num, den })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("bad exponent `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            return Exponent::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 6 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let frac_v: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_v))
            .ok_or_else(bad)?;
        Exponent::new(num, den)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// `value ≤ base^(k + e)` decided exactly: both sides raised to `e.den`.
pub fn le_power(value: &BigUint, base: u64, k: u64, e: Exponent) -> bool {
    let lhs = num_traits::pow(value.clone(), e.den as usize);
    let rhs = pow_big(base, k * e.den + e.num);
    lhs <= rhs
}

/// Smallest integer `m ≥ 1` with `m ≥ base^(e/2)`, computed exactly.
pub fn ceil_half_power(base: u64, e: Exponent) -> u64 {
    // m^(2·den) ≥ base^num
    let target = pow_big(base, e.num);
    let est = (base as f64).powf(e.to_f64() / 2.0).floor().max(1.0) as u64;
    let mut m = est.saturating_sub(1).max(1);
    while pow_big(m, 2 * e.den) < target {
        m += 1;
    }
    m
}
