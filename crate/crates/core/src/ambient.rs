//! Ambient groups and their elements.
//!
//! Four ambients are supported: the integers (standing in for the reals, with
//! exact arithmetic), `Z/NZ`, a prime field `F_p`, and the plane `(Z/pZ)^2`.
//! Elements are stored canonically: residues live in `[0, N)`, plane points
//! are pairs of residues. Integer compositions are checked; anything that
//! does not fit in an `i64` is rejected with
//! [`Error::OverflowBudgetExceeded`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mod_pow(mut base: i64, mut exp: u64, m: i64) -> i64 {
    let m128 = m as i128;
    let mut acc: i128 = 1 % m128;
    let mut b = (base.rem_euclid(m)) as i128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as i64;
    base
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as i64)
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The group (or field) a set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmbientSpec {
    Integers,
    IntegersMod(i64),
    PrimeField(i64),
    PrimeSquarePlane(i64),
}

impl AmbientSpec {
    pub fn integers_mod(n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("modulus N must be >= 2, got {n}")));
        }
        Ok(AmbientSpec::IntegersMod(n))
    }

    pub fn prime_field(p: i64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(AmbientSpec::PrimeField(p))
    }

    pub fn prime_square_plane(p: i64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(AmbientSpec::PrimeSquarePlane(p))
    }

    fn check_prime(p: i64) -> Result<()> {
        if p < 2 || !is_prime(p as u64) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            AmbientSpec::Integers => "integers",
            AmbientSpec::IntegersMod(_) => "integers-mod-N",
            AmbientSpec::PrimeField(_) => "prime-field",
            AmbientSpec::PrimeSquarePlane(_) => "prime-square-plane",
        }
    }

    /// Modulus of the ambient, `None` for the integers.
    pub fn modulus(&self) -> Option<i64> {
        match *self {
            AmbientSpec::Integers => None,
            AmbientSpec::IntegersMod(n) | AmbientSpec::PrimeField(n) => Some(n),
            AmbientSpec::PrimeSquarePlane(p) => Some(p),
        }
    }

    /// Number of group elements, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        match *self {
            AmbientSpec::Integers => None,
            AmbientSpec::IntegersMod(n) | AmbientSpec::PrimeField(n) => Some(n as u64),
            AmbientSpec::PrimeSquarePlane(p) => Some((p as u64) * (p as u64)),
        }
    }

    pub fn supports(&self, mode: CompositionMode) -> bool {
        match mode {
            CompositionMode::Difference | CompositionMode::Sum => true,
            CompositionMode::Product | CompositionMode::Ratio => matches!(
                self,
                AmbientSpec::Integers | AmbientSpec::PrimeField(_)
            ),
        }
    }

    pub fn require(&self, mode: CompositionMode) -> Result<()> {
        if self.supports(mode) {
            Ok(())
        } else {
            Err(Error::UnsupportedMode {
                mode: mode.to_string(),
                ambient: self.to_string(),
            })
        }
    }

    /// True when the additive group has an element of order two.
    pub fn has_two_torsion(&self) -> bool {
        match *self {
            AmbientSpec::Integers => false,
            AmbientSpec::IntegersMod(n) => n % 2 == 0,
            AmbientSpec::PrimeField(p) | AmbientSpec::PrimeSquarePlane(p) => p == 2,
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            AmbientSpec::PrimeSquarePlane(_) => Element::Pair(0, 0),
            _ => Element::Int(0),
        }
    }

    pub fn check(&self, e: Element) -> Result<()> {
        let ok = match (*self, e) {
            (AmbientSpec::Integers, Element::Int(_)) => true,
            (AmbientSpec::IntegersMod(n), Element::Int(x))
            | (AmbientSpec::PrimeField(n), Element::Int(x)) => (0..n).contains(&x),
            (AmbientSpec::PrimeSquarePlane(p), Element::Pair(x, y)) => {
                (0..p).contains(&x) && (0..p).contains(&y)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NonCanonicalElement {
                element: e.to_string(),
                ambient: self.to_string(),
            })
        }
    }

    /// Reduce an integer into the ambient (plane excluded).
    pub fn reduce(&self, x: i64) -> Result<Element> {
        match *self {
            AmbientSpec::Integers => Ok(Element::Int(x)),
            AmbientSpec::IntegersMod(n) | AmbientSpec::PrimeField(n) => {
                Ok(Element::Int(x.rem_euclid(n)))
            }
            AmbientSpec::PrimeSquarePlane(_) => Err(Error::invalid(
                "scalar reduction is not defined for the plane",
            )),
        }
    }

    pub fn add(&self, x: Element, y: Element) -> Result<Element> {
        match (*self, x, y) {
            (AmbientSpec::Integers, Element::Int(a), Element::Int(b)) => a
                .checked_add(b)
                .map(Element::Int)
                .ok_or_else(|| Error::overflow(format!("{a} + {b}"))),
            (AmbientSpec::IntegersMod(n), Element::Int(a), Element::Int(b))
            | (AmbientSpec::PrimeField(n), Element::Int(a), Element::Int(b)) => {
                Ok(Element::Int(((a as i128 + b as i128) % n as i128) as i64))
            }
            (AmbientSpec::PrimeSquarePlane(p), Element::Pair(a, b), Element::Pair(c, d)) => {
                let m = p as i128;
                Ok(Element::Pair(
                    ((a as i128 + c as i128) % m) as i64,
                    ((b as i128 + d as i128) % m) as i64,
                ))
            }
            _ => Err(self.shape_error(x, y)),
        }
    }

    pub fn neg(&self, x: Element) -> Result<Element> {
        match (*self, x) {
            (AmbientSpec::Integers, Element::Int(a)) => a
                .checked_neg()
                .map(Element::Int)
                .ok_or_else(|| Error::overflow(format!("-({a})"))),
            (AmbientSpec::IntegersMod(n), Element::Int(a))
            | (AmbientSpec::PrimeField(n), Element::Int(a)) => {
                Ok(Element::Int(if a == 0 { 0 } else { n - a }))
            }
            (AmbientSpec::PrimeSquarePlane(p), Element::Pair(a, b)) => Ok(Element::Pair(
                if a == 0 { 0 } else { p - a },
                if b == 0 { 0 } else { p - b },
            )),
            _ => Err(self.shape_error(x, x)),
        }
    }

    pub fn sub(&self, x: Element, y: Element) -> Result<Element> {
        match (*self, x, y) {
            (AmbientSpec::Integers, Element::Int(a), Element::Int(b)) => a
                .checked_sub(b)
                .map(Element::Int)
                .ok_or_else(|| Error::overflow(format!("{a} - {b}"))),
            _ => self.add(x, self.neg(y)?),
        }
    }

    pub fn mul(&self, x: Element, y: Element) -> Result<Element> {
        match (*self, x, y) {
            (AmbientSpec::Integers, Element::Int(a), Element::Int(b)) => a
                .checked_mul(b)
                .map(Element::Int)
                .ok_or_else(|| Error::overflow(format!("{a} * {b}"))),
            (AmbientSpec::PrimeField(p), Element::Int(a), Element::Int(b)) => {
                Ok(Element::Int(((a as i128 * b as i128) % p as i128) as i64))
            }
            _ => Err(Error::UnsupportedMode {
                mode: "product".into(),
                ambient: self.to_string(),
            }),
        }
    }

    /// `x / y` as a histogram value: a reduced fraction over the integers,
    /// a field element over `F_p`.
    pub fn div(&self, x: Element, y: Element) -> Result<Value> {
        match (*self, x, y) {
            (AmbientSpec::Integers, Element::Int(a), Element::Int(b)) => {
                Fraction::new(a, b).map(Value::Ratio)
            }
            (AmbientSpec::PrimeField(p), Element::Int(a), Element::Int(b)) => {
                let inv = mod_inverse(b, p).ok_or_else(|| Error::DivisionByZero(y.to_string()))?;
                Ok(Value::Elem(Element::Int(
                    ((a as i128 * inv as i128) % p as i128) as i64,
                )))
            }
            _ => Err(Error::UnsupportedMode {
                mode: "ratio".into(),
                ambient: self.to_string(),
            }),
        }
    }

    /// Scale by an integer (or field element) scalar.
    pub fn scale(&self, s: i64, x: Element) -> Result<Element> {
        match (*self, x) {
            (AmbientSpec::Integers, Element::Int(a)) => a
                .checked_mul(s)
                .map(Element::Int)
                .ok_or_else(|| Error::overflow(format!("{s} * {a}"))),
            (AmbientSpec::IntegersMod(n), Element::Int(a))
            | (AmbientSpec::PrimeField(n), Element::Int(a)) => Ok(Element::Int(
                ((a as i128 * s as i128).rem_euclid(n as i128)) as i64,
            )),
            (AmbientSpec::PrimeSquarePlane(p), Element::Pair(a, b)) => {
                let m = p as i128;
                Ok(Element::Pair(
                    ((a as i128 * s as i128).rem_euclid(m)) as i64,
                    ((b as i128 * s as i128).rem_euclid(m)) as i64,
                ))
            }
            _ => Err(self.shape_error(x, x)),
        }
    }

    /// The value exempt from multiplicity bounds for `mode`, if any.
    pub fn identity_value(&self, mode: CompositionMode) -> Option<Value> {
        match mode {
            CompositionMode::Difference => Some(Value::Elem(self.zero())),
            CompositionMode::Sum => None,
            CompositionMode::Product => Some(Value::Elem(Element::Int(1))),
            CompositionMode::Ratio => Some(match self {
                AmbientSpec::Integers => Value::Ratio(Fraction { num: 1, den: 1 }),
                _ => Value::Elem(Element::Int(1)),
            }),
        }
    }

    fn shape_error(&self, x: Element, y: Element) -> Error {
        Error::NonCanonicalElement {
            element: format!("{x} / {y}"),
            ambient: self.to_string(),
        }
    }
}

impl fmt::Display for AmbientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbientSpec::Integers => write!(f, "integers"),
            AmbientSpec::IntegersMod(n) => write!(f, "integers-mod-N N={n}"),
            AmbientSpec::PrimeField(p) => write!(f, "prime-field p={p}"),
            AmbientSpec::PrimeSquarePlane(p) => write!(f, "prime-square-plane p={p}"),
        }
    }
}

impl FromStr for AmbientSpec {
    type Err = Error;

    /// Parses the text-header form, e.g. `prime-field p=13`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let kind = parts.next().unwrap_or("");
        let param = |name: &str, rest: Option<&str>| -> Result<i64> {
            let tok = rest.ok_or_else(|| Error::invalid(format!("{kind} needs {name}=<int>")))?;
            let v = tok
                .strip_prefix(&format!("{name}="))
                .ok_or_else(|| Error::invalid(format!("expected {name}=<int>, got `{tok}`")))?;
            v.parse::<i64>()
                .map_err(|_| Error::invalid(format!("bad integer `{v}`")))
        };
        let ambient = match kind {
            "integers" => AmbientSpec::Integers,
            "integers-mod-N" => AmbientSpec::integers_mod(param("N", parts.next())?)?,
            "prime-field" => AmbientSpec::prime_field(param("p", parts.next())?)?,
            "prime-square-plane" => AmbientSpec::prime_square_plane(param("p", parts.next())?)?,
            other => return Err(Error::invalid(format!("unknown ambient kind `{other}`"))),
        };
        if let Some(extra) = parts.next() {
            return Err(Error::invalid(format!("unexpected token `{extra}`")));
        }
        Ok(ambient)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AmbientRepr {
    kind: String,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<i64>,
}

impl Serialize for AmbientSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match *self {
            AmbientSpec::Integers => AmbientRepr { kind: "integers".into(), n: None, p: None },
            AmbientSpec::IntegersMod(n) => AmbientRepr {
                kind: "integers-mod-N".into(),
                n: Some(n),
                p: None,
            },
            AmbientSpec::PrimeField(p) => AmbientRepr {
                kind: "prime-field".into(),
                n: None,
                p: Some(p),
            },
            AmbientSpec::PrimeSquarePlane(p) => AmbientRepr {
                kind: "prime-square-plane".into(),
                n: None,
                p: Some(p),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AmbientSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = AmbientRepr::deserialize(d)?;
        let need = |v: Option<i64>, name: &str| {
            v.ok_or_else(|| de::Error::custom(format!("{} requires `{name}`", repr.kind)))
        };
        let res = match repr.kind.as_str() {
            "integers" => Ok(AmbientSpec::Integers),
            "integers-mod-N" => AmbientSpec::integers_mod(need(repr.n, "N")?),
            "prime-field" => AmbientSpec::prime_field(need(repr.p, "p")?),
            "prime-square-plane" => AmbientSpec::prime_square_plane(need(repr.p, "p")?),
            other => return Err(de::Error::custom(format!("unknown ambient kind `{other}`"))),
        };
        res.map_err(de::Error::custom)
    }
}

/// Binary composition used to build sumsets and representation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositionMode {
    Difference,
    Sum,
    Product,
    Ratio,
}

impl fmt::Display for CompositionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompositionMode::Difference => "difference",
            CompositionMode::Sum => "sum",
            CompositionMode::Product => "product",
            CompositionMode::Ratio => "ratio",
        })
    }
}

impl FromStr for CompositionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "difference" | "diff" | "sub" => Ok(CompositionMode::Difference),
            "sum" | "add" => Ok(CompositionMode::Sum),
            "product" | "prod" | "mul" => Ok(CompositionMode::Product),
            "ratio" | "div" => Ok(CompositionMode::Ratio),
            other => Err(Error::invalid(format!("unknown mode `{other}`"))),
        }
    }
}

/// A canonical element of an ambient group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Int(i64),
    Pair(i64, i64),
}

impl Element {
    pub fn as_int(&self) -> Option<i64> {
        match *self {
            Element::Int(x) => Some(x),
            Element::Pair(..) => None,
        }
    }
}

impl From<i64> for Element {
    fn from(x: i64) -> Self {
        Element::Int(x)
    }
}

impl From<(i64, i64)> for Element {
    fn from((x, y): (i64, i64)) -> Self {
        Element::Pair(x, y)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(x) => write!(f, "{x}"),
            Element::Pair(x, y) => write!(f, "({x},{y})"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Element::Int(x) => s.serialize_i64(x),
            Element::Pair(x, y) => [x, y].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Pair([i64; 2]),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Int(x) => Element::Int(x),
            Repr::Pair([x, y]) => Element::Pair(x, y),
        })
    }
}

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero(format!("{num}/0")));
        }
        let g = gcd(num, den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = n.checked_neg().ok_or_else(|| Error::overflow("fraction sign"))?;
            d = d.checked_neg().ok_or_else(|| Error::overflow("fraction sign"))?;
        }
        Ok(Fraction { num: n, den: d })
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::invalid(format!("bad fraction `{s}`")))
        };
        Fraction::new(parse(n)?, parse(d)?)
    }
}

/// A composed value: an element, or a reduced fraction for integer ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Elem(Element),
    Ratio(Fraction),
}

impl Value {
    pub fn as_element(&self) -> Option<Element> {
        match *self {
            Value::Elem(e) => Some(e),
            Value::Ratio(_) => None,
        }
    }
}

impl From<Element> for Value {
    fn from(e: Element) -> Self {
        Value::Elem(e)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Elem(e) => e.fmt(f),
            Value::Ratio(r) => r.fmt(f),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Elem(e) => e.serialize(s),
            Value::Ratio(r) => s.serialize_str(&r.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Elem(Element),
            Ratio(String),
        }
        match Repr::deserialize(d)? {
            Repr::Elem(e) => Ok(Value::Elem(e)),
            Repr::Ratio(s) => s.parse().map(Value::Ratio).map_err(de::Error::custom),
        }
    }
}

/// `x ∘ y` in `ambient`.
pub fn compose(ambient: &AmbientSpec, mode: CompositionMode, x: Element, y: Element) -> Result<Value> {
    ambient.require(mode)?;
    match mode {
        CompositionMode::Difference => ambient.sub(x, y).map(Value::Elem),
        CompositionMode::Sum => ambient.add(x, y).map(Value::Elem),
        CompositionMode::Product => ambient.mul(x, y).map(Value::Elem),
        CompositionMode::Ratio => ambient.div(x, y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_examples() {
        let z = AmbientSpec::Integers;
        assert_eq!(
            compose(&z, CompositionMode::Difference, 7.into(), 3.into()).unwrap(),
            Value::Elem(4.into())
        );
        let f13 = AmbientSpec::prime_field(13).unwrap();
        assert_eq!(
            compose(&f13, CompositionMode::Product, 5.into(), 8.into()).unwrap(),
            Value::Elem(1.into())
        );
        let plane = AmbientSpec::prime_square_plane(5).unwrap();
        assert_eq!(
            compose(&plane, CompositionMode::Sum, (4, 3).into(), (2, 4).into()).unwrap(),
            Value::Elem((1, 2).into())
        );
    }

    #[test]
    fn unsupported_and_zero_division() {
        let plane = AmbientSpec::prime_square_plane(5).unwrap();
        assert!(matches!(
            compose(&plane, CompositionMode::Product, (1, 1).into(), (1, 1).into()),
            Err(Error::UnsupportedMode { .. })
        ));
        let zn = AmbientSpec::integers_mod(12).unwrap();
        assert!(compose(&zn, CompositionMode::Ratio, 1.into(), 5.into()).is_err());
        let f7 = AmbientSpec::prime_field(7).unwrap();
        assert!(matches!(
            compose(&f7, CompositionMode::Ratio, 3.into(), 0.into()),
            Err(Error::DivisionByZero(_))
        ));
        assert!(matches!(
            compose(&AmbientSpec::Integers, CompositionMode::Ratio, 3.into(), 0.into()),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn integer_overflow_is_rejected() {
        let z = AmbientSpec::Integers;
        let r = compose(&z, CompositionMode::Product, i64::MAX.into(), 2.into());
        assert!(matches!(r, Err(Error::OverflowBudgetExceeded(_))));
        let r = compose(&z, CompositionMode::Difference, i64::MIN.into(), 1.into());
        assert!(matches!(r, Err(Error::OverflowBudgetExceeded(_))));
    }

    #[test]
    fn fractions_are_reduced_and_sign_normalized() {
        let f = Fraction::new(6, -4).unwrap();
        assert_eq!((f.numer(), f.denom()), (-3, 2));
        assert_eq!("-3/2".parse::<Fraction>().unwrap(), f);
        assert!(Fraction::new(1, 3).unwrap() < Fraction::new(1, 2).unwrap());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(AmbientSpec::prime_field(15).is_err());
        assert!(AmbientSpec::integers_mod(1).is_err());
    }

    #[test]
    fn ambient_text_and_json_forms() {
        let a: AmbientSpec = "prime-field p=13".parse().unwrap();
        assert_eq!(a, AmbientSpec::PrimeField(13));
        assert_eq!(a.to_string().parse::<AmbientSpec>().unwrap(), a);
        let json = serde_json::to_string(&AmbientSpec::IntegersMod(12)).unwrap();
        assert_eq!(json, r#"{"kind":"integers-mod-N","N":12}"#);
        let back: AmbientSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, AmbientSpec::IntegersMod(12));
        assert!(serde_json::from_str::<AmbientSpec>(r#"{"kind":"prime-field","p":12}"#).is_err());
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(4, 8), None);
        assert_eq!(mod_pow(5, 3, 31), 1);
    }
}
