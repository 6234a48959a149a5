//! Exact rationals and their p-adic reading.
//!
//! `Q` carries valuations, log-scale norms and points of `Q_p` (rationals
//! are dense in `Q_p`, and every point the operators need is rational).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = num_rational::BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parse `"a"`, `"-a"` or `"a/b"`.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let bad = || format!("not a rational: {s:?}");
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// p-adic valuation of an integer; `None` for zero.
pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (qq, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        m = qq;
        k += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn vp(x: &Q, p: u64) -> Option<i64> {
    Some(vp_int(x.numer(), p)? - vp_int(x.denom(), p).unwrap_or(0))
}

pub fn p_pow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// `p^k` as a rational, any sign of `k`.
pub fn p_pow_q(p: u64, k: i64) -> Q {
    if k >= 0 {
        Q::from_integer(p_pow(p, k as u32))
    } else {
        Q::new(BigInt::one(), p_pow(p, (-k) as u32))
    }
}

/// Image of a p-integral rational in `Z / p^k Z`, as a value in `[0, p^k)`.
/// Panics if `x` is not p-integral.
pub fn residue_mod_pk(x: &Q, p: u64, k: u32) -> BigInt {
    let m = p_pow(p, k);
    let den = x.denom().mod_floor(&m);
    let g = den.extended_gcd(&m);
    assert!(g.gcd.is_one(), "residue of a non-integral rational");
    (x.numer() * g.x).mod_floor(&m)
}

/// Write `x mod Z_p` as `j / p^l` with `0 <= j < p^l` and `l` minimal.
pub fn frac_part(x: &Q, p: u64) -> (u32, BigInt) {
    let v = vp(x, p).unwrap_or(0);
    if v >= 0 {
        return (0, BigInt::zero());
    }
    let l = (-v) as u32;
    let scaled = x * Q::from_integer(p_pow(p, l));
    (l, residue_mod_pk(&scaled, p, l))
}

/// Valuation or log-scale quantity that may be `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValuationQ {
    Finite(Q),
    Infinity,
}

impl ValuationQ {
    pub fn zero() -> Self {
        ValuationQ::Finite(Q::zero())
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            ValuationQ::Finite(v) => Some(v),
            ValuationQ::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ValuationQ::Infinity)
    }

    pub fn add(&self, other: &ValuationQ) -> ValuationQ {
        match (self, other) {
            (ValuationQ::Finite(a), ValuationQ::Finite(b)) => ValuationQ::Finite(a + b),
            _ => ValuationQ::Infinity,
        }
    }

    pub fn min(self, other: ValuationQ) -> ValuationQ {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl From<Q> for ValuationQ {
    fn from(v: Q) -> Self {
        ValuationQ::Finite(v)
    }
}

impl PartialOrd for ValuationQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValuationQ {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ValuationQ::Finite(a), ValuationQ::Finite(b)) => a.cmp(b),
            (ValuationQ::Finite(_), ValuationQ::Infinity) => Ordering::Less,
            (ValuationQ::Infinity, ValuationQ::Finite(_)) => Ordering::Greater,
            (ValuationQ::Infinity, ValuationQ::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ValuationQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationQ::Finite(v) => f.write_str(&fmt_q(v)),
            ValuationQ::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ValuationQ {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(ValuationQ::Infinity),
            other => parse_q(other).map(ValuationQ::Finite),
        }
    }
}

impl Serialize for ValuationQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ValuationQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// serde adapter storing a `Q` as an exact `"a/b"` string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// serde adapter for `Vec<Q>`.
pub mod serde_q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = xs.iter().map(fmt_q).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// serde adapter for `Option<Q>`; `None` is `null`.
pub mod serde_q_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(fmt_q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_q(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Certified enclosure of `log_p(x)` for a positive rational `x`.
///
/// Exact when `x` is an integral power of `p`; otherwise an f64 estimate
/// widened by a relative margin far above libm's error (<= 1 ulp on the
/// two logarithms plus one rounding for the quotient).
#[derive(Clone, Debug, PartialEq)]
pub enum LogBound {
    Exact(i64),
    Interval { lo: f64, hi: f64 },
}

impl LogBound {
    pub fn lo(&self) -> f64 {
        match self {
            LogBound::Exact(k) => *k as f64,
            LogBound::Interval { lo, .. } => *lo,
        }
    }

    pub fn hi(&self) -> f64 {
        match self {
            LogBound::Exact(k) => *k as f64,
            LogBound::Interval { hi, .. } => *hi,
        }
    }
}

pub fn log_p(x: &Q, p: u64) -> LogBound {
    assert!(x.is_positive(), "log of a non-positive rational");
    if let Some(k) = exact_p_power(x, p) {
        return LogBound::Exact(k);
    }
    let est = ln_q(x) / (p as f64).ln();
    let pad = 1e-12 * est.abs().max(1.0);
    LogBound::Interval {
        lo: est - pad,
        hi: est + pad,
    }
}

fn exact_p_power(x: &Q, p: u64) -> Option<i64> {
    let v = vp(x, p)?;
    let unit = x / p_pow_q(p, v);
    unit.is_one().then_some(v)
}

fn ln_q(x: &Q) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("finite").ln();
    }
    // keep the top 64 bits
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().expect("finite").ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Exact comparison of `x` with `p^t` for rationals `x > 0`, `t`.
pub fn cmp_p_power(x: &Q, p: u64, t: &Q) -> Ordering {
    // x vs p^(u/w)  <=>  x^w vs p^u   (w > 0)
    let u = t.numer();
    let w = t.denom().to_usize().expect("denominator of a modest size");
    let xn = num_traits::pow(x.numer().clone(), w);
    let xd = num_traits::pow(x.denom().clone(), w);
    let pu = |k: &BigInt| -> BigInt {
        BigInt::from(num_traits::pow(
            BigUint::from(p),
            k.to_usize().expect("modest exponent"),
        ))
    };
    if u.is_negative() {
        (xn * pu(&-u)).cmp(&xd)
    } else {
        xn.cmp(&(xd * pu(u)))
    }
}

/// Exact test of `x >= p^t`.
pub fn ge_p_power(x: &Q, p: u64, t: &Q) -> bool {
    cmp_p_power(x, p, t) != Ordering::Less
}
