use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::rational::{p_pow, p_pow_q, residue_mod_pk, vp, vp_int, Q, ValuationQ};

/// An element `p^v · u` of `Q_p`, `u` a unit known modulo `p^(prec - v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    p: u64,
    valuation: Option<i64>,
    unit: BigInt,
    /// Absolute precision in p-digits; `None` for exact values.
    precision: Option<i64>,
}

impl PadicScalar {
    /// `p^shift · c` known modulo `p^precision`.
    pub fn from_parts(p: u64, shift: i64, c: &BigInt, precision: Option<i64>) -> Self {
        let zero = PadicScalar {
            p,
            valuation: None,
            unit: BigInt::zero(),
            precision,
        };
        let Some(k) = vp_int(c, p) else {
            return zero;
        };
        let v = shift + k;
        let unit = c / p_pow(p, k as u32);
        match precision {
            Some(pr) if v >= pr => zero,
            Some(pr) => PadicScalar {
                p,
                valuation: Some(v),
                unit: unit.mod_floor(&p_pow(p, (pr - v) as u32)),
                precision,
            },
            None => PadicScalar {
                p,
                valuation: Some(v),
                unit,
                precision,
            },
        }
    }

    /// A rational number reduced to `digits` significant p-digits.
    pub fn from_rational(p: u64, x: &Q, digits: u32) -> Self {
        let Some(v) = vp(x, p) else {
            return PadicScalar {
                p,
                valuation: None,
                unit: BigInt::zero(),
                precision: None,
            };
        };
        let unit = residue_mod_pk(&(x / p_pow_q(p, v)), p, digits);
        PadicScalar {
            p,
            valuation: Some(v),
            unit,
            precision: Some(v + digits as i64),
        }
    }

    /// `p^v · Σ d_i p^i` from base-p digits, least significant first.
    pub fn from_digits(p: u64, valuation: i64, digits: &[u32], exact: bool) -> Self {
        let mut unit = BigInt::zero();
        for d in digits.iter().rev() {
            unit = unit * p + d;
        }
        Self::from_parts(
            p,
            valuation,
            &unit,
            (!exact).then_some(valuation + digits.len() as i64),
        )
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> ValuationQ {
        match self.valuation {
            Some(v) => ValuationQ::Finite(Q::from_integer(v.into())),
            None => ValuationQ::Infinity,
        }
    }

    pub fn valuation_int(&self) -> Option<i64> {
        self.valuation
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// Base-p digits of the unit, least significant first. Exact values
    /// list every digit; others list exactly `precision - valuation` digits.
    pub fn digits(&self) -> Vec<u32> {
        let Some(v) = self.valuation else {
            return Vec::new();
        };
        let count = self.precision.map(|pr| (pr - v) as usize);
        let pb = BigInt::from(self.p);
        let mut out = Vec::new();
        let mut u = self.unit.clone();
        while !u.is_zero() || count.is_some_and(|c| out.len() < c) {
            if count.is_some_and(|c| out.len() >= c) {
                break;
            }
            let (q, r) = u.div_mod_floor(&pb);
            out.push(r.to_u32().expect("digit below p"));
            u = q;
        }
        out
    }

    /// The exact rational `p^v · u` (the chosen representative).
    pub fn to_rational(&self) -> Q {
        match self.valuation {
            Some(v) => Q::from_integer(self.unit.clone()) * p_pow_q(self.p, v),
            None => Q::zero(),
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            None => write!(f, "0")?,
            Some(0) => write!(f, "{}", self.unit)?,
            Some(v) => write!(f, "{}^{}*{}", self.p, v, self.unit)?,
        }
        if let Some(pr) = self.precision {
            write!(f, " + O({}^{})", self.p, pr)?;
        }
        Ok(())
    }
}
