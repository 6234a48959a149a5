//! Growth modulus `G(r) = sup_n a_n r^n` of a norm profile
//! `a_n = ‖C(x, n)‖`, its regular and critical radii, and weighted Mahler
//! test norms. Everything is kept in `log_p` scale with exact rationals.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::mahler::CoeffSeries;
use crate::rational::{fmt_q, serde_q, serde_q_vec, ValuationQ, Q};
use crate::scalar::ResidueInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormError {
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("radius must satisfy log r {bound}, got {log_r}")]
    Radius { log_r: String, bound: &'static str },
    #[error("the tail bound could exceed the stored maximum{}", match .needed_length { Some(l) => format!("; about {l} stored terms are needed"), None => String::new() })]
    InconclusiveTail { needed_length: Option<usize> },
    #[error("coefficient series has no tail bound")]
    UnknownTail,
    #[error("{weights} weights for {coeffs} coefficients")]
    Weights { weights: usize, coeffs: usize },
}

/// `ℓ_0..ℓ_L` with `ℓ_n = log_p ‖C(x, n)‖`, and a bound `M_log` on every
/// `ℓ_n`, stored or not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormProfile {
    pub p: u64,
    #[serde(rename = "M_log", with = "serde_q")]
    pub m_log: Q,
    #[serde(with = "serde_q_vec")]
    pub ells: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum RegularityVerdict {
    Regular { n: usize },
    Critical { ties: Vec<usize> },
    Inconclusive { reason: String },
}

/// Stored maximum of `ℓ_n + n·log_r`, its argmax set and the tail bound
/// `M_log + (L+1)·log_r`.
struct Scan {
    max: Q,
    ties: Vec<usize>,
    tail: Q,
}

impl NormProfile {
    pub fn new(p: u64, m_log: Q, ells: Vec<Q>) -> Result<Self, NormError> {
        let prof = Self { p, m_log, ells };
        prof.validate()?;
        Ok(prof)
    }

    pub fn validate(&self) -> Result<(), NormError> {
        if self.ells.is_empty() {
            return Err(NormError::Profile("no stored terms".into()));
        }
        if let Some((n, l)) = self.ells.iter().enumerate().find(|(_, l)| **l > self.m_log) {
            return Err(NormError::Profile(format!(
                "ell_{n} = {} exceeds M_log = {}",
                fmt_q(l),
                fmt_q(&self.m_log)
            )));
        }
        Ok(())
    }

    /// The sup-norm profile: every `ℓ_n = 0`.
    pub fn sup_norm(p: u64, len: usize) -> Self {
        Self {
            p,
            m_log: Q::zero(),
            ells: vec![Q::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.ells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ells.is_empty()
    }

    fn scan(&self, log_r: &Q) -> Scan {
        let mut max: Option<Q> = None;
        let mut ties = Vec::new();
        for (n, l) in self.ells.iter().enumerate() {
            let v = l + log_r * Q::from_integer(BigInt::from(n));
            match &max {
                Some(m) if v < *m => {}
                Some(m) if v == *m => ties.push(n),
                _ => {
                    max = Some(v);
                    ties = vec![n];
                }
            }
        }
        let tail = &self.m_log + log_r * Q::from_integer(BigInt::from(self.ells.len()));
        Scan {
            max: max.expect("nonempty profile"),
            ties,
            tail,
        }
    }

    fn needed_length(&self, max: &Q, log_r: &Q) -> Option<usize> {
        if !log_r.is_negative() {
            return None;
        }
        // M_log + L·log_r <= max
        let l = ((&self.m_log - max) / -log_r).ceil().to_integer();
        l.try_into().ok()
    }
}

/// `log_p G(r) = max_n (ℓ_n + n·log_r)`, certified against the tail.
pub fn growth_modulus(profile: &NormProfile, log_r: &Q) -> Result<Q, NormError> {
    if log_r.is_positive() {
        return Err(NormError::Radius {
            log_r: fmt_q(log_r),
            bound: "<= 0",
        });
    }
    let s = profile.scan(log_r);
    if s.max >= s.tail {
        Ok(s.max)
    } else {
        Err(NormError::InconclusiveTail {
            needed_length: profile.needed_length(&s.max, log_r),
        })
    }
}

pub fn classify(profile: &NormProfile, log_r: &Q) -> RegularityVerdict {
    if !log_r.is_negative() {
        return RegularityVerdict::Inconclusive {
            reason: "radius must satisfy log r < 0".into(),
        };
    }
    let s = profile.scan(log_r);
    if s.ties.len() >= 2 && s.max >= s.tail {
        RegularityVerdict::Critical { ties: s.ties }
    } else if s.ties.len() == 1 && s.max > s.tail {
        RegularityVerdict::Regular { n: s.ties[0] }
    } else {
        RegularityVerdict::Inconclusive {
            reason: format!(
                "tail bound {} is not below the stored maximum {}",
                fmt_q(&s.tail),
                fmt_q(&s.max)
            ),
        }
    }
}

/// Critical radii in `(0, 1)`, as sorted `log_r` values. Complete wherever
/// the tail bound is certified.
pub fn critical_values(profile: &NormProfile) -> Vec<Q> {
    let mut candidates = BTreeSet::new();
    for (i, li) in profile.ells.iter().enumerate() {
        for (j, lj) in profile.ells.iter().enumerate().skip(i + 1) {
            let t = (li - lj) / Q::from_integer(BigInt::from(j - i));
            if t.is_negative() {
                candidates.insert(t);
            }
        }
    }
    candidates
        .into_iter()
        .filter(|t| matches!(classify(profile, t), RegularityVerdict::Critical { .. }))
        .collect()
}

/// `log_p ‖f‖_w = max_n (w_n − v(a_n))` for classical Mahler coefficients
/// `a_n` and log weights `w_n ≤ M_log`; `None` for the zero function.
pub fn weighted_norm<I: ResidueInt>(
    series: &CoeffSeries<I>,
    weights: &[Q],
    m_log: &Q,
) -> Result<Option<Q>, NormError> {
    if weights.len() < series.coeffs.len() {
        return Err(NormError::Weights {
            weights: weights.len(),
            coeffs: series.coeffs.len(),
        });
    }
    let tail = series.tail.as_ref().ok_or(NormError::UnknownTail)?;
    let stored = series
        .coeffs
        .iter()
        .zip(weights)
        .filter_map(|(a, w)| a.valuation().finite().map(|v| w - v))
        .max();
    let tail_bound = match tail {
        ValuationQ::Infinity => None,
        ValuationQ::Finite(t) => Some(m_log - t),
    };
    match (stored, tail_bound) {
        (s, None) => Ok(s),
        (Some(s), Some(t)) if s >= t => Ok(Some(s)),
        (_, Some(_)) => Err(NormError::InconclusiveTail { needed_length: None }),
    }
}
