//! q-analogs and the `β_p` valuation calculus.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::padic::{CycloElement, CyclotomicField, PadicError};
use crate::rational::{cmp_p_power, log_p, p_pow, qi, Q};
use crate::scalar::ResidueInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QcalcError {
    #[error("n = {n} outside [{lo}, {hi})")]
    OutOfRange { n: u64, lo: u64, hi: u64 },
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Polynomial in `q` with integer coefficients, constant term first and no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        QPolynomial::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `q^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        QPolynomial { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `q^k · self`
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        QPolynomial { coeffs: c }
    }

    pub fn eval_int(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval<I: ResidueInt>(&self, q: &CycloElement<I>) -> CycloElement<I> {
        let f = q.field();
        self.coeffs.iter().rev().fold(CycloElement::zero(f), |acc, c| {
            &(&acc * q) + &CycloElement::from_rational(f, &Q::from_integer(c.clone()))
        })
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(c)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{a}q^{i}")?,
            }
        }
        Ok(())
    }
}

/// Rows `C_q(m, 0..=min(m, kmax))` for `m = 0..=n`, via the q-Pascal rule
/// `C_q(m+1, j) = C_q(m, j) + q^(m+1-j) C_q(m, j-1)`.
pub fn q_binomial_rows(n: usize, kmax: usize) -> Vec<Vec<QPolynomial>> {
    let mut rows = Vec::with_capacity(n + 1);
    let mut row = vec![QPolynomial::one()];
    rows.push(row.clone());
    for m in 0..n {
        let width = (m + 1).min(kmax) + 1;
        let mut next = Vec::with_capacity(width);
        for j in 0..width {
            let keep = row.get(j).cloned().unwrap_or_default();
            let from = if j == 0 {
                QPolynomial::zero()
            } else {
                row[j - 1].shift(m + 1 - j)
            };
            next.push(&keep + &from);
        }
        row = next;
        rows.push(row.clone());
    }
    rows
}

/// Gaussian binomial `C_q(n, k)`; zero when `k > n`.
pub fn q_binomial_poly(n: usize, k: usize) -> QPolynomial {
    if k > n {
        return QPolynomial::zero();
    }
    let mut row = vec![QPolynomial::one()];
    for m in 0..n {
        let width = (m + 1).min(k) + 1;
        row = (0..width)
            .map(|j| {
                let keep = row.get(j).cloned().unwrap_or_default();
                if j == 0 {
                    keep
                } else {
                    &keep + &row[j - 1].shift(m + 1 - j)
                }
            })
            .collect();
    }
    row.swap_remove(k)
}

/// `(q; q)_n = Π_{i=1}^n (1 - q^i)` as a polynomial.
pub fn q_pochhammer_poly(n: usize) -> QPolynomial {
    (1..=n).fold(QPolynomial::one(), |acc, i| {
        &acc * &(&QPolynomial::one() - &QPolynomial::monomial(i))
    })
}

/// `(a; q)_n = Π_{i<n} (1 - a q^i)`.
pub fn q_pochhammer<I: ResidueInt>(
    a: &CycloElement<I>,
    q: &CycloElement<I>,
    n: u64,
) -> Result<CycloElement<I>, PadicError> {
    let f = a.field();
    let one = CycloElement::one(f);
    let mut acc = one.clone();
    let mut aq = a.clone();
    for _ in 0..n {
        acc = acc.try_mul(&one.try_sub(&aq)?)?;
        aq = aq.try_mul(q)?;
    }
    Ok(acc)
}

/// `⟨ζ, q⟩_k = (ζ - 1)(ζ - q) ... (ζ - q^(k-1))`, with `⟨ζ, q⟩_0 = 1`.
pub fn zq_coefficient<I: ResidueInt>(
    zeta: &CycloElement<I>,
    q: &CycloElement<I>,
    k: u64,
) -> Result<CycloElement<I>, PadicError> {
    Ok(zq_coefficients(zeta, q, k)?.pop().expect("k + 1 entries"))
}

/// `⟨ζ, q⟩_0 ..= ⟨ζ, q⟩_kmax` by running products.
pub fn zq_coefficients<I: ResidueInt>(
    zeta: &CycloElement<I>,
    q: &CycloElement<I>,
    kmax: u64,
) -> Result<Vec<CycloElement<I>>, PadicError> {
    let f = zeta.field();
    let mut out = Vec::with_capacity(kmax as usize + 1);
    let mut acc = CycloElement::one(f);
    let mut qi = CycloElement::one(f);
    out.push(acc.clone());
    for _ in 0..kmax {
        acc = acc.try_mul(&zeta.try_sub(&qi)?)?;
        qi = qi.try_mul(q)?;
        out.push(acc.clone());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaValue {
    pub p: u64,
    pub n: u64,
    pub value: u128,
}

/// `β_p(n) = Σ_k p^k (⌊n/p^k⌋ - ⌊n/p^(k+1)⌋)`.
pub fn beta(p: u64, n: u64) -> BetaValue {
    let (p128, mut pk, mut value) = (p as u128, 1u128, 0u128);
    let n128 = n as u128;
    while n128 / pk > 0 {
        value += pk * (n128 / pk - n128 / (pk * p128));
        pk *= p128;
    }
    BetaValue { p, n, value }
}

/// `λ = 1 / (p^(N-1) (p - 1))`
pub fn lambda(p: u64, level: u32) -> Q {
    Q::new(BigInt::one(), p_pow(p, level - 1) * (p - 1))
}

/// `λ β_p(n)`, the valuation of `(ζ; ζ)_n` for `1 <= n < p^N`.
pub fn poch_valuation_formula(p: u64, level: u32, n: u64) -> Result<Q, QcalcError> {
    let hi = p.pow(level);
    if n < 1 || n >= hi {
        return Err(QcalcError::OutOfRange { n, lo: 1, hi });
    }
    Ok(lambda(p, level) * Q::from_integer(BigInt::from(beta(p, n).value)))
}

/// Direct valuation of `(ζ; ζ)_n` in `K_N`, for comparison with the formula.
pub fn poch_valuation_direct<I: ResidueInt>(
    field: &Arc<CyclotomicField<I>>,
    n: u64,
) -> Result<Q, PadicError> {
    let z = CycloElement::zeta(field);
    q_pochhammer(&z, &z, n)?.valuation_checked()
}

/// Outcome of a certified inequality `β ≥ bound(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub p: u64,
    pub n: u64,
    pub beta: u128,
    /// Upper end of the enclosure of the (irrational) bound.
    pub bound_hi: f64,
    /// Certified lower bound on `β - bound`.
    pub slack_lo: f64,
    pub holds: bool,
    /// The interval test was inconclusive and the exact comparison decided.
    pub exact_fallback: bool,
}

/// `β_p(n) ≥ n log_p(n) (p-1)/p - n p/(p-1)`, certified.
pub fn check_beta_lower_bound(p: u64, n: u64) -> BoundCheck {
    let b = beta(p, n).value;
    let nf = n as f64;
    let pf = p as f64;
    let log = log_p(&qi(n as i64), p);
    let main = nf * log.hi() * (pf - 1.0) / pf;
    let corr = nf * pf / (pf - 1.0);
    let pad = 1e-12 * (main.abs() + corr.abs() + 1.0);
    let bound_hi = main - corr + pad;
    let slack_lo = b as f64 - bound_hi;
    if slack_lo >= 0.0 {
        return BoundCheck {
            p,
            n,
            beta: b,
            bound_hi,
            slack_lo,
            holds: true,
            exact_fallback: false,
        };
    }
    // log_p n <= (β + np/(p-1)) · p / (n(p-1))  <=>  n <= p^R
    let r = (Q::from_integer(BigInt::from(b)) + Q::new(BigInt::from(n * p), BigInt::from(p - 1)))
        * Q::new(BigInt::from(p), BigInt::from(n * (p - 1)));
    let holds = cmp_p_power(&qi(n as i64), p, &r) != std::cmp::Ordering::Greater;
    BoundCheck {
        p,
        n,
        beta: b,
        bound_hi,
        slack_lo,
        holds,
        exact_fallback: true,
    }
}

/// `β_p(n) ≥ n log_p(n) / 4` for `p^8 ≤ n < p^N`, certified.
pub fn check_corollary_bound(p: u64, level: u32, n: u64) -> Result<BoundCheck, QcalcError> {
    let lo = p.checked_pow(8).unwrap_or(u64::MAX);
    let hi = p.checked_pow(level).unwrap_or(u64::MAX);
    if n < lo || n >= hi {
        return Err(QcalcError::OutOfRange { n, lo, hi });
    }
    let b = beta(p, n).value;
    let log = log_p(&qi(n as i64), p);
    let main = n as f64 * log.hi() / 4.0;
    let bound_hi = main + 1e-12 * (main.abs() + 1.0);
    let slack_lo = b as f64 - bound_hi;
    if slack_lo >= 0.0 {
        return Ok(BoundCheck {
            p,
            n,
            beta: b,
            bound_hi,
            slack_lo,
            holds: true,
            exact_fallback: false,
        });
    }
    // p^(4β) ≥ n^n
    let lhs = num_traits::pow(BigInt::from(p), 4 * b as usize);
    let rhs = num_traits::pow(BigInt::from(n), n as usize);
    Ok(BoundCheck {
        p,
        n,
        beta: b,
        bound_hi,
        slack_lo,
        holds: lhs >= rhs,
        exact_fallback: true,
    })
}
