//! Mahler and q-Mahler expansions of functions on `Z_p`.
//!
//! Every supported function is a finite sum `Σ g_i(x) b_i^x` with `g_i`
//! periodic modulo `p^{L_i}` and `b_i` a unit. The operator
//! `T f(x) = (f(x+1) - f(x)) / q^x` maps such a term to another one,
//! `g'(x) (b/q)^x` with `g'(r) = g(r+1) b - g(r)`, so coefficients
//! `a_k = q^{C(k,2)} (T^k f)(0)` are computed exactly, and `‖T^k f‖` is read
//! off the tables, which bounds every later coefficient.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::padic::json::element_to_json;
use crate::padic::{CycloElement, CyclotomicField, PadicError};
use crate::rational::ValuationQ;
use crate::scalar::ResidueInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MahlerError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("base {0} does not satisfy v(b - 1) > 0")]
    NotContinuous(String),
    #[error("q must satisfy v(q - 1) > 0")]
    BadQ,
    #[error("tail of the coefficient series is unknown")]
    UnknownTail,
    #[error("tail bound {tail} does not dominate the stored minimum {stored}")]
    TailInsufficient { tail: String, stored: String },
    #[error("table of level {level} needs {expected} entries, got {got}")]
    TableSize { level: u32, expected: usize, got: usize },
}

/// `x ↦ g(x mod p^L) · b^x`.
#[derive(Clone, Debug)]
pub struct TwistedTerm<I: ResidueInt> {
    pub level: u32,
    pub table: Vec<CycloElement<I>>,
    pub base: CycloElement<I>,
}

#[derive(Clone, Debug)]
pub enum FunctionModel<I: ResidueInt> {
    /// `f(x) = table[x mod p^L]`
    LocallyConstant {
        level: u32,
        table: Vec<CycloElement<I>>,
    },
    /// `coeff · base^x`
    Exponential {
        coeff: CycloElement<I>,
        base: CycloElement<I>,
    },
    /// `Σ λ_n · ζ_n^x`
    ExponentialSum(Vec<(CycloElement<I>, CycloElement<I>)>),
    /// `Σ a_k C_q(x, k)`
    FiniteCoeffs(CoeffSeries<I>),
    /// `Σ g_i(x) b_i^x`, the form produced by [`apply_t`].
    Twisted(Vec<TwistedTerm<I>>),
}

/// Truncated (q-)Mahler coefficients `a_0..a_K` and a certified lower bound
/// on `v(a_k)` for `k > K` (`Infinity`: the series is finite; `None`: no
/// bound known).
#[derive(Clone, Debug)]
pub struct CoeffSeries<I: ResidueInt> {
    pub q: CycloElement<I>,
    pub coeffs: Vec<CycloElement<I>>,
    pub tail: Option<ValuationQ>,
}

impl<I: ResidueInt> FunctionModel<I> {
    pub fn constant(c: CycloElement<I>) -> Self {
        FunctionModel::LocallyConstant {
            level: 0,
            table: vec![c],
        }
    }

    /// `b^x`
    pub fn exponential(base: CycloElement<I>) -> Self {
        FunctionModel::Exponential {
            coeff: CycloElement::one(base.field()),
            base,
        }
    }

    /// Locally constant function with a checked table size.
    pub fn locally_constant(
        field: &Arc<CyclotomicField<I>>,
        level: u32,
        table: Vec<CycloElement<I>>,
    ) -> Result<Self, MahlerError> {
        let expected = field.p().pow(level) as usize;
        if table.len() != expected {
            return Err(MahlerError::TableSize {
                level,
                expected,
                got: table.len(),
            });
        }
        Ok(FunctionModel::LocallyConstant { level, table })
    }

    /// Exponential sum from `(coefficient, base)` pairs; every base must be
    /// close to 1.
    pub fn exponential_sum(
        terms: Vec<(CycloElement<I>, CycloElement<I>)>,
    ) -> Result<Self, MahlerError> {
        for (_, b) in &terms {
            check_base(b)?;
        }
        Ok(FunctionModel::ExponentialSum(terms))
    }

    fn twisted_terms(&self) -> Result<Vec<TwistedTerm<I>>, MahlerError> {
        Ok(match self {
            FunctionModel::LocallyConstant { level, table } => {
                let f = table[0].field();
                vec![TwistedTerm {
                    level: *level,
                    table: table.clone(),
                    base: CycloElement::one(f),
                }]
            }
            FunctionModel::Exponential { coeff, base } => {
                check_base(base)?;
                vec![TwistedTerm {
                    level: 0,
                    table: vec![coeff.clone()],
                    base: base.clone(),
                }]
            }
            FunctionModel::ExponentialSum(terms) => terms
                .iter()
                .map(|(c, b)| {
                    check_base(b)?;
                    Ok(TwistedTerm {
                        level: 0,
                        table: vec![c.clone()],
                        base: b.clone(),
                    })
                })
                .collect::<Result<_, MahlerError>>()?,
            FunctionModel::Twisted(t) => t.clone(),
            FunctionModel::FiniteCoeffs(_) => {
                return Err(MahlerError::Unsupported(
                    "coefficient series are not periodic-exponential".into(),
                ))
            }
        })
    }

    /// `f(x)` at a non-negative integer.
    pub fn eval(&self, x: u64) -> Result<CycloElement<I>, MahlerError> {
        if let FunctionModel::FiniteCoeffs(s) = self {
            return Ok(evaluate_partial(s, x));
        }
        let terms = self.twisted_terms()?;
        let f = terms[0].table[0].field().clone();
        let mut acc = CycloElement::zero(&f);
        for t in &terms {
            let r = (x % f.p().pow(t.level)) as usize;
            acc = &acc + &(&t.table[r] * &t.base.pow(x));
        }
        Ok(acc)
    }

    fn field(&self) -> Option<Arc<CyclotomicField<I>>> {
        match self {
            FunctionModel::LocallyConstant { table, .. } => table.first().map(|c| c.field().clone()),
            FunctionModel::Exponential { base, .. } => Some(base.field().clone()),
            FunctionModel::ExponentialSum(t) => t.first().map(|(_, b)| b.field().clone()),
            FunctionModel::FiniteCoeffs(s) => Some(s.q.field().clone()),
            FunctionModel::Twisted(t) => t.first().map(|t| t.base.field().clone()),
        }
    }
}

fn check_base<I: ResidueInt>(b: &CycloElement<I>) -> Result<(), MahlerError> {
    let d = b - &CycloElement::one(b.field());
    if d.valuation() > ValuationQ::zero() {
        Ok(())
    } else {
        Err(MahlerError::NotContinuous(b.to_string()))
    }
}

fn check_q<I: ResidueInt>(q: &CycloElement<I>) -> Result<CycloElement<I>, MahlerError> {
    let d = q - &CycloElement::one(q.field());
    if d.valuation() <= ValuationQ::zero() {
        return Err(MahlerError::BadQ);
    }
    Ok(q.invert()?)
}

fn t_step<I: ResidueInt>(terms: &[TwistedTerm<I>], qinv: &CycloElement<I>) -> Vec<TwistedTerm<I>> {
    terms
        .iter()
        .map(|t| {
            let n = t.table.len();
            let table = (0..n)
                .map(|r| &(&t.table[(r + 1) % n] * &t.base) - &t.table[r])
                .collect();
            TwistedTerm {
                level: t.level,
                table,
                base: &t.base * qinv,
            }
        })
        .collect()
}

/// Lower bound on `-log_p ‖Σ g_i(x) b_i^x‖`, exact for a single term.
fn norm_bound<I: ResidueInt>(terms: &[TwistedTerm<I>]) -> ValuationQ {
    terms
        .iter()
        .flat_map(|t| t.table.iter())
        .map(|c| c.valuation())
        .min()
        .unwrap_or(ValuationQ::Infinity)
}

/// The model of `x ↦ (f(x+1) - f(x)) / q^x`.
pub fn apply_t<I: ResidueInt>(
    f: &FunctionModel<I>,
    q: &CycloElement<I>,
) -> Result<FunctionModel<I>, MahlerError> {
    let qinv = check_q(q)?;
    if let FunctionModel::FiniteCoeffs(s) = f {
        if !s.q.eq_at_precision(q) {
            return Err(MahlerError::Unsupported(
                "series built on a different q".into(),
            ));
        }
        // T C_q(x, k) = q^{1-k} C_q(x, k-1)
        let mut scale = CycloElement::one(q.field());
        let coeffs = s
            .coeffs
            .iter()
            .skip(1)
            .map(|a| {
                let out = a * &scale;
                scale = &scale * &qinv;
                out
            })
            .collect();
        return Ok(FunctionModel::FiniteCoeffs(CoeffSeries {
            q: s.q.clone(),
            coeffs,
            tail: s.tail.clone(),
        }));
    }
    let mut terms = t_step(&f.twisted_terms()?, &qinv);
    terms.retain(|t| t.table.iter().any(|c| !c.is_zero()));
    if terms.is_empty() {
        let field = f.field().expect("nonempty model");
        return Ok(FunctionModel::constant(CycloElement::zero(&field)));
    }
    Ok(match (f, terms.len()) {
        (FunctionModel::Exponential { .. }, 1) => FunctionModel::Exponential {
            coeff: terms[0].table[0].clone(),
            base: terms[0].base.clone(),
        },
        (FunctionModel::ExponentialSum(_), _) => FunctionModel::ExponentialSum(
            terms
                .into_iter()
                .map(|t| (t.table[0].clone(), t.base))
                .collect(),
        ),
        _ => FunctionModel::Twisted(terms),
    })
}

/// First `K + 1` q-Mahler coefficients `a_k = q^{C(k,2)} (T^k f)(0)`.
pub fn q_mahler_coeffs<I: ResidueInt>(
    f: &FunctionModel<I>,
    q: &CycloElement<I>,
    kmax: usize,
) -> Result<CoeffSeries<I>, MahlerError> {
    let qinv = check_q(q)?;
    if let FunctionModel::FiniteCoeffs(s) = f {
        return truncate_series(s, q, kmax);
    }
    let field = q.field();
    let mut terms = f.twisted_terms()?;
    let mut coeffs = Vec::with_capacity(kmax + 1);
    let mut qbin = CycloElement::one(field);
    let mut qk = CycloElement::one(field);
    for _ in 0..=kmax {
        let at0 = terms
            .iter()
            .fold(CycloElement::zero(field), |acc, t| &acc + &t.table[0]);
        coeffs.push(&qbin * &at0);
        qbin = &qbin * &qk;
        qk = &qk * q;
        terms = t_step(&terms, &qinv);
    }
    Ok(CoeffSeries {
        q: q.clone(),
        coeffs,
        tail: Some(norm_bound(&terms)),
    })
}

fn truncate_series<I: ResidueInt>(
    s: &CoeffSeries<I>,
    q: &CycloElement<I>,
    kmax: usize,
) -> Result<CoeffSeries<I>, MahlerError> {
    if !s.q.eq_at_precision(q) {
        return Err(MahlerError::Unsupported(
            "re-expansion in a different q".into(),
        ));
    }
    let field = q.field();
    let mut coeffs: Vec<_> = s.coeffs.iter().take(kmax + 1).cloned().collect();
    let dropped = s
        .coeffs
        .iter()
        .skip(kmax + 1)
        .map(|c| c.valuation())
        .min();
    coeffs.resize(kmax + 1, CycloElement::zero(field));
    let tail = match (dropped, &s.tail) {
        (_, None) => None,
        (None, t) => t.clone(),
        (Some(d), Some(t)) => Some(d.min(t.clone())),
    };
    Ok(CoeffSeries {
        q: s.q.clone(),
        coeffs,
        tail,
    })
}

/// Values `C_q(x, 0..=kmax)` for `x = 0, 1, 2, ...`, by the q-Pascal rule.
struct QBinomialRows<I: ResidueInt> {
    q: CycloElement<I>,
    row: Vec<CycloElement<I>>,
    qpow: Vec<CycloElement<I>>,
    x: u64,
}

impl<I: ResidueInt> QBinomialRows<I> {
    fn new(q: &CycloElement<I>, kmax: usize) -> Self {
        let f = q.field();
        let mut row = vec![CycloElement::zero(f); kmax + 1];
        row[0] = CycloElement::one(f);
        QBinomialRows {
            q: q.clone(),
            row,
            qpow: vec![CycloElement::one(f)],
            x: 0,
        }
    }

    fn q_pow(&mut self, k: usize) -> CycloElement<I> {
        while self.qpow.len() <= k {
            let next = &self.qpow[self.qpow.len() - 1] * &self.q;
            self.qpow.push(next);
        }
        self.qpow[k].clone()
    }

    /// Advance from `x` to `x + 1`:
    /// `C_q(x+1, j) = C_q(x, j) + q^{x+1-j} C_q(x, j-1)`.
    fn advance(&mut self) {
        let x = self.x as usize;
        for j in (1..self.row.len().min(x + 2)).rev() {
            let t = &self.q_pow(x + 1 - j) * &self.row[j - 1];
            self.row[j] = &self.row[j] + &t;
        }
        self.x += 1;
    }

    fn combine(&self, coeffs: &[CycloElement<I>]) -> CycloElement<I> {
        let f = self.q.field();
        coeffs
            .iter()
            .zip(&self.row)
            .filter(|(a, _)| !a.is_zero())
            .fold(CycloElement::zero(f), |acc, (a, c)| &acc + &(a * c))
    }
}

/// `Σ_{k≤K} a_k C_q(x, k)` at a non-negative integer `x`.
pub fn evaluate_partial<I: ResidueInt>(s: &CoeffSeries<I>, x: u64) -> CycloElement<I> {
    let kmax = s.coeffs.len().saturating_sub(1).min(x as usize);
    let mut rows = QBinomialRows::new(&s.q, kmax);
    for _ in 0..x {
        rows.advance();
    }
    rows.combine(&s.coeffs[..=kmax])
}

/// Partial sums at `x = 0..count`.
pub fn evaluate_range<I: ResidueInt>(s: &CoeffSeries<I>, count: u64) -> Vec<CycloElement<I>> {
    let kmax = s.coeffs.len().saturating_sub(1);
    let mut rows = QBinomialRows::new(&s.q, kmax);
    let mut out = Vec::with_capacity(count as usize);
    for x in 0..count {
        if x > 0 {
            rows.advance();
        }
        out.push(rows.combine(&s.coeffs));
    }
    out
}

/// `min_k v(a_k)`, i.e. `-log_p ‖f‖_sup`, when the tail cannot undercut it.
pub fn sup_norm_coeffs<I: ResidueInt>(s: &CoeffSeries<I>) -> Result<ValuationQ, MahlerError> {
    let stored = s
        .coeffs
        .iter()
        .map(|c| c.valuation())
        .min()
        .unwrap_or(ValuationQ::Infinity);
    match &s.tail {
        None => Err(MahlerError::UnknownTail),
        Some(t) if *t >= stored => Ok(stored),
        Some(t) => Err(MahlerError::TailInsufficient {
            tail: t.to_string(),
            stored: stored.to_string(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attainment {
    /// `|f(x)| = max_k |a_k|`, found while sampling `0..p^depth`.
    Attained { x: u64, depth: u32 },
    /// Every sample is strictly smaller than the coefficient maximum.
    Inconclusive { depth: u32 },
    /// A sample exceeded the coefficient maximum (an arithmetic fault).
    Violation { x: u64 },
}

/// Search integers `0..p^L` for a point where the finite series attains
/// `max_k |a_k|`, deepening `L` from `start` to `max_depth`.
pub fn sup_norm_attainment<I: ResidueInt>(
    s: &CoeffSeries<I>,
    start: u32,
    max_depth: u32,
) -> Attainment {
    let p = s.q.field().p();
    let target = s
        .coeffs
        .iter()
        .map(|c| c.valuation())
        .min()
        .unwrap_or(ValuationQ::Infinity);
    let mut depth = start;
    loop {
        let values = evaluate_range(s, p.pow(depth));
        for (x, v) in values.iter().enumerate() {
            let v = v.valuation();
            if v < target {
                return Attainment::Violation { x: x as u64 };
            }
            if v == target {
                return Attainment::Attained {
                    x: x as u64,
                    depth,
                };
            }
        }
        if depth >= max_depth {
            return Attainment::Inconclusive { depth };
        }
        depth += 1;
    }
}

/// Per-index record of the exponential-sum decay check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DecayRecord {
    pub k: usize,
    pub valuation: ValuationQ,
    /// `k ε_v + m_v`
    pub bound: ValuationQ,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DecayReport {
    /// `min_n v(ζ_n - 1)`
    pub epsilon: ValuationQ,
    /// `min_n v(λ_n)`
    pub m: ValuationQ,
    pub records: Vec<DecayRecord>,
    pub all_hold: bool,
}

/// Classical Mahler coefficients `b_k = Σ_n λ_n (ζ_n - 1)^k` of `Σ λ_n ζ_n^x`
/// against the decay bound `v(b_k) ≥ k ε_v + m_v`.
pub fn exp_sum_decay_check<I: ResidueInt>(
    terms: &[(CycloElement<I>, CycloElement<I>)],
    kmax: usize,
) -> Result<DecayReport, MahlerError> {
    let Some((first, _)) = terms.first() else {
        return Err(MahlerError::Unsupported("empty exponential sum".into()));
    };
    let field = first.field();
    let one = CycloElement::one(field);
    let steps: Vec<CycloElement<I>> = terms
        .iter()
        .map(|(_, b)| {
            check_base(b)?;
            Ok(b - &one)
        })
        .collect::<Result<_, MahlerError>>()?;
    let epsilon = steps.iter().map(|d| d.valuation()).min().expect("nonempty");
    let m = terms.iter().map(|(c, _)| c.valuation()).min().expect("nonempty");
    let mut powers: Vec<CycloElement<I>> = terms.iter().map(|(c, _)| c.clone()).collect();
    let mut records = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let b = powers
            .iter()
            .fold(CycloElement::zero(field), |acc, t| &acc + t);
        let bound = scale(&epsilon, k).add(&m);
        let valuation = b.valuation();
        records.push(DecayRecord {
            k,
            holds: valuation >= bound,
            valuation,
            bound,
        });
        for (t, d) in powers.iter_mut().zip(&steps) {
            *t = &*t * d;
        }
    }
    let all_hold = records.iter().all(|r| r.holds);
    Ok(DecayReport {
        epsilon,
        m,
        records,
        all_hold,
    })
}

fn scale(v: &ValuationQ, k: usize) -> ValuationQ {
    match v {
        ValuationQ::Finite(x) => ValuationQ::Finite(x * crate::rational::qi(k as i64)),
        ValuationQ::Infinity if k == 0 => ValuationQ::zero(),
        ValuationQ::Infinity => ValuationQ::Infinity,
    }
}

/// JSON rendering of a series: elements in the standard element form.
pub fn series_to_json<I: ResidueInt>(s: &CoeffSeries<I>) -> Value {
    json!({
        "q": element_to_json(&s.q),
        "coeffs": s.coeffs.iter().enumerate().map(|(k, a)| json!({
            "k": k,
            "valuation": a.valuation().to_string(),
            "element": element_to_json(a),
        })).collect::<Vec<_>>(),
        "tail_bound": s.tail.as_ref().map(|t| t.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::zq_coefficients;
    use crate::rational::{q, qi, Q};
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type E = CycloElement<i128>;

    fn setup(p: u64, n: u32) -> (Arc<CyclotomicField<i128>>, E, E) {
        let f = CyclotomicField::new(p, n, 24).unwrap();
        let z = E::zeta(&f);
        let one = E::one(&f);
        (f, z, one)
    }

    fn random_table(f: &Arc<CyclotomicField<i128>>, level: u32, rng: &mut ChaCha8Rng) -> Vec<E> {
        (0..f.p().pow(level))
            .map(|_| {
                let poly: Vec<BigInt> = (0..f.degree())
                    .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
                    .collect();
                E::from_pi_poly(f, &poly)
            })
            .collect()
    }

    #[test]
    fn t_on_exponentials() {
        let (f, z, one) = setup(2, 3);
        let qq = &z + &E::pi(&f).pow(2);
        // T(q^x) = q - 1, a constant
        let tq = apply_t(&FunctionModel::exponential(qq.clone()), &qq).unwrap();
        assert!(tq.eval(0).unwrap().eq_at_precision(&(&qq - &one)));
        assert!(tq.eval(5).unwrap().eq_at_precision(&(&qq - &one)));
        // T(ζ^x) = (ζ - 1)(ζ/q)^x
        let tz = apply_t(&FunctionModel::exponential(z.clone()), &qq).unwrap();
        let ratio = &z * &qq.invert().unwrap();
        for x in 0..6 {
            let expect = &(&z - &one) * &ratio.pow(x);
            assert!(tz.eval(x).unwrap().eq_at_precision(&expect));
        }
        // T(1) = 0
        let t1 = apply_t(&FunctionModel::constant(one.clone()), &qq).unwrap();
        assert!(t1.eval(3).unwrap().is_zero());
    }

    #[test]
    fn t_matches_its_definition() {
        let (f, z, one) = setup(3, 2);
        let qq = &z + &E::pi(&f).pow(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = FunctionModel::locally_constant(&f, 1, random_table(&f, 1, &mut rng)).unwrap();
        let tg = apply_t(&g, &qq).unwrap();
        let qinv = qq.invert().unwrap();
        for x in 0..10u64 {
            let direct = &(&g.eval(x + 1).unwrap() - &g.eval(x).unwrap()) * &qinv.pow(x);
            assert!(tg.eval(x).unwrap().eq_at_precision(&direct));
        }
        let _ = one;
    }

    #[test]
    fn exponential_expands_into_zq_coefficients() {
        let (f, z, _) = setup(2, 3);
        let qq = &z + &E::pi(&f).pow(2);
        let s = q_mahler_coeffs(&FunctionModel::exponential(z.clone()), &qq, 30).unwrap();
        let closed = zq_coefficients(&z, &qq, 30).unwrap();
        for (a, b) in s.coeffs.iter().zip(&closed) {
            assert!(a.eq_at_precision(b));
        }
        // partial sums reproduce ζ^x for x ≤ K
        for x in 0..=12 {
            assert!(evaluate_partial(&s, x).eq_at_precision(&z.pow(x)));
        }
        assert!(evaluate_partial(&s, 1).eq_at_precision(&z));
        assert_eq!(sup_norm_coeffs(&s).unwrap(), ValuationQ::zero());
    }

    #[test]
    fn constant_function() {
        let (f, z, one) = setup(3, 1);
        let qq = &z * &z;
        let s = q_mahler_coeffs(&FunctionModel::constant(one.clone()), &qq, 5).unwrap();
        assert!(s.coeffs[0].eq_at_precision(&one));
        assert!(s.coeffs[1..].iter().all(|c| c.is_zero()));
        assert_eq!(s.tail, Some(ValuationQ::Infinity));
        for x in [0, 3, 7] {
            assert!(evaluate_partial(&s, x).eq_at_precision(&one));
        }
        let _ = f;
    }

    #[test]
    fn classical_indicator_of_even_integers() {
        let (f, _, one) = setup(2, 1);
        let zero = E::zero(&f);
        let g = FunctionModel::locally_constant(&f, 1, vec![one.clone(), zero]).unwrap();
        let s = q_mahler_coeffs(&g, &one, 12).unwrap();
        // a_0 = 1, a_k = -(-2)^{k-1}
        assert!(s.coeffs[0].eq_at_precision(&one));
        for k in 1..=12u32 {
            let expect = -(-2i64).pow(k - 1);
            assert!(s.coeffs[k as usize].eq_at_precision(&E::from_int(&f, expect)), "k={k}");
        }
    }

    #[test]
    fn classical_case_is_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, n, level) in [(2, 2, 2), (3, 1, 1), (5, 1, 1), (2, 3, 3)] {
            let (f, _, one) = setup(p, n);
            let table = random_table(&f, level, &mut rng);
            let g = FunctionModel::locally_constant(&f, level, table).unwrap();
            let s = q_mahler_coeffs(&g, &one, 20).unwrap();
            let values: Vec<E> = (0..=20).map(|x| g.eval(x).unwrap()).collect();
            for k in 0..=20usize {
                // (Δ^k f)(0) = Σ_j (-1)^{k-j} C(k,j) f(j)
                let mut acc = E::zero(&f);
                let mut c = BigInt::from(1);
                for (j, v) in values.iter().enumerate().take(k + 1) {
                    let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
                    let w = E::from_rational(&f, &Q::from_integer(&c * sign));
                    acc = &acc + &(&w * v);
                    c = c * (k - j) / (j + 1);
                }
                assert!(s.coeffs[k].eq_at_precision(&acc), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn expansion_reconstructs_locally_constant_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (f, z, _) = setup(3, 2);
        let qq = &z + &E::pi(&f).pow(4);
        let g = FunctionModel::locally_constant(&f, 2, random_table(&f, 2, &mut rng)).unwrap();
        let s = q_mahler_coeffs(&g, &qq, 30).unwrap();
        let values = evaluate_range(&s, 31);
        for (x, v) in values.iter().enumerate() {
            assert!(v.eq_at_precision(&g.eval(x as u64).unwrap()), "x={x}");
        }
    }

    #[test]
    fn certified_tail_bounds_later_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let (f, z, _) = setup(2, 3);
        let qq = &z + &E::pi(&f).pow(3);
        let g = FunctionModel::locally_constant(&f, 2, random_table(&f, 2, &mut rng)).unwrap();
        let long = q_mahler_coeffs(&g, &qq, 60).unwrap();
        for cut in [0usize, 5, 17, 40] {
            let short = q_mahler_coeffs(&g, &qq, cut).unwrap();
            let tail = short.tail.clone().unwrap();
            assert!(long.coeffs[cut + 1..].iter().all(|a| a.valuation() >= tail));
        }
    }

    /// `v(a_k) ≥ ⌊k/p^L⌋ · min(v(q-1), 1)` for unit-ball locally constant f.
    fn decay_rule_holds_for(p: u64, n: u32, level: u32, qexp: u64, seed: u64) -> bool {
        let (f, z, one) = setup(p, n);
        let qq = &z + &E::pi(&f).pow(qexp);
        let r = (&qq - &one).valuation().finite().cloned().unwrap().min(qi(1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FunctionModel::locally_constant(&f, level, random_table(&f, level, &mut rng))
            .unwrap();
        let s = q_mahler_coeffs(&g, &qq, 40).unwrap();
        let period = p.pow(level) as i64;
        s.coeffs.iter().enumerate().all(|(k, a)| {
            a.valuation() >= ValuationQ::Finite(&r * qi(k as i64 / period))
        })
    }

    #[test]
    fn stated_decay_rule_holds_and_is_dominated_by_the_tail() {
        for (p, n) in [(2u64, 2u32), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let e = p.pow(n - 1) * (p - 1);
            for level in 0..=2u32 {
                for qexp in [1, 2, e, e + 1, 2 * e + 1] {
                    for seed in 0..4 {
                        assert!(
                            decay_rule_holds_for(p, n, level, qexp, seed),
                            "p={p} N={n} L={level} q=zeta+pi^{qexp} seed={seed}"
                        );
                    }
                }
            }
        }
        // the certified tail is never weaker than the rule at K + 1
        let (f, z, one) = setup(3, 2);
        let qq = &z + &E::pi(&f).pow(2);
        let r = (&qq - &one).valuation().finite().cloned().unwrap().min(qi(1));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = FunctionModel::locally_constant(&f, 1, random_table(&f, 1, &mut rng)).unwrap();
        for k in [2usize, 8, 20] {
            let s = q_mahler_coeffs(&g, &qq, k).unwrap();
            let rule = ValuationQ::Finite(&r * qi((k as i64 + 1) / 3));
            assert!(s.tail.unwrap() >= rule);
        }
    }

    #[test]
    fn finite_series_t_and_norm() {
        let (f, z, _) = setup(3, 2);
        let qq = &z + &E::pi(&f).pow(2);
        let coeffs = vec![
            E::zero(&f),
            E::from_int(&f, 3),
            &E::pi(&f) * &E::from_int(&f, 9),
        ];
        let s = CoeffSeries {
            q: qq.clone(),
            coeffs,
            tail: Some(ValuationQ::Infinity),
        };
        assert_eq!(sup_norm_coeffs(&s).unwrap(), ValuationQ::Finite(qi(1)));
        let g = FunctionModel::FiniteCoeffs(s.clone());
        let tg = apply_t(&g, &qq).unwrap();
        let qinv = qq.invert().unwrap();
        for x in 0..6u64 {
            let direct = &(&g.eval(x + 1).unwrap() - &g.eval(x).unwrap()) * &qinv.pow(x);
            assert!(tg.eval(x).unwrap().eq_at_precision(&direct));
        }
        assert_eq!(
            sup_norm_attainment(&s, 1, 4),
            Attainment::Attained { x: 1, depth: 1 }
        );
        let unknown = CoeffSeries { tail: None, ..s };
        assert_eq!(sup_norm_coeffs(&unknown), Err(MahlerError::UnknownTail));
    }

    #[test]
    fn sup_norm_examples() {
        let (f, _, one) = setup(2, 2);
        let single = CoeffSeries {
            q: one.clone(),
            coeffs: vec![one.clone()],
            tail: Some(ValuationQ::Infinity),
        };
        assert_eq!(sup_norm_coeffs(&single).unwrap(), ValuationQ::zero());
        let s = CoeffSeries {
            q: one.clone(),
            coeffs: vec![E::zero(&f), E::from_int(&f, 2)],
            tail: Some(ValuationQ::Infinity),
        };
        assert_eq!(sup_norm_coeffs(&s).unwrap(), ValuationQ::Finite(qi(1)));
    }

    #[test]
    fn decay_examples() {
        let (f, z, one) = setup(2, 3);
        let r = exp_sum_decay_check(&[(one.clone(), z.clone())], 20).unwrap();
        assert!(r.all_hold);
        // equality case: v(b_k) = k/4
        assert!(r.records.iter().all(|x| x.valuation == x.bound));
        let minus = E::from_int(&f, -1);
        let r = exp_sum_decay_check(&[(one.clone(), z.clone()), (minus, z.clone())], 20).unwrap();
        assert!(r.records.iter().all(|x| x.valuation == ValuationQ::Infinity && x.holds));
        let r = exp_sum_decay_check(&[(one.clone(), z.clone()), (one, z.pow(3))], 50).unwrap();
        assert!(r.all_hold);
        assert_eq!(r.epsilon, ValuationQ::Finite(q(1, 4)));
    }

    #[test]
    fn decay_coefficients_are_classical_mahler_coefficients() {
        let (f, z, one) = setup(3, 2);
        let terms = vec![(E::from_int(&f, 3), z.clone()), (one.clone(), z.pow(4))];
        let r = exp_sum_decay_check(&terms, 15).unwrap();
        let s = q_mahler_coeffs(&FunctionModel::ExponentialSum(terms), &one, 15).unwrap();
        for (rec, a) in r.records.iter().zip(&s.coeffs) {
            assert_eq!(rec.valuation, a.valuation());
        }
    }

    #[test]
    fn rejects_discontinuous_bases() {
        let (f, _, one) = setup(3, 1);
        let two = E::from_int(&f, 2);
        assert!(matches!(
            FunctionModel::exponential_sum(vec![(one.clone(), two.clone())]),
            Err(MahlerError::NotContinuous(_))
        ));
        assert_eq!(
            q_mahler_coeffs(&FunctionModel::constant(one), &two, 3).unwrap_err(),
            MahlerError::BadQ
        );
    }
}
