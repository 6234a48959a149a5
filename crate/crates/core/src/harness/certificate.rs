//! Certificates for the main inequality
//! `‖⟨ζ,q⟩_1 C_q(x,1)‖ > ‖⟨ζ,q⟩_k C_q(x,k)‖` for every `k ≠ 1`,
//! with `q = ζ + h`, `h = π^{v_h e}` and `s = |h|`.
//!
//! Norms are in `log_p` scale throughout. The norm in question enters only
//! through its profile: `G = log_p G(s)` and the domination constant
//! `M_log`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::norms::{classify, growth_modulus, NormError, NormProfile, RegularityVerdict};
use crate::padic::{CycloElement, PadicError};
use crate::qcalc::{beta, check_corollary_bound, lambda, zq_coefficients};
use crate::rational::{cmp_p_power, fmt_q, log_p, p_pow, serde_q, serde_q_opt, vp_int, ValuationQ, Q};
use crate::scalar::ResidueInt;
use crate::FastField;

pub const CERTIFICATE_SCHEMA: &str = "padicq.certificate/1";

/// Largest extension degree the exact mode accepts.
pub const EXACT_MAX_DEGREE: usize = 1 << 11;

/// Middle-range indices up to this bound are checked exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Asymptotic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainIneqConfig {
    pub p: u64,
    #[serde(rename = "N")]
    pub level: u32,
    #[serde(with = "serde_q")]
    pub v_h: Q,
    pub profile: NormProfile,
    pub mode: Mode,
    /// Exact mode: last index computed in the extension.
    #[serde(default)]
    pub k_max: Option<u64>,
    /// Asymptotic mode: random middle-range samples beyond the exhaustive
    /// range.
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl MainIneqConfig {
    /// Profile `(0, M_log)` with bound `M_log`.
    pub fn with_default_profile(p: u64, level: u32, v_h: Q, m_log: Q, mode: Mode) -> Self {
        Self {
            p,
            level,
            v_h,
            profile: NormProfile {
                p,
                m_log: m_log.clone(),
                ells: vec![Q::zero(), m_log],
            },
            mode,
            k_max: None,
            samples: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
    /// `lhs ≥ p^rhs`
    GePPower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    #[serde(with = "serde_q")]
    pub lhs: Q,
    pub relation: Relation,
    #[serde(with = "serde_q")]
    pub rhs: Q,
    pub holds: bool,
}

impl Condition {
    fn new(name: &str, lhs: Q, relation: Relation, rhs: Q, p: u64) -> Self {
        let holds = relation_holds(&lhs, relation, &rhs, p);
        Self {
            name: name.into(),
            lhs,
            relation,
            rhs,
            holds,
        }
    }
}

fn relation_holds(lhs: &Q, rel: Relation, rhs: &Q, p: u64) -> bool {
    match rel {
        Relation::Lt => lhs < rhs,
        Relation::Le => lhs <= rhs,
        Relation::Eq => lhs == rhs,
        Relation::Ge => lhs >= rhs,
        Relation::Gt => lhs > rhs,
        Relation::GePPower => lhs.is_positive() && ge_p_power_fast(lhs, p, rhs),
    }
}

/// `x ≥ p^t`, by a floating-point enclosure when it is decisive and exactly
/// otherwise.
fn ge_p_power_fast(x: &Q, p: u64, t: &Q) -> bool {
    let lx = log_p(x, p);
    let tf = t.to_f64().unwrap_or(f64::NAN);
    let pad = 1e-9 * (tf.abs() + 1.0);
    if lx.lo() > tf + pad {
        return true;
    }
    if lx.hi() < tf - pad {
        return false;
    }
    cmp_p_power(x, p, t) != Ordering::Less
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    /// `k = 0`: `‖1‖ = ℓ_0`.
    Base,
    /// `k = 1`: `|⟨ζ,q⟩_1| = |q - 1|`, so the term has norm `‖q^x‖ = G`.
    Linear,
    /// Valuation computed in the extension; bound `M_log - v`.
    Direct,
    /// Ratio `v(⟨ζ,q⟩_k) - v((q;q)_k)` from the valuation formula; bound
    /// `G - ratio`.
    Middle,
    /// Uniform lower bound on `v(⟨ζ,q⟩_k)` for `k` past the middle range.
    Large,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRecord {
    pub k: u64,
    pub kind: RecordKind,
    /// `v(⟨ζ,q⟩_k)`, or a lower bound for it (`Large`).
    #[serde(with = "serde_q_opt")]
    pub valuation: Option<Q>,
    /// The product vanished at working precision; `valuation` is that
    /// precision.
    #[serde(default)]
    pub valuation_is_lower_bound: bool,
    /// `v(⟨ζ,q⟩_k) - v((q;q)_k)` (`Linear`: `v(q - 1)`).
    #[serde(with = "serde_q_opt")]
    pub ratio: Option<Q>,
    /// Formula value of `ratio` when `1 < k ≤ (1/λ) log_p(1/√s)`.
    #[serde(with = "serde_q_opt")]
    pub formula_ratio: Option<Q>,
    /// Upper bound on `log_p ‖⟨ζ,q⟩_k C_q(x,k)‖`.
    #[serde(with = "serde_q")]
    pub bound: Q,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveRange {
    pub from: u64,
    pub to: u64,
    pub checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeK {
    /// The auxiliary index `α ≤ m < 2α`.
    pub m: u64,
    pub beta_m: String,
    /// `λ β_p(m)`
    #[serde(with = "serde_q")]
    pub poch_valuation: Q,
    /// `β_p(m) ≥ m log_p(m) / 4` certified.
    pub corollary_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailClosure {
    pub from_k: u64,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub mode: Mode,
    pub config: MainIneqConfig,
    #[serde(with = "serde_q")]
    pub lambda: Q,
    /// `log_p G(s)`
    #[serde(with = "serde_q")]
    pub growth: Q,
    pub regular_index: usize,
    /// `⌊(1/λ) log_p(1/√s)⌋`, the end of the middle range.
    pub middle_end: u64,
    pub conditions: Vec<Condition>,
    pub records: Vec<KRecord>,
    pub exhaustive: Option<ExhaustiveRange>,
    pub large_k: Option<LargeK>,
    pub tail: TailClosure,
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("precondition `{name}` fails: {detail}")]
    Precondition { name: String, detail: String },
    #[error("condition `{name}` fails: {lhs} {relation:?} {rhs} is false")]
    Condition {
        name: String,
        lhs: String,
        relation: Relation,
        rhs: String,
    },
    #[error("inequality fails at k = {k}: bound {bound} vs log G = {growth} ({detail})")]
    Inequality {
        k: u64,
        bound: String,
        growth: String,
        detail: String,
    },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

fn precondition(name: &str, detail: String) -> CertError {
    CertError::Precondition {
        name: name.into(),
        detail,
    }
}

fn qu(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn p_power_part(p: u64, k: u64) -> u64 {
    if k == 0 {
        return 0;
    }
    let v = vp_int(&BigInt::from(k), p).expect("nonzero");
    p.pow(v as u32)
}

/// `v(1 - ζ^i) = λ p^{v_p(i)}` for `0 < i < p^N`.
fn one_minus_zeta_pow(lam: &Q, p: u64, i: u64) -> Q {
    lam * qu(p_power_part(p, i))
}

/// Shared set-up: profile checks and the growth value at `log r = -v_h`.
struct Common {
    lam: Q,
    growth: Q,
    regular_index: usize,
    middle_end: u64,
    conditions: Vec<Condition>,
}

fn common(cfg: &MainIneqConfig) -> Result<Common, CertError> {
    let p = cfg.p;
    if !crate::padic::is_prime(p) {
        return Err(PadicError::NotPrime(p).into());
    }
    if cfg.level == 0 {
        return Err(precondition("N >= 1", "N = 0".into()));
    }
    if cfg.profile.p != p {
        return Err(precondition("profile prime", format!("profile p = {}", cfg.profile.p)));
    }
    cfg.profile.validate()?;
    if !cfg.profile.ells[0].is_zero() {
        return Err(precondition(
            "normalized profile",
            format!("ell_0 = {}", fmt_q(&cfg.profile.ells[0])),
        ));
    }
    if !cfg.v_h.is_positive() {
        return Err(precondition("v_h > 0", fmt_q(&cfg.v_h)));
    }
    let lam = lambda(p, cfg.level);
    let mut conditions = vec![
        Condition::new("s >= p^(-1/(p-1))", cfg.v_h.clone(), Relation::Le, Q::new(1.into(), (p - 1).into()), p),
        Condition::new("|1 - zeta| > s", lam.clone(), Relation::Lt, cfg.v_h.clone(), p),
    ];
    let log_r = -cfg.v_h.clone();
    let regular_index = match classify(&cfg.profile, &log_r) {
        RegularityVerdict::Regular { n } => n,
        other => {
            return Err(precondition(
                "s is a regular value",
                format!("{other:?} at log r = {}", fmt_q(&log_r)),
            ))
        }
    };
    let growth = growth_modulus(&cfg.profile, &log_r)?;
    conditions.push(Condition::new("G(s) > 1", growth.clone(), Relation::Gt, Q::zero(), p));
    for c in &conditions {
        if !c.holds {
            return Err(CertError::Condition {
                name: c.name.clone(),
                lhs: fmt_q(&c.lhs),
                relation: c.relation,
                rhs: fmt_q(&c.rhs),
            });
        }
    }
    let end = (&cfg.v_h / Q::from_integer(2.into()) / &lam).floor().to_integer();
    let middle_end = end
        .to_u64()
        .filter(|&e| e < (1 << 62))
        .ok_or_else(|| precondition("middle range fits in 62 bits", end.to_string()))?;
    Ok(Common {
        lam,
        growth,
        regular_index,
        middle_end,
        conditions,
    })
}

fn base_record(cfg: &MainIneqConfig, growth: &Q) -> KRecord {
    let bound = cfg.profile.ells[0].clone();
    KRecord {
        k: 0,
        kind: RecordKind::Base,
        valuation: Some(Q::zero()),
        valuation_is_lower_bound: false,
        ratio: None,
        formula_ratio: None,
        holds: &bound < growth,
        bound,
    }
}

/// `λ + v_h - λ p^{v_p(k-1)} - λ p^{v_p(k)}`
fn middle_formula(lam: &Q, v_h: &Q, p: u64, k: u64) -> Q {
    lam + v_h - one_minus_zeta_pow(lam, p, k - 1) - one_minus_zeta_pow(lam, p, k)
}

fn first_failure(records: &[KRecord], growth: &Q) -> Result<(), CertError> {
    if let Some(r) = records.iter().find(|r| !r.holds) {
        return Err(CertError::Inequality {
            k: r.k,
            bound: fmt_q(&r.bound),
            growth: fmt_q(growth),
            detail: format!(
                "{:?}, valuation {}, ratio {}",
                r.kind,
                r.valuation.as_ref().map_or("-".into(), fmt_q),
                r.ratio.as_ref().map_or("-".into(), fmt_q)
            ),
        });
    }
    Ok(())
}

/// Exact certificate: every `⟨ζ,q⟩_k` up to `k_max` is computed in `K_N`.
pub fn main_inequality_exact(cfg: &MainIneqConfig) -> Result<Certificate, CertError> {
    let c = common(cfg)?;
    let p = cfg.p;
    let field = FastField::new(p, cfg.level, i128::max_digits(p).unwrap_or(32))?;
    let e = field.degree();
    if e > EXACT_MAX_DEGREE {
        return Err(precondition("e <= 2^11", format!("e = {e}")));
    }
    let h_exp = &cfg.v_h * qu(e as u64);
    if !h_exp.is_integer() {
        return Err(precondition(
            "h = pi^(v_h e)",
            format!("v_h e = {} is not an integer", fmt_q(&h_exp)),
        ));
    }
    let h_exp = h_exp.to_integer().to_u64().expect("positive exponent");
    let zeta = CycloElement::zeta(&field);
    let one = CycloElement::one(&field);
    let q = &zeta + &CycloElement::pi_pow(&field, h_exp);
    let k_max = cfg.k_max.unwrap_or_else(|| p.saturating_pow(cfg.level).min(64)).max(2);
    let coeffs = zq_coefficients(&zeta, &q, k_max)?;
    let mut records = vec![base_record(cfg, &c.growth)];
    // k = 1: ⟨ζ,q⟩_1 = ζ - 1 and |ζ - 1| = |q - 1|
    let v1 = coeffs[1].valuation_checked()?;
    let vq1 = (&q - &one).valuation_checked()?;
    records.push(KRecord {
        k: 1,
        kind: RecordKind::Linear,
        holds: v1 == c.lam && vq1 == c.lam,
        valuation: Some(v1),
        valuation_is_lower_bound: false,
        ratio: Some(vq1),
        formula_ratio: None,
        bound: c.growth.clone(),
    });
    let mut qq = &one - &q;
    let mut qk = q.clone();
    let mut prev = records[1].valuation.clone().expect("set above");
    for k in 2..=k_max {
        qk = &qk * &q;
        qq = &qq * &(&one - &qk);
        let (v, lower) = match coeffs[k as usize].valuation_checked() {
            Ok(v) => (v, false),
            Err(PadicError::ZeroAtPrecision {
                precision: ValuationQ::Finite(prec),
            }) => (prec, true),
            Err(e) => return Err(e.into()),
        };
        let bound = &cfg.profile.m_log - &v;
        let (ratio, formula_ratio) = if k <= c.middle_end {
            (
                Some(&v - qq.valuation_checked()?),
                Some(middle_formula(&c.lam, &cfg.v_h, p, k)),
            )
        } else {
            (None, None)
        };
        let holds = bound < c.growth && (lower || v >= prev) && ratio == formula_ratio;
        if !lower {
            prev = v.clone();
        }
        records.push(KRecord {
            k,
            kind: RecordKind::Direct,
            valuation: Some(v),
            valuation_is_lower_bound: lower,
            ratio,
            formula_ratio,
            bound,
            holds,
        });
    }
    first_failure(&records, &c.growth)?;
    Ok(Certificate {
        schema: CERTIFICATE_SCHEMA.into(),
        mode: Mode::Exact,
        config: cfg.clone(),
        lambda: c.lam,
        growth: c.growth,
        regular_index: c.regular_index,
        middle_end: c.middle_end,
        conditions: c.conditions,
        records,
        exhaustive: None,
        large_k: None,
        tail: TailClosure {
            from_k: k_max + 1,
            rule: "every factor zeta - q^i is integral, so v(<zeta,q>_k) is non-decreasing \
                   and the bound M_log - v(<zeta,q>_k) stays below its value at the last record"
                .into(),
        },
        all_pass: true,
    })
}

/// Middle-range indices checked beyond the exhaustive range: powers of `p`
/// and their neighbours, the range end, and seeded random picks.
fn middle_samples(p: u64, start: u64, end: u64, samples: usize, seed: u64) -> Vec<u64> {
    let mut ks = Vec::new();
    if start > end {
        return ks;
    }
    let mut pj: u64 = 1;
    while pj <= end {
        for k in [pj.saturating_sub(1), pj, pj.saturating_add(1)] {
            if (start..=end).contains(&k) {
                ks.push(k);
            }
        }
        match pj.checked_mul(p) {
            Some(x) => pj = x,
            None => break,
        }
    }
    ks.extend([end.saturating_sub(1), end].into_iter().filter(|k| *k >= start));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ks.extend((0..samples).map(|_| rng.gen_range(start..=end)));
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn middle_record(lam: &Q, v_h: &Q, growth: &Q, p: u64, k: u64) -> KRecord {
    let ratio = middle_formula(lam, v_h, p, k);
    let half = v_h / Q::from_integer(2.into());
    let part1 = one_minus_zeta_pow(lam, p, k) <= half && one_minus_zeta_pow(lam, p, k - 1) <= half;
    KRecord {
        k,
        kind: RecordKind::Middle,
        valuation: None,
        valuation_is_lower_bound: false,
        bound: growth - &ratio,
        holds: part1 && ratio >= half,
        formula_ratio: Some(ratio.clone()),
        ratio: Some(ratio),
    }
}

/// Large-`k` data from the auxiliary index `m = ⌈α⌉`.
fn large_k_data(p: u64, level: u32, alpha: &Q, lam: &Q) -> Result<LargeK, CertError> {
    let m = alpha.ceil().to_integer().to_u64().ok_or_else(|| {
        precondition("alpha fits in 64 bits", fmt_q(alpha))
    })?;
    let b = beta(p, m).value;
    let cor = check_corollary_bound(p, level, m)
        .map_err(|e| precondition("p^8 <= m < p^N", e.to_string()))?;
    Ok(LargeK {
        m,
        beta_m: b.to_string(),
        poch_valuation: lam * Q::from_integer(BigInt::from(b)),
        corollary_holds: cor.holds,
    })
}

/// Asymptotic certificate: the conditions on `N` are checked exactly and
/// every range of `k` is bounded through valuation formulas.
pub fn main_inequality_asymptotic(cfg: &MainIneqConfig) -> Result<Certificate, CertError> {
    let mut c = common(cfg)?;
    let p = cfg.p;
    let half_vh = &cfg.v_h / Q::from_integer(2.into());
    // α = (1/2λ) log_p(1/√s) = v_h / (4λ)
    let alpha = &half_vh / (Q::from_integer(2.into()) * &c.lam);
    let l3 = &cfg.profile.m_log + &half_vh;
    c.conditions.push(Condition::new("alpha > p^8", alpha.clone(), Relation::Gt, Q::from_integer(p_pow(p, 8)), p));
    // (λ/4) α log_p α ≥ log_p(M/√s)  <=>  α ≥ p^{l3 / (λα/4)}
    let scale = &c.lam * &alpha / Q::from_integer(4.into());
    c.conditions.push(Condition::new(
        "(lambda/4) alpha log_p(alpha) >= log_p(M/sqrt(s))",
        alpha.clone(),
        Relation::GePPower,
        &l3 / &scale,
        p,
    ));
    for cond in &c.conditions {
        if !cond.holds {
            return Err(CertError::Condition {
                name: cond.name.clone(),
                lhs: fmt_q(&cond.lhs),
                relation: cond.relation,
                rhs: fmt_q(&cond.rhs),
            });
        }
    }
    let mut records = vec![base_record(cfg, &c.growth)];
    records.push(KRecord {
        k: 1,
        kind: RecordKind::Linear,
        valuation: Some(c.lam.clone()),
        valuation_is_lower_bound: false,
        // v(q - 1) = min(λ, v_h)
        ratio: Some(c.lam.clone().min(cfg.v_h.clone())),
        formula_ratio: None,
        bound: c.growth.clone(),
        holds: c.lam < cfg.v_h,
    });
    // part (1) and the middle ratio on every k up to the exhaustive limit
    let ex_end = c.middle_end.min(EXHAUSTIVE_LIMIT);
    let mut checked = 0u64;
    for k in 2..=ex_end {
        let r = middle_record(&c.lam, &cfg.v_h, &c.growth, p, k);
        if !r.holds || k <= 64 {
            records.push(r);
        }
        checked += 1;
    }
    let exhaustive = ExhaustiveRange {
        from: 2,
        to: ex_end,
        checked,
    };
    let samples = cfg.samples.unwrap_or(1000);
    for k in middle_samples(p, ex_end + 1, c.middle_end, samples, cfg.seed) {
        records.push(middle_record(&c.lam, &cfg.v_h, &c.growth, p, k));
    }
    let large = large_k_data(p, cfg.level, &alpha, &c.lam)?;
    let m_ok = qu(large.m) < Q::from_integer(2.into()) * &alpha && large.m <= c.middle_end;
    let large_v = &half_vh + &large.poch_valuation;
    let mut large_ks: Vec<u64> = vec![c.middle_end + 1, c.middle_end + 2];
    let mut pj: u64 = 1;
    let top = p.checked_pow(cfg.level + 1).unwrap_or(u64::MAX);
    while pj <= top {
        if pj > c.middle_end {
            large_ks.push(pj);
        }
        match pj.checked_mul(p) {
            Some(x) => pj = x,
            None => break,
        }
    }
    if let Some(pn) = p.checked_pow(cfg.level) {
        large_ks.extend([pn - 1, pn]);
    }
    large_ks.retain(|&k| k > c.middle_end);
    large_ks.sort_unstable();
    large_ks.dedup();
    for k in large_ks {
        let bound = &cfg.profile.m_log - &large_v;
        records.push(KRecord {
            k,
            kind: RecordKind::Large,
            valuation: Some(large_v.clone()),
            valuation_is_lower_bound: true,
            ratio: None,
            formula_ratio: None,
            holds: m_ok && large.corollary_holds && bound < c.growth && k > c.middle_end,
            bound,
        });
    }
    first_failure(&records, &c.growth)?;
    Ok(Certificate {
        schema: CERTIFICATE_SCHEMA.into(),
        mode: Mode::Asymptotic,
        config: cfg.clone(),
        lambda: c.lam,
        growth: c.growth,
        regular_index: c.regular_index,
        middle_end: c.middle_end,
        conditions: c.conditions,
        records,
        exhaustive: Some(exhaustive),
        tail: TailClosure {
            from_k: c.middle_end + 1,
            rule: format!(
                "for k > m = {}: |<zeta,q>_k| <= |<zeta,q>_m| <= sqrt(s) |(zeta;zeta)_m|",
                large.m
            ),
        },
        large_k: Some(large),
        all_pass: true,
    })
}

pub fn main_inequality(cfg: &MainIneqConfig) -> Result<Certificate, CertError> {
    match cfg.mode {
        Mode::Exact => main_inequality_exact(cfg),
        Mode::Asymptotic => main_inequality_asymptotic(cfg),
    }
}

/// Outcome of re-checking a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Recompute every comparison of a certificate from its stored rationals
/// and its configuration. No extension arithmetic is involved: valuations
/// computed in `K_N` are taken as stored and checked for consistency.
pub fn verify_certificate(cert: &Certificate) -> Verification {
    let mut problems = Vec::new();
    let mut check = |ok: bool, msg: String| {
        if !ok {
            problems.push(msg);
        }
    };
    let cfg = &cert.config;
    let p = cfg.p;
    check(cert.schema == CERTIFICATE_SCHEMA, format!("unknown schema {}", cert.schema));
    check(cert.mode == cfg.mode, "mode differs from the configuration".into());
    let lam = lambda(p, cfg.level);
    check(cert.lambda == lam, format!("lambda {} != {}", fmt_q(&cert.lambda), fmt_q(&lam)));
    let log_r = -cfg.v_h.clone();
    match classify(&cfg.profile, &log_r) {
        RegularityVerdict::Regular { n } => check(n == cert.regular_index, "regular index differs".into()),
        other => check(false, format!("radius not regular: {other:?}")),
    }
    match growth_modulus(&cfg.profile, &log_r) {
        Ok(g) => check(g == cert.growth, format!("G {} != {}", fmt_q(&cert.growth), fmt_q(&g))),
        Err(e) => check(false, format!("G not certified: {e}")),
    }
    let g = &cert.growth;
    let end = (&cfg.v_h / Q::from_integer(2.into()) / &lam).floor().to_integer();
    check(BigInt::from(cert.middle_end) == end, "middle range end differs".into());
    for c in &cert.conditions {
        let holds = relation_holds(&c.lhs, c.relation, &c.rhs, p);
        check(holds == c.holds && holds, format!("condition `{}` does not hold", c.name));
    }
    check(
        cert.conditions.iter().any(|c| c.name == "|1 - zeta| > s" && c.lhs == lam && c.rhs == cfg.v_h),
        "condition 1 missing".into(),
    );
    let half_vh = &cfg.v_h / Q::from_integer(2.into());
    let mut prev: Option<Q> = None;
    for (idx, r) in cert.records.iter().enumerate() {
        let ok = match r.kind {
            RecordKind::Base => r.k == 0 && r.bound == cfg.profile.ells[0] && &r.bound < g,
            RecordKind::Linear => {
                r.k == 1
                    && r.valuation.as_ref() == Some(&lam)
                    && r.ratio.as_ref() == Some(&lam)
                    && &r.bound == g
            }
            RecordKind::Direct => {
                let v = r.valuation.clone().unwrap_or_else(Q::zero);
                let monotone = r.valuation_is_lower_bound || prev.as_ref().is_none_or(|pv| &v >= pv);
                if !r.valuation_is_lower_bound {
                    prev = Some(v.clone());
                }
                let formula = (r.k <= cert.middle_end).then(|| middle_formula(&lam, &cfg.v_h, p, r.k));
                r.valuation.is_some()
                    && cert.records.get(idx.wrapping_sub(1)).is_some_and(|q| q.k + 1 == r.k)
                    && monotone
                    && r.bound == &cfg.profile.m_log - &v
                    && &r.bound < g
                    && r.formula_ratio == formula
                    && r.ratio == formula
            }
            RecordKind::Middle => {
                let fresh = middle_record(&lam, &cfg.v_h, g, p, r.k);
                r.k >= 2 && r.k <= cert.middle_end && fresh == *r && fresh.holds
            }
            RecordKind::Large => match &cert.large_k {
                Some(l) => {
                    let pv = &lam * Q::from_integer(BigInt::from(beta(p, l.m).value));
                    let v = &half_vh + &pv;
                    let alpha = &half_vh / (Q::from_integer(2.into()) * &lam);
                    pv == l.poch_valuation
                        && l.corollary_holds
                        && qu(l.m) >= alpha
                        && qu(l.m) < Q::from_integer(2.into()) * alpha
                        && r.k > cert.middle_end
                        && r.valuation.as_ref() == Some(&v)
                        && r.bound == &cfg.profile.m_log - &v
                        && &r.bound < g
                }
                None => false,
            },
        };
        check(ok && r.holds, format!("record k = {} ({:?}) does not verify", r.k, r.kind));
    }
    match cert.mode {
        Mode::Exact => {
            let last = cert.records.last().map_or(0, |r| r.k);
            let contiguous = cert.records.iter().enumerate().all(|(i, r)| r.k == i as u64);
            check(contiguous && last >= 2, "exact records must cover 0..=k_max".into());
            check(cert.tail.from_k == last + 1, "tail does not start after the last record".into());
        }
        Mode::Asymptotic => {
            match &cert.exhaustive {
                Some(ex) => {
                    let all = (ex.from..=ex.to).all(|k| middle_record(&lam, &cfg.v_h, g, p, k).holds);
                    check(
                        all && ex.from == 2 && ex.to == cert.middle_end.min(EXHAUSTIVE_LIMIT),
                        "exhaustive middle range does not verify".into(),
                    );
                }
                None => check(false, "missing exhaustive range".into()),
            }
            check(cert.large_k.is_some(), "missing large-k data".into());
            check(cert.tail.from_k == cert.middle_end + 1, "tail does not start after the middle range".into());
        }
    }
    let valid = problems.is_empty() && cert.all_pass;
    Verification { valid, problems }
}
