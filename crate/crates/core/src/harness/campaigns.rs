//! Verification campaigns. Each one compares library output against an
//! independent computation and reports every case with exact values.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::mahler::{exp_sum_decay_check, q_mahler_coeffs, FunctionModel};
use crate::norms::{
    classify, critical_values, growth_modulus, weighted_norm, NormProfile, RegularityVerdict,
};
use crate::padic::{CycloElement, CyclotomicField, PadicError};
use crate::qcalc::{beta, check_beta_lower_bound, check_corollary_bound, lambda, zq_coefficients};
use crate::rational::{fmt_q, p_pow_q, q, qi, ValuationQ, Q};
use crate::scalar::ResidueInt;
use crate::schwartz::{
    check_intertwining, fourier, linear_change, norm_growth_family, sample, AdditiveCharacter,
    SchwartzError, SchwartzFunction, SymplecticMatrix,
};
use crate::{FastField, Field};

pub const REPORT_SCHEMA: &str = "padicq.report/1";

pub const CAMPAIGNS: &[&str] = &[
    "beta-formula",
    "beta-bound",
    "cor-bound",
    "qmahler-closed-form",
    "fourier-suite",
    "intertwine-suite",
    "norm-growth",
    "growth-properties",
    "decay-example",
];

/// Every field is optional on input; unset fields take the campaign's own
/// default.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Range end for sweeps over `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    /// Number of coefficients or indices per case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    /// Random samples beyond an exhaustive range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Passing cases kept in the report; failures are always kept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_limit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case {
    pub id: String,
    pub pass: bool,
    pub values: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub campaign: String,
    pub config: CampaignConfig,
    pub total: u64,
    pub failures: u64,
    pub all_pass: bool,
    pub cases: Vec<Case>,
    pub truncated: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    #[error("unknown campaign `{0}` (known: {known})", known = CAMPAIGNS.join(", "))]
    Unknown(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Raw outcome before truncation: `total` may exceed `cases.len()` when a
/// sweep reports aggregates.
struct Outcome {
    total: u64,
    cases: Vec<Case>,
}

impl Outcome {
    fn from_cases(cases: Vec<Case>) -> Self {
        Self {
            total: cases.len() as u64,
            cases,
        }
    }
}

pub fn run_campaign(name: &str, cfg: &CampaignConfig) -> Result<Report, CampaignError> {
    let out = match name {
        "beta-formula" => beta_formula(cfg)?,
        "beta-bound" => beta_bound(cfg)?,
        "cor-bound" => cor_bound(cfg)?,
        "qmahler-closed-form" => qmahler_closed_form(cfg)?,
        "fourier-suite" => fourier_suite(cfg)?,
        "intertwine-suite" => intertwine_suite(cfg)?,
        "norm-growth" => norm_growth(cfg)?,
        "growth-properties" => growth_properties(cfg)?,
        "decay-example" => decay_example(cfg)?,
        other => return Err(CampaignError::Unknown(other.into())),
    };
    let limit = cfg.case_limit.unwrap_or(200);
    let failures = out.cases.iter().filter(|c| !c.pass).count() as u64;
    let mut kept = Vec::new();
    let mut passes = 0;
    let mut truncated = false;
    for c in out.cases {
        if !c.pass {
            kept.push(c);
        } else if passes < limit {
            passes += 1;
            kept.push(c);
        } else {
            truncated = true;
        }
    }
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        campaign: name.into(),
        config: cfg.clone(),
        total: out.total,
        failures,
        all_pass: failures == 0,
        cases: kept,
        truncated,
    })
}

fn check_primes(ps: &[u64]) -> Result<(), CampaignError> {
    match ps.iter().find(|p| !crate::padic::is_prime(**p)) {
        Some(p) => Err(CampaignError::Config(format!("{p} is not prime"))),
        None => Ok(()),
    }
}

fn primes(cfg: &CampaignConfig, default: &[u64]) -> Result<Vec<u64>, CampaignError> {
    let ps = cfg.primes.clone().unwrap_or_else(|| default.to_vec());
    check_primes(&ps)?;
    Ok(ps)
}

fn levels(cfg: &CampaignConfig, default: &[u32]) -> Result<Vec<u32>, CampaignError> {
    let ls = cfg.levels.clone().unwrap_or_else(|| default.to_vec());
    if ls.contains(&0) {
        return Err(CampaignError::Config("levels start at 1".into()));
    }
    Ok(ls)
}

fn fast_field(p: u64, level: u32) -> Result<Arc<FastField>, PadicError> {
    CyclotomicField::new(p, level, i128::max_digits(p).unwrap_or(32))
}

fn val_str(v: &ValuationQ) -> String {
    v.to_string()
}

/// `v((ζ;ζ)_n)` from the running product against `λ β_p(n)`, every
/// `1 ≤ n < p^N`.
fn beta_formula(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let mut cases = Vec::new();
    for p in primes(cfg, &[2, 3, 5])? {
        for level in levels(cfg, &[1, 2, 3])? {
            let field = fast_field(p, level)?;
            let lam = lambda(p, level);
            let zeta = CycloElement::zeta(&field);
            let one = CycloElement::one(&field);
            let mut acc = one.clone();
            let mut zi = one.clone();
            for n in 1..p.pow(level) {
                zi = &zi * &zeta;
                acc = &acc * &(&one - &zi);
                let direct = acc.valuation_checked()?;
                let b = beta(p, n).value;
                let formula = &lam * Q::from_integer(BigInt::from(b));
                cases.push(Case {
                    id: format!("p={p} N={level} n={n}"),
                    pass: direct == formula,
                    values: json!({"p": p, "N": level, "n": n, "beta": b.to_string(),
                        "valuation": fmt_q(&direct), "formula": fmt_q(&formula)}),
                });
            }
        }
    }
    Ok(Outcome::from_cases(cases))
}

/// Per-prime summary of a parallel bound sweep, plus every failing `n`.
fn sweep_summary(
    label: &str,
    p: u64,
    ns: &[u64],
    check: impl Fn(u64) -> (bool, bool, f64) + Sync,
) -> Vec<Case> {
    let results: Vec<(u64, bool, bool, f64)> = ns
        .par_iter()
        .map(|&n| {
            let (holds, fallback, slack) = check(n);
            (n, holds, fallback, slack)
        })
        .collect();
    let mut cases: Vec<Case> = results
        .iter()
        .filter(|r| !r.1)
        .map(|&(n, _, fallback, slack)| Case {
            id: format!("{label} p={p} n={n}"),
            pass: false,
            values: json!({"p": p, "n": n, "beta": beta(p, n).value.to_string(),
                "exact_fallback": fallback, "slack_lo": slack}),
        })
        .collect();
    let fallbacks = results.iter().filter(|r| r.2).count();
    let min_slack = results
        .iter()
        .filter(|r| !r.2)
        .map(|r| r.3)
        .fold(f64::INFINITY, f64::min);
    cases.push(Case {
        id: format!("{label} p={p} summary"),
        pass: cases.is_empty(),
        values: json!({"p": p, "checked": ns.len(), "from": ns.first(), "to": ns.last(),
            "exact_fallbacks": fallbacks,
            "min_interval_slack": if min_slack.is_finite() { json!(min_slack) } else { Value::Null }}),
    });
    cases
}

/// `β_p(n) ≥ n log_p(n) (p-1)/p - n p/(p-1)` for `1 ≤ n ≤ n_max`.
fn beta_bound(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let n_max = cfg.n_max.unwrap_or(1_000_000);
    let mut cases = Vec::new();
    let mut total = 0;
    for p in primes(cfg, &[2, 3, 5])? {
        let ns: Vec<u64> = (1..=n_max).collect();
        total += ns.len() as u64;
        cases.extend(sweep_summary("beta-bound", p, &ns, |n| {
            let c = check_beta_lower_bound(p, n);
            (c.holds, c.exact_fallback, c.slack_lo)
        }));
    }
    Ok(Outcome { total, cases })
}

/// `β_p(n) ≥ n log_p(n) / 4`: exhaustive on `p^8 ≤ n < 2^13`, then seeded
/// samples below `2^20`.
fn cor_bound(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let n_max = cfg.n_max.unwrap_or(1 << 13);
    let samples = cfg.samples.unwrap_or(10_000);
    let sample_top: u64 = 1 << 20;
    let mut cases = Vec::new();
    let mut total = 0;
    for p in primes(cfg, &[2])? {
        let lo = p.pow(8);
        let ex: Vec<u64> = (lo..n_max).collect();
        let lvl = |top: u64| {
            let mut l = 1;
            while p.pow(l) < top {
                l += 1;
            }
            l
        };
        let ex_level = lvl(n_max);
        total += ex.len() as u64;
        cases.extend(sweep_summary("exhaustive", p, &ex, |n| {
            check_corollary_bound(p, ex_level, n)
                .map_or((false, false, f64::NAN), |c| (c.holds, c.exact_fallback, c.slack_lo))
        }));
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ p);
        let top = sample_top.max(lo + 1);
        let mut picks: Vec<u64> = (0..samples).map(|_| rng.gen_range(lo..top)).collect();
        picks.sort_unstable();
        let s_level = lvl(top);
        total += picks.len() as u64;
        cases.extend(sweep_summary("sampled", p, &picks, |n| {
            check_corollary_bound(p, s_level, n)
                .map_or((false, false, f64::NAN), |c| (c.holds, c.exact_fallback, c.slack_lo))
        }));
    }
    Ok(Outcome { total, cases })
}

/// q-Mahler coefficients of `ζ^x` from the T-operator against the running
/// products `⟨ζ,q⟩_k`, for `q = ζ + π^j`.
fn qmahler_closed_form(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let k_max = cfg.k_max.unwrap_or(100);
    let mut cases = Vec::new();
    for p in primes(cfg, &[2, 3])? {
        for level in levels(cfg, &[2, 3])? {
            let field = Field::new(p, level, 256)?;
            let e = field.degree() as u64;
            let zeta = CycloElement::zeta(&field);
            for j in [1, 2, e + 1] {
                let q = &zeta + &CycloElement::pi_pow(&field, j);
                let direct = zq_coefficients(&zeta, &q, k_max as u64)?;
                let (pass, mismatch, last_v) = match q_mahler_coeffs(
                    &FunctionModel::exponential(zeta.clone()),
                    &q,
                    k_max,
                ) {
                    Ok(series) => {
                        let mut bad = None;
                        for (k, (a, b)) in series.coeffs.iter().zip(&direct).enumerate() {
                            // a nonzero value must be determined beyond its valuation
                                            let bv = b.valuation();
                            let ok = a.eq_at_precision(b)
                                && a.valuation() == bv
                                && (bv.is_infinite() || a.precision() > bv);
                            if !ok {
                                bad = Some(k);
                                break;
                            }
                        }
                        (
                            bad.is_none() && series.coeffs.len() == k_max + 1,
                            bad,
                            direct.last().map(|x| x.valuation()),
                        )
                    }
                    Err(err) => {
                        cases.push(Case {
                            id: format!("p={p} N={level} j={j}"),
                            pass: false,
                            values: json!({"error": err.to_string()}),
                        });
                        continue;
                    }
                };
                cases.push(Case {
                    id: format!("p={p} N={level} j={j}"),
                    pass,
                    values: json!({"p": p, "N": level, "j": j, "k_max": k_max,
                        "first_mismatch": mismatch,
                        "last_valuation": last_v.as_ref().map(val_str)}),
                });
            }
        }
    }
    Ok(Outcome::from_cases(cases))
}

fn schwartz_case(id: String, r: Result<(bool, Value), SchwartzError>) -> Case {
    match r {
        Ok((pass, values)) => Case { id, pass, values },
        Err(e) => Case {
            id,
            pass: false,
            values: json!({"error": e.to_string()}),
        },
    }
}

/// Large enough a conductor for the sampled grids: `ζ` of order `2^8`,
/// `3^5` or `p^3`.
fn schwartz_field(p: u64) -> Result<Arc<FastField>, PadicError> {
    let level = match p {
        2 => 8,
        3 => 5,
        _ => 3,
    };
    CyclotomicField::new(p, level, 12)
}

fn reflection(d: usize) -> Vec<Vec<Q>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { qi(-1) } else { qi(0) }).collect())
        .collect()
}

/// `F(F f) = f(-x)` and `ρ(h) F = F ρ([wJ, t])` on random `(f, h)`, and the
/// Fourier transforms of the lattices `p^{-n} Z_p`.
fn fourier_suite(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let trials = cfg.trials.unwrap_or(100);
    let n_max = cfg.n_max.unwrap_or(6) as i64;
    let mut cases = Vec::new();
    for p in primes(cfg, &[2])? {
        let field = schwartz_field(p)?;
        let psi = AdditiveCharacter::standard(&field);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ p);
        for (d, count) in [(1usize, trials), (2, trials.div_ceil(5))] {
            let j = SymplecticMatrix::j(d);
            for trial in 0..count {
                let f = sample::function(&mut rng, &field, d, if d == 1 { 3 } else { 1 });
                let h = sample::heisenberg(&mut rng, p, d, -1, 1);
                let r = (|| {
                    let twice = fourier(&fourier(&f, &psi)?, &psi)?;
                    let refl = linear_change(&f, &reflection(d), &psi)?;
                    let double = twice.eq_at_precision(&refl);
                    let inter = check_intertwining(&j, &h, &f, &psi)?;
                    Ok((
                        double && inter,
                        json!({"d": d, "m": f.support_exponent(), "n": f.level_exponent(),
                            "double_transform": double, "intertwining": inter}),
                    ))
                })();
                cases.push(schwartz_case(format!("p={p} d={d} trial={trial}"), r));
            }
        }
        for n in 1..=n_max {
            let r = (|| {
                let phi = SchwartzFunction::indicator(&field, 1, -n, &[qi(0)])?;
                let hat = fourier(&phi, &psi)?;
                // p^n on p^n Z_p
                let want = SchwartzFunction::indicator(&field, 1, n, &[qi(0)])?
                    .scale(&CycloElement::from_rational(&field, &p_pow_q(p, n)));
                let sup = hat.sup_norm();
                let pass = hat.eq_at_precision(&want)
                    && sup == ValuationQ::Finite(qi(n))
                    && phi.sup_norm() == ValuationQ::zero();
                Ok((pass, json!({"n": n, "sup_norm_valuation": val_str(&sup),
                    "abs_sup_norm": format!("{p}^-{n}")})))
            })();
            cases.push(schwartz_case(format!("p={p} lattice n={n}"), r));
        }
    }
    Ok(Outcome::from_cases(cases))
}

/// Intertwining identity for random `SL_2` elements and the `d = 2`
/// generators.
fn intertwine_suite(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let trials = cfg.trials.unwrap_or(50);
    let mut cases = Vec::new();
    for p in primes(cfg, &[2])? {
        let field = schwartz_field(p)?;
        let psi = AdditiveCharacter::standard(&field);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ p);
        for trial in 0..trials {
            let g = sample::sl2(&mut rng, p, 0, 0);
            let h = sample::heisenberg(&mut rng, p, 1, -1, 1);
            let f = sample::function(&mut rng, &field, 1, 2);
            let r = check_intertwining(&g, &h, &f, &psi)
                .map(|ok| (ok, json!({"g": g.to_string(), "d": 1})));
            cases.push(schwartz_case(format!("p={p} sl2 trial={trial}"), r));
        }
        let a = vec![vec![qi(1), qi(2)], vec![qi(0), q(1, 2)]];
        let s = vec![vec![q(1, 2), qi(1)], vec![qi(1), qi(0)]];
        let gens = [
            Some(SymplecticMatrix::j(2)),
            SymplecticMatrix::block_diagonal(&a).ok(),
            SymplecticMatrix::block_upper(&s).ok(),
        ];
        for g in gens.into_iter().flatten() {
            for trial in 0..trials.div_ceil(10) {
                let h = sample::heisenberg(&mut rng, p, 2, 0, 1);
                let f = sample::function(&mut rng, &field, 2, 1);
                let r = check_intertwining(&g, &h, &f, &psi)
                    .map(|ok| (ok, json!({"g": g.to_string(), "d": 2})));
                cases.push(schwartz_case(format!("p={p} d=2 g={g} trial={trial}"), r));
            }
        }
    }
    Ok(Outcome::from_cases(cases))
}

/// `T_J(1_{p^n Z_p})(0) = p^{-n}` while `‖1_{p^n Z_p}‖ = 1`.
fn norm_growth(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let n_max = cfg.n_max.unwrap_or(6) as i64;
    let mut cases = Vec::new();
    for p in primes(cfg, &[2])? {
        let field = schwartz_field(p)?;
        let psi = AdditiveCharacter::standard(&field);
        let j = SymplecticMatrix::j(1);
        for n in 0..=n_max {
            let r = norm_growth_family(&j, n, &psi).map(|g| {
                let want = CycloElement::from_rational(&field, &p_pow_q(p, -n));
                let pass = g.value_at_zero.eq_at_precision(&want)
                    && g.valuation_at_zero == ValuationQ::Finite(qi(-n))
                    && g.input_sup_norm == ValuationQ::zero();
                (pass, json!({"p": p, "n": n, "value_at_zero": format!("{p}^-{n}"),
                    "valuation_at_zero": val_str(&g.valuation_at_zero),
                    "output_sup_norm_valuation": val_str(&g.sup_norm),
                    "input_sup_norm_valuation": val_str(&g.input_sup_norm)}))
            });
            cases.push(schwartz_case(format!("p={p} n={n}"), r));
        }
    }
    Ok(Outcome::from_cases(cases))
}

fn random_profile(rng: &mut ChaCha8Rng, p: u64) -> NormProfile {
    let len = rng.gen_range(1..=12);
    let den = [1i64, 2, 3, 4, 8][rng.gen_range(0..5)];
    let ells: Vec<Q> = (0..len)
        .map(|_| q(rng.gen_range(-3 * den..=den), den))
        .collect();
    let top = ells.iter().max().cloned().expect("nonempty");
    let m_log = top + q(rng.gen_range(0..=2 * den), den);
    NormProfile { p, m_log, ells }
}

/// Direct maximum, argmax set and tail of a profile at `t`.
fn brute_scan(prof: &NormProfile, t: &Q) -> (Q, Vec<usize>, Q) {
    let vals: Vec<Q> = prof
        .ells
        .iter()
        .enumerate()
        .map(|(n, l)| l + t * qi(n as i64))
        .collect();
    let max = vals.iter().max().cloned().expect("nonempty");
    let ties = (0..vals.len()).filter(|&n| vals[n] == max).collect();
    let tail = &prof.m_log + t * qi(prof.ells.len() as i64);
    (max, ties, tail)
}

/// Growth modulus shape, critical values against a pairwise-tie oracle,
/// and the weighted norm of `(1+h)^x` at regular radii.
fn growth_properties(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let trials = cfg.trials.unwrap_or(500);
    let ps = primes(cfg, &[2])?;
    let level = 3;
    let fields: Vec<(u64, Arc<FastField>)> = ps
        .iter()
        .map(|&p| fast_field(p, level).map(|f| (p, f)))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for trial in 0..trials {
        let (p, field) = &fields[trial % fields.len()];
        let p = *p;
        let e = field.degree() as i64;
        let prof = random_profile(&mut rng, p);
        let mut problems: Vec<String> = Vec::new();
        // grid log_r = -i / (2e), i = 1..=8e
        let grid: Vec<Q> = (1..=8 * e).rev().map(|i| q(-i, 2 * e)).collect();
        let mut certified: Vec<(Q, Q)> = Vec::new();
        for t in &grid {
            let (max, _, tail) = brute_scan(&prof, t);
            match growth_modulus(&prof, t) {
                Ok(g) => {
                    if g != max || max < tail {
                        problems.push(format!("G({}) = {} vs direct {}", fmt_q(t), fmt_q(&g), fmt_q(&max)));
                    }
                    certified.push((t.clone(), g));
                }
                Err(_) if max >= tail => problems.push(format!("G({}) refused a certified value", fmt_q(t))),
                Err(_) => {}
            }
        }
        for w in certified.windows(2) {
            if w[1].1 < w[0].1 {
                problems.push(format!("G decreases at {}", fmt_q(&w[1].0)));
            }
        }
        for w in certified.windows(3) {
            let step_ok = &w[1].0 - &w[0].0 == &w[2].0 - &w[1].0;
            if step_ok && Q::from_integer(2.into()) * &w[1].1 > &w[0].1 + &w[2].1 {
                problems.push(format!("G not convex at {}", fmt_q(&w[1].0)));
            }
        }
        // every pairwise candidate, classified by brute force
        let mut oracle: Vec<Q> = Vec::new();
        for i in 0..prof.ells.len() {
            for j in i + 1..prof.ells.len() {
                let t = (&prof.ells[i] - &prof.ells[j]) / qi((j - i) as i64);
                if !t.is_negative() || oracle.contains(&t) {
                    continue;
                }
                let (max, ties, tail) = brute_scan(&prof, &t);
                if ties.len() >= 2 && max >= tail {
                    oracle.push(t);
                }
            }
        }
        oracle.sort();
        let crit = critical_values(&prof);
        if crit != oracle {
            problems.push(format!(
                "critical values {:?} vs oracle {:?}",
                crit.iter().map(fmt_q).collect::<Vec<_>>(),
                oracle.iter().map(fmt_q).collect::<Vec<_>>()
            ));
        }
        // ‖(1+h)^x‖_w with v(h) = j/e; classical coefficients h^k
        let mut regular = 0;
        for j in 1..=2 * e {
            let t = q(-j, e);
            let h = CycloElement::pi_pow(field, j as u64);
            let base = &CycloElement::one(field) + &h;
            let one = CycloElement::one(field);
            let series = match q_mahler_coeffs(&FunctionModel::exponential(base), &one, prof.ells.len() - 1) {
                Ok(s) => s,
                Err(err) => {
                    problems.push(format!("coefficients at v(h) = {j}/{e}: {err}"));
                    continue;
                }
            };
            let wn = weighted_norm(&series, &prof.ells, &prof.m_log);
            let g = growth_modulus(&prof, &t);
            match (&wn, &g) {
                (Ok(Some(w)), Ok(g)) if w > g => problems.push(format!("norm {} exceeds G = {} at {}", fmt_q(w), fmt_q(g), fmt_q(&t))),
                _ => {}
            }
            if let RegularityVerdict::Regular { .. } = classify(&prof, &t) {
                regular += 1;
                match (wn, g) {
                    (Ok(Some(w)), Ok(g)) if w == g => {}
                    (w, g) => problems.push(format!("at regular {}: norm {w:?}, G {g:?}", fmt_q(&t))),
                }
            }
        }
        cases.push(Case {
            id: format!("profile trial={trial}"),
            pass: problems.is_empty(),
            values: json!({"p": p, "M_log": fmt_q(&prof.m_log),
                "ells": prof.ells.iter().map(fmt_q).collect::<Vec<_>>(),
                "critical_values": crit.iter().map(fmt_q).collect::<Vec<_>>(),
                "certified_grid_points": certified.len(),
                "regular_radii_checked": regular,
                "problems": problems}),
        });
    }
    Ok(Outcome::from_cases(cases))
}

/// Classical Mahler coefficients of random `Σ λ_n ζ_n^x` against
/// `v(b_k) ≥ k ε_v + m_v` and `v(b_k) ≥ k ε_v - m_v`.
fn decay_example(cfg: &CampaignConfig) -> Result<Outcome, CampaignError> {
    let trials = cfg.trials.unwrap_or(100);
    let k_max = cfg.k_max.unwrap_or(50);
    let ps = primes(cfg, &[2, 3])?;
    let ls = levels(cfg, &[2, 3])?;
    let mut fields = Vec::new();
    for &p in &ps {
        for &l in &ls {
            fields.push(Field::new(p, l, 128)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for trial in 0..trials {
        let field = &fields[trial % fields.len()];
        let order = field.p().pow(field.level());
        let zeta = CycloElement::zeta(field);
        let count = rng.gen_range(1..=4);
        let mut terms = Vec::new();
        let mut exps = Vec::new();
        for _ in 0..count {
            let coeff = loop {
                let c = sample::element(&mut rng, field);
                if !c.is_zero() {
                    break c;
                }
            };
            let a = rng.gen_range(1..order);
            exps.push(a);
            terms.push((coeff, zeta.pow(a)));
        }
        let case = match exp_sum_decay_check(&terms, k_max) {
            Ok(rep) => {
                let minus_ok = match (&rep.epsilon, &rep.m) {
                    (ValuationQ::Finite(eps), ValuationQ::Finite(m)) => rep.records.iter().all(|r| {
                        let b = ValuationQ::Finite(eps * qi(r.k as i64) - m);
                        r.valuation >= b
                    }),
                    _ => false,
                };
                Case {
                    id: format!("trial={trial}"),
                    pass: rep.all_hold && minus_ok,
                    values: json!({"p": field.p(), "N": field.level(), "exponents": exps,
                        "epsilon": val_str(&rep.epsilon), "m": val_str(&rep.m),
                        "plus_form": rep.all_hold, "minus_form": minus_ok,
                        "b_valuations": rep.records.iter().take(8).map(|r| val_str(&r.valuation)).collect::<Vec<_>>()}),
                }
            }
            Err(err) => Case {
                id: format!("trial={trial}"),
                pass: false,
                values: json!({"error": err.to_string()}),
            },
        };
        cases.push(case);
    }
    Ok(Outcome::from_cases(cases))
}
