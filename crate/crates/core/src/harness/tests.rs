use super::*;
use crate::rational::{q, qi};

fn exact_cfg() -> MainIneqConfig {
    MainIneqConfig::with_default_profile(2, 6, q(1, 16), q(1, 8), Mode::Exact)
}

fn record(cert: &Certificate, k: u64) -> &KRecord {
    cert.records.iter().find(|r| r.k == k).expect("record present")
}

#[test]
fn exact_small_certificate() {
    let cert = main_inequality_exact(&exact_cfg()).unwrap();
    assert!(cert.all_pass);
    assert_eq!(cert.growth, q(1, 16));
    assert_eq!(cert.lambda, q(1, 32));
    assert_eq!(cert.regular_index, 1);
    // v_h / 2 / λ = 1
    assert_eq!(cert.middle_end, 1);
    let r0 = record(&cert, 0);
    assert_eq!((r0.kind, r0.bound.clone()), (RecordKind::Base, qi(0)));
    let r1 = record(&cert, 1);
    assert_eq!(r1.valuation, Some(q(1, 32)));
    assert_eq!(r1.bound, q(1, 16));
    // v(ζ-1) + v(ζ-q) = 1/32 + 1/16
    let r2 = record(&cert, 2);
    assert_eq!(r2.valuation, Some(q(3, 32)));
    assert_eq!(r2.bound, q(1, 32));
    // v(ζ - q^2) = 1/32
    let r3 = record(&cert, 3);
    assert_eq!(r3.valuation, Some(q(4, 32)));
    assert_eq!(r3.bound, qi(0));
    assert_eq!(cert.records.len(), 65);
    assert_eq!(cert.tail.from_k, 65);
    assert!(verify_certificate(&cert).valid);
}

#[test]
fn certificate_json_round_trip() {
    let cert = main_inequality_exact(&exact_cfg()).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&back).valid);
}

#[test]
fn verifier_rejects_tampering() {
    let cert = main_inequality_exact(&exact_cfg()).unwrap();
    let mut bad = cert.clone();
    bad.records[2].bound = q(1, 8);
    assert!(!verify_certificate(&bad).valid);
    let mut bad = cert.clone();
    bad.growth = q(1, 4);
    assert!(!verify_certificate(&bad).valid);
    let mut bad = cert.clone();
    bad.records.remove(5);
    assert!(!verify_certificate(&bad).valid);
    let mut bad = cert;
    bad.records[4].valuation = Some(q(1, 32));
    assert!(!verify_certificate(&bad).valid);
}

#[test]
fn precondition_failures_are_named() {
    let mut cfg = exact_cfg();
    cfg.v_h = q(1, 64);
    let err = main_inequality_exact(&cfg).unwrap_err();
    assert!(matches!(&err, CertError::Condition { name, .. } if name.contains("zeta")));
    let mut cfg = exact_cfg();
    cfg.v_h = q(2, 1);
    assert!(matches!(main_inequality_exact(&cfg), Err(CertError::Condition { .. })));
    // constant profile: G(s) = 0
    let mut cfg = exact_cfg();
    cfg.profile.ells = vec![qi(0), qi(0)];
    cfg.profile.m_log = qi(0);
    assert!(main_inequality_exact(&cfg).is_err());
    // v_h e not integral
    let mut cfg = exact_cfg();
    cfg.v_h = q(3, 64);
    cfg.profile.ells = vec![qi(0), q(1, 8)];
    assert!(matches!(main_inequality_exact(&cfg), Err(CertError::Precondition { .. })));
}

#[test]
fn exact_failure_reports_k() {
    // a large domination constant defeats the k = 2 bound
    let mut cfg = exact_cfg();
    cfg.profile.m_log = q(1, 2);
    cfg.profile.ells = vec![qi(0), q(1, 8), qi(0), qi(0), qi(0), qi(0), qi(0), qi(0)];
    match main_inequality_exact(&cfg) {
        Err(CertError::Inequality { k, .. }) => assert_eq!(k, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn asymptotic_boundary_example() {
    let cfg = MainIneqConfig {
        samples: Some(200),
        seed: 3,
        ..MainIneqConfig::with_default_profile(2, 48, q(1, 32), q(1, 16), Mode::Asymptotic)
    };
    let cert = main_inequality_asymptotic(&cfg).unwrap();
    let alpha = crate::rational::p_pow_q(2, 40);
    let c2 = &cert.conditions[cert.conditions.len() - 2];
    assert_eq!(c2.lhs, alpha);
    let c3 = cert.conditions.last().unwrap();
    // (λ/4) α log_2 α = 2^-9 · 40 = 5/64 = M_log + v_h / 2
    assert_eq!(c3.relation, Relation::GePPower);
    assert_eq!(c3.rhs, qi(40));
    assert!(c3.holds);
    let large = cert.large_k.as_ref().unwrap();
    assert_eq!(large.m, 1 << 40);
    // β_2(2^40) = 2^40 + 40 · 2^39
    assert_eq!(large.beta_m, (21u128 << 40).to_string());
    assert_eq!(large.poch_valuation, q(21, 128));
    assert_eq!(cert.middle_end, 1 << 41);
    let ex = cert.exhaustive.as_ref().unwrap();
    assert_eq!((ex.from, ex.to), (2, EXHAUSTIVE_LIMIT));
    // k = 2: λ + v_h - λ - 2λ
    let r2 = record(&cert, 2);
    assert_eq!(r2.ratio, Some(q(1, 32) - q(2, 1 << 47)));
    // the index 2^20 sits in the middle range here
    let r = cert.records.iter().find(|r| r.k == 1 << 20).unwrap();
    assert_eq!(r.kind, RecordKind::Middle);
    assert!(cert.records.iter().any(|r| r.kind == RecordKind::Large && r.k == 1 << 48));
    assert!(verify_certificate(&cert).valid);
}

#[test]
fn asymptotic_conditions_fail_below_threshold() {
    let cfg = MainIneqConfig::with_default_profile(2, 47, q(1, 32), q(1, 16), Mode::Asymptotic);
    match main_inequality_asymptotic(&cfg) {
        Err(CertError::Condition { name, .. }) => assert!(name.contains("log_p")),
        other => panic!("{other:?}"),
    }
    let cfg = MainIneqConfig::with_default_profile(2, 16, q(1, 32), q(1, 16), Mode::Asymptotic);
    assert!(matches!(
        main_inequality_asymptotic(&cfg),
        Err(CertError::Condition { name, .. }) if name.contains("p^8")
    ));
}

#[test]
fn modes_agree_on_middle_range() {
    // p = 2, N = 8, v_h = 1/8: middle range k <= 8
    let cfg = MainIneqConfig {
        k_max: Some(40),
        ..MainIneqConfig::with_default_profile(2, 8, q(1, 8), q(1, 4), Mode::Exact)
    };
    let cert = main_inequality_exact(&cfg).unwrap();
    assert_eq!(cert.middle_end, 8);
    let lam = cert.lambda.clone();
    for k in 2..=8u64 {
        let r = record(&cert, k);
        let formula = super::certificate::tests_support::middle(&lam, &cfg.v_h, 2, k);
        assert_eq!(r.ratio.as_ref(), Some(&formula), "k = {k}");
        assert!(formula >= q(1, 16));
    }
    assert!(verify_certificate(&cert).valid);
}

#[test]
fn exact_certificates_across_primes() {
    for (p, n, vh, m) in [(3u64, 3u32, q(1, 3), q(1, 2)), (5, 2, q(1, 5), q(1, 4))] {
        let cfg = MainIneqConfig::with_default_profile(p, n, vh, m, Mode::Exact);
        let cert = main_inequality_exact(&cfg).unwrap();
        assert!(verify_certificate(&cert).valid, "p = {p}");
    }
}

#[test]
fn campaigns_are_deterministic() {
    let cfg = CampaignConfig {
        trials: Some(6),
        seed: 11,
        ..Default::default()
    };
    for name in ["fourier-suite", "growth-properties", "decay-example"] {
        let a = run_campaign(name, &cfg).unwrap();
        let b = run_campaign(name, &cfg).unwrap();
        assert!(a.all_pass, "{name}: {:?}", a.cases.iter().find(|c| !c.pass));
        assert_eq!(serde_json::to_value(&a).unwrap(), serde_json::to_value(&b).unwrap());
    }
}

#[test]
fn small_campaigns_pass() {
    let cfg = CampaignConfig {
        primes: Some(vec![2, 3]),
        levels: Some(vec![1, 2]),
        n_max: Some(2000),
        k_max: Some(20),
        trials: Some(4),
        samples: Some(50),
        case_limit: Some(3),
        ..Default::default()
    };
    for name in CAMPAIGNS {
        let cfg = match *name {
            "cor-bound" => CampaignConfig {
                primes: Some(vec![2]),
                n_max: Some(1024),
                ..cfg.clone()
            },
            "fourier-suite" | "norm-growth" => CampaignConfig {
                n_max: Some(4),
                ..cfg.clone()
            },
            _ => cfg.clone(),
        };

        let rep = run_campaign(name, &cfg).unwrap();
        assert!(rep.all_pass, "{name}: {:?}", rep.cases.iter().find(|c| !c.pass));
        assert!(rep.cases.len() <= 3);
        assert_eq!(rep.schema, REPORT_SCHEMA);
    }
    let rep = run_campaign("beta-formula", &cfg).unwrap();
    // p^N - 1 cases per field
    assert_eq!(rep.total, 1 + 3 + 2 + 8);
    assert!(rep.truncated);
    assert!(matches!(run_campaign("nope", &cfg), Err(CampaignError::Unknown(_))));
    let bad = CampaignConfig {
        primes: Some(vec![4]),
        ..Default::default()
    };
    assert!(matches!(run_campaign("beta-formula", &bad), Err(CampaignError::Config(_))));
}

#[test]
fn vanishing_products_give_lower_bounds() {
    // p = 2, N = 2: q = ζ + π^2 = ζ^3, so ⟨ζ,q⟩_k = 0 from k = 4 on
    let cfg = MainIneqConfig::with_default_profile(2, 2, qi(1), q(3, 2), Mode::Exact);
    let cert = main_inequality_exact(&cfg).unwrap();
    assert!(!record(&cert, 3).valuation_is_lower_bound);
    assert!(record(&cert, 4).valuation_is_lower_bound);
    assert!(record(&cert, 4).holds);
    assert!(verify_certificate(&cert).valid);
}
