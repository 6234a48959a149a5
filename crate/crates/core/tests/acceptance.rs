//! Acceptance suite: one PASS/FAIL line per criterion, each within its time
//! limit. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use padicq::harness::{
    main_inequality_exact, run_campaign, verify_certificate, CampaignConfig, MainIneqConfig, Mode,
    Report,
};
use padicq::rational::q;

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_report(r: Result<Report, impl std::fmt::Display>) -> Outcome {
    match r {
        Ok(rep) => {
            let first = rep.cases.iter().find(|c| !c.pass);
            Outcome {
                pass: rep.all_pass,
                detail: match first {
                    Some(c) => format!("{} of {} failed, first {}: {}", rep.failures, rep.total, c.id, c.values),
                    None => format!("{} checks", rep.total),
                },
            }
        }
        Err(e) => Outcome {
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn campaign(name: &str, cfg: CampaignConfig) -> Outcome {
    from_report(run_campaign(name, &cfg))
}

fn certificate() -> Outcome {
    let cfg = MainIneqConfig::with_default_profile(2, 6, q(1, 16), q(1, 8), Mode::Exact);
    match main_inequality_exact(&cfg) {
        Ok(cert) => {
            let text = serde_json::to_string(&cert).expect("serializable");
            let back = serde_json::from_str(&text).expect("round trip");
            let v = verify_certificate(&back);
            let records_pass = cert.records.iter().all(|r| r.holds);
            Outcome {
                pass: cert.all_pass && records_pass && v.valid,
                detail: format!(
                    "{} records, log G = {}, tail from k = {}, reverification {}",
                    cert.records.len(),
                    padicq::rational::fmt_q(&cert.growth),
                    cert.tail.from_k,
                    if v.valid { "ok".into() } else { v.problems.join("; ") }
                ),
            }
        }
        Err(e) => Outcome {
            pass: false,
            detail: e.to_string(),
        },
    }
}

type Criterion<'a> = (&'static str, u64, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let seeded = |trials: usize| CampaignConfig {
        trials: Some(trials),
        seed: 7,
        ..Default::default()
    };
    let criteria: Vec<Criterion> = vec![
        ("beta formula exactness", 60, Box::new(|| campaign("beta-formula", CampaignConfig::default()))),
        ("beta lower bound", 60, Box::new(|| campaign("beta-bound", CampaignConfig::default()))),
        ("corollary bound", 30, Box::new(|| campaign("cor-bound", seeded(0)))),
        ("q-Mahler closed form", 120, Box::new(|| campaign("qmahler-closed-form", CampaignConfig::default()))),
        ("Fourier suite", 120, Box::new(move || campaign("fourier-suite", seeded(100)))),
        ("norm-growth witness", 30, Box::new(|| campaign("norm-growth", CampaignConfig::default()))),
        ("main-inequality exact certificate", 60, Box::new(certificate)),
        ("growth-modulus properties", 60, Box::new(move || campaign("growth-properties", seeded(500)))),
        ("decay example", 30, Box::new(move || campaign("decay-example", seeded(100)))),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {} ({name}): {:.2}s / {limit}s{} - {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64(),
            if in_time { "" } else { " (over time)" },
            out.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
