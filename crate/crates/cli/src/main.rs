use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use padicq::harness::{
    main_inequality, run_campaign, verify_certificate, CampaignConfig, Certificate,
    MainIneqConfig, Mode, CAMPAIGNS,
};
use padicq::mahler::{q_mahler_coeffs, series_to_json, FunctionModel};
use padicq::norms::{classify, critical_values, growth_modulus, NormProfile};
use padicq::padic::json::element_to_json;
use padicq::padic::parse::{exp_terms, parse_element, parse_expr};
use padicq::padic::{valuation_by_resultant, CyclotomicField, DEFAULT_PRECISION};
use padicq::qcalc::{
    beta, check_beta_lower_bound, lambda, poch_valuation_direct, poch_valuation_formula,
};
use padicq::rational::{fmt_q, parse_q, Q};
use padicq::schwartz::{
    check_intertwining, fourier, sample, AdditiveCharacter, SchwartzFunction, SymplecticMatrix,
};
use padicq::{Field, FastField};

#[derive(Parser)]
#[command(name = "padicq", version, about = "Exact cyclotomic p-adic computations and verification campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// The field `Q_p(ζ_{p^N})` at a working precision.
#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(short = 'p', long = "p")]
    p: u64,
    #[arg(short = 'N', long = "N")]
    level: u32,
    /// Working precision in p-adic digits.
    #[arg(short = 'P', long = "precision", default_value_t = DEFAULT_PRECISION)]
    precision: u32,
}

impl FieldArgs {
    fn field(&self) -> Result<std::sync::Arc<Field>> {
        Ok(CyclotomicField::new(self.p, self.level, self.precision)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Field elements: evaluation, valuation and JSON form.
    Element {
        #[command(subcommand)]
        cmd: ElementCmd,
    },
    /// Gaussian binomials, q-Pochhammer symbols and β_p(n).
    Qcalc {
        #[command(subcommand)]
        cmd: QcalcCmd,
    },
    /// q-Mahler expansions.
    Mahler {
        #[command(subcommand)]
        cmd: MahlerCmd,
    },
    /// Fourier transforms of locally constant functions.
    Fourier(FourierArgs),
    /// Heisenberg actions and intertwining operators.
    Heisenberg {
        #[command(subcommand)]
        cmd: HeisenbergCmd,
    },
    /// Growth moduli and critical radii of norm profiles.
    Norms {
        #[command(subcommand)]
        cmd: NormsCmd,
    },
    /// Certificates and named verifications.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Re-check a certificate from its stored rationals.
    VerifyCertificate {
        file: PathBuf,
    },
    /// Run a verification campaign and print its JSON report.
    Campaign(CampaignArgs),
}

#[derive(Subcommand)]
enum ElementCmd {
    /// Evaluate an expression in zeta, pi, p and integers.
    Eval {
        #[command(flatten)]
        field: FieldArgs,
        expr: String,
        /// Also compute the valuation through the norm map.
        #[arg(long)]
        resultant: bool,
    },
}

#[derive(Subcommand)]
enum QcalcCmd {
    /// β_p(n) for n in [from, n], as TSV: n, beta, bound, slack, verdict.
    Beta {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'n')]
        n: u64,
        #[arg(long, default_value_t = 1)]
        from: u64,
        /// Certify β_p(n) ≥ n log_p(n)(p-1)/p - np/(p-1).
        #[arg(long)]
        check_bound: bool,
        /// Print failing rows only.
        #[arg(long)]
        failures_only: bool,
    },
    /// v((ζ;ζ)_n) = λ β_p(n) for 1 ≤ n < p^N, as TSV: n, beta, formula,
    /// direct, verdict.
    PochVal {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'N', long = "N")]
        level: u32,
        /// Compare with the valuation computed in the field.
        #[arg(long)]
        verify_exact: bool,
    },
}

#[derive(Subcommand)]
enum MahlerCmd {
    /// Coefficients a_0..a_K of f in the q-Mahler basis.
    Qexpand {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        q: String,
        /// Function of x, e.g. "zeta^x" or "3*(1+pi)^x - zeta^(2)^x".
        #[arg(long)]
        f: String,
        #[arg(short = 'K', long = "K", default_value_t = 20)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct FourierArgs {
    #[arg(short = 'p', long = "p", default_value_t = 2)]
    p: u64,
    #[arg(short = 'N', long = "N", default_value_t = 8)]
    level: u32,
    #[arg(long, value_enum, default_value_t = Demo::PhiN)]
    demo: Demo,
    #[arg(long, default_value_t = 6)]
    n_max: i64,
    /// Dump the transformed tables.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    /// Indicators of p^{-n} Z_p.
    PhiN,
}

#[derive(Subcommand)]
enum HeisenbergCmd {
    /// ρ(h) T_g = T_g ρ([wg, t]) on random functions and group elements.
    CheckIntertwine {
        /// Symplectic matrix, rows separated by ';'.
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'p', long = "p", default_value_t = 2)]
        p: u64,
        #[arg(short = 'N', long = "N", default_value_t = 8)]
        level: u32,
    },
}

#[derive(Subcommand)]
enum NormsCmd {
    /// log_p G(r) and the regularity verdict at log_p r.
    Growth {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        log_r: String,
    },
    /// Critical radii as log_p r values.
    Critical {
        #[arg(long)]
        profile: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Asymptotic,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Certificate for ‖⟨ζ,q⟩_1 C_q(x,1)‖ > ‖⟨ζ,q⟩_k C_q(x,k)‖, k ≠ 1.
    MainInequality {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'N', long = "N")]
        level: u32,
        #[arg(long)]
        vh: String,
        /// Domination constant; defaults to the profile's.
        #[arg(long = "Mlog")]
        m_log: Option<String>,
        /// Profile JSON; defaults to (0, M_log).
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// v((ζ;ζ)_n) = λ β_p(n) for every 1 ≤ n < p^N.
    BetaFormula {
        #[arg(short = 'p', long = "p")]
        p: u64,
        #[arg(short = 'N', long = "N")]
        level: u32,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CampaignArgs {
    /// One of the campaign names; `list` prints them.
    name: String,
    /// JSON campaign configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<u32>>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn q_arg(s: &str) -> Result<Q> {
    parse_q(s).map_err(|e| anyhow::anyhow!("bad rational `{s}`: {e}"))
}

fn write_json(value: &Value, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display())),
        None => {
            writeln!(io::stdout().lock(), "{text}")?;
            Ok(())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn element(cmd: ElementCmd) -> Result<ExitCode> {
    let ElementCmd::Eval { field, expr, resultant } = cmd;
    let f = field.field()?;
    let a = parse_element(&expr, &f)?;
    let mut out = element_to_json(&a);
    if resultant {
        out["valuation_by_resultant"] = json!(valuation_by_resultant(&a)?.to_string());
    }
    write_json(&out, None)?;
    Ok(ExitCode::SUCCESS)
}

fn qcalc(cmd: QcalcCmd) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut ok = true;
    match cmd {
        QcalcCmd::Beta { p, n, from, check_bound, failures_only } => {
            if !padicq::padic::is_prime(p) {
                bail!("{p} is not prime");
            }
            writeln!(out, "n\tbeta\tbound\tslack\tverdict")?;
            for k in from.max(1)..=n {
                if check_bound {
                    let c = check_beta_lower_bound(p, k);
                    ok &= c.holds;
                    if failures_only && c.holds {
                        continue;
                    }
                    let verdict = match (c.holds, c.exact_fallback) {
                        (true, false) => "pass",
                        (true, true) => "pass-exact",
                        (false, _) => "fail",
                    };
                    writeln!(out, "{k}\t{}\t{:.6}\t{:.6}\t{verdict}", c.beta, c.bound_hi, c.slack_lo)?;
                } else if !failures_only {
                    writeln!(out, "{k}\t{}\t-\t-\t-", beta(p, k).value)?;
                }
            }
        }
        QcalcCmd::PochVal { p, level, verify_exact } => {
            let field: std::sync::Arc<FastField> =
                CyclotomicField::new(p, level, <i128 as padicq::scalar::ResidueInt>::max_digits(p).unwrap_or(32))?;
            writeln!(out, "# lambda = {}", fmt_q(&lambda(p, level)))?;
            writeln!(out, "n\tbeta\tformula\tdirect\tverdict")?;
            for n in 1..p.pow(level) {
                let formula = poch_valuation_formula(p, level, n)?;
                let (direct, verdict) = if verify_exact {
                    let d = poch_valuation_direct(&field, n)?;
                    let v = d == formula;
                    ok &= v;
                    (fmt_q(&d), if v { "pass" } else { "fail" })
                } else {
                    ("-".into(), "-")
                };
                writeln!(out, "{n}\t{}\t{}\t{direct}\t{verdict}", beta(p, n).value, fmt_q(&formula))?;
            }
        }
    }
    out.flush()?;
    Ok(status(ok))
}

fn mahler(cmd: MahlerCmd) -> Result<ExitCode> {
    let MahlerCmd::Qexpand { field, q, f, k, json } = cmd;
    let fld = field.field()?;
    let qv = parse_element(&q, &fld)?;
    let terms = exp_terms(&parse_expr(&f)?, &fld)?;
    let model = FunctionModel::exponential_sum(terms)?;
    let series = q_mahler_coeffs(&model, &qv, k)?;
    if json {
        write_json(&series_to_json(&series), None)?;
    } else {
        println!("k\tvaluation");
        for (i, a) in series.coeffs.iter().enumerate() {
            println!("{i}\t{}", a.valuation());
        }
        match &series.tail {
            Some(t) => println!("# v(a_k) >= {t} for k > {k}"),
            None => println!("# tail unknown"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fourier_demo(args: FourierArgs) -> Result<ExitCode> {
    let Demo::PhiN = args.demo;
    let field: std::sync::Arc<FastField> = CyclotomicField::new(args.p, args.level, 12)?;
    let psi = AdditiveCharacter::standard(&field);
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=args.n_max {
        let phi = SchwartzFunction::indicator(&field, 1, -n, &[Q::from_integer(BigInt::from(0))])?;
        let hat = fourier(&phi, &psi)?;
        let sup = hat.sup_norm();
        ok &= sup == padicq::ValuationQ::Finite(Q::from_integer(BigInt::from(n)));
        let mut row = json!({
            "n": n,
            "input_sup_norm_valuation": phi.sup_norm().to_string(),
            "sup_norm_valuation": sup.to_string(),
            "sup_norm": format!("{}^-{n}", args.p),
        });
        if args.json {
            row["transform"] = hat.to_json();
        } else {
            println!("n = {n}: |F(phi_n)|_sup = {}^-{n} (valuation {sup})", args.p);
        }
        rows.push(row);
    }
    if args.json {
        write_json(&json!({"demo": "phi-n", "p": args.p, "N": args.level, "rows": rows}), None)?;
    }
    Ok(status(ok))
}

fn heisenberg(cmd: HeisenbergCmd) -> Result<ExitCode> {
    let HeisenbergCmd::CheckIntertwine { g, trials, seed, p, level } = cmd;
    let g = SymplecticMatrix::parse(&g)?;
    let d = g.dim();
    let field: std::sync::Arc<FastField> = CyclotomicField::new(p, level, 12)?;
    let psi = AdditiveCharacter::standard(&field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let h = sample::heisenberg(&mut rng, p, d, -1, 1);
        let f = sample::function(&mut rng, &field, d, if d == 1 { 2 } else { 1 });
        if !check_intertwining(&g, &h, &f, &psi)? {
            failures.push(trial);
        }
    }
    write_json(
        &json!({"g": g.to_string(), "p": p, "N": level, "trials": trials, "seed": seed,
            "failures": failures, "all_pass": failures.is_empty()}),
        None,
    )?;
    Ok(status(failures.is_empty()))
}

fn norms(cmd: NormsCmd) -> Result<ExitCode> {
    match cmd {
        NormsCmd::Growth { profile, log_r } => {
            let prof: NormProfile = read_json(&profile)?;
            prof.validate()?;
            let t = q_arg(&log_r)?;
            let verdict = classify(&prof, &t);
            let g = growth_modulus(&prof, &t);
            let out = json!({
                "log_r": fmt_q(&t),
                "growth": g.as_ref().map(fmt_q).ok(),
                "error": g.as_ref().err().map(|e| e.to_string()),
                "classification": verdict,
            });
            write_json(&out, None)?;
            Ok(status(g.is_ok()))
        }
        NormsCmd::Critical { profile } => {
            let prof: NormProfile = read_json(&profile)?;
            prof.validate()?;
            let crit: Vec<String> = critical_values(&prof).iter().map(fmt_q).collect();
            write_json(&json!({"critical_log_r": crit}), None)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verify(cmd: VerifyCmd) -> Result<ExitCode> {
    match cmd {
        VerifyCmd::MainInequality { mode, p, level, vh, m_log, profile, k_max, samples, seed, output } => {
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Asymptotic => Mode::Asymptotic,
            };
            let v_h = q_arg(&vh)?;
            let m = m_log.as_deref().map(q_arg).transpose()?;
            let prof = match (profile, m) {
                (Some(path), m) => {
                    let prof: NormProfile = read_json(&path)?;
                    if let Some(m) = m {
                        if m != prof.m_log {
                            bail!("--Mlog {} differs from the profile's M_log {}", fmt_q(&m), fmt_q(&prof.m_log));
                        }
                    }
                    prof
                }
                (None, Some(m)) => NormProfile { p, m_log: m.clone(), ells: vec![Q::from_integer(BigInt::from(0)), m] },
                (None, None) => bail!("give --profile or --Mlog"),
            };
            let cfg = MainIneqConfig { p, level, v_h, profile: prof, mode, k_max, samples, seed };
            match main_inequality(&cfg) {
                Ok(cert) => {
                    let check = verify_certificate(&cert);
                    write_json(&serde_json::to_value(&cert)?, output.as_deref())?;
                    eprintln!(
                        "{} records, log G = {}, all pass: {}, reverified: {}",
                        cert.records.len(),
                        fmt_q(&cert.growth),
                        cert.all_pass,
                        check.valid
                    );
                    Ok(status(cert.all_pass && check.valid))
                }
                Err(e) => {
                    eprintln!("main inequality not certified: {e}");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        VerifyCmd::BetaFormula { p, level, output } => {
            let cfg = CampaignConfig {
                primes: Some(vec![p]),
                levels: Some(vec![level]),
                case_limit: Some(usize::MAX),
                ..Default::default()
            };
            let rep = run_campaign("beta-formula", &cfg)?;
            write_json(&serde_json::to_value(&rep)?, output.as_deref())?;
            Ok(status(rep.all_pass))
        }
    }
}

fn campaign(args: CampaignArgs) -> Result<ExitCode> {
    if args.name == "list" {
        for c in CAMPAIGNS {
            println!("{c}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let mut cfg: CampaignConfig = match &args.config {
        Some(path) => read_json(path)?,
        None => CampaignConfig::default(),
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.trials = args.trials.or(cfg.trials);
    cfg.primes = args.primes.or(cfg.primes);
    cfg.levels = args.levels.or(cfg.levels);
    cfg.n_max = args.n_max.or(cfg.n_max);
    let rep = run_campaign(&args.name, &cfg)?;
    write_json(&serde_json::to_value(&rep)?, args.output.as_deref())?;
    eprintln!("{}: {} checks, {} failures", rep.campaign, rep.total, rep.failures);
    Ok(status(rep.all_pass))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Element { cmd } => element(cmd),
        Command::Qcalc { cmd } => qcalc(cmd),
        Command::Mahler { cmd } => mahler(cmd),
        Command::Fourier(args) => fourier_demo(args),
        Command::Heisenberg { cmd } => heisenberg(cmd),
        Command::Norms { cmd } => norms(cmd),
        Command::Verify { cmd } => verify(cmd),
        Command::VerifyCertificate { file } => {
            let cert: Certificate = read_json(&file)?;
            let v = verify_certificate(&cert);
            write_json(&serde_json::to_value(&v)?, None)?;
            Ok(status(v.valid))
        }
        Command::Campaign(args) => campaign(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
