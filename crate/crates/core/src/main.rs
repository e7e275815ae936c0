use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperaccel::catalog::{accelerate, verify_all, verify_identity, Export, IdentityCatalog, Outcome, VerifyReport};
use hyperaccel::exact::rational::{parse_q, to_decimal};
use hyperaccel::exact::Q;
use hyperaccel::par::{configure_threads, Exec};
use hyperaccel::recurrence::{sweep_terminating, RecurrenceCatalog};
use hyperaccel::series::{compile_pfq, compile_summand, estimate_rate, evaluate_with, EvalOptions, HyperTerm, PFQSpec};
use hyperaccel::wz::WZPair;
use hyperaccel::{Error, Result};

/// Exact hypergeometric series: evaluation, acceleration and certificate checking.
#[derive(Parser)]
#[command(name = "hyperaccel", version)]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Give up after this many terms of a single series.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    term_cap: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a series to D certified digits.
    Eval {
        /// Identity id, `pfq:a1,a2;b1;z`, or a summand in `n`.
        series: String,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        /// First index of a summand expression.
        #[arg(long, default_value_t = 0)]
        lower: i64,
    },
    /// Apply a recurrence (or a `+`-composition) M times and print the new series.
    Accel {
        route: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Also evaluate the remainder to this many digits.
        #[arg(long)]
        remainder_digits: Option<u32>,
    },
    /// Check identities against reference constants.
    Verify {
        #[arg(long, conflicts_with = "all")]
        identity: Option<String>,
        #[arg(long)]
        all: bool,
        /// Also sweep every recurrence over terminating instances.
        #[arg(long)]
        recurrences: bool,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Check a WZ certificate file.
    Certify { file: std::path::PathBuf },
    /// Estimate the convergence rate of a series near index N.
    Rate {
        series: String,
        #[arg(long, default_value_t = 200)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        lower: i64,
    },
    /// Dump the identity catalog.
    Export {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Run verification at this many digits to fill `digits_achieved`.
        #[arg(long)]
        verify_digits: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Identity id, `pfq:` spec, or summand expression.
fn resolve_series(spec: &str, lower: i64) -> Result<HyperTerm> {
    let ids = IdentityCatalog::builtin()?;
    if let Ok(rec) = ids.get(spec) {
        return rec.term();
    }
    if let Some(body) = spec.strip_prefix("pfq:") {
        let parts: Vec<&str> = body.split(';').collect();
        let [upper, lower_p, z] = parts[..] else {
            return Err(Error::Parse { pos: 4, msg: "expected pfq:a1,..;b1,..;z".into() });
        };
        let list = |s: &str| -> Result<Vec<Q>> {
            s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(parse_q).collect()
        };
        return compile_pfq(&PFQSpec::new(list(upper)?, list(lower_p)?, parse_q(z.trim())?));
    }
    compile_summand(spec, "n", lower)
}

fn print_report(r: &VerifyReport) {
    let rate = r.rate_measured.map_or("-".to_string(), |v| format!("{v:.6e}"));
    println!(
        "{:<22} {:<11} {:<8} digits {:>3}/{:<3} terms {:>8} rate {} (claimed {}{})",
        r.id,
        r.status.as_str(),
        format!("{:?}", r.outcome).to_lowercase(),
        r.digits_achieved,
        r.digits_target,
        r.terms_used,
        rate,
        r.rate_claimed,
        if r.rate_ok { "" } else { ", off by >1%" },
    );
}

/// 0 when everything passed, 1 on any failure, 3 when the only shortfall is speed.
fn summarize(reports: &[VerifyReport]) -> u8 {
    if reports.iter().any(|r| r.outcome == Outcome::Fail) {
        1
    } else if reports.iter().any(|r| r.outcome == Outcome::TooSlow) {
        3
    } else {
        0
    }
}

fn run(cli: Cli) -> Result<u8> {
    let opts = EvalOptions { term_cap: cli.term_cap, ..EvalOptions::default() };
    match cli.cmd {
        Cmd::Eval { series, digits, lower } => {
            let t = resolve_series(&series, lower)?;
            let r = evaluate_with(&t, digits, &opts)?;
            println!("{}", r.value_decimal(digits as usize));
            println!("terms {}  certified digits {}  radius {}  tail {:?}", r.terms_used, r.digits_correct.min(digits as i64 + 10), r.value.radius_sci(), r.regime);
            Ok(0)
        }
        Cmd::Accel { route, x, y, steps, remainder_digits } => {
            let recs = RecurrenceCatalog::builtin()?;
            let ids = IdentityCatalog::builtin()?;
            let mut point = vec![parse_q(&x)?];
            if let Some(y) = y {
                point.push(parse_q(&y)?);
            }
            let run = accelerate(&recs, &ids, &route, &point, steps, remainder_digits)?;
            for (j, a) in run.terms.iter().enumerate() {
                println!("a[{j}] = {a}");
            }
            println!("partial sum ~ {}", to_decimal(&run.partial_sum(), 40));
            println!("rate {}", run.rate);
            if let Some(rem) = &run.remainder {
                println!("remainder {} +- {}", to_decimal(&rem.center, 40), rem.radius_sci());
            }
            println!("identity {}", run.identity.as_deref().unwrap_or("(none in catalog)"));
            Ok(0)
        }
        Cmd::Verify { identity, all, recurrences, digits } => {
            let exec = Exec::Parallel;
            let mut code = 0;
            if recurrences {
                let recs = RecurrenceCatalog::builtin()?;
                for rec in recs.recurrences() {
                    let rep = sweep_terminating(&recs, rec, 25, 20, cli.seed, exec)?;
                    println!("{:<22} checked {:>4} failures {}", rep.id, rep.checked, rep.failures.len());
                    if !rep.passed() {
                        code = 1;
                    }
                }
            }
            let ids = IdentityCatalog::builtin()?;
            let reports = match (identity, all) {
                (Some(id), _) => vec![verify_identity(ids.get(&id)?, digits, &opts)?],
                (None, true) => verify_all(&ids, digits, &opts, exec).into_iter().collect::<Result<_>>()?,
                (None, false) if recurrences => Vec::new(),
                (None, false) => return Err(Error::Parse { pos: 0, msg: "verify needs --identity ID, --all or --recurrences".into() }),
            };
            reports.iter().for_each(print_report);
            Ok(code.max(summarize(&reports)))
        }
        Cmd::Certify { file } => {
            let text = std::fs::read_to_string(&file)?;
            let pair = WZPair::parse(&text)?;
            let recs = RecurrenceCatalog::builtin()?;
            recs.get(&pair.target)?;
            let ok = pair.check_certificate(cli.seed)?;
            println!("{}: WZ equation as rational functions: {}", pair.target, if ok { "holds" } else { "FAILS" });
            // Pointwise brute force at a random non-integer parameter value.
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let params: Vec<(String, Q)> = pair
                .params()
                .into_iter()
                .map(|v| (v, Q::new(rng.gen_range(61..=97).into(), 7.into())))
                .collect();
            let rep = pair.pointwise(10, 10, &params)?;
            println!("pointwise on [0,10]^2: {} checked, {} skipped, {} mismatches", rep.checked, rep.skipped, rep.mismatches.len());
            let mut pass = ok && rep.mismatches.is_empty();
            if pair.first.is_some() {
                let c = pair.check_sum_constant(|n| pair.f0(n, &[]), 0..=12, &[], cli.seed)?;
                match c {
                    Some(c) => println!("sum over k is constant for n in 0..=12: {c}"),
                    None => {
                        println!("sum over k is NOT constant for n in 0..=12");
                        pass = false;
                    }
                }
            }
            Ok(if pass { 0 } else { 1 })
        }
        Cmd::Rate { series, n, lower } => {
            let t = resolve_series(&series, lower)?;
            let r = estimate_rate(&t, t.first_index() + n)?;
            println!("raw {}  extrapolated {}", to_decimal(&r.raw, 12), to_decimal(&r.extrapolated, 12));
            Ok(0)
        }
        Cmd::Export { format, verify_digits } => {
            let ids = IdentityCatalog::builtin()?;
            let reports = match verify_digits {
                Some(d) => verify_all(&ids, d, &opts, Exec::Parallel).into_iter().collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            let e = Export::new(&ids, &reports)?;
            match format {
                Format::Json => println!("{}", e.to_json()),
                Format::Csv => print!("{}", e.to_csv()?),
            }
            Ok(summarize(&reports))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        configure_threads(j);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
