//! Command-line frontend: evaluate functionals on sequence files, run the
//! randomized verification suites, print FKP coefficient tables, and sweep
//! sharpness ratios.
//!
//! Exit codes: 0 = pass, 1 = certified violation, 2 = input error,
//! 3 = inconclusive after retries.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hardylab::error::Error;
use hardylab::functionals::{
    f1_improved, f1_terms_exact, f2_improved, f2_terms_exact, fkp_improved_lhs, fkp_lhs,
    hardy_classical_lhs, power_weighted_norm, uncertainty_sides, Ctx, UncertaintyBranch,
};
use hardylab::inequalities::{run_suite, GeneratorKind, GeneratorSpec, CHECK_NAMES};
use hardylab::num::{parse_rat, rat_int, Rat, MIN_PREC};
use hardylab::report::{sequence_from_csv, sequence_from_json, FunctionalReport};
use hardylab::seqcore::Sequence;
use hardylab::series::vp_coefficients;
use hardylab::sharpness::{default_grid, ratio_sweep};
use hardylab::weights::WeightSpec;

#[derive(Parser)]
#[command(name = "hardylab", version, about = "Verification workbench for improved discrete Hardy inequalities")]
struct Cli {
    /// Working precision in bits (≥ 53); overrides HARDYLAB_PRECISION.
    #[arg(long, global = true)]
    precision: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a functional on a sequence file with a certified enclosure.
    Eval(EvalArgs),
    /// Run randomized inequality suites.
    Verify(VerifyArgs),
    /// Print the FKP weight series coefficients c_l.
    Coeffs(CoeffsArgs),
    /// Sweep sharpness ratios over the near-extremal family.
    Sharpness(SharpnessArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// hardy | grad | f1 | f2 | fkp | fkp-improved | uncertainty
    #[arg(long)]
    functional: String,
    #[arg(long)]
    p: String,
    /// Input sequence file (.json with {"values": [...]} or .csv "index,value").
    #[arg(long)]
    input: PathBuf,
    /// Weight for f1: linear | power:BETA | path to tabulated JSON.
    #[arg(long, default_value = "linear")]
    weight: String,
    /// Series truncation L for fkp-improved (even).
    #[arg(long, default_value_t = 20)]
    l: u32,
    /// Prefix-branch truncation for uncertainty.
    #[arg(long, default_value_t = 1000)]
    truncation: u64,
    /// Exact rational mode for the finite part (integer p only).
    #[arg(long)]
    exact: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// "all" or comma-separated check names (lemma21, lemma22, prop31,
    /// thm32, thm33, chain, thm35, thm36, thm41).
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 100)]
    cases: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Comma-separated p values (rationals or decimals).
    #[arg(long, default_value = "1.1,1.5,2,2.5,3,5")]
    p_grid: String,
    /// dense_uniform | sparse | signed_integer | heavy_tail | adversarial_sign
    #[arg(long, default_value = "signed_integer")]
    generator: String,
    #[arg(long, default_value_t = 30)]
    max_support: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 20)]
    l: u32,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SharpnessArgs {
    /// hardy | f1 | f2
    #[arg(long, default_value = "hardy")]
    functional: String,
    #[arg(long, default_value = "2")]
    p: String,
    /// Semicolon-separated epsilon:N pairs, e.g. "1:100;0.1:1000".
    /// Defaults to the standard 5×5 grid.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prec = match resolve_precision(cli.precision) {
        Ok(p) => p,
        Err(e) => return input_error(&e),
    };
    let result = match &cli.command {
        Command::Eval(args) => cmd_eval(args, prec),
        Command::Verify(args) => cmd_verify(args, prec),
        Command::Coeffs(args) => cmd_coeffs(args, prec),
        Command::Sharpness(args) => cmd_sharpness(args, prec),
    };
    match result {
        Ok(code) => code,
        Err(e) => input_error(&e),
    }
}

fn input_error(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn resolve_precision(flag: Option<u32>) -> Result<u32, Error> {
    let prec = match flag {
        Some(p) => p,
        None => match std::env::var("HARDYLAB_PRECISION") {
            Ok(s) => s
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::Input(format!("bad HARDYLAB_PRECISION '{s}'")))?,
            Err(_) => 128,
        },
    };
    if prec < MIN_PREC {
        return Err(Error::Input(format!(
            "precision must be at least {MIN_PREC} bits, got {prec}"
        )));
    }
    Ok(prec)
}

fn read_sequence(path: &PathBuf) -> Result<Sequence, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Ok(Sequence::zero());
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => sequence_from_csv(&text),
        Some("json") => sequence_from_json(&text),
        _ => sequence_from_json(&text).or_else(|_| sequence_from_csv(&text)),
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn integer_p(p: &Rat) -> Option<u32> {
    if *p.denom() == 1 {
        p.numer().to_u32()
    } else {
        None
    }
}

fn cmd_eval(args: &EvalArgs, prec: u32) -> Result<ExitCode, Error> {
    let p = parse_rat(&args.p)?;
    let seq = read_sequence(&args.input)?;
    let ctx = Ctx::new(prec);
    let window = seq.support() as u64;
    let exact_p = if args.exact {
        let ip = integer_p(&p).filter(|ip| *ip >= 2).ok_or_else(|| {
            Error::Input(format!("exact mode requires an integer p ≥ 2, got {p}"))
        })?;
        Some(ip)
    } else {
        None
    };
    let mut reports: Vec<FunctionalReport> = Vec::new();
    match args.functional.as_str() {
        "hardy" => {
            let v = hardy_classical_lhs(&ctx, &seq, &p)?;
            reports.push(FunctionalReport::new(
                "hardy", &p, &v, window,
                "|S(N)|^p zeta(p, N+1)", prec,
            ));
        }
        "grad" => {
            let v = power_weighted_norm(&ctx, &seq, &p, 0)?;
            reports.push(FunctionalReport::new("grad", &p, &v, window, "none (finite sum)", prec));
        }
        "f1" => {
            let w = WeightSpec::parse(&args.weight)?;
            let v = f1_improved(&ctx, &seq, &p, &w)?;
            let mut r = FunctionalReport::new(
                "f1", &p, &v, window,
                "(max|S|)^p zeta(beta p, N+1)", prec,
            );
            if let Some(ip) = exact_p {
                if matches!(w, WeightSpec::Linear) {
                    let finite: Rat = f1_terms_exact(&seq, ip).iter().sum();
                    r = r.with_finite_exact(&finite);
                } else {
                    return Err(Error::Input(
                        "exact mode for f1 supports the linear weight only".into(),
                    ));
                }
            }
            reports.push(r);
        }
        "f2" => {
            let v = f2_improved(&ctx, &seq, &p, 0)?;
            let mut r = FunctionalReport::new(
                "f2", &p, &v, window,
                "(max|psi|)^p zeta(p, N+1)", prec,
            );
            if let Some(ip) = exact_p {
                let finite: Rat = f2_terms_exact(&seq, ip, 0).iter().sum();
                r = r.with_finite_exact(&finite);
            }
            reports.push(r);
        }
        "fkp" => {
            if args.exact {
                return Err(Error::Input(
                    "exact mode cannot evaluate the irrational FKP weight".into(),
                ));
            }
            let v = fkp_lhs(&ctx, &seq, &p)?;
            reports.push(FunctionalReport::new(
                "fkp", &p, &v, window,
                "|S(N)|^p series-bounded v_p tail", prec,
            ));
        }
        "fkp-improved" => {
            let ip = integer_p(&p).filter(|ip| *ip >= 2).ok_or_else(|| {
                Error::Input(format!("fkp-improved requires an integer p ≥ 2, got {p}"))
            })?;
            if args.l % 2 != 0 {
                return Err(Error::Input(format!("L must be even, got {}", args.l)));
            }
            let v = fkp_improved_lhs(&ctx, &seq, ip, args.l)?;
            reports.push(FunctionalReport::new(
                "fkp-improved", &p, &v, window,
                "coefficient-tail remainder in upper endpoint", prec,
            ));
        }
        "uncertainty" => {
            let (sl, sr) = uncertainty_sides(&ctx, &seq, &p, UncertaintyBranch::Suffix, args.truncation)?;
            let (pl, pr) = uncertainty_sides(&ctx, &seq, &p, UncertaintyBranch::Prefix, args.truncation)?;
            reports.push(FunctionalReport::new(
                "uncertainty-suffix-lhs", &p, &sl, window, "none (finite sum)", prec,
            ));
            reports.push(FunctionalReport::new(
                "uncertainty-suffix-rhs", &p, &sr, window, "none (finite sum)", prec,
            ));
            reports.push(FunctionalReport::new(
                "uncertainty-prefix-lhs", &p, &pl, args.truncation, "truncated", prec,
            ));
            reports.push(FunctionalReport::new(
                "uncertainty-prefix-rhs", &p, &pr, args.truncation, "truncated", prec,
            ));
        }
        other => {
            return Err(Error::Input(format!(
                "unknown functional '{other}' (hardy, grad, f1, f2, fkp, fkp-improved, uncertainty)"
            )))
        }
    }
    let text = serde_json::to_string_pretty(&reports).unwrap();
    emit(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs, prec: u32) -> Result<ExitCode, Error> {
    let checks: Vec<String> = if args.suite == "all" {
        CHECK_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        args.suite.split(',').map(|s| s.trim().to_string()).collect()
    };
    let p_grid: Vec<Rat> = args
        .p_grid
        .split(',')
        .map(|s| parse_rat(s.trim()))
        .collect::<Result<_, _>>()?;
    let gen = GeneratorSpec::new(
        GeneratorKind::parse(&args.generator)?,
        args.max_support,
        args.seed,
    );
    let report = run_suite(&gen, &p_grid, &checks, args.cases, prec)?;
    let text = serde_json::to_string_pretty(&report).unwrap();
    emit(&args.output, &text)?;
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn cmd_coeffs(args: &CoeffsArgs, prec: u32) -> Result<ExitCode, Error> {
    let p = parse_rat(&args.p)?;
    let ip = integer_p(&p).filter(|ip| *ip >= 2).ok_or_else(|| {
        Error::Input(format!("coeffs requires an integer p ≥ 2, got {p}"))
    })?;
    let table = vp_coefficients(ip, args.l)?;
    // c_0 must equal ((p−1)/p)^p as an exact rational identity
    let base = Rat::from((ip as i64 - 1, ip as i64));
    let mut c0_want = rat_int(1);
    for _ in 0..ip {
        c0_want *= &base;
    }
    let c0_identity = table.coefficient(0) == Some(&c0_want);
    let body = serde_json::json!({
        "p": ip,
        "max_l": args.l,
        "c0_identity": c0_identity,
        "nonpositive_even": table.nonpositive_even,
        "rows": table.rows(prec),
    });
    emit(&args.output, &serde_json::to_string_pretty(&body).unwrap())?;
    if !c0_identity {
        eprintln!("error: c_0 does not match ((p-1)/p)^p");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sharpness(args: &SharpnessArgs, prec: u32) -> Result<ExitCode, Error> {
    let p = parse_rat(&args.p)?;
    let grid = match &args.grid {
        None => default_grid(),
        Some(text) => {
            let mut out = Vec::new();
            for part in text.split(';') {
                let (eps, n) = part.split_once(':').ok_or_else(|| {
                    Error::Input(format!("bad grid entry '{part}' (expected eps:N)"))
                })?;
                let n: u64 = n.trim().parse().map_err(|_| {
                    Error::Input(format!("bad grid N '{}'", n.trim()))
                })?;
                out.push((parse_rat(eps.trim())?, n));
            }
            out
        }
    };
    let sweep = ratio_sweep(&args.functional, &p, &grid, prec)?;
    emit(&args.output, sweep.to_csv().trim_end())?;
    if sweep.certified_exceedance() {
        eprintln!("error: certified ratio above 1 — inconsistency");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
