use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use immunity::checkers::{Status, Verdict};
use immunity::numberings::{pool::default_registry, Registry};
use immunity::report::Report;
use immunity::schnorr::{check_schnorr_bound, DyadicRational};

mod build;
mod spec;

#[derive(Parser)]
#[command(
    name = "immunity",
    about = "Finite-horizon immunity constructions and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a construction and write its prefixes, trace and check data.
    Build {
        /// One of delta2, bci, cofinal, ci-hi, ci-not-hi, hi-not-ci,
        /// effectivize, 2generic-witness, generic.
        name: String,
        #[command(flatten)]
        args: BuildArgs,
    },
    /// Re-verify a file written by `build`.
    Check {
        kind: CheckKind,
        #[arg(long)]
        input: PathBuf,
        /// Succeed only when every verdict is a Fail.
        #[arg(long)]
        expect_fail: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact measure of the truncated test set `U_n` over blocks `(n, M]`.
    Measure { n: u64, m: u64 },
}

#[derive(Args, Default)]
pub struct BuildArgs {
    #[arg(long)]
    stages: Option<u64>,
    #[arg(long)]
    markers: Option<u64>,
    #[arg(long)]
    index_bound: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    blocks: Option<u64>,
    #[arg(long)]
    horizon: Option<u64>,
    /// Registry file of numbering rules; defaults to the built-in pool.
    #[arg(long)]
    pool: Option<PathBuf>,
    /// Bit string for cofinal, or the start string for 2generic-witness.
    #[arg(long)]
    bits: Option<String>,
    /// Function by name; repeat for a list.
    #[arg(long = "fn")]
    fns: Vec<String>,
    /// Transformer list for generic, or `full`.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Immunity,
    Domination,
    Effective,
    All,
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_pool(path: Option<&PathBuf>) -> Result<Registry> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(text.parse()?)
        }
        None => Ok(default_registry()),
    }
}

fn check(
    kind: CheckKind,
    input: &PathBuf,
    expect_fail: bool,
    out: Option<&PathBuf>,
) -> Result<bool> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let report: Report = text
        .parse()
        .with_context(|| format!("parsing {}", input.display()))?;
    let mut verdicts: Vec<Verdict> = Vec::new();
    if matches!(kind, CheckKind::Immunity | CheckKind::All) {
        verdicts.extend(report.immunity_verdicts()?);
    }
    if matches!(kind, CheckKind::Domination | CheckKind::All) {
        verdicts.extend(report.domination_verdicts()?);
    }
    if matches!(kind, CheckKind::Effective | CheckKind::All) {
        verdicts.extend(report.effective_verdicts()?);
    }
    let text: String = verdicts.iter().map(Verdict::to_string).collect();
    write_or_print(out, &text)?;
    let fails = verdicts.iter().filter(|v| v.is_fail()).count();
    let inconclusive = verdicts
        .iter()
        .filter(|v| matches!(v.status, Status::Inconclusive(_)))
        .count();
    eprintln!(
        "{} verdicts: {} fail, {} inconclusive",
        verdicts.len(),
        fails,
        inconclusive
    );
    Ok(if expect_fail {
        fails > 0 && fails + inconclusive == verdicts.len()
    } else {
        fails == 0
    })
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Build { name, args } => {
            if !build::CONSTRUCTIONS.contains(&name.as_str()) {
                bail!(
                    "unknown construction {name:?}; expected one of {}",
                    build::CONSTRUCTIONS.join(", ")
                );
            }
            let pool = load_pool(args.pool.as_ref())?;
            let report = build::run(&name, &args, pool)?;
            write_or_print(args.out.as_ref(), &report.to_string())?;
            Ok(true)
        }
        Command::Check {
            kind,
            input,
            expect_fail,
            out,
        } => check(kind, &input, expect_fail, out.as_ref()),
        Command::Measure { n, m } => {
            let r = check_schnorr_bound(n, m)?;
            println!(
                "{} ≤ {}: {}",
                r.measure,
                DyadicRational::pow2_neg(n),
                r.holds
            );
            Ok(r.holds)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
