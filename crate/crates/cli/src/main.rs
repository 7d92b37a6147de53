use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use resym_cli::json::Budgets;
use resym_cli::outcome::{self, exit_code, precondition_report, Usage};
use resym_cli::scan::{self, ScanConfig, ScanKind};
use resym_cli::solver::Solver;
use resym_cli::{open_cache, verify};
use resym_core::magnus::{self, Word};
use resym_core::{nilgroup, Error as CoreError};

/// Legendre, Rédei and fourth multiple residue symbols with certificates.
#[derive(Parser)]
#[command(name = "resym", version)]
struct Cli {
    /// Largest z tried for x² - p1y² = p2z² (decimal or B^E).
    #[arg(long, global = true, value_parser = parse_budget)]
    z_budget: Option<BigInt>,
    /// Largest coordinate height tried for the relative conic.
    #[arg(long, global = true)]
    height_budget: Option<u64>,
    /// Neither read nor write the solution cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// (a/p) with its Euler-criterion certificate.
    Legendre {
        #[arg(value_parser = parse_int, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(value_parser = parse_int)]
        p: BigInt,
    },
    /// The triple symbol [p1,p2,p3].
    Redei {
        #[arg(value_parser = parse_int)]
        p1: BigInt,
        #[arg(value_parser = parse_int)]
        p2: BigInt,
        #[arg(value_parser = parse_int)]
        p3: BigInt,
    },
    /// The fourth multiple residue symbol [p1,p2,p3,p4].
    Quad {
        #[arg(value_parser = parse_int)]
        p1: BigInt,
        #[arg(value_parser = parse_int)]
        p2: BigInt,
        #[arg(value_parser = parse_int)]
        p3: BigInt,
        #[arg(value_parser = parse_int)]
        p4: BigInt,
    },
    /// Emit one JSON line per qualifying tuple with entries below the bound.
    Scan {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        bound: u64,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        p1: Option<u64>,
        #[arg(long)]
        p2: Option<u64>,
        #[arg(long)]
        p3: Option<u64>,
        /// Stop after this many lines.
        #[arg(long)]
        limit: Option<usize>,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute and cross-check every line of a corpus.
    VerifyCorpus {
        file: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Mod-2 Magnus expansions.
    Magnus {
        #[command(subcommand)]
        cmd: MagnusCmd,
    },
    /// Checks on N_n(F_2).
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
}

#[derive(Subcommand)]
enum MagnusCmd {
    /// Print the monomials with coefficient 1 up to degree D.
    Expand {
        word: String,
        #[arg(long)]
        deg: usize,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Verify the presentation of N_4(F_2) and the order of its closure.
    CheckN4,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Triple,
    Quad,
}

fn parse_int(s: &str) -> std::result::Result<BigInt, String> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a decimal integer"));
    }
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_budget(s: &str) -> std::result::Result<BigInt, String> {
    match s.split_once('^') {
        Some((b, e)) => {
            let b = parse_int(b)?;
            let e: u32 = e.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            Ok(num_traits::pow(b, e as usize))
        }
        None => parse_int(s),
    }
}

fn budgets(cli: &Cli) -> Budgets {
    let d = Budgets::default();
    Budgets {
        z: cli.z_budget.clone().unwrap_or(d.z),
        height: cli.height_budget.unwrap_or(d.height),
    }
}

fn solver(cli: &Cli) -> Result<Solver> {
    Ok(Solver::new(budgets(cli), open_cache(cli.no_cache)?))
}

fn print(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{v}")?;
    out.flush()?;
    Ok(())
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()?;
    Ok(pool.install(f))
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Legendre { a, p } => print(&verify::legendre_answer(a, p)?)?,
        Cmd::Redei { p1, p2, p3 } => print(&solver(cli)?.redei_answer(p1, p2, p3)?)?,
        Cmd::Quad { p1, p2, p3, p4 } => print(&solver(cli)?.symbol4_answer(p1, p2, p3, p4)?)?,
        Cmd::Scan {
            kind,
            bound,
            jobs,
            p1,
            p2,
            p3,
            limit,
            out,
        } => {
            let cfg = ScanConfig {
                kind: match kind {
                    KindArg::Triple => ScanKind::Triple,
                    KindArg::Quad => ScanKind::Quad,
                },
                bound: *bound,
                p1: *p1,
                p2: *p2,
                p3: *p3,
                limit: *limit,
            };
            if cfg.bound > scan::MAX_BOUND {
                return Err(Usage(format!(
                    "--bound {bound} exceeds the ceiling {}",
                    scan::MAX_BOUND
                ))
                .into());
            }
            let s = solver(cli)?;
            let mut sink: Box<dyn Write + Send> = match out {
                Some(path) => Box::new(BufWriter::new(
                    File::create(path).with_context(|| format!("creating {}", path.display()))?,
                )),
                None => Box::new(BufWriter::new(io::stdout())),
            };
            let sum = with_pool(*jobs, || scan::scan(&cfg, &s, &mut sink))??;
            eprintln!(
                "{}",
                json!({ "candidates": sum.candidates, "emitted": sum.emitted, "ok": sum.ok, "budget_exhausted": sum.exhausted })
            );
        }
        Cmd::VerifyCorpus { file, jobs } => {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("reading {}", file.display()))?;
            let cache = open_cache(cli.no_cache)?;
            let rep = with_pool(*jobs, || verify::verify_corpus(&text, cache))?;
            print(&rep.to_json())?;
            if !rep.passed() {
                return Ok(outcome::EXIT_VERIFICATION);
            }
        }
        Cmd::Magnus {
            cmd: MagnusCmd::Expand { word, deg },
        } => {
            let w = Word::parse(word)?;
            println!("{}", magnus::magnus(&w, *deg)?);
        }
        Cmd::Group {
            cmd: GroupCmd::CheckN4,
        } => {
            let rep = nilgroup::verify_n4_presentation();
            println!("{rep}");
            if !rep.passed() {
                return Ok(outcome::EXIT_VERIFICATION);
            }
        }
    }
    Ok(outcome::EXIT_OK)
}

fn report(e: &anyhow::Error) -> u8 {
    let code = exit_code(e);
    let core = e.chain().find_map(|c| c.downcast_ref::<CoreError>());
    match core {
        Some(CoreError::Precondition(failures)) => {
            let _ = print(&precondition_report(failures));
        }
        Some(CoreError::BudgetExhausted(detail)) => {
            let _ = print(&json!({ "error": "budget_exhausted", "detail": detail }));
            eprintln!("error: {e:#}");
        }
        _ => eprintln!("error: {e:#}"),
    }
    code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                outcome::EXIT_USAGE
            } else {
                outcome::EXIT_OK
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match run(&cli) {
        Ok(c) => c,
        Err(e) => report(&e),
    };
    ExitCode::from(code)
}
