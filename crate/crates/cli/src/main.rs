//! `resum`: certify, verify and sweep restricted sumset lower bounds.
//!
//! Exit codes: 0 success, 1 verification failure (or sweep violations),
//! 2 usage or hypothesis error, 3 sweep budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use resum_core::oracle::DEFAULT_CAP;
use resum_core::{
    anr_bound, cd_bound, certify_anr, certify_eh, cross_check_certificates, eh_bound,
    restricted_sumset, sumset, sweep_exhaustive, verify_json, BoundKind, Certificate, FpSet,
    OracleError, PrimeField, RandomSampler, Sampler, SizeFilter, SweepOptions,
};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "resum",
    version,
    about = "Certified lower bounds for restricted sumsets over Z/pZ"
)]
struct Cli {
    /// Print more detail.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify |A +' B| >= min{p, |A|+|B|-2} for |A| != |B|.
    Certify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Certificate output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate file.
    Verify {
        path: PathBuf,
        /// Write the full verification report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify |A +' A| >= min{p, 2|A|-3}.
    Eh {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a bound formula and the enumerated sumset size.
    Bound {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        a: String,
        /// Second set; not used by --kind eh.
        #[arg(long)]
        b: Option<String>,
        #[arg(long, default_value = "anr")]
        kind: BoundKind,
    },
    /// Brute-force a bound over all subsets, or over a seeded random sample.
    Sweep {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "anr")]
        kind: BoundKind,
        /// Maximum number of cases for an exhaustive sweep.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Sample randomly with this seed instead of enumerating.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random samples (with --seed).
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        workers: Option<usize>,
        /// Only sets A of this size.
        #[arg(long)]
        size_a: Option<u32>,
        /// Only sets B of this size.
        #[arg(long)]
        size_b: Option<u32>,
        /// Also generate and verify a certificate for every case (anr only).
        #[arg(long)]
        certificates: bool,
        /// SweepReport JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of tight cases.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn field(p: u64) -> Result<PrimeField, Failure> {
    PrimeField::new(p).map_err(usage)
}

fn parse_set(f: PrimeField, name: &str, literal: &str) -> Result<FpSet, Failure> {
    FpSet::parse(f, literal).map_err(|e| usage(format!("set {name}: {e}")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(cert: &Certificate, out: Option<&Path>) -> Result<(), Failure> {
    if let Some(path) = out {
        write_file(path, &cert.to_json())?;
    }
    println!("bound={} actual={}", cert.claimed_bound, cert.c_size);
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Certify { p, a, b, out } => {
            let f = field(p)?;
            let (a, b) = (parse_set(f, "A", &a)?, parse_set(f, "B", &b)?);
            let cert = certify_anr(&a, &b).map_err(usage)?;
            if cli.verbose {
                println!("route={}", cert.route.as_str());
            }
            emit(&cert, out.as_deref())?;
            Ok(0)
        }
        Command::Eh { p, a, out } => {
            let f = field(p)?;
            let a = parse_set(f, "A", &a)?;
            let cert = certify_eh(&a).map_err(usage)?;
            emit(&cert, out.as_deref())?;
            Ok(0)
        }
        Command::Verify { path, out } => {
            let text = fs::read_to_string(&path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let report = verify_json(&text);
            if let Some(out) = out {
                write_file(
                    &out,
                    &serde_json::to_string_pretty(&report).expect("serializable"),
                )?;
            }
            if cli.verbose {
                for c in &report.checks {
                    println!(
                        "{} {}: {}",
                        if c.passed { "ok  " } else { "FAIL" },
                        c.name,
                        c.detail
                    );
                }
            }
            match report.first_failure() {
                None => {
                    println!("pass");
                    Ok(0)
                }
                Some(c) => {
                    println!("fail: {} ({})", c.name, c.detail);
                    Ok(EXIT_VERIFY)
                }
            }
        }
        Command::Bound { p, a, b, kind } => {
            let f = field(p)?;
            let a = parse_set(f, "A", &a)?;
            let (bound, actual) = match kind {
                BoundKind::Eh => (
                    eh_bound(p, a.len() as u64),
                    restricted_sumset(&a, &a).map_err(usage)?.len(),
                ),
                BoundKind::Anr | BoundKind::Cd => {
                    let b = b.ok_or_else(|| usage("--b is required for this kind"))?;
                    let b = parse_set(f, "B", &b)?;
                    let (m, k) = (a.len() as u64, b.len() as u64);
                    if kind == BoundKind::Anr {
                        if m == k {
                            return Err(usage(format!("equal sizes: |A| = |B| = {m}")));
                        }
                        (
                            anr_bound(p, m, k),
                            restricted_sumset(&a, &b).map_err(usage)?.len(),
                        )
                    } else {
                        (cd_bound(p, m, k), sumset(&a, &b).map_err(usage)?.len())
                    }
                }
            };
            println!("bound={bound} actual={actual}");
            Ok(0)
        }
        Command::Sweep {
            p,
            kind,
            cap,
            seed,
            samples,
            workers,
            size_a,
            size_b,
            certificates,
            out,
            csv,
        } => {
            field(p)?;
            let random = seed.map(|seed| RandomSampler { seed, samples });
            let options = SweepOptions {
                cap,
                workers,
                size_filter: SizeFilter {
                    a: size_a,
                    b: size_b,
                },
                random,
                ..Default::default()
            };
            let result = if certificates {
                if kind != BoundKind::Anr {
                    return Err(usage("--certificates requires --kind anr"));
                }
                let sampler = random.map_or(Sampler::Exhaustive, Sampler::Random);
                cross_check_certificates(p, &sampler, &options)
            } else {
                sweep_exhaustive(p, kind, &options)
            };
            let report = result.map_err(|e| match e {
                OracleError::BudgetExceeded { .. } => Failure {
                    code: EXIT_BUDGET,
                    message: e.to_string(),
                },
                other => usage(other),
            })?;
            if let Some(out) = out {
                write_file(&out, &report.to_json())?;
            }
            if let Some(path) = csv {
                let file = fs::File::create(&path)
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
                report.write_tight_csv(file).map_err(usage)?;
            }
            println!(
                "pairs={}, violations={}, tight={}",
                report.pairs_checked,
                report.violations.len(),
                report.tight_count
            );
            if cli.verbose {
                for v in &report.violations {
                    println!(
                        "violation A={:?} B={:?} actual={} bound={}: {}",
                        v.a, v.b, v.actual, v.bound, v.reason
                    );
                }
            }
            Ok(if report.ok() { 0 } else { EXIT_VERIFY })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
