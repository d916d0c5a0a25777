use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use quatks_cli::{run_algebra, run_padic, verify_all, Catalog, RunConfig, CATALOG_ENV};
use quatks_core::padic::{ModuleKind, PadicError};
use quatks_core::{parse_rational, Rational};

#[derive(Parser, Debug)]
#[command(name = "quatks", version, about = "Verify Kodaira-Spencer constants on quaternionic Shimura curves")]
struct Cli {
    /// Order catalog (JSON). Defaults to the shipped catalog.
    #[arg(long, global = true, env = CATALOG_ENV)]
    catalog: Option<PathBuf>,
    /// Write JSON Lines here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for embedding-dependent checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Sampled tau per catalog entry.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discriminant and ramification of (a, b | Q).
    Algebra {
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        a: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        b: Rational,
    },
    /// Run every suite on the catalog.
    VerifyAll {
        /// Restrict the split-prime check to this prime.
        #[arg(long)]
        p: Option<u64>,
        /// p-adic precision.
        #[arg(long = "N", default_value_t = 20)]
        n: u32,
    },
    /// Hom module and determinant image for two module classes.
    Padic {
        #[arg(long)]
        p: u64,
        #[arg(long = "N", default_value_t = 20)]
        n: u32,
        #[arg(long = "T", value_parser = kind)]
        t: ModuleKind,
        #[arg(long = "Tprime", value_parser = kind)]
        tprime: ModuleKind,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational: {s}"))
}

fn kind(s: &str) -> Result<ModuleKind, String> {
    ModuleKind::parse(s).ok_or_else(|| format!("expected standard or twisted, got {s}"))
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut w = sink(&cli.out)?;
    match cli.command {
        Command::Algebra { a, b } => {
            let report = run_algebra(&a, &b)?;
            serde_json::to_writer(&mut w, &report)?;
            writeln!(w)?;
            w.flush()?;
            Ok(true)
        }
        Command::VerifyAll { p, n } => {
            let catalog = match &cli.catalog {
                Some(path) => Catalog::load(path)?,
                None => Catalog::shipped(),
            };
            let cfg = RunConfig {
                seed: cli.seed,
                tol: cli.tol,
                tau_samples: cli.samples,
                precision: n,
                split_primes: p.map(|p| vec![p]).unwrap_or_else(|| RunConfig::default().split_primes),
                ..RunConfig::default()
            };
            cfg.validate()?;
            if cfg.split_primes.contains(&2) {
                anyhow::bail!(PadicError::EvenPrime);
            }
            let report = verify_all(&catalog, &cfg);
            report.write_jsonl(&mut w)?;
            w.flush()?;
            let s = report.summary();
            eprintln!("{} records, {} passed, {} failed", s.records, s.passed, s.failed);
            for f in report.failures() {
                eprintln!("FAIL {}", serde_json::to_string(f)?);
            }
            Ok(s.pass)
        }
        Command::Padic { p, n, t, tprime } => {
            let record = run_padic(p, n, t, tprime)?;
            serde_json::to_writer(&mut w, &record)?;
            writeln!(w)?;
            w.flush()?;
            Ok(record.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
