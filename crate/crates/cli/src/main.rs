use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rlcert_core::ars::{check_eld, parse_ars, DEFAULT_MAXLEN};
use rlcert_core::certificate::{check, parse_certificate, parse_trs, Verdict};
use rlcert_core::peaks::critical_peaks;
use rlcert_core::prover::{prove, JoinMode, ProverConfig};
use rlcert_core::term::Trs;

/// Rule-labeling confluence certificates for term rewrite systems.
#[derive(Parser)]
#[command(name = "rlcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a certificate. Exit 0 accept, 3 conditional accept, 1 reject, 2 error.
    Check { trs: PathBuf, cert: PathBuf },
    /// List the critical peaks of a system.
    Cps { trs: PathBuf },
    /// Search for a certificate and print it as JSON. Exit 1 if none is found.
    Prove {
        trs: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        max_label: u32,
        #[arg(long, default_value_t = 2)]
        coeff_bound: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Valley)]
        mode: ModeArg,
    },
    /// Abstract rewrite systems.
    Ars {
        #[command(subcommand)]
        command: ArsCommand,
    },
}

#[derive(Subcommand)]
enum ArsCommand {
    /// Check decreasingness of every peak. Exit 0 if it holds, 1 otherwise.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAXLEN)]
        maxlen: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Valley,
    Conv,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_trs(path: &Path) -> Result<Trs> {
    parse_trs(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn run_check(trs: &Path, cert: &Path) -> Result<ExitCode> {
    let trs = load_trs(trs)?;
    let cert = parse_certificate(&read(cert)?).with_context(|| format!("parsing {}", cert.display()))?;
    let verdict = check(&trs, &cert);
    println!("{verdict}");
    Ok(ExitCode::from(match verdict {
        Verdict::Accept => 0,
        Verdict::AcceptConditional { .. } => 3,
        Verdict::Reject(r) => {
            for t in &r.terms {
                println!("  unreachable: {t}");
            }
            1
        }
        Verdict::Error(_) => 2,
    }))
}

fn run_cps(trs: &Path) -> Result<ExitCode> {
    let trs = load_trs(trs)?;
    for (i, cp) in critical_peaks(&trs).iter().enumerate() {
        let tag = if cp.is_trivial() { " (trivial)" } else { "" };
        println!("{i}: {cp}{tag}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_prove(trs: &Path, cfg: ProverConfig) -> Result<ExitCode> {
    let trs = load_trs(trs)?;
    match prove(&trs, &cfg)? {
        Some(cert) => {
            println!("{}", cert.to_json());
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!("no certificate found");
            Ok(ExitCode::from(1))
        }
    }
}

fn run_ars_check(file: &Path, maxlen: usize) -> Result<ExitCode> {
    let (ars, ord) = parse_ars(&read(file)?).with_context(|| format!("parsing {}", file.display()))?;
    let report = check_eld(&ars, &ord, maxlen);
    for outcome in &report.peaks {
        match &outcome.witness {
            Some(w) => {
                let path: Vec<String> = w
                    .iter()
                    .map(|s| {
                        let arrow = if s.forward { "→" } else { "←" };
                        format!("{arrow}{} {}", s.label, s.to)
                    })
                    .collect();
                let start = w.first().map_or(outcome.peak.left.as_str(), |s| s.from.as_str());
                println!("ok   {}: {start} {}", outcome.peak, path.join(" "));
            }
            None => println!("FAIL {}", outcome.peak),
        }
    }
    let holds = report.holds();
    println!("{}", if holds { "decreasing" } else { "not decreasing" });
    Ok(ExitCode::from(if holds { 0 } else { 1 }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { trs, cert } => run_check(&trs, &cert),
        Command::Cps { trs } => run_cps(&trs),
        Command::Prove {
            trs,
            depth,
            max_label,
            coeff_bound,
            mode,
        } => run_prove(
            &trs,
            ProverConfig {
                join_depth: depth,
                max_label,
                coeff_bound,
                mode: match mode {
                    ModeArg::Valley => JoinMode::Valley,
                    ModeArg::Conv => JoinMode::Conv,
                },
                ..ProverConfig::default()
            },
        ),
        Command::Ars {
            command: ArsCommand::Check { file, maxlen },
        } => run_ars_check(&file, maxlen),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
