use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use hamdecomp::instances::{
    parse_certificate, parse_instance, write_certificate, write_instance, Certificate,
};
use hamdecomp::verify::check_decomposition;
use hamdecomp::{
    gen_instance, second_decomposition_exists, Algorithm, Instance, Mode, SolveLimits, Status,
};

mod bench;

const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "hamdecomp",
    version,
    about = "Second Hamiltonian decomposition solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file and print a certificate.
    Solve {
        input: PathBuf,
        #[arg(long, default_value = "bcef")]
        algo: Algorithm,
        /// Seconds; 0 disables the limit.
        #[arg(long, default_value_t = 0.0)]
        time_limit: f64,
        /// 0 disables the limit.
        #[arg(long, default_value_t = 0)]
        node_limit: u64,
    },
    /// Write `inst_<mode>_<n>_<seed>.txt` files.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        n: u32,
        #[arg(long)]
        mode: Mode,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a benchmark matrix over sizes, modes and algorithms.
    Bench(bench::BenchArgs),
    /// Check a certificate against its instance.
    Verify {
        instance: PathBuf,
        certificate: PathBuf,
        /// Check NONE certificates by exhaustive enumeration (n <= 14).
        #[arg(long)]
        exhaustive: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve {
            input,
            algo,
            time_limit,
            node_limit,
        } => solve(&input, algo, time_limit, node_limit),
        Command::Gen {
            n,
            mode,
            count,
            seed,
            out,
        } => gen(n as usize, mode, count, seed, &out),
        Command::Bench(args) => bench::run(&args),
        Command::Verify {
            instance,
            certificate,
            exhaustive,
        } => verify(&instance, &certificate, exhaustive),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

pub(crate) fn seconds(limit: f64) -> anyhow::Result<Duration> {
    if !limit.is_finite() || limit < 0.0 {
        bail!("time limit must be a non-negative number of seconds");
    }
    Ok(Duration::from_secs_f64(limit))
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))
}

fn read_certificate(path: &Path) -> anyhow::Result<Certificate> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_certificate(&text).map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))
}

fn solve(input: &Path, algo: Algorithm, time_limit: f64, node_limit: u64) -> anyhow::Result<u8> {
    let inst = read_instance(input)?;
    let limits = SolveLimits {
        time_budget: seconds(time_limit)?,
        node_budget: node_limit,
    };
    let g = inst.union();
    let r = algo.solve(&g, &inst.x, &inst.y, limits.into())?;
    print!("{}", write_certificate(&r));
    Ok(match r.status {
        Status::Decomposed => 0,
        Status::NoneExists => 1,
        Status::TimedOut => 2,
    })
}

fn gen(n: usize, mode: Mode, count: u64, seed: u64, out: &Path) -> anyhow::Result<u8> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for k in 0..count {
        let s = seed.wrapping_add(k);
        let inst = gen_instance(n, mode, s)?;
        let path = out.join(format!("inst_{mode}_{n}_{s}.txt"));
        fs::write(&path, write_instance(&inst))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn verify(instance: &Path, certificate: &Path, exhaustive: bool) -> anyhow::Result<u8> {
    let inst = read_instance(instance)?;
    let cert = read_certificate(certificate)?;
    let mut out = std::io::stdout().lock();
    match cert.status {
        Status::Decomposed => {
            let (Some(z), Some(w)) = (&cert.z, &cert.w) else {
                bail!("DECOMPOSED certificate without z and w lines");
            };
            match check_decomposition(&inst.x, &inst.y, z, w) {
                Ok(()) => {
                    writeln!(out, "verified")?;
                    Ok(0)
                }
                Err(r) => {
                    writeln!(out, "refuted: {r}")?;
                    Ok(1)
                }
            }
        }
        Status::NoneExists => {
            if !exhaustive {
                bail!("a NONE certificate can only be checked with --exhaustive");
            }
            match second_decomposition_exists(&inst.union(), &inst.x, &inst.y) {
                Ok(false) => {
                    writeln!(out, "verified")?;
                    Ok(0)
                }
                Ok(true) => {
                    writeln!(out, "refuted: a second decomposition exists")?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Status::TimedOut => {
            writeln!(out, "verified: TIMEOUT makes no claim")?;
            Ok(0)
        }
    }
}
