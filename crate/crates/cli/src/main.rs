//! `nusob`: exact exponent calculus, norm estimates, evolution experiments and
//! check suites from the command line.
//!
//! Exit codes: 0 success, 1 a verify suite recorded a failure, 2 bad
//! configuration or a violated precondition.

mod config;
mod indices;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use config::{SEED_ENV, THREADS_ENV};

#[derive(Parser, Debug)]
#[command(name = "nusob", version, about, args_override_self = true, allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// INI config file; its values act as defaults for the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for Monte Carlo quadrature.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    pub threads: usize,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Add a generation timestamp to the output (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timestamp: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact exponent calculus.
    Indices {
        #[command(subcommand)]
        cmd: indices::IndicesCmd,
    },
    /// Norm and seminorm estimates with convergence classification.
    Norm {
        #[command(subcommand)]
        cmd: run::NormCmd,
    },
    /// Heat-flow energy experiment.
    Heat(run::HeatArgs),
    /// Schrödinger-flow convergence experiment.
    Schrodinger(run::SchrodingerArgs),
    /// Run a check suite.
    Verify(run::VerifyArgs),
}

/// `--config PATH` / `--config=PATH`, found before clap runs so that required
/// flags may come from the file.
fn config_path(argv: &[String]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// The chain of subcommand names in `argv`, e.g. `["indices", "embed"]`.
fn command_path(argv: &[String]) -> Vec<String> {
    let mut node = Cli::command();
    let mut path = Vec::new();
    for a in argv.iter().skip(1) {
        let Some(sub) = node.find_subcommand(a).cloned() else {
            continue;
        };
        path.push(sub.get_name().to_string());
        node = sub;
    }
    path
}

fn parse(argv: &[String]) -> Result<Cli, ExitCode> {
    Cli::try_parse_from(argv).map_err(|e| {
        let _ = e.print();
        ExitCode::from(e.exit_code() as u8)
    })
}

fn main() -> ExitCode {
    let mut argv = config::normalize_dashes(std::env::args());
    if let Some(path) = config_path(&argv) {
        let chain = command_path(&argv);
        let chain: Vec<&str> = chain.iter().map(String::as_str).collect();
        argv = match config::merge(&argv, &path, &chain) {
            Ok(m) => m,
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        };
    }
    let cli = match parse(&argv) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if cli.global.threads > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global();
    }
    let ctx = output::Context::new(&cli.global, &argv);
    let result = match cli.command {
        Command::Indices { cmd } => indices::run(&cmd, &ctx),
        Command::Norm { cmd } => run::norm(&cmd, &ctx),
        Command::Heat(a) => run::heat(&a, &ctx),
        Command::Schrodinger(a) => run::schrodinger(&a, &ctx),
        Command::Verify(a) => run::verify(&a, &ctx),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
