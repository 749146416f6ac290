//! `dominion`: check, trace, reproduce and sweep the dominated-contraction
//! verifiers from the command line.
//!
//! Exit codes: 0 verified, 1 falsified or exhausted, 2 hypothesis unmet,
//! 3 input error.

mod bundle;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dominion::theorems::EngineError;
use dominion::{parse_rational, Rational};

pub const EXIT_VERIFIED: u8 = 0;
pub const EXIT_FALSIFIED: u8 = 1;
pub const EXIT_UNMET: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "dominion", version, about = "Exact verifiers for dominated positive contractions on L¹")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verifier on a bundle and print its hypothesis and conclusion ledger.
    Check {
        kind: CheckKind,
        bundle: PathBuf,
        #[command(flatten)]
        range: RangeArgs,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Write the zero-two trace n ↦ ‖Z^d(T^(n+k) − T^n)‖ as CSV.
    Trace {
        bundle: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long = "n-max", default_value_t = 20)]
        n_max: u64,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a worked example, check its stated values and emit its bundle.
    Example {
        which: ExampleKind,
        #[arg(long, value_parser = rational_arg, default_value = "1/2")]
        u: Rational,
        #[arg(long, value_parser = rational_arg, default_value = "1/2")]
        v: Rational,
        #[arg(long, value_parser = rational_arg, default_value = "1/4")]
        lambda: Rational,
        /// Exponent of the L^p space for `example lp`.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Bundle destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verifier over seeded random instances.
    Sweep {
        kind: SweepKind,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// First seed; instances use seed, seed + 1, ….
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dimension of the generated operators.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "n-max")]
        n_max: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// Directory for bundles of failing instances.
        #[arg(long, default_value = "sweep-failures")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CheckKind {
    Thm21,
    Cor22,
    Thm23,
    Lemma32,
    /// ε-certificate search for the zero-two law.
    Zerotwo,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ExampleKind {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Lp,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SweepKind {
    Thm12,
    Thm21,
    Lemma32,
}

/// Flags override the bundle's `[params]`.
#[derive(Args, Clone, Default)]
pub struct RangeArgs {
    #[arg(long)]
    pub n0: Option<u64>,
    /// Last index checked; the n0 cap for `zerotwo`.
    #[arg(long = "n-max")]
    pub n_max: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    /// The d cap for `zerotwo`.
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, value_parser = rational_arg)]
    pub epsilon: Option<Rational>,
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<EngineError>() {
        Some(EngineError::Precondition(_)) => EXIT_UNMET,
        Some(EngineError::InternalInconsistency(_)) => EXIT_FALSIFIED,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_VERIFIED });
        }
    };
    let echo = std::env::args().collect::<Vec<_>>().join(" ");
    let result = match cli.command {
        Command::Check {
            kind,
            bundle,
            range,
            json,
        } => commands::check(kind, &bundle, &range, json, &echo),
        Command::Trace { bundle, k, d, n_max, out } => commands::trace(&bundle, k, d, n_max, out.as_deref()),
        Command::Example {
            which,
            u,
            v,
            lambda,
            p,
            out,
        } => commands::example(which, u, v, lambda, p, out.as_deref()),
        Command::Sweep {
            kind,
            count,
            seed,
            n,
            n_max,
            m,
            k,
            out,
        } => commands::sweep(
            kind,
            commands::SweepArgs {
                count,
                seed,
                n,
                n_max,
                m,
                k,
                out,
            },
        ),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(EngineError::Precondition(checks)) = e.downcast_ref::<EngineError>() {
                for c in checks.iter().filter(|c| !c.holds) {
                    eprintln!("  [FAILS] {}", c.name);
                }
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}
