//! `skewgal`: JSON front end for the decision procedures and constructors.
//!
//! Results go to stdout as one JSON document. Failures go to stderr as
//! `{"error": kind, "message": ..., "details": ...}` with exit code 2 for
//! malformed input, 1 for mathematical errors and 3 when a certificate does
//! not hold.

mod commands;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use skewgal::Execution;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "skewgal", version, about = "Twisted polynomial rings, embedding problems and certified constructions")]
struct Cli {
    /// Seed for field moduli (0 picks the least irreducible) and for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

/// Arguments that name a JSON input accept either a file path or the JSON
/// text itself (anything starting with `{` or `[`).
#[derive(Subcommand, Debug)]
enum Command {
    /// Decide solvability of the twisted embedding problem for sigma.
    Decide {
        #[arg(long)]
        group: String,
        /// Images of alpha: `[..]` or `{"images": [..]}`, into C_[L:K].
        #[arg(long)]
        alpha: String,
        #[arg(long = "K")]
        k: String,
        #[arg(long = "L")]
        l: String,
        /// Frobenius exponent of sigma on K.
        #[arg(long)]
        sigma: usize,
    },
    /// The unique extension of sigma to L of the same order.
    LiftTau {
        #[arg(long = "K")]
        k: String,
        #[arg(long = "L")]
        l: String,
        #[arg(long)]
        sigma: usize,
    },
    /// Evaluate the two equivalent lemma conditions for (sigma, tau).
    Lemma1 {
        #[arg(long = "K")]
        k: String,
        #[arg(long = "L")]
        l: String,
        #[arg(long)]
        sigma: usize,
        #[arg(long)]
        tau: usize,
    },
    /// Arithmetic in L[T, tau] on polynomials given as JSON.
    Ore {
        #[arg(long, value_enum)]
        op: commands::OreOp,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// The Fitting-subgroup reduction tower of a solvable group.
    Tower {
        #[arg(long)]
        group: String,
    },
    /// Build a polynomial with prescribed local behaviour and group S_n.
    ConstructLprime {
        /// Local behaviour, e.g. `3:rq`, `2:ts:ramL`, `7:ur3`, `inf:ts`. Repeatable.
        #[arg(long = "spec")]
        specs: Vec<String>,
        /// Further primes ramified in L. Repeatable.
        #[arg(long = "l-ram")]
        l_ram: Vec<u64>,
        #[arg(long)]
        p_kernel: u64,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
    },
    /// Level of a completion (`--place p|inf`) or of a field (`--field`).
    Level {
        #[arg(long, conflicts_with = "field", required_unless_present = "field")]
        place: Option<String>,
        /// `Q`, `Q(sqrt:m)` or `Qp:p`.
        #[arg(long)]
        field: Option<String>,
        #[arg(long, default_value_t = skewgal::quat::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Whether some completion has level at least 4, and whether H_K is a division ring.
    #[command(name = "feasible-13")]
    Feasible13 {
        #[arg(long)]
        field: String,
    },
    /// Recheck a construction report from the polynomial alone.
    VerifyReport {
        #[arg(long)]
        report: String,
    },
    /// Run the built-in property suites.
    Selftest {
        /// Run only these suites. Repeatable.
        #[arg(long = "suite")]
        suites: Vec<u8>,
        /// Include wall-clock times (makes the output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
}

fn run(cli: Cli) -> Result<(serde_json::Value, u8), CliError> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let seed = cli.seed;
    match cli.command {
        Command::Decide { group, alpha, k, l, sigma } => commands::decide(&group, &alpha, &k, &l, sigma, seed),
        Command::LiftTau { k, l, sigma } => commands::lift_tau(&k, &l, sigma, seed),
        Command::Lemma1 { k, l, sigma, tau } => commands::lemma1(&k, &l, sigma, tau, seed),
        Command::Ore { op, a, b } => commands::ore(op, &a, &b, seed),
        Command::Tower { group } => commands::tower(&group, exec),
        Command::ConstructLprime { specs, l_ram, p_kernel, n_min } => {
            commands::construct(&specs, &l_ram, p_kernel, n_min, seed, exec)
        }
        Command::Level { place, field, precision } => commands::level(place.as_deref(), field.as_deref(), precision),
        Command::Feasible13 { field } => commands::feasible(&field),
        Command::VerifyReport { report } => commands::verify(&report, exec),
        Command::Selftest { suites, timings } => commands::selftest(&suites, timings, seed, exec),
    }
}

fn emit(out: &mut impl Write, v: &serde_json::Value, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    let _ = writeln!(out, "{}", text.expect("JSON values always serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::parse("Usage", e.render().to_string().trim_end());
            emit(&mut std::io::stderr(), &err.to_json(), false);
            return ExitCode::from(2);
        }
    };
    let pretty = cli.pretty;
    match run(cli) {
        Ok((v, code)) => {
            emit(&mut std::io::stdout(), &v, pretty);
            ExitCode::from(code)
        }
        Err(e) => {
            emit(&mut std::io::stderr(), &e.to_json(), pretty);
            ExitCode::from(e.code)
        }
    }
}
