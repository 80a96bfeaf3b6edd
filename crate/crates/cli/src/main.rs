//! `fracint`: CSV front end for fractional integral approximations.
//!
//! Errors go to stderr as one line `error<TAB>kind<TAB>message` with a
//! nonzero exit status.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracint::FracError;

use config::{Defaults, Flags, RunConfig, Tagged};

#[derive(Debug, Parser)]
#[command(
    name = "fracint",
    version,
    about = "Fractional integral approximations as CSV"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tails of the A and B coefficient sums, written as table1.csv and table2.csv.
    Tables(Flags),
    /// Exact integral against the decomposition and the analytic series.
    Compare(Flags),
    /// Decomposition with computed A_i against A_i = 0.
    AiAblation(Flags),
    /// Integral equation with power-law forcing.
    IntegralEq(Flags),
    /// Tracking problem solved through its boundary value problem.
    Variational(Flags),
    /// Quadrature of the left integral of a function.
    Oracle(Flags),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let resolve = |name, flags, n: &[usize], big_n: &[usize], function| {
        RunConfig::resolve(name, flags, Defaults { n, big_n, function })
    };
    match cli.command {
        Command::Tables(f) => {
            commands::tables(&resolve("tables", f, &[6], &[6, 7, 8, 9, 10], "none")?)
        }
        Command::Compare(f) => commands::compare(&resolve("compare", f, &[3], &[3, 4, 5], "t3")?),
        Command::AiAblation(f) => {
            commands::ai_ablation(&resolve("ai-ablation", f, &[3], &[3, 4, 5], "t3")?)
        }
        Command::IntegralEq(f) => {
            commands::integral_equation(&resolve("integral-eq", f, &[2], &[1, 2, 3], "default")?)
        }
        Command::Variational(f) => {
            commands::variational(&resolve("variational", f, &[2], &[2, 3], "default")?)
        }
        Command::Oracle(f) => commands::oracle(&resolve("oracle", f, &[], &[], "t3")?),
    }
}

fn kind_of(err: &anyhow::Error) -> &'static str {
    if let Some(t) = err.downcast_ref::<Tagged>() {
        t.kind
    } else if let Some(e) = err.downcast_ref::<FracError>() {
        e.kind()
    } else if err.chain().any(|c| c.is::<std::io::Error>()) {
        "io"
    } else {
        "internal"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("error\tusage\t{first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = format!("{e:#}").replace(['\n', '\t'], " ");
            eprintln!("error\t{}\t{message}", kind_of(&e));
            ExitCode::FAILURE
        }
    }
}
