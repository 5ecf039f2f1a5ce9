//! Command-line surface for `symlog`: Matrix Market I/O, residual reports,
//! the computational subcommands and the benchmark sweep.

pub mod bench;
pub mod commands;
pub mod metrics;
pub mod mtx;
pub mod report;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "symlog", version, about = "Structure-preserving square roots, logarithms and diagonalizations of unitary matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Principal square root in the given symmetry class
    Sqrt(commands::SqrtArgs),
    /// Principal logarithm, or the Floquet Hamiltonian with --period
    Log(commands::LogArgs),
    /// Eigenvectors and eigenphases
    Diag(commands::DiagArgs),
    /// Chiral index of a class AIII unitary
    Index(commands::IndexArgs),
    /// Random unitary with a prescribed gap at -1
    Gen(commands::GenArgs),
    /// Benchmark sweep written as CSV
    Bench(bench::BenchArgs),
    /// Unitarity and symmetry residuals of a matrix
    Check(commands::CheckArgs),
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let res = match &cli.command {
        Command::Sqrt(a) => commands::cmd_sqrt(a).map(drop),
        Command::Log(a) => commands::cmd_log(a).map(drop),
        Command::Diag(a) => commands::cmd_diag(a).map(drop),
        Command::Index(a) => commands::cmd_index(a).map(drop),
        Command::Gen(a) => commands::cmd_gen(a).map(drop),
        Command::Check(a) => commands::cmd_check(a).map(drop),
        Command::Bench(a) => bench::cmd_bench(a).map(|s| {
            if !a.quiet {
                eprintln!("{} cells, {} rows, {} errors", s.cells, s.rows, s.errors);
            }
        }),
    };
    match res {
        Ok(()) => commands::EXIT_OK,
        Err(e) => {
            eprintln!("symlog: error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/bench.md")]
    mod bench {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
