//! Batch driver for the `gjms-core` experiments.
//!
//! Every subcommand writes a CSV table (single header row, `\n` line endings, shortest
//! round-trip decimals), and where applicable a `<out>.summary.json` with the fitted rates.
//! Each run also writes `<out>.manifest.json` listing the command, the resolved parameters,
//! `git describe`, the start time and the numerical tolerances. Only the manifest carries a
//! timestamp, so data files are byte-identical across reruns.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 invalid input, 3 I/O failure,
//! 4 a rate or floor check outside its window.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
mod commands;
pub mod error;
pub mod output;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{merge_config, Cli, Command};
use crate::error::{LabError, LabResult};

pub const THREADS_ENV: &str = "GJMS_LAB_THREADS";

fn thread_pool() -> LabResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            LabError::Input(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| LabError::Input(format!("cannot start worker pool: {e}")))
}

fn dispatch(command: &Command) -> LabResult<()> {
    match command {
        Command::Constants(a) => commands::constants(a),
        Command::Multiplier(a) => commands::multiplier_table(a),
        Command::BubbleAsymptotics(a) => commands::bubble_asymptotics(a),
        Command::GapScan(a) => commands::gap(a),
        Command::KernelDecay(a) => commands::kernel_decay(a),
        Command::Blowdown(a) => commands::blowdown(a),
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let argv = match merge_config(argv.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("gjms-lab: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = thread_pool().and_then(|pool| pool.install(|| dispatch(&cli.command)));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("gjms-lab {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
