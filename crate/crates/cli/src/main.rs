//! `jointaug`: sample, render, verify and measure joint-augmentation pairs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod commands;
mod images;
mod output;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use commands::Outcome;

#[derive(Debug, Parser)]
#[command(
    name = "jointaug",
    version,
    about = "Paired-view augmentation with a controlled ratio between views"
)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "JOINTAUG_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write pair parameters (no pixels) as a JSONL manifest.
    Sample(commands::sample::SampleArgs),
    /// Render `<id>_a.png` / `<id>_b.png` for every image in a directory.
    Augment(commands::augment::AugmentArgs),
    /// Check sampled log-ratios against their closed-form law.
    Verify(commands::verify::VerifyArgs),
    /// Tail probabilities, mean |log ratio| and crop distances per β.
    Stats(commands::stats::StatsArgs),
    /// Mean cosine similarity of embedded pairs.
    Sdf(commands::sdf::SdfArgs),
}

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let result = match &cli.command {
        Command::Sample(args) => commands::sample::run(args),
        Command::Augment(args) => commands::augment::run(args),
        Command::Verify(args) => commands::verify::run(args),
        Command::Stats(args) => commands::stats::run(args),
        Command::Sdf(args) => commands::sdf::run(args),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
