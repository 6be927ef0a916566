use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use aidsim_cli::commands::{self, Ctx, EXIT_USAGE};
use aidsim_cli::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "aidsim",
    version,
    about = "LDPC link simulator: encoding, decoding, BER sweeps, \
             early-termination calibration, and radio energy accounting"
)]
struct Cli {
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed override.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker thread count; defaults to the global thread pool.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Output directory override.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an ASCII 0/1 message file into codeword lines.
    Encode {
        /// Message bits, whitespace ignored, length a multiple of k.
        message: PathBuf,
        /// Output file name inside the output directory.
        #[arg(long, default_value = "codewords.txt")]
        file: String,
    },
    /// Decode a whitespace-separated LLR file into message lines.
    Decode {
        /// Channel LLRs, length a multiple of n.
        llrs: PathBuf,
        /// Output file name inside the output directory.
        #[arg(long, default_value = "decoded.txt")]
        file: String,
    },
    /// Measure BER across the configured Eb/N0 grid.
    BerSweep,
    /// Calibrate the early-stopping iteration budget and its energy value.
    Aid,
    /// Evaluate the radio energy model at a mean iteration count.
    Energy {
        /// Mean decoder iterations to price, at least 1.
        #[arg(long, default_value_t = 16.0)]
        iterations: f64,
    },
}

fn run(cli: Cli) -> Result<u8> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }
    let ctx = Ctx::new(cfg, cli.workers)?;
    match cli.command {
        Command::Encode { message, file } => commands::cmd_encode(&ctx, &message, &file),
        Command::Decode { llrs, file } => commands::cmd_decode(&ctx, &llrs, &file),
        Command::BerSweep => commands::cmd_ber_sweep(&ctx),
        Command::Aid => commands::cmd_aid(&ctx),
        Command::Energy { iterations } => commands::cmd_energy(&ctx, iterations),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
