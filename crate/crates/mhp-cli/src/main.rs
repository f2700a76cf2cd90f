//! `mhp` — benchmark toolkit front end.
//!
//! Every subcommand runs in-process by default. With `--server URL` (or
//! `MHP_SERVER` in the environment) the same operation is sent to a running
//! `mhp-server`, whose responses land in the same output files.
//!
//! Exit codes: 0 success, 1 validation failure, 2 I/O failure, 64 usage.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Parser, Subcommand};

mod remote;
mod run;

#[derive(Debug, Parser)]
#[command(name = "mhp", version, about = "Multi-human parsing benchmark toolkit")]
struct Cli {
    /// Send the operation to a running mhp-server instead of executing
    /// in-process.
    #[arg(long, global = true, env = "MHP_SERVER")]
    server: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a prediction directory against ground truth.
    Evaluate {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Comma-separated subset of ap_p,pcp,ap_r.
        #[arg(long)]
        metrics: Option<String>,
        /// Inclusive A:B:STEP schedule; defaults to 0.1:0.9:0.1.
        #[arg(long)]
        thresholds: Option<String>,
        /// File of image ids (one per line) to restrict evaluation to.
        #[arg(long)]
        subset: Option<PathBuf>,
        /// Subset label recorded in the report.
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// json or csv.
        #[arg(long, default_value = "json")]
        format: String,
        /// Alternative label spec file.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Category set for part-IoU averaging: union or gt_only.
        #[arg(long, default_value = "union")]
        averaging: String,
        /// Reject ground-truth scenes with fewer than two instances.
        #[arg(long)]
        strict_gt: bool,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Skip per-image matching traces in the report.
        #[arg(long)]
        no_traces: bool,
    },
    /// Cluster semantic maps + location maps into instance predictions.
    Cluster {
        #[arg(long)]
        semantic: PathBuf,
        #[arg(long)]
        locations: PathBuf,
        /// Directory of {id}.count.txt files; defaults to --locations.
        #[arg(long)]
        counts: Option<PathBuf>,
        /// instance or image.
        #[arg(long, default_value = "instance")]
        encoding: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Upper clamp for regressed instance counts.
        #[arg(long, default_value_t = 26)]
        max_instances: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Write ground-truth location maps and instance counts.
    EncodeLocations {
        #[arg(long)]
        gt: PathBuf,
        /// instance or image.
        #[arg(long, default_value = "instance")]
        encoding: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dataset statistics.
    Stats {
        #[arg(long)]
        gt: PathBuf,
        /// Alternative label spec file.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// train, val, test or all.
        #[arg(long, default_value = "all")]
        split: String,
    },
    /// Select the top interaction-intensity share of a dataset.
    Subset {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        percent: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic dataset.
    Synth {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        images: usize,
        /// WxH, e.g. 64x64.
        #[arg(long)]
        grid: Option<String>,
        /// disjoint, mild or heavy.
        #[arg(long, default_value = "disjoint")]
        overlap: String,
        /// Inclusive instance-count range, e.g. 2..5.
        #[arg(long)]
        instances: Option<String>,
        /// Inclusive parts-per-instance range, e.g. 2..4.
        #[arg(long)]
        parts: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Corrupt a ground-truth directory into predictions.
    Corrupt {
        #[arg(long)]
        gt: PathBuf,
        /// JSON file mirroring the corruption parameters.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

/// Failure classes behind the exit codes.
#[derive(Debug)]
pub(crate) enum Failure {
    Validation(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Io(m) => m,
        }
    }
}

impl From<mhp_core::Error> for Failure {
    fn from(e: mhp_core::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| "warn".into()),
        )
        .with_writer(std::io::stderr)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match &cli.server {
        None => run::run_local(cli.command),
        Some(url) => remote::run_remote(url, cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
