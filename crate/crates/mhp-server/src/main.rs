use std::net::SocketAddr;
use std::path::PathBuf;

use clap::Parser;

use mhp_server::{serve, ServerState};

/// Evaluation service for multi-human parsing benchmarks.
#[derive(Debug, Parser)]
#[command(name = "mhp-server", version)]
struct Args {
    /// Address to listen on.
    #[arg(long, default_value = "127.0.0.1:8750")]
    bind: SocketAddr,
    /// Restrict every dataset path in requests to this directory.
    #[arg(long)]
    root: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| "info".into()),
        )
        .init();

    let args = Args::parse();
    let listener = tokio::net::TcpListener::bind(args.bind).await?;
    serve(listener, ServerState { root: args.root }).await?;
    Ok(())
}
