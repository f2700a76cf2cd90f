//! Remote execution: the same subcommands routed through mhp-server.
//!
//! Operations that write datasets (`synth`, `cluster`, `corrupt`,
//! `encode-locations`) write on the server's filesystem; report-shaped
//! results (`evaluate`, `stats`, `subset`) are fetched and written to the
//! local `--out` path, byte-identical to the in-process output.

use mhp_api::{
    ClusterRequest, CorruptRequest, EncodeLocationsRequest, EvaluateRequest, StatsRequest,
    SubsetRequest, SynthRequest,
};
use mhp_client::{ClientError, MhpClient};

use crate::run::{id_list_bytes, out_string, read_corruption_spec, read_id_list, write_output};
use crate::{Command, Failure};

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        match &e {
            ClientError::Transport(_) => Failure::Io(e.to_string()),
            ClientError::Api { body, .. } if body.kind == "io" => Failure::Io(e.to_string()),
            ClientError::Api { .. } => Failure::Validation(e.to_string()),
        }
    }
}

pub(crate) fn run_remote(url: &str, command: Command) -> Result<(), Failure> {
    let runtime = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::Io(format!("tokio runtime: {e}")))?;
    let client = MhpClient::new(url);
    runtime.block_on(dispatch(&client, command))
}

async fn dispatch(client: &MhpClient, command: Command) -> Result<(), Failure> {
    match command {
        Command::Evaluate {
            gt,
            pred,
            metrics,
            thresholds,
            subset,
            label,
            out,
            format,
            labels,
            averaging,
            strict_gt,
            threads,
            no_traces,
        } => {
            if labels.is_some() || strict_gt || no_traces {
                return Err(Failure::Validation(
                    "--labels, --strict-gt and --no-traces are not available in server mode"
                        .into(),
                ));
            }
            let subset_ids = match subset {
                Some(path) => Some(read_id_list(&path)?),
                None => None,
            };
            let bytes = client
                .evaluate(&EvaluateRequest {
                    gt: out_string(&gt),
                    pred: out_string(&pred),
                    metrics,
                    thresholds,
                    subset_ids,
                    label,
                    format: Some(format),
                    averaging: Some(averaging),
                    threads: Some(threads),
                })
                .await?;
            write_output(&out, &bytes)
        }

        Command::Cluster {
            semantic,
            locations,
            counts,
            encoding,
            seed,
            out,
            max_instances,
            threads,
        } => {
            let response = client
                .cluster(&ClusterRequest {
                    semantic: out_string(&semantic),
                    locations: out_string(&locations),
                    counts: counts.as_ref().map(out_string),
                    encoding: Some(encoding),
                    seed: Some(seed),
                    max_instances: Some(max_instances),
                    out: out_string(&out),
                    threads: Some(threads),
                })
                .await?;
            println!("wrote {} files", response.written.len());
            Ok(())
        }

        Command::EncodeLocations { gt, encoding, out } => {
            let response = client
                .encode_locations(&EncodeLocationsRequest {
                    gt: out_string(&gt),
                    encoding: Some(encoding),
                    out: out_string(&out),
                })
                .await?;
            println!("wrote {} files", response.written.len());
            Ok(())
        }

        Command::Stats {
            gt,
            labels,
            out,
            split,
        } => {
            if labels.is_some() {
                return Err(Failure::Validation(
                    "--labels is not available in server mode".into(),
                ));
            }
            let bytes = client
                .stats(&StatsRequest {
                    gt: out_string(&gt),
                    split: Some(split),
                })
                .await?;
            write_output(&out, &bytes)
        }

        Command::Subset { gt, percent, out } => {
            let response = client
                .subset(&SubsetRequest {
                    gt: out_string(&gt),
                    percent,
                })
                .await?;
            write_output(&out, id_list_bytes(&response.image_ids).as_slice())
        }

        Command::Synth {
            seed,
            images,
            grid,
            overlap,
            instances,
            parts,
            out,
        } => {
            let response = client
                .synth(&SynthRequest {
                    seed,
                    images,
                    grid,
                    overlap: Some(overlap),
                    instances,
                    parts,
                    out: out_string(&out),
                })
                .await?;
            println!("wrote {} files", response.written.len());
            Ok(())
        }

        Command::Corrupt {
            gt,
            spec,
            out,
            threads,
        } => {
            let corruption = read_corruption_spec(&spec)?;
            let response = client
                .corrupt(&CorruptRequest {
                    gt: out_string(&gt),
                    spec: corruption,
                    out: out_string(&out),
                    threads: Some(threads),
                })
                .await?;
            println!("wrote {} files", response.written.len());
            Ok(())
        }
    }
}
