//! In-process execution of the subcommands.

use std::path::{Path, PathBuf};

use mhp_core::cluster::EncodingMode;
use mhp_core::corrupt::CorruptionSpec;
use mhp_core::error::Error;
use mhp_core::io::{to_sorted_json_bytes, write_report, ReportFormat, Split};
use mhp_core::labels::LabelSpec;
use mhp_core::metrics::{CategoryAveraging, MetricSelection, Threshold};
use mhp_core::pipeline::{
    cluster_dirs, corrupt_dirs, encode_locations_dirs, evaluate_dirs, stats_dir, subset_dir,
    synth_to_dir, ClusterJob, EvaluateJob,
};
use mhp_core::synth::{OverlapMode, SynthConfig};
use mhp_server::{parse_grid, parse_usize_range};

use crate::{Command, Failure};

pub(crate) fn run_local(command: Command) -> Result<(), Failure> {
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
            let mut job = EvaluateJob::new(gt, pred);
            if let Some(metrics) = metrics {
                job.options.metrics = MetricSelection::parse(&metrics)?;
            }
            if let Some(schedule) = thresholds {
                job.options.thresholds = Threshold::parse_schedule(&schedule)?;
            }
            if let Some(label) = label {
                job.options.subset_label = label;
            }
            job.options.averaging = parse_averaging(&averaging)?;
            job.options.with_traces = !no_traces;
            if let Some(subset) = subset {
                job.subset_ids = Some(read_id_list(&subset)?);
            }
            if let Some(labels) = labels {
                job.labels = LabelSpec::from_file(labels)?;
            }
            job.strict_gt = strict_gt;
            job.threads = threads;
            let format = ReportFormat::parse(&format)?;

            let report = evaluate_dirs(&job)?;
            let bytes = write_report(&report, format)?;
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
            let mut job = ClusterJob::new(semantic, locations, out);
            job.counts_dir = counts;
            job.config.encoding_mode = EncodingMode::parse(&encoding)?;
            job.config.kmeans_seed = seed;
            job.max_instances = max_instances;
            job.threads = threads;
            let written = cluster_dirs(&job)?;
            println!("wrote {} files", written.len());
            Ok(())
        }

        Command::EncodeLocations { gt, encoding, out } => {
            let mode = EncodingMode::parse(&encoding)?;
            let written = encode_locations_dirs(gt, mode, out, &LabelSpec::mhp_v2(), 0)?;
            println!("wrote {} files", written.len());
            Ok(())
        }

        Command::Stats {
            gt,
            labels,
            out,
            split,
        } => {
            let spec = match labels {
                Some(path) => LabelSpec::from_file(path)?,
                None => LabelSpec::mhp_v2(),
            };
            let split = Split::parse(&split)?;
            let report = stats_dir(gt, split, &spec, 0)?;
            let bytes = to_sorted_json_bytes(&report)?;
            write_output(&out, &bytes)
        }

        Command::Subset { gt, percent, out } => {
            let ids = subset_dir(gt, percent, &LabelSpec::mhp_v2(), 0)?;
            write_output(&out, id_list_bytes(&ids).as_slice())
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
            let cfg = build_synth_config(seed, images, grid, &overlap, instances, parts)?;
            let written = synth_to_dir(&cfg, out)?;
            println!("wrote {} files", written.len());
            Ok(())
        }

        Command::Corrupt {
            gt,
            spec,
            out,
            threads,
        } => {
            let corruption = read_corruption_spec(&spec)?;
            let written = corrupt_dirs(gt, &corruption, out, &LabelSpec::mhp_v2(), threads)?;
            println!("wrote {} files", written.len());
            Ok(())
        }
    }
}

pub(crate) fn parse_averaging(text: &str) -> Result<CategoryAveraging, Error> {
    match text {
        "union" => Ok(CategoryAveraging::Union),
        "gt_only" => Ok(CategoryAveraging::GtOnly),
        other => Err(Error::domain(format!(
            "unknown averaging `{other}` (expected `union` or `gt_only`)"
        ))),
    }
}

pub(crate) fn build_synth_config(
    seed: u64,
    images: usize,
    grid: Option<String>,
    overlap: &str,
    instances: Option<String>,
    parts: Option<String>,
) -> Result<SynthConfig, Error> {
    let mut cfg = SynthConfig {
        seed,
        image_count: images,
        overlap_mode: OverlapMode::parse(overlap)?,
        ..SynthConfig::default()
    };
    if let Some(grid) = grid {
        cfg.grid = parse_grid(&grid)?;
    }
    if let Some(instances) = instances {
        cfg.instances_per_image = parse_usize_range(&instances)?;
    }
    if let Some(parts) = parts {
        cfg.parts_per_instance = parse_usize_range(&parts)?;
    }
    Ok(cfg)
}

pub(crate) fn read_id_list(path: &Path) -> Result<Vec<String>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect())
}

pub(crate) fn id_list_bytes(ids: &[String]) -> Vec<u8> {
    let mut out = String::new();
    for id in ids {
        out.push_str(id);
        out.push('\n');
    }
    out.into_bytes()
}

pub(crate) fn read_corruption_spec(path: &Path) -> Result<CorruptionSpec, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::codec(path, format!("corruption spec parse failed: {e}")))
}

pub(crate) fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn out_string(path: &PathBuf) -> String {
    path.display().to_string()
}
