//! Directory-level pipelines tying the modules together.
//!
//! These are the operations behind the CLI subcommands and the HTTP
//! endpoints. Images may be processed in parallel; every aggregation walks
//! ids in sorted order afterwards, so outputs are byte-identical for any
//! worker count.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::cluster::{
    cluster_instances, encode_locations, labeling_to_scene, round_instance_count, ClusterConfig,
    EncodingMode,
};
use crate::corrupt::{corrupt, CorruptionSpec};
use crate::error::{Error, Result};
use crate::io::{
    load_instance_count, load_location_map, load_semantic_for, require_same_ids,
    save_instance_count, save_location_map, save_predictions, save_scene, DatasetHandle, Split,
};
use crate::labels::LabelSpec;
use crate::metrics::{
    dataset_stats, evaluate_image, interaction_intensity, select_subset, DatasetAccumulator,
    EvalOptions, MetricReport, StatsReport,
};
use crate::synth::{synth_generate, SynthConfig};

/// Runs `op` over items in a dedicated pool with `threads` workers
/// (0 = one per core), collecting results in input order.
fn run_parallel<T, R, F>(items: Vec<T>, threads: usize, op: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync,
{
    if threads == 1 {
        return items.iter().map(&op).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::domain(format!("worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(&op).collect())
}

#[derive(Debug, Clone)]
pub struct EvaluateJob {
    pub gt_dir: PathBuf,
    pub pred_dir: PathBuf,
    pub options: EvalOptions,
    /// Restrict evaluation to these ids (e.g. an interaction subset).
    pub subset_ids: Option<Vec<String>>,
    pub labels: LabelSpec,
    /// Enforce the ≥2-instance ground-truth rule at load time.
    pub strict_gt: bool,
    /// Worker count; 0 uses one per core, 1 forces sequential evaluation.
    pub threads: usize,
}

impl EvaluateJob {
    pub fn new(gt_dir: impl Into<PathBuf>, pred_dir: impl Into<PathBuf>) -> Self {
        Self {
            gt_dir: gt_dir.into(),
            pred_dir: pred_dir.into(),
            options: EvalOptions::default(),
            subset_ids: None,
            labels: LabelSpec::mhp_v2(),
            strict_gt: false,
            threads: 0,
        }
    }
}

/// Scores a prediction directory against a ground-truth directory.
pub fn evaluate_dirs(job: &EvaluateJob) -> Result<MetricReport> {
    let gt = DatasetHandle::open(&job.gt_dir, Split::All)?;
    let pred = DatasetHandle::open(&job.pred_dir, Split::All)?;

    let ids: Vec<String> = match &job.subset_ids {
        Some(subset) => {
            let mut ids = subset.clone();
            ids.sort();
            ids.dedup();
            for id in &ids {
                if !gt.contains(id) {
                    return Err(Error::Misalignment(format!(
                        "subset id `{id}` is not in the ground truth"
                    )));
                }
                if !pred.contains(id) {
                    return Err(Error::Misalignment(format!(
                        "subset id `{id}` is not in the predictions"
                    )));
                }
            }
            ids
        }
        None => {
            require_same_ids(&gt.image_ids(), &pred.image_ids())?;
            gt.image_ids()
        }
    };

    let evals = run_parallel(ids, job.threads, |id| {
        let gt_scene = gt.load_scene(id, &job.labels, job.strict_gt)?;
        let pred_scene = pred.load_predictions(id, &job.labels)?;
        let pred_scene = align_empty_prediction(pred_scene, &gt_scene);
        evaluate_image(&pred_scene, &gt_scene, &job.options)
    })?;

    let mut acc = DatasetAccumulator::new(job.options.clone());
    for eval in evals {
        acc.push(eval);
    }
    Ok(acc.finalize())
}

/// An instance-free prediction has no intrinsic grid; give it the ground
/// truth's so the sizes line up.
fn align_empty_prediction(
    mut pred: crate::scene::ScoredScene,
    gt: &crate::scene::SceneAnnotation,
) -> crate::scene::ScoredScene {
    if pred.scene.instances.is_empty() {
        pred.scene.size = gt.size;
    }
    pred
}

#[derive(Debug, Clone)]
pub struct ClusterJob {
    pub semantic_dir: PathBuf,
    pub locations_dir: PathBuf,
    /// Directory of `{id}.count.txt`; defaults to `locations_dir`.
    pub counts_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub config: ClusterConfig,
    /// Upper clamp for regressed instance counts.
    pub max_instances: usize,
    pub labels: LabelSpec,
    pub threads: usize,
}

impl ClusterJob {
    pub fn new(
        semantic_dir: impl Into<PathBuf>,
        locations_dir: impl Into<PathBuf>,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        Self {
            semantic_dir: semantic_dir.into(),
            locations_dir: locations_dir.into(),
            counts_dir: None,
            out_dir: out_dir.into(),
            config: ClusterConfig::default(),
            max_instances: 26,
            labels: LabelSpec::mhp_v2(),
            threads: 0,
        }
    }
}

/// Ids covered by a locations directory: every `{id}.loc.f32`, sorted.
fn location_ids(dir: &Path) -> Result<Vec<String>> {
    let mut ids = Vec::new();
    for item in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let item = item.map_err(|e| Error::io(dir, e))?;
        let name = item.file_name();
        let Some(name) = name.to_str() else { continue };
        if let Some(id) = name.strip_suffix(".loc.f32") {
            if !id.is_empty() {
                ids.push(id.to_owned());
            }
        }
    }
    ids.sort();
    Ok(ids)
}

/// Clusters every image found in the locations directory into a standard
/// prediction directory. Returns the written paths.
pub fn cluster_dirs(job: &ClusterJob) -> Result<Vec<PathBuf>> {
    job.config.validate()?;
    let ids = location_ids(&job.locations_dir)?;
    if ids.is_empty() {
        return Err(Error::domain(format!(
            "no `.loc.f32` files under {}",
            job.locations_dir.display()
        )));
    }
    let counts_dir = job.counts_dir.clone().unwrap_or_else(|| job.locations_dir.clone());

    let written = run_parallel(ids, job.threads, |id| {
        let semantic = load_semantic_for(&job.semantic_dir, id, &job.labels)?;
        let locations = load_location_map(
            job.locations_dir.join(format!("{id}.loc.f32")),
            semantic.size(),
        )?;
        let raw = load_instance_count(counts_dir.join(format!("{id}.count.txt")))?;
        let n = round_instance_count(raw, job.max_instances)?;
        let labeling = cluster_instances(&semantic, &locations, n, &job.config)?;
        let scored = labeling_to_scene(&labeling, &semantic, id.as_str(), 1.0)?;
        save_predictions(&scored, &job.out_dir)
    })?;
    Ok(written.into_iter().flatten().collect())
}

/// Encodes ground-truth location maps and instance counts for a dataset.
pub fn encode_locations_dirs(
    gt_dir: impl AsRef<Path>,
    mode: EncodingMode,
    out_dir: impl AsRef<Path>,
    labels: &LabelSpec,
    threads: usize,
) -> Result<Vec<PathBuf>> {
    let handle = DatasetHandle::open(gt_dir.as_ref(), Split::All)?;
    let out = out_dir.as_ref().to_path_buf();
    let written = run_parallel(handle.image_ids(), threads, |id| {
        let scene = handle.load_scene(id, labels, false)?;
        let map = encode_locations(&scene, mode)?;
        let loc_path = out.join(format!("{id}.loc.f32"));
        save_location_map(&loc_path, &map)?;
        let count_path = out.join(format!("{id}.count.txt"));
        save_instance_count(&count_path, scene.person_count() as f64)?;
        Ok(vec![loc_path, count_path])
    })?;
    Ok(written.into_iter().flatten().collect())
}

/// Dataset statistics over one split (or everything).
pub fn stats_dir(
    gt_dir: impl AsRef<Path>,
    split: Split,
    labels: &LabelSpec,
    threads: usize,
) -> Result<StatsReport> {
    let handle = DatasetHandle::open(gt_dir.as_ref(), split)?;
    let scenes = run_parallel(handle.image_ids(), threads, |id| {
        handle.load_scene(id, labels, false)
    })?;
    let mut report = dataset_stats(scenes.iter(), labels)?;
    report.split_counts = handle.split_counts().clone();
    Ok(report)
}

/// Ranks images by interaction intensity and returns the top share.
pub fn subset_dir(
    gt_dir: impl AsRef<Path>,
    percent: u32,
    labels: &LabelSpec,
    threads: usize,
) -> Result<Vec<String>> {
    let handle = DatasetHandle::open(gt_dir.as_ref(), Split::All)?;
    let intensities = run_parallel(handle.image_ids(), threads, |id| {
        let scene = handle.load_scene(id, labels, false)?;
        Ok((id.clone(), interaction_intensity(&scene)))
    })?;
    select_subset(&intensities, percent)
}

/// Generates a synthetic dataset directly into a directory.
pub fn synth_to_dir(cfg: &SynthConfig, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let scenes = synth_generate(cfg)?;
    let out = out_dir.as_ref();
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut written = Vec::new();
    for scene in &scenes {
        written.extend(save_scene(scene, out)?);
    }
    Ok(written)
}

/// Corrupts a ground-truth directory into a prediction directory.
pub fn corrupt_dirs(
    gt_dir: impl AsRef<Path>,
    spec: &CorruptionSpec,
    out_dir: impl AsRef<Path>,
    labels: &LabelSpec,
    threads: usize,
) -> Result<Vec<PathBuf>> {
    spec.validate()?;
    let handle = DatasetHandle::open(gt_dir.as_ref(), Split::All)?;
    let out = out_dir.as_ref().to_path_buf();
    // Every image gets its own derived seed so corruption is independent of
    // evaluation order.
    let written = run_parallel(handle.image_ids(), threads, |id| {
        let scene = handle.load_scene(id, labels, false)?;
        let mut per_image = spec.clone();
        per_image.seed = derive_seed(spec.seed, id);
        let scored = corrupt(&scene, &per_image)?;
        save_predictions(&scored, &out)
    })?;
    Ok(written.into_iter().flatten().collect())
}

/// Stable per-image seed: FNV-1a over the id, folded into the base seed.
fn derive_seed(base: u64, image_id: &str) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for byte in image_id.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    base ^ hash
}
