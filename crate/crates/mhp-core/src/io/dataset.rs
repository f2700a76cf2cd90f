//! On-disk dataset layout.
//!
//! Ground truth and predictions share one mask naming convention:
//! `{image_id}_{N}_{k}.png` where `N` is the person count and `k` the
//! 1-based instance index. Prediction confidences live in a JSON sidecar
//! `{image_id}.pred.json`; when the sidecar is absent, masks load with unit
//! scores so a ground-truth directory doubles as a perfect prediction.
//! A root may be flat or hold `train`/`val`/`test` subdirectories.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::LabelSpec;
use crate::scene::{
    require_valid, validate, validate_scored, SceneAnnotation, ScoredScene, SemanticMap,
};

use super::masks::{load_instance_mask, load_semantic_map, save_instance_mask};

/// Which portion of a dataset root to open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Val,
    Test,
    All,
}

impl Split {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "train" => Ok(Self::Train),
            "val" => Ok(Self::Val),
            "test" => Ok(Self::Test),
            "all" => Ok(Self::All),
            other => Err(Error::domain(format!("unknown split `{other}`"))),
        }
    }

    fn dir_name(self) -> Option<&'static str> {
        match self {
            Split::Train => Some("train"),
            Split::Val => Some("val"),
            Split::Test => Some("test"),
            Split::All => None,
        }
    }
}

/// Splits `{image_id}_{N}_{k}` from the right; the id itself may contain
/// underscores.
pub fn parse_mask_filename(file_name: &str) -> Option<(String, usize, usize)> {
    let stem = file_name.strip_suffix(".png")?;
    let (rest, k) = stem.rsplit_once('_')?;
    let (image_id, n) = rest.rsplit_once('_')?;
    if image_id.is_empty() {
        return None;
    }
    let n: usize = n.parse().ok()?;
    let k: usize = k.parse().ok()?;
    if n == 0 || k == 0 {
        return None;
    }
    Some((image_id.to_owned(), n, k))
}

#[derive(Debug, Clone, Default)]
struct ImageEntry {
    dir: PathBuf,
    /// (declared person count, instance index, file path) per mask file.
    masks: Vec<(usize, usize, PathBuf)>,
    manifest: Option<PathBuf>,
}

/// A discovered dataset: image ids mapped to their files.
#[derive(Debug, Clone)]
pub struct DatasetHandle {
    root: PathBuf,
    split: Split,
    entries: BTreeMap<String, ImageEntry>,
    /// Image counts per split subdirectory, when the layout has them.
    split_counts: BTreeMap<String, usize>,
}

impl DatasetHandle {
    /// Scans a dataset root. For named splits the subdirectory of that name
    /// is required; `Split::All` takes the union of any split
    /// subdirectories present, or the root itself when there are none.
    pub fn open(root: impl Into<PathBuf>, split: Split) -> Result<Self> {
        let root = root.into();
        let mut entries = BTreeMap::new();
        let mut split_counts = BTreeMap::new();
        match split.dir_name() {
            Some(name) => {
                let dir = root.join(name);
                if !dir.is_dir() {
                    return Err(Error::domain(format!(
                        "split directory `{}` not found under {}",
                        name,
                        root.display()
                    )));
                }
                scan_dir(&dir, &mut entries)?;
            }
            None => {
                let mut found_split_dir = false;
                for name in ["train", "val", "test"] {
                    let dir = root.join(name);
                    if dir.is_dir() {
                        found_split_dir = true;
                        let before = entries.len();
                        scan_dir(&dir, &mut entries)?;
                        split_counts.insert(name.to_owned(), entries.len() - before);
                    }
                }
                if !found_split_dir {
                    if !root.is_dir() {
                        return Err(Error::io(
                            &root,
                            std::io::Error::new(
                                std::io::ErrorKind::NotFound,
                                "dataset directory not found",
                            ),
                        ));
                    }
                    scan_dir(&root, &mut entries)?;
                }
            }
        }
        Ok(Self {
            root,
            split,
            entries,
            split_counts,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn split(&self) -> Split {
        self.split
    }

    /// Unique ids, lexicographically sorted.
    pub fn image_ids(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, image_id: &str) -> bool {
        self.entries.contains_key(image_id)
    }

    pub fn split_counts(&self) -> &BTreeMap<String, usize> {
        &self.split_counts
    }

    fn entry(&self, image_id: &str) -> Result<&ImageEntry> {
        self.entries.get(image_id).ok_or_else(|| {
            Error::domain(format!(
                "image `{image_id}` not found under {}",
                self.root.display()
            ))
        })
    }

    /// The directory holding one image's files.
    pub fn image_dir(&self, image_id: &str) -> Result<&Path> {
        Ok(&self.entry(image_id)?.dir)
    }

    /// Loads one scene from its `{id}_{N}_{k}.png` files and validates it.
    pub fn load_scene(
        &self,
        image_id: &str,
        spec: &LabelSpec,
        strict: bool,
    ) -> Result<SceneAnnotation> {
        let entry = self.entry(image_id)?;
        if entry.masks.is_empty() {
            return Err(Error::domain(format!(
                "image `{image_id}` has no instance masks"
            )));
        }
        let n = entry.masks[0].0;
        if entry.masks.iter().any(|(en, _, _)| *en != n) {
            return Err(Error::domain(format!(
                "inconsistent person count in filenames for `{image_id}`"
            )));
        }
        let mut by_index: BTreeMap<usize, &PathBuf> = BTreeMap::new();
        for (_, k, path) in &entry.masks {
            if *k > n || by_index.insert(*k, path).is_some() {
                return Err(Error::domain(format!(
                    "inconsistent person count in filenames for `{image_id}`: index {k} with count {n}"
                )));
            }
        }
        for k in 1..=n {
            if !by_index.contains_key(&k) {
                return Err(Error::domain(format!(
                    "incomplete instance set for `{image_id}`: missing index {k} of {n}"
                )));
            }
        }

        let mut instances = Vec::with_capacity(n);
        for (_, path) in by_index {
            instances.push(load_instance_mask(path)?);
        }
        let size = instances[0].size();
        if let Some(bad) = instances.iter().position(|m| m.size() != size) {
            return Err(Error::domain(format!(
                "size mismatch in `{image_id}`: instance {} is {}, expected {}",
                bad + 1,
                instances[bad].size(),
                size
            )));
        }
        let scene = SceneAnnotation::new(image_id, size, instances);
        require_valid(image_id, validate(&scene, spec, strict))?;
        Ok(scene)
    }

    /// Loads predictions: the `{id}.pred.json` manifest when present,
    /// otherwise the image's mask files with unit scores.
    pub fn load_predictions(&self, image_id: &str, spec: &LabelSpec) -> Result<ScoredScene> {
        let entry = self.entry(image_id)?;
        match &entry.manifest {
            Some(manifest) => load_prediction_manifest(manifest, image_id, spec),
            None => {
                let scene = self.load_scene(image_id, spec, false)?;
                Ok(ScoredScene::with_unit_scores(scene))
            }
        }
    }
}

fn scan_dir(dir: &Path, entries: &mut BTreeMap<String, ImageEntry>) -> Result<()> {
    let listing = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for item in listing {
        let item = item.map_err(|e| Error::io(dir, e))?;
        let path = item.path();
        if !path.is_file() {
            continue;
        }
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if let Some((image_id, n, k)) = parse_mask_filename(name) {
            let entry = entries.entry(image_id).or_insert_with(|| ImageEntry {
                dir: dir.to_path_buf(),
                ..ImageEntry::default()
            });
            entry.masks.push((n, k, path));
        } else if let Some(image_id) = name.strip_suffix(".pred.json") {
            let entry = entries
                .entry(image_id.to_owned())
                .or_insert_with(|| ImageEntry {
                    dir: dir.to_path_buf(),
                    ..ImageEntry::default()
                });
            entry.manifest = Some(path);
        }
    }
    Ok(())
}

/// `{image_id}.pred.json` wire schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictionManifest {
    pub image_id: String,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub mask: String,
    pub score: f64,
}

fn load_prediction_manifest(
    manifest_path: &Path,
    image_id: &str,
    spec: &LabelSpec,
) -> Result<ScoredScene> {
    let text = std::fs::read_to_string(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let manifest: PredictionManifest = serde_json::from_str(&text)
        .map_err(|e| Error::codec(manifest_path, format!("manifest parse failed: {e}")))?;
    if manifest.image_id != image_id {
        return Err(Error::domain(format!(
            "manifest {} declares image `{}`",
            manifest_path.display(),
            manifest.image_id
        )));
    }
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let mut instances = Vec::with_capacity(manifest.entries.len());
    let mut scores = Vec::with_capacity(manifest.entries.len());
    for entry in &manifest.entries {
        if !(0.0..=1.0).contains(&entry.score) || entry.score.is_nan() {
            return Err(Error::domain(format!(
                "score out of range in {}: {}",
                manifest_path.display(),
                entry.score
            )));
        }
        instances.push(load_instance_mask(base.join(&entry.mask))?);
        scores.push(entry.score);
    }
    let size = match instances.first() {
        Some(m) => m.size(),
        // An empty prediction has no intrinsic size; callers align it to
        // the ground truth later. Use a 1x1 placeholder grid.
        None => crate::geometry::ImageSize::new(1, 1).expect("valid"),
    };
    if let Some(bad) = instances.iter().position(|m| m.size() != size) {
        return Err(Error::domain(format!(
            "size mismatch in `{image_id}` predictions: instance {bad}"
        )));
    }
    let scored = ScoredScene::new(SceneAnnotation::new(image_id, size, instances), scores);
    require_valid(image_id, validate_scored(&scored, spec))?;
    Ok(scored)
}

/// Writes a scene's masks as `{id}_{N}_{k}.png`; an instance-free scene
/// writes nothing.
pub fn save_scene(scene: &SceneAnnotation, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let n = scene.instances.len();
    let mut written = Vec::with_capacity(n);
    for (i, mask) in scene.instances.iter().enumerate() {
        let path = dir.join(format!("{}_{}_{}.png", scene.image_id, n, i + 1));
        save_instance_mask(&path, mask)?;
        written.push(path);
    }
    Ok(written)
}

/// Writes prediction masks plus the score manifest.
pub fn save_predictions(scored: &ScoredScene, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = save_scene(&scored.scene, dir)?;
    let n = scored.scene.instances.len();
    let manifest = PredictionManifest {
        image_id: scored.scene.image_id.clone(),
        entries: (0..n)
            .map(|i| ManifestEntry {
                mask: format!("{}_{}_{}.png", scored.scene.image_id, n, i + 1),
                score: scored.scores[i],
            })
            .collect(),
    };
    let path = dir.join(format!("{}.pred.json", scored.scene.image_id));
    let mut bytes = serde_json::to_vec_pretty(&manifest)
        .map_err(|e| Error::domain(format!("manifest serialization failed: {e}")))?;
    bytes.push(b'\n');
    std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(written)
}

/// Loads the instance-agnostic map for an image: a `{id}.png` semantic dump
/// when present, otherwise the flattened scene masks.
pub fn load_semantic_for(dir: impl AsRef<Path>, image_id: &str, spec: &LabelSpec) -> Result<SemanticMap> {
    let dir = dir.as_ref();
    let direct = dir.join(format!("{image_id}.png"));
    if direct.is_file() {
        return load_semantic_map(&direct);
    }
    let handle = DatasetHandle::open(dir, Split::All)?;
    handle.load_scene(image_id, spec, false)?.flatten()
}

/// Guard for operations that require identical id sets on both sides.
pub fn require_same_ids(gt: &[String], pred: &[String]) -> Result<()> {
    if gt == pred {
        return Ok(());
    }
    let gt_set: std::collections::BTreeSet<_> = gt.iter().collect();
    let pred_set: std::collections::BTreeSet<_> = pred.iter().collect();
    let missing: Vec<_> = gt_set.difference(&pred_set).take(3).collect();
    let extra: Vec<_> = pred_set.difference(&gt_set).take(3).collect();
    Err(Error::Misalignment(format!(
        "ground truth and predictions cover different images (missing from predictions: {missing:?}, unexpected: {extra:?})"
    )))
}
