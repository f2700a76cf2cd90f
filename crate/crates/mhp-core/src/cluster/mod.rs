//! Instance-aware clustering: location-vector encoding plus spectral
//! clustering of foreground pixels into person instances.
//!
//! Every pixel of a person carries the normalized corners of that person's
//! tight bounding box, `(x_left/w, y_top/h, x_right/w, y_bottom/h)`. In the
//! literal instance-normalized form, `w` and `h` are the box's own extent,
//! which makes proportionally similar boxes nearly indistinguishable; the
//! image-normalized form divides by the image extent instead and keeps
//! distinct boxes distinct. Clustering samples foreground pixels, builds a
//! Gaussian affinity over their location vectors, takes the top eigenvectors
//! of the symmetrically normalized affinity, and runs seeded k-means on the
//! row-normalized embedding.

mod kmeans;
mod spectral;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ImageSize;
use crate::labels::CategoryId;
use crate::scene::{InstanceMask, SceneAnnotation, ScoredScene, SemanticMap};

pub use kmeans::{kmeans, KMeansOutcome};

/// How location vectors are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingMode {
    /// Corners divided by the instance box's own width/height.
    #[default]
    InstanceNormalized,
    /// Corners divided by the image width/height.
    ImageNormalized,
}

impl EncodingMode {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "instance" => Ok(Self::InstanceNormalized),
            "image" => Ok(Self::ImageNormalized),
            other => Err(Error::domain(format!(
                "unknown encoding `{other}` (expected `instance` or `image`)"
            ))),
        }
    }
}

/// Dense per-pixel 4-vector field of normalized box corners.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationMap {
    size: ImageSize,
    vectors: Vec<[f32; 4]>,
}

impl LocationMap {
    pub fn from_vectors(size: ImageSize, vectors: Vec<[f32; 4]>) -> Result<Self> {
        if vectors.len() != size.pixel_count() {
            return Err(Error::domain(format!(
                "location map holds {} vectors but size {} needs {}",
                vectors.len(),
                size,
                size.pixel_count()
            )));
        }
        if let Some(bad) = vectors.iter().position(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::domain(format!(
                "location map contains a non-finite vector at pixel {bad}"
            )));
        }
        Ok(Self { size, vectors })
    }

    pub fn zeros(size: ImageSize) -> Self {
        Self {
            size,
            vectors: vec![[0.0; 4]; size.pixel_count()],
        }
    }

    pub fn size(&self) -> ImageSize {
        self.size
    }

    pub fn vectors(&self) -> &[[f32; 4]] {
        &self.vectors
    }

    #[inline]
    pub fn vector_at(&self, x: u32, y: u32) -> [f32; 4] {
        self.vectors[self.size.index(x, y)]
    }
}

/// Per-pixel instance ids: 0 means no instance, clusters are 1..=K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceLabeling {
    size: ImageSize,
    labels: Vec<u32>,
}

impl InstanceLabeling {
    pub fn from_labels(size: ImageSize, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != size.pixel_count() {
            return Err(Error::domain(format!(
                "labeling holds {} entries but size {} needs {}",
                labels.len(),
                size,
                size.pixel_count()
            )));
        }
        Ok(Self { size, labels })
    }

    pub fn size(&self) -> ImageSize {
        self.size
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn cluster_count(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0) as usize
    }
}

/// How σ for the Gaussian affinity is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaRule {
    /// Median of the positive pairwise distances among (at most 1,024 of)
    /// the sampled vectors.
    MedianDistance,
    Fixed(f64),
}

/// Clustering parameters; the defaults match the documented procedure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub encoding_mode: EncodingMode,
    /// Upper bound on pixels entering the eigenproblem.
    pub sample_cap: usize,
    pub sigma_rule: SigmaRule,
    pub kmeans_seed: u64,
    pub kmeans_max_iter: usize,
    pub kmeans_tol: f64,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            encoding_mode: EncodingMode::default(),
            sample_cap: 2048,
            sigma_rule: SigmaRule::MedianDistance,
            kmeans_seed: 0,
            kmeans_max_iter: 100,
            kmeans_tol: 1e-6,
        }
    }
}

impl ClusterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_cap < 1 {
            return Err(Error::domain("sample_cap must be at least 1"));
        }
        if self.kmeans_max_iter < 1 {
            return Err(Error::domain("kmeans_max_iter must be at least 1"));
        }
        if !(self.kmeans_tol > 0.0) {
            return Err(Error::domain("kmeans_tol must be positive"));
        }
        if let SigmaRule::Fixed(s) = self.sigma_rule {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::domain("fixed sigma must be positive and finite"));
            }
        }
        Ok(())
    }
}

/// Encodes the ground-truth location vector field of a scene. Pixel
/// ownership at instance overlaps follows the flatten rule (the last
/// instance wins); background pixels carry the zero vector.
pub fn encode_locations(scene: &SceneAnnotation, mode: EncodingMode) -> Result<LocationMap> {
    let size = scene.size;
    let mut owner: Vec<Option<usize>> = vec![None; size.pixel_count()];
    for (i, mask) in scene.instances.iter().enumerate() {
        if mask.size() != size {
            return Err(Error::domain(format!(
                "instance {i} has size {} but the scene is {}",
                mask.size(),
                size
            )));
        }
        for (idx, &p) in mask.pixels().iter().enumerate() {
            if p != 0 {
                owner[idx] = Some(i);
            }
        }
    }

    let mut instance_vectors = Vec::with_capacity(scene.instances.len());
    for mask in &scene.instances {
        let vector = match mask.bounding_box() {
            Ok(b) => {
                let (dx, dy) = match mode {
                    EncodingMode::InstanceNormalized => (b.width() as f64, b.height() as f64),
                    EncodingMode::ImageNormalized => (size.width as f64, size.height as f64),
                };
                Some([
                    (b.x_left as f64 / dx) as f32,
                    (b.y_top as f64 / dy) as f32,
                    (b.x_right as f64 / dx) as f32,
                    (b.y_bottom as f64 / dy) as f32,
                ])
            }
            Err(_) => None,
        };
        instance_vectors.push(vector);
    }

    let mut vectors = vec![[0.0f32; 4]; size.pixel_count()];
    for (idx, slot) in owner.iter().enumerate() {
        if let Some(i) = slot {
            if let Some(v) = instance_vectors[*i] {
                vectors[idx] = v;
            }
        }
    }
    LocationMap::from_vectors(size, vectors)
}

/// Rounds a regressed instance count to the nearest integer (half away from
/// zero) and clamps into `[1, max_n]`.
pub fn round_instance_count(raw: f64, max_n: usize) -> Result<usize> {
    if !raw.is_finite() {
        return Err(Error::domain(format!("instance count {raw} is not finite")));
    }
    if max_n == 0 {
        return Err(Error::domain("max_n must be at least 1"));
    }
    let rounded = raw.round();
    let clamped = if rounded < 1.0 {
        1
    } else if rounded > max_n as f64 {
        max_n
    } else {
        rounded as usize
    };
    Ok(clamped)
}

/// Partitions the foreground of a semantic map into at most `n` instances
/// driven by the location vectors. Non-sampled foreground pixels join the
/// cluster of their nearest sampled pixel in location-vector space. Cluster
/// ids are renumbered 1..=K by descending pixel count, ties broken by the
/// lowest contained pixel index.
pub fn cluster_instances(
    semantic: &SemanticMap,
    locations: &LocationMap,
    n: usize,
    cfg: &ClusterConfig,
) -> Result<InstanceLabeling> {
    if semantic.size() != locations.size() {
        return Err(Error::domain(format!(
            "semantic map is {} but location map is {}",
            semantic.size(),
            locations.size()
        )));
    }
    if n == 0 {
        return Err(Error::domain("instance count must be at least 1"));
    }
    cfg.validate()?;

    let size = semantic.size();
    let foreground: Vec<usize> = semantic
        .pixels()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p != 0)
        .map(|(idx, _)| idx)
        .collect();

    let mut labels = vec![0u32; size.pixel_count()];
    if foreground.is_empty() {
        return InstanceLabeling::from_labels(size, labels);
    }
    if n == 1 {
        for &idx in &foreground {
            labels[idx] = 1;
        }
        return InstanceLabeling::from_labels(size, labels);
    }

    let mut rng = ChaCha20Rng::seed_from_u64(cfg.kmeans_seed);

    // Uniform seeded subsample of the foreground, kept in pixel order.
    let sampled: Vec<usize> = if foreground.len() <= cfg.sample_cap {
        (0..foreground.len()).collect()
    } else {
        let mut picks: Vec<usize> =
            rand::seq::index::sample(&mut rng, foreground.len(), cfg.sample_cap).into_vec();
        picks.sort_unstable();
        picks
    };
    let raw = locations.vectors();
    let sampled_vectors: Vec<[f64; 4]> = sampled
        .iter()
        .map(|&si| {
            let v = raw[foreground[si]];
            [v[0] as f64, v[1] as f64, v[2] as f64, v[3] as f64]
        })
        .collect();

    let sigma = match cfg.sigma_rule {
        SigmaRule::Fixed(s) => s,
        SigmaRule::MedianDistance => {
            const SIGMA_POINT_CAP: usize = 1024;
            if sampled_vectors.len() <= SIGMA_POINT_CAP {
                spectral::median_positive_distance(&sampled_vectors)
            } else {
                let mut picks: Vec<usize> =
                    rand::seq::index::sample(&mut rng, sampled_vectors.len(), SIGMA_POINT_CAP)
                        .into_vec();
                picks.sort_unstable();
                let subset: Vec<[f64; 4]> = picks.iter().map(|&i| sampled_vectors[i]).collect();
                spectral::median_positive_distance(&subset)
            }
        }
    };
    if sigma == 0.0 {
        tracing::warn!(
            "all location vectors coincide; collapsing the foreground into one cluster"
        );
        for &idx in &foreground {
            labels[idx] = 1;
        }
        return InstanceLabeling::from_labels(size, labels);
    }

    let k = n.min(sampled_vectors.len());
    let embedding = spectral::spectral_embedding(&sampled_vectors, k, sigma);
    let outcome = kmeans::kmeans(&embedding, k, &mut rng, cfg.kmeans_max_iter, cfg.kmeans_tol);

    // Assign every foreground pixel to a k-means cluster: sampled pixels
    // directly, the rest via their nearest sampled vector (distance ties go
    // to the lower cluster id). Identical vectors share one lookup.
    let mut cluster_of_fg = vec![usize::MAX; foreground.len()];
    for (pos, &si) in sampled.iter().enumerate() {
        cluster_of_fg[si] = outcome.assignments[pos];
    }
    let mut memo: std::collections::HashMap<[u32; 4], usize> = std::collections::HashMap::new();
    for fi in 0..foreground.len() {
        if cluster_of_fg[fi] != usize::MAX {
            continue;
        }
        let v32 = raw[foreground[fi]];
        let key = [
            v32[0].to_bits(),
            v32[1].to_bits(),
            v32[2].to_bits(),
            v32[3].to_bits(),
        ];
        if let Some(&cluster) = memo.get(&key) {
            cluster_of_fg[fi] = cluster;
            continue;
        }
        let v = [v32[0] as f64, v32[1] as f64, v32[2] as f64, v32[3] as f64];
        let mut best_cluster = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (pos, sv) in sampled_vectors.iter().enumerate() {
            let d = spectral::distance(&v, sv);
            let cluster = outcome.assignments[pos];
            if d < best_d || (d == best_d && cluster < best_cluster) {
                best_d = d;
                best_cluster = cluster;
            }
        }
        memo.insert(key, best_cluster);
        cluster_of_fg[fi] = best_cluster;
    }

    // Renumber surviving clusters 1..=K by size, ties by first pixel.
    let mut stats: Vec<(usize, usize, usize)> = Vec::new(); // (cluster, count, min_idx)
    for cluster in 0..k {
        let mut count = 0usize;
        let mut min_idx = usize::MAX;
        for (fi, &c) in cluster_of_fg.iter().enumerate() {
            if c == cluster {
                count += 1;
                min_idx = min_idx.min(foreground[fi]);
            }
        }
        if count > 0 {
            stats.push((cluster, count, min_idx));
        }
    }
    stats.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    let mut relabel = vec![0u32; k];
    for (rank, &(cluster, _, _)) in stats.iter().enumerate() {
        relabel[cluster] = rank as u32 + 1;
    }

    for (fi, &cluster) in cluster_of_fg.iter().enumerate() {
        labels[foreground[fi]] = relabel[cluster];
    }
    InstanceLabeling::from_labels(size, labels)
}

/// Splits a labeling back into per-instance masks carrying the semantic
/// map's categories, with a uniform confidence score.
pub fn labeling_to_scene(
    labeling: &InstanceLabeling,
    semantic: &SemanticMap,
    image_id: impl Into<String>,
    default_score: f64,
) -> Result<ScoredScene> {
    if labeling.size() != semantic.size() {
        return Err(Error::domain(format!(
            "labeling is {} but semantic map is {}",
            labeling.size(),
            semantic.size()
        )));
    }
    let size = labeling.size();
    let clusters = labeling.cluster_count();
    let mut masks = vec![InstanceMask::blank(size); clusters];
    for (idx, &label) in labeling.labels().iter().enumerate() {
        if label == 0 {
            continue;
        }
        let (x, y) = size.coords(idx);
        let category = CategoryId(semantic.pixels()[idx]);
        masks[label as usize - 1].set_category(x, y, category);
    }
    let scores = vec![default_score; clusters];
    Ok(ScoredScene::new(
        SceneAnnotation::new(image_id, size, masks),
        scores,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn size(w: u32, h: u32) -> ImageSize {
        ImageSize::new(w, h).unwrap()
    }

    fn block(size: ImageSize, x0: u32, y0: u32, x1: u32, y1: u32, cat: u8) -> InstanceMask {
        let mut m = InstanceMask::blank(size);
        for y in y0..=y1 {
            for x in x0..=x1 {
                m.set_category(x, y, CategoryId(cat));
            }
        }
        m
    }

    #[test]
    fn encode_matches_hand_computed_vector() {
        // Box (10,20)-(49,99): w=40, h=80 → (0.25, 0.25, 1.225, 1.2375).
        let s = size(64, 128);
        let m = block(s, 10, 20, 49, 99, 3);
        let scene = SceneAnnotation::new("a", s, vec![m]);
        let map = encode_locations(&scene, EncodingMode::InstanceNormalized).unwrap();
        let expected = [0.25f32, 0.25, 1.225, 1.2375];
        assert_eq!(map.vector_at(10, 20), expected);
        assert_eq!(map.vector_at(30, 60), expected);
        assert_eq!(map.vector_at(0, 0), [0.0; 4]);
    }

    #[test]
    fn encode_all_background_is_zero() {
        let s = size(8, 8);
        let scene = SceneAnnotation::new("a", s, vec![]);
        let map = encode_locations(&scene, EncodingMode::InstanceNormalized).unwrap();
        assert!(map.vectors().iter().all(|v| *v == [0.0; 4]));
    }

    #[test]
    fn instance_normalized_vectors_nearly_collide_for_scaled_boxes() {
        // Proportionally similar boxes produce nearly identical
        // instance-normalized vectors even though the boxes differ wildly;
        // image normalization keeps them far apart. (The inclusive-corner
        // +1 in the width keeps the collision from being bit-exact.)
        let s = size(64, 64);
        let a = block(s, 0, 0, 9, 9, 3);
        let b = block(s, 0, 0, 19, 19, 4);
        let scene_a = SceneAnnotation::new("a", s, vec![a.clone()]);
        let scene_b = SceneAnnotation::new("b", s, vec![b.clone()]);
        let va = encode_locations(&scene_a, EncodingMode::InstanceNormalized)
            .unwrap()
            .vector_at(0, 0);
        let vb = encode_locations(&scene_b, EncodingMode::InstanceNormalized)
            .unwrap()
            .vector_at(0, 0);
        let inst_gap: f32 = va.iter().zip(&vb).map(|(x, y)| (x - y).abs()).sum();
        assert!(inst_gap < 0.11, "instance-normalized gap {inst_gap}");

        let ia = encode_locations(&scene_a, EncodingMode::ImageNormalized)
            .unwrap()
            .vector_at(0, 0);
        let ib = encode_locations(&scene_b, EncodingMode::ImageNormalized)
            .unwrap()
            .vector_at(0, 0);
        let img_gap: f32 = ia.iter().zip(&ib).map(|(x, y)| (x - y).abs()).sum();
        assert!(img_gap > 0.2, "image-normalized gap {img_gap}");
    }

    #[test]
    fn all_pixels_of_one_instance_share_their_vector() {
        let s = size(32, 32);
        let m = block(s, 3, 5, 12, 20, 7);
        let scene = SceneAnnotation::new("a", s, vec![m.clone()]);
        for mode in [EncodingMode::InstanceNormalized, EncodingMode::ImageNormalized] {
            let map = encode_locations(&scene, mode).unwrap();
            let v = map.vector_at(3, 5);
            for y in 5..=20 {
                for x in 3..=12 {
                    assert_eq!(map.vector_at(x, y), v);
                }
            }
        }
    }

    #[test]
    fn overlap_ownership_follows_flatten() {
        let s = size(16, 16);
        let a = block(s, 0, 0, 7, 7, 3);
        let b = block(s, 4, 4, 11, 11, 4);
        let scene = SceneAnnotation::new("a", s, vec![a, b]);
        let map = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        // Pixel (5,5) overlaps both; instance 1 owns it.
        let v_b = map.vector_at(11, 11);
        assert_eq!(map.vector_at(5, 5), v_b);
    }

    #[test]
    fn rounding_cases() {
        assert_eq!(round_instance_count(2.4, 26).unwrap(), 2);
        assert_eq!(round_instance_count(0.3, 26).unwrap(), 1);
        assert_eq!(round_instance_count(7.5, 26).unwrap(), 8);
        assert_eq!(round_instance_count(40.0, 26).unwrap(), 26);
        assert!(round_instance_count(f64::NAN, 26).is_err());
        assert!(round_instance_count(f64::INFINITY, 26).is_err());
    }

    #[test]
    fn zero_foreground_clusters_to_empty_labeling() {
        let s = size(8, 8);
        let semantic = SemanticMap::blank(s);
        let locations = LocationMap::zeros(s);
        let labeling = cluster_instances(&semantic, &locations, 3, &ClusterConfig::default()).unwrap();
        assert!(labeling.labels().iter().all(|&l| l == 0));
        assert_eq!(labeling.cluster_count(), 0);
    }

    #[test]
    fn n_one_labels_all_foreground() {
        let s = size(8, 8);
        let scene = SceneAnnotation::new("a", s, vec![block(s, 1, 1, 3, 3, 5)]);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let labeling = cluster_instances(&semantic, &locations, 1, &ClusterConfig::default()).unwrap();
        for (idx, &p) in semantic.pixels().iter().enumerate() {
            assert_eq!(labeling.labels()[idx], u32::from(p != 0));
        }
    }

    #[test]
    fn recovers_two_disjoint_instances() {
        let s = size(32, 32);
        let a = block(s, 1, 1, 8, 12, 3);
        let b = block(s, 16, 14, 28, 30, 4);
        let scene = SceneAnnotation::new("a", s, vec![a, b]);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let labeling = cluster_instances(&semantic, &locations, 2, &ClusterConfig::default()).unwrap();
        assert_eq!(labeling.cluster_count(), 2);
        // Instance pixels must be uniformly labeled within each block.
        let la = labeling.labels()[s.index(1, 1)];
        let lb = labeling.labels()[s.index(16, 14)];
        assert_ne!(la, lb);
        for y in 1..=12 {
            for x in 1..=8 {
                assert_eq!(labeling.labels()[s.index(x, y)], la);
            }
        }
        for y in 14..=30 {
            for x in 16..=28 {
                assert_eq!(labeling.labels()[s.index(x, y)], lb);
            }
        }
        // Bigger cluster gets id 1: b has 13x17=221 pixels vs a's 8x12=96.
        assert_eq!(lb, 1);
        assert_eq!(la, 2);
    }

    #[test]
    fn clustering_is_deterministic() {
        let s = size(24, 24);
        let a = block(s, 0, 0, 6, 6, 3);
        let b = block(s, 10, 2, 20, 12, 4);
        let c = block(s, 2, 14, 9, 22, 5);
        let scene = SceneAnnotation::new("a", s, vec![a, b, c]);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let cfg = ClusterConfig::default();
        let first = cluster_instances(&semantic, &locations, 3, &cfg).unwrap();
        let second = cluster_instances(&semantic, &locations, 3, &cfg).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn output_partitions_the_foreground() {
        let s = size(20, 20);
        let a = block(s, 0, 0, 6, 6, 3);
        let b = block(s, 10, 10, 18, 18, 4);
        let scene = SceneAnnotation::new("a", s, vec![a, b]);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let labeling = cluster_instances(&semantic, &locations, 2, &ClusterConfig::default()).unwrap();
        for (idx, &p) in semantic.pixels().iter().enumerate() {
            assert_eq!(p != 0, labeling.labels()[idx] != 0);
        }
    }

    #[test]
    fn labeling_round_trip_to_scene() {
        let s = size(16, 16);
        let a = block(s, 0, 0, 5, 5, 3);
        let b = block(s, 8, 8, 14, 14, 4);
        let scene = SceneAnnotation::new("a", s, vec![a, b]);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let labeling = cluster_instances(&semantic, &locations, 2, &ClusterConfig::default()).unwrap();
        let scored = labeling_to_scene(&labeling, &semantic, "a", 1.0).unwrap();
        assert_eq!(scored.instance_count(), 2);
        assert!(scored.scores.iter().all(|&s| s == 1.0));
        // Non-background pixel sets are disjoint and union to the
        // foreground.
        let mut covered = vec![false; s.pixel_count()];
        for mask in &scored.scene.instances {
            for (idx, &p) in mask.pixels().iter().enumerate() {
                if p != 0 {
                    assert!(!covered[idx]);
                    covered[idx] = true;
                    assert_eq!(p, semantic.pixels()[idx]);
                }
            }
        }
        for (idx, &p) in semantic.pixels().iter().enumerate() {
            assert_eq!(covered[idx], p != 0);
        }
    }

    #[test]
    fn single_cluster_scene_round_trip_identity() {
        let s = size(12, 12);
        let m = block(s, 2, 2, 9, 9, 7);
        let scene = SceneAnnotation::new("a", s, vec![m.clone()]);
        let semantic = scene.flatten().unwrap();
        let mut labels = vec![0u32; s.pixel_count()];
        for (idx, &p) in semantic.pixels().iter().enumerate() {
            if p != 0 {
                labels[idx] = 1;
            }
        }
        let labeling = InstanceLabeling::from_labels(s, labels).unwrap();
        let scored = labeling_to_scene(&labeling, &semantic, "a", 0.5).unwrap();
        assert_eq!(scored.instance_count(), 1);
        assert_eq!(scored.scene.instances[0].pixels(), semantic.pixels());
        assert_eq!(scored.scores, vec![0.5]);
    }

    #[test]
    fn empty_labeling_round_trips_to_empty_scene() {
        let s = size(8, 8);
        let labeling = InstanceLabeling::from_labels(s, vec![0; 64]).unwrap();
        let scored = labeling_to_scene(&labeling, &SemanticMap::blank(s), "a", 1.0).unwrap();
        assert_eq!(scored.instance_count(), 0);
    }
}
