//! Seeded corruption operators that turn ground truth into imperfect
//! predictions: morphological erosion, instance dropping, category
//! relabeling, pairwise merging, and score noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::CategoryId;
use crate::scene::{InstanceMask, SceneAnnotation, ScoredScene};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorruptionSpec {
    /// Iterations of 4-neighborhood erosion applied to each instance.
    #[serde(default)]
    pub erode_radius: u32,
    /// Probability of dropping each instance.
    #[serde(default)]
    pub drop_prob: f64,
    /// Standard deviation of the score perturbation.
    #[serde(default)]
    pub score_noise: f64,
    /// Fraction of foreground pixels whose category is rewritten.
    #[serde(default)]
    pub relabel_frac: f64,
    /// Probability of merging each consecutive instance pair.
    #[serde(default)]
    pub merge_prob: f64,
    pub seed: u64,
}

impl Default for CorruptionSpec {
    fn default() -> Self {
        Self {
            erode_radius: 0,
            drop_prob: 0.0,
            score_noise: 0.0,
            relabel_frac: 0.0,
            merge_prob: 0.0,
            seed: 0,
        }
    }
}

impl CorruptionSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("drop_prob", self.drop_prob),
            ("relabel_frac", self.relabel_frac),
            ("merge_prob", self.merge_prob),
        ] {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::domain(format!("{name} {p} must lie in [0, 1]")));
            }
        }
        if self.score_noise < 0.0 || !self.score_noise.is_finite() {
            return Err(Error::domain(format!(
                "score_noise {} must be non-negative",
                self.score_noise
            )));
        }
        Ok(())
    }
}

/// One pass of binary erosion with the 4-neighborhood structuring element:
/// a pixel survives iff it and its four edge neighbors are all foreground
/// (pixels beyond the border count as background).
fn erode_once(mask: &InstanceMask) -> InstanceMask {
    let size = mask.size();
    let (w, h) = (size.width, size.height);
    let src = mask.pixels();
    let mut out = InstanceMask::blank(size);
    for y in 0..h {
        for x in 0..w {
            let idx = size.index(x, y);
            if src[idx] == 0 {
                continue;
            }
            let survives = x > 0
                && src[size.index(x - 1, y)] != 0
                && x + 1 < w
                && src[size.index(x + 1, y)] != 0
                && y > 0
                && src[size.index(x, y - 1)] != 0
                && y + 1 < h
                && src[size.index(x, y + 1)] != 0;
            if survives {
                out.set_category(x, y, CategoryId(src[idx]));
            }
        }
    }
    out
}

fn erode(mask: &InstanceMask, radius: u32) -> InstanceMask {
    let mut current = mask.clone();
    for _ in 0..radius {
        if current.foreground_count() == 0 {
            break;
        }
        current = erode_once(&current);
    }
    current
}

fn merge_into(base: &mut InstanceMask, other: &InstanceMask) {
    let size = base.size();
    for (idx, &p) in other.pixels().iter().enumerate() {
        if p != 0 {
            let (x, y) = size.coords(idx);
            base.set_category(x, y, CategoryId(p));
        }
    }
}

/// Applies the corruption pipeline (erode, drop, relabel, merge, score) to
/// one scene. The all-zero spec reproduces the ground truth with unit
/// scores; `drop_prob` = 1 yields an instance-free prediction.
pub fn corrupt(gt: &SceneAnnotation, spec: &CorruptionSpec) -> Result<ScoredScene> {
    spec.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);

    // Erosion first; instances eroded away entirely are discarded.
    let mut masks: Vec<InstanceMask> = gt
        .instances
        .iter()
        .map(|m| erode(m, spec.erode_radius))
        .filter(|m| m.foreground_count() > 0)
        .collect();

    if spec.drop_prob > 0.0 {
        masks.retain(|_| rng.random::<f64>() >= spec.drop_prob);
    }

    if spec.relabel_frac > 0.0 {
        // Replacement categories come from the ground-truth scene's own
        // category universe.
        let mut universe = std::collections::BTreeSet::new();
        for mask in &gt.instances {
            universe.extend(mask.categories_present());
        }
        let universe: Vec<CategoryId> = universe.into_iter().collect();
        if universe.len() >= 2 {
            for mask in &mut masks {
                let size = mask.size();
                for idx in 0..size.pixel_count() {
                    let current = mask.pixels()[idx];
                    if current == 0 || rng.random::<f64>() >= spec.relabel_frac {
                        continue;
                    }
                    let others: Vec<CategoryId> = universe
                        .iter()
                        .copied()
                        .filter(|c| c.0 != current)
                        .collect();
                    let pick = others[rng.random_range(0..others.len())];
                    let (x, y) = size.coords(idx);
                    mask.set_category(x, y, pick);
                }
            }
        }
    }

    if spec.merge_prob > 0.0 {
        let mut merged: Vec<InstanceMask> = Vec::with_capacity(masks.len());
        for mask in masks {
            let join = !merged.is_empty() && rng.random::<f64>() < spec.merge_prob;
            if join {
                let last = merged.last_mut().expect("non-empty");
                merge_into(last, &mask);
            } else {
                merged.push(mask);
            }
        }
        masks = merged;
    }

    let scores: Vec<f64> = if spec.score_noise > 0.0 {
        let normal = Normal::new(0.0, spec.score_noise)
            .map_err(|e| Error::domain(format!("bad score noise: {e}")))?;
        masks
            .iter()
            .map(|_| (1.0 - normal.sample(&mut rng)).clamp(0.0, 1.0))
            .collect()
    } else {
        vec![1.0; masks.len()]
    };

    Ok(ScoredScene::new(
        SceneAnnotation::new(gt.image_id.clone(), gt.size, masks),
        scores,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ImageSize;
    use crate::metrics::{part_iou, CategoryAveraging};

    fn block(size: ImageSize, x0: u32, y0: u32, x1: u32, y1: u32, cat: u8) -> InstanceMask {
        let mut m = InstanceMask::blank(size);
        for y in y0..=y1 {
            for x in x0..=x1 {
                m.set_category(x, y, CategoryId(cat));
            }
        }
        m
    }

    fn sz() -> ImageSize {
        ImageSize::new(16, 16).unwrap()
    }

    #[test]
    fn zero_spec_is_identity_with_unit_scores() {
        let gt = SceneAnnotation::new(
            "a",
            sz(),
            vec![block(sz(), 0, 0, 3, 3, 3), block(sz(), 8, 8, 11, 11, 4)],
        );
        let out = corrupt(&gt, &CorruptionSpec::default()).unwrap();
        assert_eq!(out.scene, gt);
        assert_eq!(out.scores, vec![1.0, 1.0]);
    }

    #[test]
    fn drop_everything() {
        let gt = SceneAnnotation::new("a", sz(), vec![block(sz(), 0, 0, 3, 3, 3)]);
        let spec = CorruptionSpec {
            drop_prob: 1.0,
            seed: 5,
            ..CorruptionSpec::default()
        };
        let out = corrupt(&gt, &spec).unwrap();
        assert_eq!(out.instance_count(), 0);
    }

    #[test]
    fn erosion_of_3x3_block_leaves_center_pixel() {
        let gt_mask = block(sz(), 4, 4, 6, 6, 7);
        let gt = SceneAnnotation::new("a", sz(), vec![gt_mask.clone()]);
        let spec = CorruptionSpec {
            erode_radius: 1,
            ..CorruptionSpec::default()
        };
        let out = corrupt(&gt, &spec).unwrap();
        assert_eq!(out.instance_count(), 1);
        let eroded = &out.scene.instances[0];
        assert_eq!(eroded.foreground_count(), 1);
        assert_eq!(eroded.category_at(5, 5), CategoryId(7));
        let (_, mean) = part_iou(eroded, &gt_mask, CategoryAveraging::Union);
        assert_eq!(mean, 1.0 / 9.0);
    }

    #[test]
    fn erosion_can_remove_instances_entirely() {
        // A 1-pixel-wide line erodes to nothing.
        let gt = SceneAnnotation::new("a", sz(), vec![block(sz(), 2, 2, 2, 9, 3)]);
        let spec = CorruptionSpec {
            erode_radius: 1,
            ..CorruptionSpec::default()
        };
        let out = corrupt(&gt, &spec).unwrap();
        assert_eq!(out.instance_count(), 0);
    }

    #[test]
    fn merge_prob_one_collapses_to_single_instance() {
        let gt = SceneAnnotation::new(
            "a",
            sz(),
            vec![block(sz(), 0, 0, 3, 3, 3), block(sz(), 8, 8, 11, 11, 4)],
        );
        let spec = CorruptionSpec {
            merge_prob: 1.0,
            seed: 2,
            ..CorruptionSpec::default()
        };
        let out = corrupt(&gt, &spec).unwrap();
        assert_eq!(out.instance_count(), 1);
        assert_eq!(out.scene.instances[0].foreground_count(), 32);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let gt = SceneAnnotation::new(
            "a",
            sz(),
            vec![block(sz(), 0, 0, 5, 5, 3), block(sz(), 7, 7, 12, 12, 4)],
        );
        let spec = CorruptionSpec {
            erode_radius: 1,
            drop_prob: 0.3,
            relabel_frac: 0.2,
            merge_prob: 0.2,
            score_noise: 0.1,
            seed: 42,
        };
        let a = corrupt(&gt, &spec).unwrap();
        let b = corrupt(&gt, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scores_stay_in_range() {
        let gt = SceneAnnotation::new("a", sz(), vec![block(sz(), 0, 0, 5, 5, 3)]);
        for seed in 0..50 {
            let spec = CorruptionSpec {
                score_noise: 2.0,
                seed,
                ..CorruptionSpec::default()
            };
            let out = corrupt(&gt, &spec).unwrap();
            assert!(out.scores.iter().all(|s| (0.0..=1.0).contains(s)));
        }
    }

    #[test]
    fn rejects_bad_probabilities() {
        let spec = CorruptionSpec {
            drop_prob: 1.5,
            ..CorruptionSpec::default()
        };
        assert!(spec.validate().is_err());
    }
}
