//! Property tests for the scoring engine.

use proptest::prelude::*;

use mhp_core::corrupt::{corrupt, CorruptionSpec};
use mhp_core::geometry::ImageSize;
use mhp_core::metrics::{
    evaluate_dataset, instance_pair_iou, interaction_intensity, CategoryAveraging, EvalOptions,
    Threshold,
};
use mhp_core::scene::{InstanceMask, SceneAnnotation, ScoredScene};
use mhp_core::synth::{synth_generate, OverlapMode, SynthConfig};

fn suite(seed: u64, overlap: OverlapMode) -> Vec<(ScoredScene, SceneAnnotation)> {
    let cfg = SynthConfig {
        seed,
        image_count: 3,
        grid: ImageSize::new(24, 24).unwrap(),
        instances_per_image: 1..=4,
        parts_per_instance: 1..=3,
        overlap_mode: overlap,
        ..SynthConfig::default()
    };
    let corruption = CorruptionSpec {
        erode_radius: (seed % 2) as u32,
        drop_prob: 0.25,
        score_noise: 0.2,
        relabel_frac: 0.1,
        merge_prob: 0.1,
        seed: seed ^ 0x5eed,
    };
    synth_generate(&cfg)
        .unwrap()
        .into_iter()
        .map(|gt| (corrupt(&gt, &corruption).unwrap(), gt))
        .collect()
}

fn overlap_from(index: u64) -> OverlapMode {
    match index % 3 {
        0 => OverlapMode::Disjoint,
        1 => OverlapMode::Mild,
        _ => OverlapMode::Heavy,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ap_p_is_non_increasing_in_threshold(seed in 0u64..10_000) {
        let pairs = suite(seed, overlap_from(seed));
        let opts = EvalOptions { with_traces: false, ..EvalOptions::default() };
        let report = evaluate_dataset(pairs.iter().map(|(p, g)| (p, g)), &opts).unwrap();
        let ladder = Threshold::ladder();
        for pair in ladder.windows(2) {
            prop_assert!(report.ap_p[&pair[0]] >= report.ap_p[&pair[1]],
                "ap_p({}) < ap_p({})", pair[0], pair[1]);
        }
    }

    #[test]
    fn part_mean_bounded_by_max_per_category(seed in 0u64..10_000) {
        let pairs = suite(seed, overlap_from(seed));
        for (pred, gt) in &pairs {
            for p in &pred.scene.instances {
                for g in &gt.instances {
                    let pair = instance_pair_iou(p, g, CategoryAveraging::Union);
                    prop_assert!((0.0..=1.0).contains(&pair.part_mean));
                    prop_assert!((0.0..=1.0).contains(&pair.region));
                    if let Some(max) = pair
                        .per_category
                        .values()
                        .cloned()
                        .max_by(f64::total_cmp)
                    {
                        prop_assert!(pair.part_mean <= max + 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn permuting_distinct_scores_leaves_metrics_unchanged(seed in 0u64..10_000) {
        let pairs = suite(seed, overlap_from(seed));
        // Reassign distinct scores, then rotate the storage order.
        let reordered: Vec<(ScoredScene, SceneAnnotation)> = pairs
            .iter()
            .map(|(pred, gt)| {
                let n = pred.instance_count();
                let scores: Vec<f64> = (0..n).map(|i| 1.0 / (i + 2) as f64).collect();
                let mut masks = pred.scene.instances.clone();
                let mut scores_rot = scores.clone();
                if n > 1 {
                    masks.rotate_left(1);
                    scores_rot.rotate_left(1);
                }
                let base = ScoredScene::new(
                    SceneAnnotation::new(&gt.image_id[..], pred.scene.size, pred.scene.instances.clone()),
                    scores,
                );
                let rotated = ScoredScene::new(
                    SceneAnnotation::new(&gt.image_id[..], pred.scene.size, masks),
                    scores_rot,
                );
                (base, rotated, gt.clone())
            })
            .flat_map(|(base, rotated, gt)| vec![(base, gt.clone()), (rotated, gt)])
            .collect();

        let opts = EvalOptions { with_traces: false, ..EvalOptions::default() };
        let base: Vec<_> = reordered.iter().step_by(2).map(|(p, g)| (p, g)).collect();
        let rotated: Vec<_> = reordered.iter().skip(1).step_by(2).map(|(p, g)| (p, g)).collect();
        let r1 = evaluate_dataset(base, &opts).unwrap();
        let r2 = evaluate_dataset(rotated, &opts).unwrap();
        for t in Threshold::ladder() {
            prop_assert!((r1.ap_p[&t] - r2.ap_p[&t]).abs() < 1e-12);
            prop_assert!((r1.pcp[&t] - r2.pcp[&t]).abs() < 1e-12);
            prop_assert!((r1.ap_r[&t] - r2.ap_r[&t]).abs() < 1e-12);
        }
    }

    #[test]
    fn perfect_prediction_identity(seed in 0u64..10_000) {
        let cfg = SynthConfig {
            seed,
            image_count: 2,
            grid: ImageSize::new(20, 20).unwrap(),
            overlap_mode: overlap_from(seed),
            ..SynthConfig::default()
        };
        let gts = synth_generate(&cfg).unwrap();
        let pairs: Vec<(ScoredScene, SceneAnnotation)> = gts
            .into_iter()
            .map(|gt| (ScoredScene::with_unit_scores(gt.clone()), gt))
            .collect();
        let opts = EvalOptions { with_traces: false, ..EvalOptions::default() };
        let report = evaluate_dataset(pairs.iter().map(|(p, g)| (p, g)), &opts).unwrap();
        for t in Threshold::ladder() {
            prop_assert_eq!(report.ap_p[&t], 1.0);
            prop_assert_eq!(report.pcp[&t], 1.0);
            prop_assert_eq!(report.ap_r[&t], 1.0);
        }
        prop_assert_eq!(report.ap_p_vol, Some(1.0));
    }

    #[test]
    fn intensity_invariant_under_translation_and_scaling(seed in 0u64..10_000) {
        let cfg = SynthConfig {
            seed,
            image_count: 1,
            grid: ImageSize::new(16, 16).unwrap(),
            overlap_mode: overlap_from(seed),
            ..SynthConfig::default()
        };
        let scene = synth_generate(&cfg).unwrap().remove(0);
        let base = interaction_intensity(&scene);

        // Translate everything by (3, 2) on a larger canvas.
        let big = ImageSize::new(24, 24).unwrap();
        let translated: Vec<InstanceMask> = scene
            .instances
            .iter()
            .map(|m| {
                let mut out = InstanceMask::blank(big);
                for y in 0..16 {
                    for x in 0..16 {
                        let c = m.category_at(x, y);
                        if !c.is_background() {
                            out.set_category(x + 3, y + 2, c);
                        }
                    }
                }
                out
            })
            .collect();
        let translated = SceneAnnotation::new("t", big, translated);
        prop_assert_eq!(interaction_intensity(&translated), base);

        // Replicate each pixel 2x2; every box edge scales exactly.
        let scaled_size = ImageSize::new(32, 32).unwrap();
        let scaled: Vec<InstanceMask> = scene
            .instances
            .iter()
            .map(|m| {
                let mut out = InstanceMask::blank(scaled_size);
                for y in 0..16 {
                    for x in 0..16 {
                        let c = m.category_at(x, y);
                        if !c.is_background() {
                            for dy in 0..2 {
                                for dx in 0..2 {
                                    out.set_category(2 * x + dx, 2 * y + dy, c);
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let scaled = SceneAnnotation::new("s", scaled_size, scaled);
        prop_assert_eq!(interaction_intensity(&scaled), base);
    }
}
