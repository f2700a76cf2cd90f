//! Recovery and determinism properties of the clustering pipeline.

use proptest::prelude::*;

use mhp_core::cluster::{
    cluster_instances, encode_locations, labeling_to_scene, ClusterConfig, EncodingMode,
    InstanceLabeling,
};
use mhp_core::geometry::ImageSize;
use mhp_core::metrics::{evaluate_dataset, EvalOptions, MetricSelection, Threshold};
use mhp_core::scene::{SceneAnnotation, ScoredScene};
use mhp_core::synth::{synth_generate, SynthConfig};

fn disjoint_cfg(seed: u64) -> SynthConfig {
    SynthConfig {
        seed,
        image_count: 1,
        grid: ImageSize::new(40, 40).unwrap(),
        instances_per_image: 2..=5,
        parts_per_instance: 1..=3,
        ..SynthConfig::default()
    }
}

/// Share of foreground pixels on which the recovered partition agrees with
/// the ground-truth partition, after greedily aligning cluster ids to
/// instances by overlap.
fn partition_agreement(scene: &SceneAnnotation, labeling: &InstanceLabeling) -> f64 {
    let size = scene.size;
    let n = scene.instances.len();
    let k = labeling.cluster_count();
    // overlap[cluster][instance]
    let mut overlap = vec![vec![0usize; n]; k + 1];
    let mut foreground = 0usize;
    let mut gt_owner = vec![usize::MAX; size.pixel_count()];
    for (i, mask) in scene.instances.iter().enumerate() {
        for (idx, &p) in mask.pixels().iter().enumerate() {
            if p != 0 {
                gt_owner[idx] = i;
            }
        }
    }
    for (idx, &owner) in gt_owner.iter().enumerate() {
        if owner == usize::MAX {
            continue;
        }
        foreground += 1;
        let label = labeling.labels()[idx] as usize;
        overlap[label][owner] += 1;
    }
    // Greedy one-to-one alignment by descending overlap.
    let mut triples = Vec::new();
    for (cluster, row) in overlap.iter().enumerate().skip(1) {
        for (instance, &count) in row.iter().enumerate() {
            if count > 0 {
                triples.push((count, cluster, instance));
            }
        }
    }
    triples.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut cluster_used = vec![false; k + 1];
    let mut instance_used = vec![false; n];
    let mut agreed = 0usize;
    for (count, cluster, instance) in triples {
        if cluster_used[cluster] || instance_used[instance] {
            continue;
        }
        cluster_used[cluster] = true;
        instance_used[instance] = true;
        agreed += count;
    }
    agreed as f64 / foreground as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exact_recovery_on_disjoint_scenes(seed in 0u64..10_000) {
        let scene = synth_generate(&disjoint_cfg(seed)).unwrap().remove(0);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let n = scene.person_count();
        let cfg = ClusterConfig::default();
        let labeling = cluster_instances(&semantic, &locations, n, &cfg).unwrap();
        let agreement = partition_agreement(&scene, &labeling);
        prop_assert!(agreement == 1.0, "seed {} agreement {}", seed, agreement);
    }

    #[test]
    fn labeling_partitions_foreground(seed in 0u64..10_000) {
        let scene = synth_generate(&disjoint_cfg(seed)).unwrap().remove(0);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let labeling =
            cluster_instances(&semantic, &locations, scene.person_count(), &ClusterConfig::default())
                .unwrap();
        for (idx, &p) in semantic.pixels().iter().enumerate() {
            prop_assert_eq!(p != 0, labeling.labels()[idx] != 0);
        }
    }

    #[test]
    fn clustering_is_bit_deterministic(seed in 0u64..10_000) {
        let scene = synth_generate(&disjoint_cfg(seed)).unwrap().remove(0);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let cfg = ClusterConfig { kmeans_seed: seed, ..ClusterConfig::default() };
        let a = cluster_instances(&semantic, &locations, scene.person_count(), &cfg).unwrap();
        let b = cluster_instances(&semantic, &locations, scene.person_count(), &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn round_trip_reaches_perfect_ap_r(seed in 0u64..10_000) {
        let scene = synth_generate(&disjoint_cfg(seed)).unwrap().remove(0);
        let semantic = scene.flatten().unwrap();
        let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
        let labeling =
            cluster_instances(&semantic, &locations, scene.person_count(), &ClusterConfig::default())
                .unwrap();
        let pred = labeling_to_scene(&labeling, &semantic, &scene.image_id[..], 1.0).unwrap();
        let opts = EvalOptions {
            thresholds: vec![Threshold::from_value(0.5).unwrap()],
            metrics: MetricSelection { ap_p: false, pcp: false, ap_r: true },
            with_traces: false,
            ..EvalOptions::default()
        };
        let report = evaluate_dataset([(&pred, &scene)], &opts).unwrap();
        prop_assert_eq!(report.ap_r[&Threshold::from_value(0.5).unwrap()], 1.0);
    }
}

/// Oversampled scenes still cluster correctly when the cap covers the
/// foreground exactly; with a tiny cap the assignment falls back to nearest
/// sampled vectors and still partitions the foreground.
#[test]
fn small_sample_cap_still_partitions() {
    let scene = synth_generate(&disjoint_cfg(77)).unwrap().remove(0);
    let semantic = scene.flatten().unwrap();
    let locations = encode_locations(&scene, EncodingMode::ImageNormalized).unwrap();
    let cfg = ClusterConfig {
        sample_cap: 16,
        ..ClusterConfig::default()
    };
    let labeling =
        cluster_instances(&semantic, &locations, scene.person_count(), &cfg).unwrap();
    for (idx, &p) in semantic.pixels().iter().enumerate() {
        assert_eq!(p != 0, labeling.labels()[idx] != 0);
    }
    // Point-mass vectors make nearest-sample assignment exact as long as
    // every instance landed in the sample.
    let agreement = partition_agreement(&scene, &labeling);
    assert!(agreement > 0.5, "agreement {agreement}");
}
