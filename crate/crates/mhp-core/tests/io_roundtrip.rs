//! Round-trip and determinism properties of the on-disk formats.

use proptest::prelude::*;

use mhp_core::cluster::{encode_locations, EncodingMode};
use mhp_core::geometry::ImageSize;
use mhp_core::io::{
    load_location_map, save_location_map, save_scene, write_report, DatasetHandle, ReportFormat,
    Split,
};
use mhp_core::labels::LabelSpec;
use mhp_core::metrics::{evaluate_dataset, EvalOptions};
use mhp_core::scene::ScoredScene;
use mhp_core::synth::{synth_generate, OverlapMode, SynthConfig};

fn synth(seed: u64, overlap: OverlapMode) -> SynthConfig {
    SynthConfig {
        seed,
        image_count: 2,
        grid: ImageSize::new(17, 23).unwrap(),
        instances_per_image: 1..=4,
        parts_per_instance: 1..=3,
        overlap_mode: overlap,
        ..SynthConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scene_save_load_is_identity(seed in 0u64..10_000) {
        let overlap = match seed % 3 {
            0 => OverlapMode::Disjoint,
            1 => OverlapMode::Mild,
            _ => OverlapMode::Heavy,
        };
        let scenes = synth_generate(&synth(seed, overlap)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for scene in &scenes {
            save_scene(scene, dir.path()).unwrap();
        }
        let handle = DatasetHandle::open(dir.path(), Split::All).unwrap();
        let spec = LabelSpec::mhp_v2();
        prop_assert_eq!(handle.len(), scenes.len());
        for scene in &scenes {
            let loaded = handle.load_scene(&scene.image_id, &spec, false).unwrap();
            prop_assert_eq!(&loaded, scene);
        }
    }

    #[test]
    fn location_map_save_load_is_bit_exact(seed in 0u64..10_000) {
        let scenes = synth_generate(&synth(seed, OverlapMode::Mild)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for scene in &scenes {
            for mode in [EncodingMode::InstanceNormalized, EncodingMode::ImageNormalized] {
                let map = encode_locations(scene, mode).unwrap();
                let path = dir.path().join(format!("{}.loc.f32", scene.image_id));
                save_location_map(&path, &map).unwrap();
                let loaded = load_location_map(&path, scene.size).unwrap();
                prop_assert_eq!(&loaded, &map);
            }
        }
    }

    #[test]
    fn report_serialization_is_deterministic(seed in 0u64..10_000) {
        let scenes = synth_generate(&synth(seed, OverlapMode::Disjoint)).unwrap();
        let pairs: Vec<(ScoredScene, _)> = scenes
            .into_iter()
            .map(|gt| (ScoredScene::with_unit_scores(gt.clone()), gt))
            .collect();
        let opts = EvalOptions::default();
        let a = evaluate_dataset(pairs.iter().map(|(p, g)| (p, g)), &opts).unwrap();
        let b = evaluate_dataset(pairs.iter().map(|(p, g)| (p, g)), &opts).unwrap();
        prop_assert_eq!(
            write_report(&a, ReportFormat::Json).unwrap(),
            write_report(&b, ReportFormat::Json).unwrap()
        );
        prop_assert_eq!(
            write_report(&a, ReportFormat::Csv).unwrap(),
            write_report(&b, ReportFormat::Csv).unwrap()
        );
    }
}

#[test]
fn golden_report_bytes() {
    use mhp_core::metrics::{MetricReport, Threshold};
    let t5 = Threshold::from_value(0.5).unwrap();
    let mut report = MetricReport {
        subset: "all".to_owned(),
        image_count: 1,
        total_gt_instances: 1,
        ..MetricReport::default()
    };
    report.ap_p.insert(t5, 1.0);
    report.pcp.insert(t5, 0.5);

    let json = String::from_utf8(write_report(&report, ReportFormat::Json).unwrap()).unwrap();
    let expected_json = "{\n  \"ap_p\": {\n    \"0.50\": 1.0\n  },\n  \"image_count\": 1,\n  \"pcp\": {\n    \"0.50\": 0.5\n  },\n  \"subset\": \"all\",\n  \"total_gt_instances\": 1\n}\n";
    assert_eq!(json, expected_json);

    let csv = String::from_utf8(write_report(&report, ReportFormat::Csv).unwrap()).unwrap();
    assert_eq!(csv, "metric,threshold,value,subset\nap_p,0.50,1,all\npcp,0.50,0.5,all\n");
}
