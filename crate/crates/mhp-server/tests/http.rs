//! End-to-end service tests driven through the typed client.

use mhp_api::{
    ClusterRequest, CorruptRequest, CorruptionSpec, EncodeLocationsRequest, EvaluateRequest,
    StatsRequest, SubsetRequest, SynthRequest,
};
use mhp_client::{ClientError, MhpClient};
use mhp_server::{serve, ServerState};

async fn spawn_server(root: Option<std::path::PathBuf>) -> MhpClient {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        serve(listener, ServerState { root }).await.unwrap();
    });
    MhpClient::new(format!("http://{addr}"))
}

#[tokio::test]
async fn health_and_labels() {
    let client = spawn_server(None).await;
    let health = client.healthz().await.unwrap();
    assert_eq!(health["status"], "ok");
    let labels = client.labels().await.unwrap();
    assert_eq!(labels.lines().count(), 59);
    assert!(labels.starts_with("background\n"));
}

#[tokio::test]
async fn synth_evaluate_subset_stats_flow() {
    let dir = tempfile::tempdir().unwrap();
    let client = spawn_server(Some(dir.path().to_path_buf())).await;

    let written = client
        .synth(&SynthRequest {
            seed: 7,
            images: 5,
            grid: Some("32x32".into()),
            overlap: Some("disjoint".into()),
            instances: Some("2..4".into()),
            parts: None,
            out: "gt".into(),
        })
        .await
        .unwrap();
    assert!(!written.written.is_empty());

    // Ground truth evaluated against itself is perfect.
    let report = client
        .evaluate(&EvaluateRequest {
            gt: "gt".into(),
            pred: "gt".into(),
            metrics: None,
            thresholds: Some("0.1:0.9:0.1".into()),
            subset_ids: None,
            label: None,
            format: None,
            averaging: None,
            threads: None,
        })
        .await
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&report).unwrap();
    assert_eq!(report["ap_p"]["0.50"], 1.0);
    assert_eq!(report["ap_p_vol"], 1.0);
    assert_eq!(report["pcp"]["0.50"], 1.0);

    let subset = client
        .subset(&SubsetRequest {
            gt: "gt".into(),
            percent: 40,
        })
        .await
        .unwrap();
    assert_eq!(subset.image_ids.len(), 2);

    let stats = client
        .stats(&StatsRequest {
            gt: "gt".into(),
            split: None,
        })
        .await
        .unwrap();
    let stats: serde_json::Value = serde_json::from_slice(&stats).unwrap();
    assert_eq!(stats["image_count"], 5);
}

#[tokio::test]
async fn encode_cluster_corrupt_flow() {
    let dir = tempfile::tempdir().unwrap();
    let client = spawn_server(Some(dir.path().to_path_buf())).await;

    client
        .synth(&SynthRequest {
            seed: 11,
            images: 3,
            grid: Some("32x32".into()),
            overlap: Some("disjoint".into()),
            instances: None,
            parts: None,
            out: "gt".into(),
        })
        .await
        .unwrap();

    let encoded = client
        .encode_locations(&EncodeLocationsRequest {
            gt: "gt".into(),
            encoding: Some("image".into()),
            out: "enc".into(),
        })
        .await
        .unwrap();
    // One .loc.f32 plus one .count.txt per image.
    assert_eq!(encoded.written.len(), 6);

    let clustered = client
        .cluster(&ClusterRequest {
            semantic: "gt".into(),
            locations: "enc".into(),
            counts: None,
            encoding: Some("image".into()),
            seed: Some(0),
            max_instances: None,
            out: "pred".into(),
            threads: None,
        })
        .await
        .unwrap();
    assert!(!clustered.written.is_empty());

    let report = client
        .evaluate(&EvaluateRequest {
            gt: "gt".into(),
            pred: "pred".into(),
            metrics: Some("ap_r".into()),
            thresholds: Some("0.5:0.5:0.1".into()),
            subset_ids: None,
            label: None,
            format: Some("csv".into()),
            averaging: None,
            threads: None,
        })
        .await
        .unwrap();
    let text = String::from_utf8(report).unwrap();
    assert!(text.contains("ap_r,0.50,1,all"), "{text}");

    let corrupted = client
        .corrupt(&CorruptRequest {
            gt: "gt".into(),
            spec: CorruptionSpec {
                drop_prob: 1.0,
                seed: 4,
                ..CorruptionSpec::default()
            },
            out: "empty-pred".into(),
            threads: None,
        })
        .await
        .unwrap();
    // drop_prob 1: only the manifests are written.
    assert_eq!(corrupted.written.len(), 3);
}

#[tokio::test]
async fn errors_carry_kind_and_status() {
    let dir = tempfile::tempdir().unwrap();
    let client = spawn_server(Some(dir.path().to_path_buf())).await;

    // Escaping the root is refused.
    let err = client
        .subset(&SubsetRequest {
            gt: "../outside".into(),
            percent: 10,
        })
        .await
        .unwrap_err();
    match err {
        ClientError::Api { status, body } => {
            assert_eq!(status, 422);
            assert_eq!(body.kind, "validation");
        }
        other => panic!("unexpected error {other:?}"),
    }

    // A bad percent is a validation error even with data present.
    client
        .synth(&SynthRequest {
            seed: 1,
            images: 1,
            grid: None,
            overlap: None,
            instances: None,
            parts: None,
            out: "gt".into(),
        })
        .await
        .unwrap();
    let err = client
        .subset(&SubsetRequest {
            gt: "gt".into(),
            percent: 0,
        })
        .await
        .unwrap_err();
    match err {
        ClientError::Api { status, .. } => assert_eq!(status, 422),
        other => panic!("unexpected error {other:?}"),
    }
}
