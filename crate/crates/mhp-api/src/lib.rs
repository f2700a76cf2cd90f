//! Request/response types for the HTTP evaluation service.
//!
//! Requests name directories on the server's filesystem (relative to the
//! server root when one is configured), mirroring the CLI flags one-to-one.

use serde::{Deserialize, Serialize};

pub use mhp_core::corrupt::CorruptionSpec;

/// `POST /v1/evaluate`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluateRequest {
    pub gt: String,
    pub pred: String,
    /// Comma-separated subset of `ap_p,pcp,ap_r`; everything by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<String>,
    /// `A:B:STEP` schedule; the nine-step ladder by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_ids: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// `json` (default) or `csv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// Averaging set for part IoU: `union` (default) or `gt_only`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub averaging: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// `POST /v1/cluster`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterRequest {
    pub semantic: String,
    pub locations: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<String>,
    /// `instance` (default) or `image`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_instances: Option<usize>,
    pub out: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// `POST /v1/encode-locations`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EncodeLocationsRequest {
    pub gt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<String>,
    pub out: String,
}

/// `POST /v1/stats`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsRequest {
    pub gt: String,
    /// `train`, `val`, `test` or `all` (default).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
}

/// `POST /v1/subset`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsetRequest {
    pub gt: String,
    pub percent: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsetResponse {
    pub image_ids: Vec<String>,
}

/// `POST /v1/synth`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthRequest {
    pub seed: u64,
    pub images: usize,
    /// `WxH`, e.g. `64x64`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    /// `disjoint` (default), `mild` or `heavy`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap: Option<String>,
    /// `A..B` inclusive instance range, e.g. `2..5`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<String>,
    /// `A..B` inclusive parts range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<String>,
    pub out: String,
}

/// `POST /v1/corrupt`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorruptRequest {
    pub gt: String,
    pub spec: CorruptionSpec,
    pub out: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// Response for every endpoint that writes server-side files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WrittenResponse {
    pub written: Vec<String>,
}

/// Error payload with the same validation/io split the CLI exit codes use.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    /// `validation` or `io`.
    pub kind: String,
}
