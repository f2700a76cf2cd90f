//! Axum service exposing the benchmark operations over HTTP/JSON.
//!
//! The server owns the datasets: requests reference directories on its
//! filesystem, optionally jailed under a configured root. That matches the
//! benchmark-server model where ground truth stays private to the host and
//! clients only see scores.

use std::path::{Component, Path, PathBuf};
use std::sync::Arc;

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};

use mhp_api::{
    ClusterRequest, CorruptRequest, EncodeLocationsRequest, ErrorBody, EvaluateRequest,
    StatsRequest, SubsetRequest, SubsetResponse, SynthRequest, WrittenResponse,
};
use mhp_core::cluster::EncodingMode;
use mhp_core::error::Error;
use mhp_core::io::{to_sorted_json_bytes, write_report, ReportFormat, Split};
use mhp_core::labels::LabelSpec;
use mhp_core::metrics::{CategoryAveraging, MetricSelection, Threshold};
use mhp_core::pipeline::{
    cluster_dirs, corrupt_dirs, encode_locations_dirs, evaluate_dirs, stats_dir, subset_dir,
    synth_to_dir, ClusterJob, EvaluateJob,
};
use mhp_core::synth::{OverlapMode, SynthConfig};

mod parse;

pub use parse::{parse_grid, parse_usize_range};

/// Shared server configuration.
#[derive(Debug, Clone, Default)]
pub struct ServerState {
    /// When set, every request path must stay inside this directory.
    pub root: Option<PathBuf>,
}

impl ServerState {
    fn resolve(&self, raw: &str) -> Result<PathBuf, Error> {
        let path = Path::new(raw);
        match &self.root {
            None => Ok(path.to_path_buf()),
            Some(root) => {
                if path.is_absolute() {
                    return Err(Error::domain(format!(
                        "absolute path `{raw}` is not allowed under a server root"
                    )));
                }
                if path.components().any(|c| matches!(c, Component::ParentDir)) {
                    return Err(Error::domain(format!(
                        "path `{raw}` may not traverse outside the server root"
                    )));
                }
                Ok(root.join(path))
            }
        }
    }
}

/// The service router.
pub fn router(state: ServerState) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/v1/labels", get(labels))
        .route("/v1/evaluate", post(evaluate))
        .route("/v1/cluster", post(cluster))
        .route("/v1/encode-locations", post(encode_locations))
        .route("/v1/stats", post(stats))
        .route("/v1/subset", post(subset))
        .route("/v1/synth", post(synth))
        .route("/v1/corrupt", post(corrupt))
        .with_state(Arc::new(state))
}

/// Serves until the listener fails; binds are the caller's business.
pub async fn serve(listener: tokio::net::TcpListener, state: ServerState) -> std::io::Result<()> {
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

struct ApiError(Error);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self.0 {
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => {
                (StatusCode::NOT_FOUND, "io")
            }
            Error::Io { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "io"),
            Error::Codec { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "io"),
            _ => (StatusCode::UNPROCESSABLE_ENTITY, "validation"),
        };
        let body = ErrorBody {
            error: self.0.to_string(),
            kind: kind.to_owned(),
        };
        (status, Json(body)).into_response()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

async fn run_blocking<T, F>(op: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, Error> + Send + 'static,
{
    tokio::task::spawn_blocking(op)
        .await
        .map_err(|e| ApiError(Error::domain(format!("worker panicked: {e}"))))?
        .map_err(ApiError)
}

async fn healthz() -> impl IntoResponse {
    Json(serde_json::json!({"status": "ok"}))
}

async fn labels() -> impl IntoResponse {
    (
        [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
        LabelSpec::mhp_v2().to_text(),
    )
}

async fn evaluate(
    State(state): State<Arc<ServerState>>,
    Json(req): Json<EvaluateRequest>,
) -> Result<Response, ApiError> {
    let gt = state.resolve(&req.gt)?;
    let pred = state.resolve(&req.pred)?;
    let format = match req.format.as_deref() {
        None => ReportFormat::Json,
        Some(text) => ReportFormat::parse(text)?,
    };

    let mut job = EvaluateJob::new(gt, pred);
    if let Some(metrics) = &req.metrics {
        job.options.metrics = MetricSelection::parse(metrics)?;
    }
    if let Some(schedule) = &req.thresholds {
        job.options.thresholds = Threshold::parse_schedule(schedule)?;
    }
    if let Some(label) = &req.label {
        job.options.subset_label = label.clone();
    }
    if let Some(averaging) = &req.averaging {
        job.options.averaging = match averaging.as_str() {
            "union" => CategoryAveraging::Union,
            "gt_only" => CategoryAveraging::GtOnly,
            other => {
                return Err(Error::domain(format!("unknown averaging `{other}`")).into());
            }
        };
    }
    job.subset_ids = req.subset_ids.clone();
    job.threads = req.threads.unwrap_or(0);

    let bytes = run_blocking(move || {
        let report = evaluate_dirs(&job)?;
        write_report(&report, format)
    })
    .await?;

    let content_type = match format {
        ReportFormat::Json => "application/json",
        ReportFormat::Csv => "text/csv",
    };
    Ok(([(header::CONTENT_TYPE, content_type)], bytes).into_response())
}

async fn cluster(
    State(state): State<Arc<ServerState>>,
    Json(req): Json<ClusterRequest>,
) -> Result<Json<WrittenResponse>, ApiError> {
    let mut job = ClusterJob::new(
        state.resolve(&req.semantic)?,
        state.resolve(&req.locations)?,
        state.resolve(&req.out)?,
    );
    if let Some(counts) = &req.counts {
        job.counts_dir = Some(state.resolve(counts)?);
    }
    if let Some(encoding) = &req.encoding {
        job.config.encoding_mode = EncodingMode::parse(encoding)?;
    }
    if let Some(seed) = req.seed {
        job.config.kmeans_seed = seed;
    }
    if let Some(max) = req.max_instances {
        job.max_instances = max;
    }
    job.threads = req.threads.unwrap_or(0);

    let written = run_blocking(move || cluster_dirs(&job)).await?;
    Ok(Json(WrittenResponse {
        written: written.iter().map(|p| p.display().to_string()).collect(),
    }))
}

async fn encode_locations(
    State(state): State<Arc<ServerState>>,
    Json(req): Json<EncodeLocationsRequest>,
) -> Result<Json<WrittenResponse>, ApiError> {
    let gt = state.resolve(&req.gt)?;
    let out = state.resolve(&req.out)?;
    let mode = match req.encoding.as_deref() {
        None => EncodingMode::default(),
        Some(text) => EncodingMode::parse(text)?,
    };
    let written =
        run_blocking(move || encode_locations_dirs(gt, mode, out, &LabelSpec::mhp_v2(), 0)).await?;
    Ok(Json(WrittenResponse {
        written: written.iter().map(|p| p.display().to_string()).collect(),
    }))
}

async fn stats(
    State(state): State<Arc<ServerState>>,
    Json(req): Json<StatsRequest>,
) -> Result<Response, ApiError> {
    let gt = state.resolve(&req.gt)?;
    let split = match req.split.as_deref() {
        None => Split::All,
        Some(text) => Split::parse(text)?,
    };
    let bytes = run_blocking(move || {
        let report = stats_dir(gt, split, &LabelSpec::mhp_v2(), 0)?;
        to_sorted_json_bytes(&report)
    })
    .await?;
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes).into_response())
}

async fn subset(
    State(state): State<Arc<ServerState>>,
    Json(req): Json<SubsetRequest>,
) -> Result<Json<SubsetResponse>, ApiError> {
    let gt = state.resolve(&req.gt)?;
    let percent = req.percent;
    let image_ids =
        run_blocking(move || subset_dir(gt, percent, &LabelSpec::mhp_v2(), 0)).await?;
    Ok(Json(SubsetResponse { image_ids }))
}

async fn synth(
    State(state): State<Arc<ServerState>>,
    Json(req): Json<SynthRequest>,
) -> Result<Json<WrittenResponse>, ApiError> {
    let out = state.resolve(&req.out)?;
    let mut cfg = SynthConfig {
        seed: req.seed,
        image_count: req.images,
        ..SynthConfig::default()
    };
    if let Some(grid) = &req.grid {
        cfg.grid = parse_grid(grid)?;
    }
    if let Some(overlap) = &req.overlap {
        cfg.overlap_mode = OverlapMode::parse(overlap)?;
    }
    if let Some(instances) = &req.instances {
        cfg.instances_per_image = parse_usize_range(instances)?;
    }
    if let Some(parts) = &req.parts {
        cfg.parts_per_instance = parse_usize_range(parts)?;
    }
    let written = run_blocking(move || synth_to_dir(&cfg, out)).await?;
    Ok(Json(WrittenResponse {
        written: written.iter().map(|p| p.display().to_string()).collect(),
    }))
}

async fn corrupt(
    State(state): State<Arc<ServerState>>,
    Json(req): Json<CorruptRequest>,
) -> Result<Json<WrittenResponse>, ApiError> {
    let gt = state.resolve(&req.gt)?;
    let out = state.resolve(&req.out)?;
    let spec = req.spec.clone();
    let threads = req.threads.unwrap_or(0);
    let written =
        run_blocking(move || corrupt_dirs(gt, &spec, out, &LabelSpec::mhp_v2(), threads)).await?;
    Ok(Json(WrittenResponse {
        written: written.iter().map(|p| p.display().to_string()).collect(),
    }))
}
