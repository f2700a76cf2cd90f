//! Thin typed client for the mhp evaluation service.

use serde::de::DeserializeOwned;
use serde::Serialize;

use mhp_api::{
    ClusterRequest, CorruptRequest, EncodeLocationsRequest, ErrorBody, EvaluateRequest,
    StatsRequest, SubsetRequest, SubsetResponse, SynthRequest, WrittenResponse,
};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
    /// The service rejected the request; carries its error payload.
    #[error("{status}: {error}", error = body.error)]
    Api { status: u16, body: ErrorBody },
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct MhpClient {
    base_url: String,
    http: reqwest::Client,
}

impl MhpClient {
    pub fn new(base_url: impl Into<String>) -> Self {
        let mut base_url = base_url.into();
        while base_url.ends_with('/') {
            base_url.pop();
        }
        Self {
            base_url,
            http: reqwest::Client::new(),
        }
    }

    async fn check(response: reqwest::Response) -> Result<reqwest::Response> {
        if response.status().is_success() {
            return Ok(response);
        }
        let status = response.status().as_u16();
        let body = response.json::<ErrorBody>().await.unwrap_or(ErrorBody {
            error: "unparseable error body".to_owned(),
            kind: "io".to_owned(),
        });
        Err(ClientError::Api { status, body })
    }

    async fn post_json<Req: Serialize, Resp: DeserializeOwned>(
        &self,
        path: &str,
        request: &Req,
    ) -> Result<Resp> {
        let response = self
            .http
            .post(format!("{}{path}", self.base_url))
            .json(request)
            .send()
            .await?;
        Ok(Self::check(response).await?.json().await?)
    }

    async fn post_bytes<Req: Serialize>(&self, path: &str, request: &Req) -> Result<Vec<u8>> {
        let response = self
            .http
            .post(format!("{}{path}", self.base_url))
            .json(request)
            .send()
            .await?;
        Ok(Self::check(response).await?.bytes().await?.to_vec())
    }

    pub async fn healthz(&self) -> Result<serde_json::Value> {
        let response = self
            .http
            .get(format!("{}/healthz", self.base_url))
            .send()
            .await?;
        Ok(Self::check(response).await?.json().await?)
    }

    /// The bundled label spec in its file format.
    pub async fn labels(&self) -> Result<String> {
        let response = self
            .http
            .get(format!("{}/v1/labels", self.base_url))
            .send()
            .await?;
        Ok(Self::check(response).await?.text().await?)
    }

    /// Returns the rendered report bytes (JSON or CSV per the request).
    pub async fn evaluate(&self, request: &EvaluateRequest) -> Result<Vec<u8>> {
        self.post_bytes("/v1/evaluate", request).await
    }

    pub async fn cluster(&self, request: &ClusterRequest) -> Result<WrittenResponse> {
        self.post_json("/v1/cluster", request).await
    }

    pub async fn encode_locations(
        &self,
        request: &EncodeLocationsRequest,
    ) -> Result<WrittenResponse> {
        self.post_json("/v1/encode-locations", request).await
    }

    /// Returns the stats report JSON bytes.
    pub async fn stats(&self, request: &StatsRequest) -> Result<Vec<u8>> {
        self.post_bytes("/v1/stats", request).await
    }

    pub async fn subset(&self, request: &SubsetRequest) -> Result<SubsetResponse> {
        self.post_json("/v1/subset", request).await
    }

    pub async fn synth(&self, request: &SynthRequest) -> Result<WrittenResponse> {
        self.post_json("/v1/synth", request).await
    }

    pub async fn corrupt(&self, request: &CorruptRequest) -> Result<WrittenResponse> {
        self.post_json("/v1/corrupt", request).await
    }
}
