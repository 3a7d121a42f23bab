//! Thin client for the `/api/v1` endpoints. Bodies come back as the
//! server's canonical text so callers can print them unchanged.

use fieldmon_core::api::ApiRequest;
use reqwest::StatusCode;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default)]
    pub parameter: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("server answered {status}: {}", body.error)]
    Api { status: StatusCode, body: ErrorBody },
    #[error("server answered {status}: {text}")]
    Unexpected { status: StatusCode, text: String },
    #[error(transparent)]
    Transport(#[from] reqwest::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartFormat {
    Json,
    Svg,
}

impl ChartFormat {
    fn as_str(self) -> &'static str {
        match self {
            ChartFormat::Json => "json",
            ChartFormat::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Client {
    http: reqwest::Client,
    base: String,
}

impl Client {
    /// `base` is the server root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: &str) -> Self {
        Self {
            http: reqwest::Client::new(),
            base: base.trim_end_matches('/').to_owned(),
        }
    }

    fn url(&self, path: &str) -> String {
        format!("{}/api/v1/{path}", self.base)
    }

    async fn fetch(&self, request: reqwest::RequestBuilder) -> Result<String, ClientError> {
        let response = request.send().await?;
        let status = response.status();
        let text = response.text().await?;
        if status.is_success() {
            return Ok(text);
        }
        match serde_json::from_str::<ErrorBody>(&text) {
            Ok(body) => Err(ClientError::Api { status, body }),
            Err(_) => Err(ClientError::Unexpected { status, text }),
        }
    }

    pub async fn summary(&self) -> Result<String, ClientError> {
        self.fetch(self.http.get(self.url("corpus/summary"))).await
    }

    pub async fn schema(&self) -> Result<String, ClientError> {
        self.fetch(self.http.get(self.url("meta/schema"))).await
    }

    pub async fn indicator(&self, id: &str, params: &ApiRequest) -> Result<String, ClientError> {
        let url = self.url(&format!("indicators/{id}"));
        self.fetch(self.http.get(url).query(params)).await
    }

    pub async fn chart(&self, id: &str, params: &ApiRequest, format: ChartFormat) -> Result<String, ClientError> {
        let url = self.url(&format!("charts/{id}"));
        self.fetch(self.http.get(url).query(params).query(&[("format", format.as_str())]))
            .await
    }
}
