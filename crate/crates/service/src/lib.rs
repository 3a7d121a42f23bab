//! Read-only HTTP JSON API over an immutable corpus snapshot.
//!
//! Routes:
//! - `GET /api/v1/corpus/summary`
//! - `GET /api/v1/indicators/{id}?status&region&from&to&granularity`
//! - `GET /api/v1/charts/{id}?kind&status&region&from&to&granularity&format=json|svg`
//! - `GET /api/v1/meta/schema`

use std::io;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::extract::rejection::QueryRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use fieldmon_core::api::{
    chart_body, chart_svg, indicator_body, resolve_chart, resolve_query, schema_body, summary_body, ApiError,
    ApiRequest, Snapshot,
};
use serde::Deserialize;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

const JSON: &str = "application/json";
const SVG: &str = "image/svg+xml";

/// Shared handle to the current snapshot. Handlers clone the inner `Arc`
/// once per request, so a reload never shows up halfway through one.
#[derive(Clone)]
pub struct AppState {
    current: Arc<RwLock<Arc<Snapshot>>>,
    corpus_path: Option<PathBuf>,
}

impl AppState {
    pub fn new(snapshot: Snapshot) -> Self {
        Self {
            current: Arc::new(RwLock::new(Arc::new(snapshot))),
            corpus_path: None,
        }
    }

    pub fn from_file(path: &Path) -> fieldmon_core::Result<Self> {
        let mut state = Self::new(Snapshot::load(path)?);
        state.corpus_path = Some(path.to_owned());
        Ok(state)
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        Arc::clone(&self.current.read().unwrap_or_else(|e| e.into_inner()))
    }

    pub fn swap(&self, snapshot: Snapshot) {
        *self.current.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(snapshot);
    }

    /// Reloads the corpus file. The old snapshot stays in place if the load
    /// fails. Returns the new snapshot id.
    pub fn reload(&self) -> fieldmon_core::Result<String> {
        let Some(path) = &self.corpus_path else {
            return Ok(self.snapshot().id.clone());
        };
        let snapshot = Snapshot::load(path)?;
        let id = snapshot.id.clone();
        self.swap(snapshot);
        Ok(id)
    }
}

fn body(status: StatusCode, content_type: &'static str, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, content_type)], body).into_response()
}

fn error_response(err: ApiError) -> Response {
    let status = StatusCode::from_u16(err.class.http_status()).unwrap_or(StatusCode::BAD_REQUEST);
    body(status, JSON, err.body())
}

fn params(query: Result<Query<ApiRequest>, QueryRejection>) -> Result<ApiRequest, ApiError> {
    query
        .map(|Query(params)| params)
        .map_err(|e| ApiError::invalid("query", e.body_text()))
}

async fn summary(State(state): State<AppState>) -> Response {
    body(StatusCode::OK, JSON, summary_body(&state.snapshot()))
}

async fn schema(State(state): State<AppState>) -> Response {
    body(StatusCode::OK, JSON, schema_body(&state.snapshot()))
}

async fn indicator(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<ApiRequest>, QueryRejection>,
) -> Response {
    let result = params(query)
        .and_then(|params| resolve_query(&id, &params))
        .and_then(|query| indicator_body(&state.snapshot(), &query));
    match result {
        Ok(text) => body(StatusCode::OK, JSON, text),
        Err(err) => error_response(err),
    }
}

#[derive(Debug, Default, Deserialize)]
struct FormatParam {
    format: Option<String>,
}

async fn chart(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<ApiRequest>, QueryRejection>,
    format: Result<Query<FormatParam>, QueryRejection>,
) -> Response {
    let format = match format {
        Ok(Query(param)) => param.format,
        Err(e) => return error_response(ApiError::invalid("format", e.body_text())),
    };
    let svg = match format.as_deref() {
        None | Some("json") => false,
        Some("svg") => true,
        Some(other) => {
            return error_response(ApiError::invalid(
                "format",
                format!("unknown format {other:?}; use json or svg"),
            ))
        }
    };
    let result = params(query).and_then(|params| resolve_chart(&id, &params)).and_then(|(query, kind)| {
        let snapshot = state.snapshot();
        if svg {
            chart_svg(&snapshot, &query, kind).map(|text| (SVG, text))
        } else {
            chart_body(&snapshot, &query, kind).map(|text| (JSON, text))
        }
    });
    match result {
        Ok((content_type, text)) => body(StatusCode::OK, content_type, text),
        Err(err) => error_response(err),
    }
}

async fn api_not_found() -> Response {
    error_response(ApiError::not_found("no such endpoint"))
}

/// The API router, optionally serving static files at `/`.
pub fn router(state: AppState, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/corpus/summary", get(summary))
        .route("/indicators/{id}", get(indicator))
        .route("/charts/{id}", get(chart))
        .route("/meta/schema", get(schema))
        .fallback(api_not_found);
    let app = Router::new().nest("/api/v1", api).with_state(state);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.fallback(api_not_found),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: io::Error },
    #[error("server error: {0}")]
    Serve(#[source] io::Error),
}

/// Binds `addr` and returns the listener with its actual local address.
pub async fn bind(addr: &str) -> Result<(TcpListener, SocketAddr), ServeError> {
    let bind_error = |source| ServeError::Bind {
        addr: addr.to_owned(),
        source,
    };
    let listener = TcpListener::bind(addr).await.map_err(bind_error)?;
    let local = listener.local_addr().map_err(bind_error)?;
    Ok((listener, local))
}

/// Serves until the process is stopped. On unix, SIGHUP reloads the corpus
/// file.
pub async fn serve(listener: TcpListener, state: AppState, static_dir: Option<&Path>) -> Result<(), ServeError> {
    #[cfg(unix)]
    spawn_reload_on_hangup(state.clone());
    axum::serve(listener, router(state, static_dir))
        .await
        .map_err(ServeError::Serve)
}

#[cfg(unix)]
fn spawn_reload_on_hangup(state: AppState) {
    use tokio::signal::unix::{signal, SignalKind};
    let Ok(mut hangups) = signal(SignalKind::hangup()) else {
        return;
    };
    tokio::spawn(async move {
        while hangups.recv().await.is_some() {
            match state.reload() {
                Ok(id) => eprintln!("reloaded corpus, snapshot {id}"),
                Err(err) => eprintln!("reload failed, keeping previous snapshot: {err}"),
            }
        }
    });
}
