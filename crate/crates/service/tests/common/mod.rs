#![allow(dead_code)]

use std::path::{Path, PathBuf};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use chrono::NaiveDate;
use fieldmon_core::api::Snapshot;
use fieldmon_core::corpus::{ingest_directory, save_corpus, Pipeline};
use http_body_util::BodyExt;
use tower::ServiceExt;

pub fn fixture_pages() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/sample")
}

pub fn reference_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2014, 1, 1).unwrap()
}

/// Ingests the sample page and saves it under `dir`.
pub fn fixture_corpus_file(dir: &Path) -> PathBuf {
    let (corpus, report) = ingest_directory(&fixture_pages(), &Pipeline::builtin(reference_date())).unwrap();
    assert!(report.errors.is_empty(), "{:?}", report.errors);
    let path = dir.join("fixture.jsonl");
    save_corpus(&corpus, &path).unwrap();
    path
}

pub fn fixture_snapshot() -> Snapshot {
    let dir = tempfile::tempdir().unwrap();
    Snapshot::load(&fixture_corpus_file(dir.path())).unwrap()
}

pub struct Reply {
    pub status: StatusCode,
    pub content_type: String,
    pub body: String,
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    let response = app
        .clone()
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = response.status();
    let content_type = response
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_owned())
        .unwrap_or_default();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        content_type,
        body: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

pub fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}
