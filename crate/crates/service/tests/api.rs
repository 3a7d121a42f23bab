mod common;

use std::sync::Arc;

use axum::http::StatusCode;
use common::{fixture_snapshot, get, json};
use fieldmon_core::api::Snapshot;
use fieldmon_core::corpus::Corpus;
use fieldmon_service::{bind, router, AppState, ServeError};

#[tokio::test]
async fn summary_on_fixture() {
    let app = router(AppState::new(fixture_snapshot()), None);
    let reply = get(&app, "/api/v1/corpus/summary").await;
    assert_eq!(reply.status, StatusCode::OK);
    assert_eq!(reply.content_type, "application/json");
    let body = json(&reply.body);
    assert_eq!(body["record_count"], 1);
    assert_eq!(body["year_span"], serde_json::json!([2005, 2005]));
    assert!(body["snapshot"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(body["filter"]["region"], "dach");
}

#[tokio::test]
async fn activity_on_empty_corpus() {
    let app = router(AppState::new(Snapshot::new(Corpus::new(), "sha256:empty")), None);
    let body = json(&get(&app, "/api/v1/indicators/activity").await.body);
    assert_eq!(body["result"], serde_json::json!({"type": "empty_range"}));
    assert_eq!(body["filter"]["empty_range"], true);
    assert_eq!(body["filter"]["year_from"], serde_json::Value::Null);
}

#[tokio::test]
async fn funding_pie_angles() {
    let app = router(AppState::new(fixture_snapshot()), None);
    let body = json(&get(&app, "/api/v1/charts/funding?kind=pie").await.body);
    let chart = &body["chart"];
    assert_eq!(chart["kind"], "pie");
    assert_eq!(chart["categories"], serde_json::json!(["third_party"]));
    let slice = &chart["marks"][0];
    assert_eq!(slice["start_angle"], 0.0);
    assert_eq!(slice["end_angle"], 360.0);
    assert_eq!(body["filter"], chart["meta"]);
}

#[tokio::test]
async fn chart_as_svg() {
    let app = router(AppState::new(fixture_snapshot()), None);
    let reply = get(&app, "/api/v1/charts/activity?kind=bar&format=svg").await;
    assert_eq!(reply.status, StatusCode::OK);
    assert_eq!(reply.content_type, "image/svg+xml");
    assert_eq!(reply.body.matches("<rect").count(), 1);
}

#[tokio::test]
async fn errors_are_structured() {
    let app = router(AppState::new(fixture_snapshot()), None);
    let cases = [
        ("/api/v1/indicators/activity?from=2004&to=2000", StatusCode::BAD_REQUEST, Some("from")),
        ("/api/v1/indicators/activity?from=two", StatusCode::BAD_REQUEST, Some("from")),
        ("/api/v1/indicators/activity?region=mars", StatusCode::BAD_REQUEST, Some("region")),
        ("/api/v1/indicators/activity?granularity=total", StatusCode::BAD_REQUEST, Some("granularity")),
        ("/api/v1/indicators/activity?from=1&from=2", StatusCode::BAD_REQUEST, Some("query")),
        ("/api/v1/charts/activity?kind=pie", StatusCode::BAD_REQUEST, Some("kind")),
        ("/api/v1/charts/activity?format=png", StatusCode::BAD_REQUEST, Some("format")),
        ("/api/v1/indicators/cooperation", StatusCode::NOT_FOUND, None),
        ("/api/v1/charts/cooperation", StatusCode::NOT_FOUND, None),
        ("/api/v1/nothing", StatusCode::NOT_FOUND, None),
    ];
    for (uri, status, parameter) in cases {
        let reply = get(&app, uri).await;
        assert_eq!(reply.status, status, "{uri}");
        let body = json(&reply.body);
        assert!(body["error"].is_string(), "{uri}");
        assert_eq!(body.get("parameter").and_then(|p| p.as_str()), parameter, "{uri}");
    }
}

#[tokio::test]
async fn repeated_requests_are_identical() {
    let app = router(AppState::new(fixture_snapshot()), None);
    for uri in [
        "/api/v1/meta/schema",
        "/api/v1/indicators/discipline",
        "/api/v1/charts/discipline?kind=treemap",
    ] {
        assert_eq!(get(&app, uri).await.body, get(&app, uri).await.body);
    }
}

#[tokio::test]
async fn reload_swaps_between_requests() {
    let dir = tempfile::tempdir().unwrap();
    let path = common::fixture_corpus_file(dir.path());
    let state = AppState::from_file(&path).unwrap();
    let app = router(state.clone(), None);
    let before = json(&get(&app, "/api/v1/corpus/summary").await.body);

    // Readers holding the old snapshot keep seeing it after a swap.
    let held = state.snapshot();
    fieldmon_core::corpus::save_corpus(&Corpus::new(), &path).unwrap();
    let new_id = state.reload().unwrap();
    assert_eq!(held.corpus.len(), 1);
    assert!(Arc::strong_count(&held) >= 1);

    let after = json(&get(&app, "/api/v1/corpus/summary").await.body);
    assert_eq!(before["record_count"], 1);
    assert_eq!(after["record_count"], 0);
    assert_eq!(after["snapshot"], new_id.as_str());

    // A broken file leaves the current snapshot in place.
    std::fs::write(&path, "not a corpus").unwrap();
    assert!(state.reload().is_err());
    assert_eq!(state.snapshot().id, new_id);
}

#[tokio::test]
async fn static_files_are_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>ui</p>").unwrap();
    let app = router(AppState::new(fixture_snapshot()), Some(dir.path()));
    let reply = get(&app, "/index.html").await;
    assert_eq!(reply.status, StatusCode::OK);
    assert_eq!(reply.body, "<p>ui</p>");
    assert_eq!(get(&app, "/api/v1/corpus/summary").await.status, StatusCode::OK);
}

#[tokio::test]
async fn bind_failure_names_address() {
    let (_held, addr) = bind("127.0.0.1:0").await.unwrap();
    let taken = addr.to_string();
    let err = bind(&taken).await.unwrap_err();
    assert!(matches!(err, ServeError::Bind { .. }));
    assert!(err.to_string().contains(&taken), "{err}");
}
