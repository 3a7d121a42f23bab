use fieldmon_client::{ChartFormat, Client, ClientError};
use fieldmon_core::api::{ApiRequest, Snapshot};
use fieldmon_core::corpus::Corpus;
use fieldmon_core::synth::{synth_records, SynthOptions};
use fieldmon_service::{bind, serve, AppState};

async fn start() -> Client {
    let corpus = Corpus::from_records(synth_records(7, 200, &SynthOptions::default())).unwrap();
    let state = AppState::new(Snapshot::new(corpus, "sha256:test"));
    let (listener, addr) = bind("127.0.0.1:0").await.unwrap();
    tokio::spawn(async move { serve(listener, state, None).await });
    Client::new(&format!("http://{addr}"))
}

#[tokio::test]
async fn fetches_bodies() {
    let client = start().await;
    let summary: serde_json::Value = serde_json::from_str(&client.summary().await.unwrap()).unwrap();
    assert_eq!(summary["record_count"], 200);

    let request = ApiRequest {
        region: Some("germany".into()),
        granularity: Some("per_year".into()),
        ..Default::default()
    };
    let body: serde_json::Value = serde_json::from_str(&client.indicator("funding", &request).await.unwrap()).unwrap();
    assert_eq!(body["filter"]["region"], "germany");
    assert_eq!(body["result"]["type"], "multi_series");

    let svg = client.chart("activity", &ApiRequest::default(), ChartFormat::Svg).await.unwrap();
    assert!(svg.starts_with("<svg"));
}

#[tokio::test]
async fn decodes_error_bodies() {
    let client = start().await;
    let request = ApiRequest {
        kind: Some("pie".into()),
        ..Default::default()
    };
    match client.chart("activity", &request, ChartFormat::Json).await {
        Err(ClientError::Api { status, body }) => {
            assert_eq!(status.as_u16(), 400);
            assert_eq!(body.parameter.as_deref(), Some("kind"));
        }
        other => panic!("expected an API error, got {other:?}"),
    }
    match client.indicator("velocity", &ApiRequest::default()).await {
        Err(ClientError::Api { status, .. }) => assert_eq!(status.as_u16(), 404),
        other => panic!("expected 404, got {other:?}"),
    }
}
