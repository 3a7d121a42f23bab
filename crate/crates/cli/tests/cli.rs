use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};

fn fieldmon() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fieldmon"))
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    fieldmon().args(args).output().expect("spawn fieldmon")
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}: {}",
        output.status,
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn ingest_fixture(dir: &Path) -> PathBuf {
    let out = dir.join("corpus.jsonl");
    let config = root().join("crates/core/config");
    let output = run(&[
        "ingest",
        "--pages",
        root().join("fixtures/sample").to_str().unwrap(),
        "--schema",
        config.join("schema.tsv").to_str().unwrap(),
        "--rules",
        config.join("rules.tsv").to_str().unwrap(),
        "--reference-date",
        "2014-01-01",
        "--out",
        out.to_str().unwrap(),
    ]);
    let body: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(body["summary"]["record_count"], 1);
    assert!(body["snapshot"].as_str().unwrap().starts_with("sha256:"));
    out
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

/// Starts `fieldmon serve` on an ephemeral port and returns its base URL.
fn serve(corpus: &Path) -> (Server, String) {
    let mut child = fieldmon()
        .args(["serve", "--corpus", corpus.to_str().unwrap(), "--bind", "127.0.0.1:0"])
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn server");
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let url = line.trim().rsplit(' ').next().unwrap().to_owned();
    assert!(url.starts_with("http://"), "unexpected banner {line:?}");
    (Server(child), url)
}

#[test]
fn ingest_then_chart_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = ingest_fixture(dir.path());
    let svg = dir.path().join("funding.svg");
    stdout(&run(&[
        "chart",
        "funding",
        "--kind",
        "pie",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"), "{text}");
    assert!(text.contains("third_party"));
}

#[test]
fn chart_rejects_unknown_extension() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = ingest_fixture(dir.path());
    let output = run(&[
        "chart",
        "activity",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        dir.path().join("x.png").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn server_and_file_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = ingest_fixture(dir.path());
    let corpus = corpus.to_str().unwrap();
    let (_server, url) = serve(Path::new(corpus));

    let cases: [&[&str]; 6] = [
        &["summary"],
        &["schema"],
        &["indicator", "activity"],
        &["indicator", "funding", "--granularity", "per_year", "--region", "germany"],
        &["indicator", "discipline", "--status", "completed"],
        &["indicator", "qualification", "--from", "2000", "--to", "2010"],
    ];
    for args in cases {
        let local = stdout(&run(&[args, &["--corpus", corpus]].concat()));
        let remote = stdout(&run(&[args, &["--server", &url]].concat()));
        assert_eq!(local, remote, "{args:?}");
    }

    for (kind, ext) in [("bar", "svg"), ("line_series", "json")] {
        let local = dir.path().join(format!("local.{ext}"));
        let remote = dir.path().join(format!("remote.{ext}"));
        for (source, out) in [(["--corpus", corpus], &local), (["--server", url.as_str()], &remote)] {
            let args = ["chart", "activity", "--kind", kind, "--out", out.to_str().unwrap()];
            stdout(&run(&[&args[..], &source[..]].concat()));
        }
        assert_eq!(std::fs::read(&local).unwrap(), std::fs::read(&remote).unwrap(), "{kind}");
    }
}

#[test]
fn errors_match_between_server_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = ingest_fixture(dir.path());
    let (_server, url) = serve(&corpus);

    let cases: [&[&str]; 3] = [
        &["indicator", "activity", "--from", "2004", "--to", "2000"],
        &["indicator", "nonsense"],
        &["indicator", "funding", "--region", "mars"],
    ];
    for args in cases {
        let local = run(&[args, &["--corpus", corpus.to_str().unwrap()]].concat());
        let remote = run(&[args, &["--server", &url]].concat());
        assert_eq!(local.status.code(), Some(2), "{args:?}");
        assert_eq!(remote.status.code(), Some(2), "{args:?}");
        assert_eq!(local.stderr, remote.stderr, "{args:?}");
    }
    let local = run(&[
        "indicator",
        "activity",
        "--from",
        "2004",
        "--to",
        "2000",
        "--corpus",
        corpus.to_str().unwrap(),
    ]);
    assert_eq!(
        String::from_utf8(local.stderr).unwrap().trim(),
        r#"{"error":"from (2004) must not be after to (2000)","parameter":"from"}"#
    );
}
