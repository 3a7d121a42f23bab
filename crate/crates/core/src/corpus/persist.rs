//! Corpus files: a JSON header line followed by one canonical-JSON record per
//! line, ascending by id.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Corpus, ProjectRecord};
use crate::canonical::to_canonical_json;
use crate::error::{Error, Result};

pub const CORPUS_FORMAT: &str = "fieldmon-corpus";
pub const CORPUS_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

fn header_line() -> String {
    to_canonical_json(&Header {
        format: CORPUS_FORMAT.to_owned(),
        version: CORPUS_VERSION,
    })
    .expect("header serialises")
}

/// Content hash identifying a persisted snapshot.
pub fn snapshot_id(bytes: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(bytes))
}

/// Rewrites `path` with the full corpus and returns the snapshot id. The file
/// is replaced atomically.
pub fn save_corpus(corpus: &Corpus, path: &Path) -> Result<String> {
    let mut text = header_line();
    text.push('\n');
    for record in corpus.records() {
        text.push_str(&to_canonical_json(record)?);
        text.push('\n');
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &text).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    Ok(snapshot_id(text.as_bytes()))
}

/// Appends one record, creating the file (with its header) if needed.
pub fn append_record(path: &Path, record: &ProjectRecord) -> Result<()> {
    record.validate()?;
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut text = String::new();
    if file.metadata().map_err(|e| Error::io(path, e))?.len() == 0 {
        text.push_str(&header_line());
        text.push('\n');
    }
    text.push_str(&to_canonical_json(record)?);
    text.push('\n');
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Loads a corpus file, returning the corpus and its snapshot id.
pub fn load_corpus(path: &Path) -> Result<(Corpus, String)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let format_error = |message: String| Error::CorpusFormat {
        path: path.to_owned(),
        message,
    };
    let text = std::str::from_utf8(&bytes).map_err(|e| format_error(e.to_string()))?;
    let mut lines = text.lines().enumerate();

    let header: Header = match lines.next() {
        Some((_, line)) => serde_json::from_str(line).map_err(|e| format_error(format!("line 1: {e}")))?,
        None => return Err(format_error("missing header line".into())),
    };
    if header.format != CORPUS_FORMAT || header.version != CORPUS_VERSION {
        return Err(format_error(format!(
            "unsupported format {:?} version {}",
            header.format, header.version
        )));
    }

    let mut corpus = Corpus::new();
    for (index, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let record: ProjectRecord =
            serde_json::from_str(line).map_err(|e| format_error(format!("line {}: {e}", index + 1)))?;
        corpus
            .insert(record)
            .map_err(|e| format_error(format!("line {}: {e}", index + 1)))?;
    }
    Ok((corpus, snapshot_id(&bytes)))
}
