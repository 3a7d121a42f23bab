//! Project records, the corpus snapshot and faceted filtering.

mod assemble;
mod filter;
mod ingest;
mod persist;
mod record;
mod tabular;

use std::collections::BTreeMap;

use serde::Serialize;

pub use assemble::{
    assemble_record, derive_status, Assembled, AssemblyTables, AttributeMap, RecordField, DEFAULT_ATTRIBUTE_MAP,
};
pub use filter::{filter_records, CorpusFilter, Region};
pub use ingest::{ingest_directory, process_page, IngestError, IngestReport, Pipeline};
pub use persist::{append_record, load_corpus, save_corpus, snapshot_id, CORPUS_FORMAT, CORPUS_VERSION};
pub use record::{Country, ProjectRecord, Status};
pub use tabular::{read_tabular, write_tabular, TABULAR_COLUMNS};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub record_count: usize,
    pub min_year_end: Option<i32>,
    pub max_year_end: Option<i32>,
}

/// Records keyed (and therefore ordered) by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    records: BTreeMap<String, ProjectRecord>,
    summary: CorpusSummary,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a valid record with an unused id.
    pub fn insert(&mut self, record: ProjectRecord) -> Result<()> {
        record.validate()?;
        if self.records.contains_key(&record.id) {
            return Err(Error::InvalidRecord {
                id: record.id,
                message: "duplicate id".into(),
            });
        }
        let summary = &mut self.summary;
        summary.record_count += 1;
        if let Some(year) = record.year_end {
            summary.min_year_end = Some(summary.min_year_end.map_or(year, |m| m.min(year)));
            summary.max_year_end = Some(summary.max_year_end.map_or(year, |m| m.max(year)));
        }
        self.records.insert(record.id.clone(), record);
        Ok(())
    }

    pub fn from_records(records: impl IntoIterator<Item = ProjectRecord>) -> Result<Self> {
        let mut corpus = Self::new();
        for record in records {
            corpus.insert(record)?;
        }
        Ok(corpus)
    }

    pub fn get(&self, id: &str) -> Option<&ProjectRecord> {
        self.records.get(id)
    }

    /// Records in ascending id order.
    pub fn records(&self) -> impl ExactSizeIterator<Item = &ProjectRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn summary(&self) -> CorpusSummary {
        self.summary
    }
}
