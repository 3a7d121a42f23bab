//! Direct record import from a tab-separated file whose columns are the
//! record fields. List fields are `;`-separated; empty cells mean absent.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use super::ingest::{IngestError, IngestReport};
use super::record::{Country, ProjectRecord, Status};
use super::Corpus;
use crate::areas::DisciplinaryArea;
use crate::error::{Error, Result};

pub const TABULAR_COLUMNS: [&str; 17] = [
    "id",
    "title",
    "duration_from",
    "duration_to",
    "year_start",
    "year_end",
    "research_types",
    "funding_types",
    "qualification",
    "main_classification",
    "disciplinary_area",
    "keywords",
    "institutions",
    "institution_count",
    "persons",
    "country",
    "status",
];

const LIST_SEPARATOR: char = ';';

pub fn write_tabular<'a>(path: &Path, records: impl IntoIterator<Item = &'a ProjectRecord>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::WriterBuilder::new().delimiter(b'\t').from_writer(file);
    writer.write_record(TABULAR_COLUMNS)?;
    for record in records {
        writer.write_record(row_of(record))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn row_of(record: &ProjectRecord) -> [String; 17] {
    fn opt<T: ToString>(value: Option<T>) -> String {
        value.map(|v| v.to_string()).unwrap_or_default()
    }
    fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
        items
            .into_iter()
            .map(|item| item.to_string())
            .collect::<Vec<_>>()
            .join(&LIST_SEPARATOR.to_string())
    }
    [
        record.id.clone(),
        record.title.clone(),
        opt(record.duration_from),
        opt(record.duration_to),
        opt(record.year_start),
        opt(record.year_end),
        list(&record.research_types),
        list(&record.funding_types),
        opt(record.qualification),
        record.main_classification.clone(),
        opt(record.disciplinary_area),
        list(&record.keywords),
        list(&record.institutions),
        record.institution_count.to_string(),
        list(&record.persons),
        record.country.as_str().to_owned(),
        record.status.as_str().to_owned(),
    ]
}

/// Reads records from a tabular file. Bad rows and duplicate ids are
/// reported and skipped.
pub fn read_tabular(path: &Path) -> Result<(Corpus, IngestReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().delimiter(b'\t').from_reader(file);
    let header: HashMap<String, usize> = reader
        .headers()?
        .iter()
        .enumerate()
        .map(|(i, name)| (name.trim().to_owned(), i))
        .collect();
    if !header.contains_key("id") {
        return Err(Error::Table {
            path: path.display().to_string(),
            line: 1,
            message: "missing id column".into(),
        });
    }

    let mut corpus = Corpus::new();
    let mut report = IngestReport::default();
    for (index, row) in reader.records().enumerate() {
        let line = index + 2;
        report.page_count += 1;
        let row = row?;
        let cell = |column: &str| header.get(column).and_then(|&i| row.get(i)).unwrap_or("").trim();
        let outcome = parse_row(&cell).and_then(|record| corpus.insert(record));
        if let Err(err) = outcome {
            report.errors.push(IngestError {
                source: format!("{}:{line}", path.display()),
                message: err.to_string(),
            });
        }
    }
    report.record_count = corpus.len();
    Ok((corpus, report))
}

fn parse_row<'a>(cell: &dyn Fn(&str) -> &'a str) -> Result<ProjectRecord> {
    let id = cell("id");
    let bad = |column: &str, message: String| Error::InvalidRecord {
        id: id.to_owned(),
        message: format!("{column}: {message}"),
    };
    fn optional<T: FromStr>(raw: &str) -> std::result::Result<Option<T>, T::Err> {
        if raw.is_empty() {
            Ok(None)
        } else {
            raw.parse().map(Some)
        }
    }
    fn list<T: FromStr + Ord>(raw: &str) -> std::result::Result<BTreeSet<T>, T::Err> {
        split(raw).map(|item| item.parse()).collect()
    }
    fn split(raw: &str) -> impl Iterator<Item = &str> {
        raw.split(LIST_SEPARATOR).map(str::trim).filter(|item| !item.is_empty())
    }
    fn strings(raw: &str) -> Vec<String> {
        split(raw).map(str::to_owned).collect()
    }

    let mut record = ProjectRecord::empty(id);
    record.title = cell("title").to_owned();
    record.duration_from = optional(cell("duration_from")).map_err(|e| bad("duration_from", e))?;
    record.duration_to = optional(cell("duration_to")).map_err(|e| bad("duration_to", e))?;
    record.year_start = optional(cell("year_start")).map_err(|e| bad("year_start", format!("{e}")))?;
    record.year_end = optional(cell("year_end")).map_err(|e| bad("year_end", format!("{e}")))?;
    record.research_types = list(cell("research_types")).map_err(|e| bad("research_types", e))?;
    record.funding_types = list(cell("funding_types")).map_err(|e| bad("funding_types", e))?;
    record.qualification = optional(cell("qualification")).map_err(|e| bad("qualification", e))?;
    record.main_classification = cell("main_classification").to_owned();
    record.disciplinary_area =
        optional::<DisciplinaryArea>(cell("disciplinary_area")).map_err(|e| bad("disciplinary_area", e))?;
    record.keywords = strings(cell("keywords"));
    record.institutions = strings(cell("institutions"));
    record.institution_count = match cell("institution_count") {
        "" => record.institutions.len() as u32,
        raw => raw.parse().map_err(|e| bad("institution_count", format!("{e}")))?,
    };
    record.persons = strings(cell("persons"));
    record.country = optional::<Country>(cell("country"))
        .map_err(|e| bad("country", e))?
        .unwrap_or_default();
    record.status = optional::<Status>(cell("status"))
        .map_err(|e| bad("status", e))?
        .unwrap_or(Status::Current);
    Ok(record)
}
