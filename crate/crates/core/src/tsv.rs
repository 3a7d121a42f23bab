//! Tab-separated configuration tables. Lines starting with `#` are comments;
//! the first remaining line is a header naming the columns.

use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct Row {
    pub line: usize,
    pub fields: Vec<String>,
}

pub(crate) fn read_table(text: &str, origin: &str, columns: &[&str]) -> Result<Vec<Row>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .comment(Some(b'#'))
        .quoting(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != columns {
        return Err(Error::Table {
            path: origin.to_owned(),
            line: 1,
            message: format!("expected header {:?}, found {:?}", columns.join("\t"), header.join("\t")),
        });
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != columns.len() {
            return Err(Error::Table {
                path: origin.to_owned(),
                line,
                message: format!("expected {} columns, found {}", columns.len(), record.len()),
            });
        }
        rows.push(Row {
            line,
            fields: record.iter().map(str::to_owned).collect(),
        });
    }
    Ok(rows)
}

pub(crate) fn table_error(origin: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Table {
        path: origin.to_owned(),
        line,
        message: message.into(),
    }
}
