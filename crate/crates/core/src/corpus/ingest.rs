use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde::Serialize;

use super::assemble::{assemble_record, AssemblyTables};
use super::record::ProjectRecord;
use super::Corpus;
use crate::error::{Error, Result};
use crate::schema::{bind_facts, derive_fields, RuleSet, Schema};
use crate::warning::Warning;
use crate::wikitext::{
    expand_templates, parse_page, Namespace, PageName, PageSource, TemplateDefinition, TemplateMap, DEFAULT_MAX_DEPTH,
};

/// Everything needed to turn a page into a record.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub schema: Schema,
    pub rules: RuleSet,
    pub tables: AssemblyTables,
    pub reference_date: NaiveDate,
    pub max_depth: usize,
}

impl Pipeline {
    pub fn builtin(reference_date: NaiveDate) -> Self {
        Self {
            schema: Schema::builtin(),
            rules: RuleSet::builtin(),
            tables: AssemblyTables::builtin(),
            reference_date,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngestError {
    pub source: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub page_count: usize,
    pub template_count: usize,
    pub record_count: usize,
    pub warning_counts: BTreeMap<String, usize>,
    /// Attribute name -> number of values no record field used.
    pub unmapped_attributes: BTreeMap<String, usize>,
    pub errors: Vec<IngestError>,
}

impl IngestReport {
    fn count_warnings(&mut self, warnings: &[Warning]) {
        for warning in warnings {
            *self.warning_counts.entry(warning.kind().to_owned()).or_default() += 1;
        }
    }

    pub fn warning_total(&self) -> usize {
        self.warning_counts.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageOutcome {
    pub record: ProjectRecord,
    pub warnings: Vec<Warning>,
    pub unmapped: BTreeMap<String, Vec<String>>,
}

/// parse, expand, bind, derive, assemble.
pub fn process_page(source: &PageSource, templates: &TemplateMap, pipeline: &Pipeline) -> PageOutcome {
    let parsed = parse_page(source);
    let expanded = expand_templates(&parsed.ast, templates, pipeline.max_depth);
    let bound = bind_facts(&expanded.ast, &pipeline.schema);
    let derived = derive_fields(&bound.facts, &pipeline.rules, &pipeline.tables.synonyms);
    let assembled = assemble_record(&source.name, &derived.facts, pipeline.reference_date, &pipeline.tables);

    let mut warnings = parsed.warnings;
    warnings.extend(expanded.warnings);
    warnings.extend(bound.warnings);
    warnings.extend(derived.warnings);
    // derive_fields already reported a qualification conflict when a rule
    // covered it.
    if !warnings.iter().any(|w| matches!(w, Warning::QualificationConflict { .. })) {
        warnings.extend(assembled.warnings);
    }
    PageOutcome {
        record: assembled.record,
        warnings,
        unmapped: assembled.unmapped,
    }
}

/// Ingests every `*.wiki` file in `dir`. Template pages feed the template
/// map; main-namespace pages become records. Files are processed in name
/// order, so of two pages sharing an id the later one is rejected.
pub fn ingest_directory(dir: &Path, pipeline: &Pipeline) -> Result<(Corpus, IngestReport)> {
    let mut report = IngestReport::default();
    let mut entries: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(dir, e))?;
    entries.sort_by_key(|entry| entry.file_name());

    let mut templates = TemplateMap::new();
    let mut pages = Vec::new();
    for entry in entries {
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let file_name = entry.file_name().to_string_lossy().into_owned();
        let name = match PageName::from_file_name(&file_name) {
            None => continue,
            Some(Ok(name)) => name,
            Some(Err(err)) => {
                report.errors.push(IngestError {
                    source: file_name,
                    message: err.to_string(),
                });
                continue;
            }
        };
        report.page_count += 1;
        let markup = match fs::read(&path).map(String::from_utf8) {
            Ok(Ok(markup)) => markup,
            Ok(Err(err)) => {
                report.errors.push(IngestError {
                    source: file_name,
                    message: format!("not UTF-8: {err}"),
                });
                continue;
            }
            Err(err) => {
                report.errors.push(IngestError {
                    source: file_name,
                    message: err.to_string(),
                });
                continue;
            }
        };
        match name.namespace() {
            Namespace::Template => {
                let local = name.local_name().to_owned();
                templates.insert(local.clone(), TemplateDefinition::new(local, markup));
            }
            Namespace::Main => pages.push((file_name, PageSource::new(name, markup))),
            Namespace::Category | Namespace::Attribute => {}
        }
    }
    report.template_count = templates.len();

    let mut corpus = Corpus::new();
    for (file_name, source) in pages {
        let outcome = process_page(&source, &templates, pipeline);
        report.count_warnings(&outcome.warnings);
        for (attribute, values) in &outcome.unmapped {
            *report.unmapped_attributes.entry(attribute.clone()).or_default() += values.len();
        }
        if let Err(err) = corpus.insert(outcome.record) {
            report.errors.push(IngestError {
                source: file_name,
                message: err.to_string(),
            });
        }
    }
    report.record_count = corpus.len();
    Ok((corpus, report))
}
