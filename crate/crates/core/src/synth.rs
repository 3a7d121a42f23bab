//! Seeded synthetic corpora, as records or as wiki pages that ingest back
//! into the same records.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::areas::AreaMapping;
use crate::corpus::{derive_status, Country, ProjectRecord};
use crate::error::{Error, Result};
use crate::schema::{derive_funding, derive_qualification, DateValue, ResearchTypeFlag};
use crate::wikitext::{PageName, PAGE_FILE_EXTENSION};

/// Reference date used for synthetic corpora unless told otherwise.
pub fn default_reference_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2014, 1, 1).expect("valid date")
}

/// Mostly mapped classifications, plus a few the area table does not know.
const CLASSIFICATIONS: [&str; 16] = [
    "Erziehungswissenschaft",
    "Erziehungswissenschaft",
    "Psychologie",
    "Education",
    "Sociology",
    "Population Science",
    "Political Science",
    "Communication Sciences",
    "Economics",
    "Social Policy",
    "Labour market and occupational research",
    "Interdisciplinary Subjects",
    "History",
    "Social Sciences and Humanities",
    "Rechtswissenschaft",
    "",
];

const KEYWORDS: [&str; 12] = [
    "Schule",
    "Absolvent",
    "Betrieb",
    "Hochschule",
    "Lehrer",
    "Unterricht",
    "Migration",
    "Familie",
    "Arbeitsmarkt",
    "Bildungsbeteiligung",
    "Kompetenz",
    "Evaluation",
];

const INSTITUTIONS: [&str; 8] = [
    "Institut für Erziehungswissenschaft (Freiburg im Breisgau)",
    "Institut für Schulpädagogik (Ludwigsburg)",
    "Deutsches Institut für Bildungsforschung (Frankfurt)",
    "Institut für Psychologie (Wien)",
    "Pädagogische Hochschule (Zürich)",
    "Zentrum für Sozialforschung (Halle)",
    "Institut für Soziologie (Bielefeld)",
    "Forschungsstelle Berufsbildung (Bern)",
];

const PERSONS: [&str; 8] = [
    "Ute Bender",
    "Karl Schneider",
    "Martin Weingardt",
    "Sven Entenmann",
    "Anna Huber",
    "Jonas Keller",
    "Maria Gruber",
    "Lukas Meier",
];

/// Surface form written into pages for each research-type flag.
fn surface_form(flag: ResearchTypeFlag) -> &'static str {
    match flag {
        ResearchTypeFlag::ContractResearch => "Auftragsforschung",
        ResearchTypeFlag::ThirdPartyFunded => "gefördert",
        ResearchTypeFlag::InHouse => "Eigenprojekt",
        ResearchTypeFlag::Expertise => "Gutachten",
        ResearchTypeFlag::DoctoralProject => "Dissertation",
        ResearchTypeFlag::HabilitationProject => "Habilitation",
        ResearchTypeFlag::OtherExamThesis => "sonstige Qualifikationsarbeit",
        ResearchTypeFlag::Other => "sonstiges",
        ResearchTypeFlag::Unspecified => "keine Angabe",
    }
}

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub year_from: i32,
    pub year_to: i32,
    pub reference_date: NaiveDate,
    /// Probability that a record has no duration at all.
    pub undated_share: f64,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            year_from: 1990,
            year_to: 2016,
            reference_date: default_reference_date(),
            undated_share: 0.05,
        }
    }
}

fn random_date(rng: &mut ChaCha8Rng, year: i32) -> DateValue {
    if rng.random_bool(0.2) {
        DateValue::Year(year)
    } else {
        let month = rng.random_range(1..=12);
        let day = rng.random_range(1..=28);
        DateValue::Day(NaiveDate::from_ymd_opt(year, month, day).expect("day 1-28 exists"))
    }
}

fn pick_some<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str], max: usize) -> Vec<&'a str> {
    let n = rng.random_range(0..=max);
    pool.choose_multiple(rng, n).copied().collect()
}

/// `count` valid records. Records never carry both a doctoral and a
/// habilitation flag, so ingesting their pages raises no warnings.
pub fn synth_records(seed: u64, count: usize, options: &SynthOptions) -> Vec<ProjectRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let areas = AreaMapping::builtin();
    (0..count)
        .map(|index| {
            let mut record = ProjectRecord::empty(format!("{seed:04}{index:06}"));
            record.title = format!("Projekt {seed}-{index}");

            if !rng.random_bool(options.undated_share) {
                let start = rng.random_range(options.year_from..=options.year_to);
                let end = (start + rng.random_range(0..=4)).min(options.year_to);
                let mut from = random_date(&mut rng, start);
                let mut to = random_date(&mut rng, end);
                if from.earliest() > to.latest() {
                    std::mem::swap(&mut from, &mut to);
                }
                record.duration_from = Some(from);
                record.duration_to = Some(to);
                record.year_start = Some(from.year());
                record.year_end = Some(to.year());
            }

            let mut flags = BTreeSet::new();
            for _ in 0..rng.random_range(1..=3) {
                flags.insert(*ResearchTypeFlag::ALL.choose(&mut rng).expect("non-empty"));
            }
            if flags.contains(&ResearchTypeFlag::DoctoralProject) {
                flags.remove(&ResearchTypeFlag::HabilitationProject);
            }
            record.funding_types = derive_funding(&flags);
            record.qualification = derive_qualification(&flags, "").0;
            record.research_types = flags;

            record.main_classification = CLASSIFICATIONS.choose(&mut rng).expect("non-empty").to_string();
            record.disciplinary_area = areas.lookup(&record.main_classification);
            record.keywords = pick_some(&mut rng, &KEYWORDS, 4).into_iter().map(str::to_owned).collect();
            record.institutions = pick_some(&mut rng, &INSTITUTIONS, 3).into_iter().map(str::to_owned).collect();
            record.institution_count = record.institutions.len() as u32;
            record.persons = pick_some(&mut rng, &PERSONS, 3).into_iter().map(str::to_owned).collect();
            record.country = match rng.random_range(0..20) {
                0..=12 => Country::Germany,
                13..=15 => Country::Austria,
                16..=18 => Country::Switzerland,
                _ => Country::Unknown,
            };
            record.status = derive_status(record.duration_from, record.duration_to, options.reference_date);
            record
        })
        .collect()
}

pub const DURATION_TEMPLATE: &str = "Laufzeit";

/// Template the synthetic pages use for their duration.
pub fn duration_template() -> String {
    "Laufzeit: [[Laufzeit Von::{{{von}}}]] bis [[Laufzeit Bis::{{{bis}}}]]\n".to_owned()
}

fn wiki_date(date: DateValue) -> String {
    match date {
        DateValue::Day(day) => day.format("%Y/%m/%d").to_string(),
        DateValue::Year(year) => year.to_string(),
    }
}

/// Page markup that ingests (with the built-in tables) into `record`.
/// Derived fields are left to the derivation rules.
pub fn render_page(record: &ProjectRecord) -> String {
    let mut page = String::new();
    page.push_str(&format!("'''{}'''\n\n", record.title));
    page.push_str(&format!("Erfassungsnr.: [[id::{}]]\n", record.id));
    page.push_str(&format!("Titel: [[Titel::{}]]\n", record.title));
    match (record.duration_from, record.duration_to) {
        (Some(from), Some(to)) => page.push_str(&format!(
            "{{{{{DURATION_TEMPLATE}|von={}|bis={}}}}}\n",
            wiki_date(from),
            wiki_date(to)
        )),
        (from, to) => {
            if let Some(from) = from {
                page.push_str(&format!("Laufzeit von: [[Laufzeit Von::{}]]\n", wiki_date(from)));
            }
            if let Some(to) = to {
                page.push_str(&format!("Laufzeit bis: [[Laufzeit Bis::{}]]\n", wiki_date(to)));
            }
        }
    }
    for flag in &record.research_types {
        page.push_str(&format!("Art der Forschung: [[Forschungsart::{}]]\n", surface_form(*flag)));
    }
    if !record.main_classification.is_empty() {
        page.push_str(&format!(
            "Hauptklassifikation: [[Hauptklassifikationsuch::{}]]\n",
            record.main_classification
        ));
    }
    for institution in &record.institutions {
        page.push_str(&format!("Forschungseinrichtung: [[Forschungseinrichtung::{institution}]]\n"));
    }
    page.push_str(&format!(
        "[[Forschungseinrichtungs counter::{}| ]]\n",
        record.institution_count
    ));
    for person in &record.persons {
        page.push_str(&format!("[[Personen::{person}]]\n"));
    }
    if !record.keywords.is_empty() {
        let keywords: Vec<String> = record.keywords.iter().map(|k| format!("[[Schlagwörter::{k}]]")).collect();
        page.push_str(&format!("Schlagwörter: {}\n", keywords.join(", ")));
    }
    if record.country != Country::Unknown {
        page.push_str(&format!("[[Land::{}]]\n", record.country.as_str()));
    }
    page.push_str("\n[[Category:Projekt]]\n");
    page
}

/// Page name used for a synthetic record.
pub fn page_name(record: &ProjectRecord) -> PageName {
    PageName::main(&format!("Projekt {}", record.id)).expect("non-empty name")
}

/// Writes one page per record plus the duration template into `dir`.
pub fn write_pages(dir: &Path, records: &[ProjectRecord]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let template = PageName::new(crate::wikitext::Namespace::Template, DURATION_TEMPLATE)?;
    let path = dir.join(template.to_file_name());
    fs::write(&path, duration_template()).map_err(|e| Error::io(&path, e))?;
    for record in records {
        let path = dir.join(page_name(record).to_file_name());
        debug_assert!(path.extension().is_some_and(|e| e == PAGE_FILE_EXTENSION));
        fs::write(&path, render_page(record)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
