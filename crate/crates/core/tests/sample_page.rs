use std::collections::BTreeSet;
use std::path::PathBuf;

use chrono::NaiveDate;
use fieldmon_core::areas::DisciplinaryArea;
use fieldmon_core::corpus::{ingest_directory, Pipeline, Status};
use fieldmon_core::schema::{DateValue, FundingType, ResearchTypeFlag};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/sample")
}

fn pipeline() -> Pipeline {
    Pipeline::builtin(NaiveDate::from_ymd_opt(2014, 1, 1).unwrap())
}

#[test]
fn schule_und_betrieb() {
    let (corpus, report) = ingest_directory(&fixture_dir(), &pipeline()).unwrap();
    assert!(report.errors.is_empty(), "{:?}", report.errors);
    assert_eq!(report.template_count, 1);
    assert_eq!(report.warning_total(), 0, "{:?}", report.warning_counts);
    assert_eq!(corpus.len(), 1);

    let record = corpus.get("20054886").expect("record present");
    assert_eq!(record.title, "Schule und Betrieb");
    assert_eq!(record.duration_from, Some(DateValue::Day(NaiveDate::from_ymd_opt(2004, 9, 15).unwrap())));
    assert_eq!(record.duration_to, Some(DateValue::Day(NaiveDate::from_ymd_opt(2005, 7, 15).unwrap())));
    assert_eq!(record.year_start, Some(2004));
    assert_eq!(record.year_end, Some(2005));
    assert_eq!(record.research_types, BTreeSet::from([ResearchTypeFlag::ThirdPartyFunded]));
    assert_eq!(record.funding_types, BTreeSet::from([FundingType::ThirdParty]));
    assert_eq!(record.qualification, None);
    assert_eq!(record.institution_count, 2);
    assert_eq!(record.main_classification, "Erziehungswissenschaft");
    assert_eq!(record.disciplinary_area, Some(DisciplinaryArea::Education));
    assert_eq!(record.status, Status::Completed);
    assert_eq!(
        record.persons,
        ["Ute Bender", "Karl Schneider", "Martin Weingardt", "Sven Entenmann"]
    );
    assert_eq!(record.keywords.len(), 19);
    assert_eq!(record.keywords[0], "Schule");

    // Attributes with no record field are kept for diagnostics only.
    assert!(report.unmapped_attributes.contains_key("Finanzierer"));
    assert!(report.unmapped_attributes.contains_key("Methode"));
}

#[test]
fn status_follows_reference_date() {
    let at = |date: (i32, u32, u32)| {
        let pipeline = Pipeline::builtin(NaiveDate::from_ymd_opt(date.0, date.1, date.2).unwrap());
        let (corpus, _) = ingest_directory(&fixture_dir(), &pipeline).unwrap();
        corpus.get("20054886").unwrap().status
    };
    assert_eq!(at((2004, 1, 1)), Status::Starting);
    assert_eq!(at((2005, 1, 1)), Status::Current);
    assert_eq!(at((2005, 7, 15)), Status::Current);
    assert_eq!(at((2005, 7, 16)), Status::Completed);
}
