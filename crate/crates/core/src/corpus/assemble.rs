use std::collections::BTreeMap;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::Serialize;

use super::record::{Country, ProjectRecord, Status};
use crate::areas::AreaMapping;
use crate::error::Result;
use crate::schema::{
    derive_funding, derive_qualification, Fact, FundingType, QualificationType, SynonymTable, Value,
    CATEGORY_ATTRIBUTE,
};
use crate::tsv::{read_table, table_error};
use crate::warning::Warning;
use crate::wikitext::PageName;

pub const DEFAULT_ATTRIBUTE_MAP: &str = include_str!("../../config/attribute_map.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordField {
    Id,
    Title,
    DurationFrom,
    DurationTo,
    YearStart,
    YearEnd,
    ResearchTypes,
    FundingTypes,
    Qualification,
    MainClassification,
    Institutions,
    InstitutionCount,
    Persons,
    Keywords,
    Country,
}

impl RecordField {
    const ALL: [RecordField; 15] = [
        RecordField::Id,
        RecordField::Title,
        RecordField::DurationFrom,
        RecordField::DurationTo,
        RecordField::YearStart,
        RecordField::YearEnd,
        RecordField::ResearchTypes,
        RecordField::FundingTypes,
        RecordField::Qualification,
        RecordField::MainClassification,
        RecordField::Institutions,
        RecordField::InstitutionCount,
        RecordField::Persons,
        RecordField::Keywords,
        RecordField::Country,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RecordField::Id => "id",
            RecordField::Title => "title",
            RecordField::DurationFrom => "duration_from",
            RecordField::DurationTo => "duration_to",
            RecordField::YearStart => "year_start",
            RecordField::YearEnd => "year_end",
            RecordField::ResearchTypes => "research_types",
            RecordField::FundingTypes => "funding_types",
            RecordField::Qualification => "qualification",
            RecordField::MainClassification => "main_classification",
            RecordField::Institutions => "institutions",
            RecordField::InstitutionCount => "institution_count",
            RecordField::Persons => "persons",
            RecordField::Keywords => "keywords",
            RecordField::Country => "country",
        }
    }
}

impl FromStr for RecordField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|field| field.as_str() == s.trim())
            .ok_or_else(|| format!("unknown record field {s:?}"))
    }
}

/// Which wiki attributes feed which record field, in priority order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeMap {
    by_field: BTreeMap<RecordField, Vec<String>>,
    by_attribute: BTreeMap<String, RecordField>,
}

impl AttributeMap {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut by_field: BTreeMap<RecordField, Vec<String>> = BTreeMap::new();
        let mut by_attribute = BTreeMap::new();
        for row in read_table(text, origin, &["field", "attribute"])? {
            let [field, attribute] = <[String; 2]>::try_from(row.fields).expect("column count checked");
            let field = RecordField::from_str(&field).map_err(|e| table_error(origin, row.line, e))?;
            if by_attribute.insert(attribute.clone(), field).is_some() {
                return Err(table_error(origin, row.line, format!("attribute {attribute:?} mapped twice")));
            }
            by_field.entry(field).or_default().push(attribute);
        }
        Ok(Self { by_field, by_attribute })
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_ATTRIBUTE_MAP, "attribute_map.tsv").expect("bundled attribute map is valid")
    }

    pub fn field_of(&self, attribute: &str) -> Option<RecordField> {
        self.by_attribute.get(attribute).copied()
    }

    pub fn attributes_of(&self, field: RecordField) -> &[String] {
        self.by_field.get(&field).map_or(&[], Vec::as_slice)
    }

    /// `field -> [attributes]`, for display.
    pub fn entries(&self) -> BTreeMap<&'static str, Vec<String>> {
        self.by_field
            .iter()
            .map(|(field, attributes)| (field.as_str(), attributes.clone()))
            .collect()
    }
}

/// Lookup tables needed to turn facts into records.
#[derive(Debug, Clone)]
pub struct AssemblyTables {
    pub attributes: AttributeMap,
    pub synonyms: SynonymTable,
    pub areas: AreaMapping,
}

impl AssemblyTables {
    pub fn builtin() -> Self {
        Self {
            attributes: AttributeMap::builtin(),
            synonyms: SynonymTable::builtin(),
            areas: AreaMapping::builtin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assembled {
    pub record: ProjectRecord,
    /// Attribute values no record field took, for diagnostics.
    pub unmapped: BTreeMap<String, Vec<String>>,
    pub warnings: Vec<Warning>,
}

/// Builds one record from the facts of one page. `reference_date` decides the
/// project status.
pub fn assemble_record(
    subject: &PageName,
    facts: &[Fact],
    reference_date: NaiveDate,
    tables: &AssemblyTables,
) -> Assembled {
    let mut fields: BTreeMap<RecordField, Vec<&Fact>> = BTreeMap::new();
    let mut unmapped: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for fact in facts {
        match tables.attributes.field_of(&fact.attribute) {
            Some(field) => fields.entry(field).or_default().push(fact),
            None if fact.attribute == CATEGORY_ATTRIBUTE => {}
            None => unmapped
                .entry(fact.attribute.clone())
                .or_default()
                .push(fact.value.to_string()),
        }
    }

    // Values for a field, ordered by the priority of their attributes.
    let values = |field: RecordField| -> Vec<&Value> {
        let Some(facts) = fields.get(&field) else {
            return Vec::new();
        };
        tables
            .attributes
            .attributes_of(field)
            .iter()
            .flat_map(|attribute| facts.iter().filter(move |f| &f.attribute == attribute))
            .map(|f| &f.value)
            .collect()
    };
    let strings = |field: RecordField| -> Vec<String> {
        values(field).into_iter().map(|v| v.to_string()).collect()
    };
    let mut reject = |field: RecordField, value: &Value| {
        unmapped
            .entry(format!("{} (unusable)", field.as_str()))
            .or_default()
            .push(value.to_string());
    };

    let mut record = ProjectRecord::empty(
        strings(RecordField::Id)
            .into_iter()
            .find(|id| !id.trim().is_empty())
            .unwrap_or_else(|| subject.to_string()),
    );
    record.title = strings(RecordField::Title)
        .into_iter()
        .next()
        .unwrap_or_else(|| subject.local_name().to_owned());

    let first_date = |field: RecordField| values(field).into_iter().find_map(Value::as_date);
    record.duration_from = first_date(RecordField::DurationFrom);
    record.duration_to = first_date(RecordField::DurationTo);

    let mut first_year = |field: RecordField| {
        let mut year = None;
        for value in values(field) {
            match value.as_integer().and_then(|n| i32::try_from(n).ok()) {
                Some(y) if year.is_none() => year = Some(y),
                Some(_) => {}
                None => reject(field, value),
            }
        }
        year
    };
    record.year_start = first_year(RecordField::YearStart);
    record.year_end = first_year(RecordField::YearEnd);

    for value in values(RecordField::ResearchTypes) {
        match value.as_str().and_then(|raw| tables.synonyms.lookup(raw)) {
            Some(flag) => {
                record.research_types.insert(flag);
            }
            None => reject(RecordField::ResearchTypes, value),
        }
    }

    for value in values(RecordField::FundingTypes) {
        match value.as_str().map(FundingType::from_str) {
            Some(Ok(funding)) => {
                record.funding_types.insert(funding);
            }
            _ => reject(RecordField::FundingTypes, value),
        }
    }
    if values(RecordField::FundingTypes).is_empty() {
        record.funding_types = derive_funding(&record.research_types);
    }

    let mut warnings = Vec::new();
    let explicit_qualification = values(RecordField::Qualification);
    if explicit_qualification.is_empty() {
        let (qualification, warning) = derive_qualification(&record.research_types, &subject.to_string());
        record.qualification = qualification;
        warnings.extend(warning);
    } else {
        for value in explicit_qualification {
            match value.as_str().map(QualificationType::from_str) {
                Some(Ok(q)) if record.qualification.is_none() => record.qualification = Some(q),
                Some(Ok(_)) => {}
                _ => reject(RecordField::Qualification, value),
            }
        }
    }

    record.main_classification = strings(RecordField::MainClassification)
        .into_iter()
        .next()
        .unwrap_or_default();
    record.disciplinary_area = tables.areas.lookup(&record.main_classification);

    record.institutions = strings(RecordField::Institutions);
    record.persons = strings(RecordField::Persons);
    record.keywords = strings(RecordField::Keywords);
    record.institution_count = if record.institutions.is_empty() {
        values(RecordField::InstitutionCount)
            .into_iter()
            .find_map(|v| v.as_integer())
            .and_then(|n| u32::try_from(n).ok())
            .unwrap_or(0)
    } else {
        record.institutions.len() as u32
    };

    if let Some(value) = values(RecordField::Country).into_iter().next() {
        match value.as_str().map(Country::from_str) {
            Some(Ok(country)) => record.country = country,
            _ => reject(RecordField::Country, value),
        }
    }

    record.status = derive_status(record.duration_from, record.duration_to, reference_date);

    Assembled {
        record,
        unmapped,
        warnings,
    }
}

/// Completed once the end date has passed, starting before the start date,
/// current otherwise. Bare years count as their last (end) or first (start)
/// day.
pub fn derive_status(
    from: Option<crate::schema::DateValue>,
    to: Option<crate::schema::DateValue>,
    reference_date: NaiveDate,
) -> Status {
    if to.is_some_and(|to| to.latest() < reference_date) {
        Status::Completed
    } else if from.is_some_and(|from| from.earliest() > reference_date) {
        Status::Starting
    } else {
        Status::Current
    }
}
