use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::areas::DisciplinaryArea;
use crate::error::{Error, Result};
use crate::schema::{DateValue, FundingType, QualificationType, ResearchTypeFlag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum Country {
    #[serde(rename = "DE")]
    Germany,
    #[serde(rename = "AT")]
    Austria,
    #[serde(rename = "CH")]
    Switzerland,
    #[default]
    #[serde(rename = "unknown")]
    Unknown,
}

impl Country {
    pub fn as_str(self) -> &'static str {
        match self {
            Country::Germany => "DE",
            Country::Austria => "AT",
            Country::Switzerland => "CH",
            Country::Unknown => "unknown",
        }
    }
}

impl FromStr for Country {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "de" | "deutschland" | "germany" => Ok(Country::Germany),
            "at" | "österreich" | "austria" => Ok(Country::Austria),
            "ch" | "schweiz" | "switzerland" => Ok(Country::Switzerland),
            "unknown" | "" => Ok(Country::Unknown),
            other => Err(format!("unknown country {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Completed,
    Starting,
    Current,
}

impl Status {
    pub const ALL: [Status; 3] = [Status::Completed, Status::Starting, Status::Current];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Completed => "completed",
            Status::Starting => "starting",
            Status::Current => "current",
        }
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|status| status.as_str() == s.trim())
            .ok_or_else(|| format!("unknown status {s:?}"))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectRecord {
    pub id: String,
    pub title: String,
    pub duration_from: Option<DateValue>,
    pub duration_to: Option<DateValue>,
    pub year_start: Option<i32>,
    pub year_end: Option<i32>,
    pub research_types: BTreeSet<ResearchTypeFlag>,
    pub funding_types: BTreeSet<FundingType>,
    pub qualification: Option<QualificationType>,
    pub main_classification: String,
    pub disciplinary_area: Option<DisciplinaryArea>,
    pub keywords: Vec<String>,
    pub institutions: Vec<String>,
    pub institution_count: u32,
    pub persons: Vec<String>,
    pub country: Country,
    pub status: Status,
}

impl ProjectRecord {
    /// A record with only an id; everything else empty.
    pub fn empty(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            title: String::new(),
            duration_from: None,
            duration_to: None,
            year_start: None,
            year_end: None,
            research_types: BTreeSet::new(),
            funding_types: BTreeSet::new(),
            qualification: None,
            main_classification: String::new(),
            disciplinary_area: None,
            keywords: Vec::new(),
            institutions: Vec::new(),
            institution_count: 0,
            persons: Vec::new(),
            country: Country::Unknown,
            status: Status::Current,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |message: String| Error::InvalidRecord {
            id: self.id.clone(),
            message,
        };
        if self.id.trim().is_empty() {
            return Err(invalid("empty id".into()));
        }
        if let (Some(from), Some(to)) = (self.duration_from, self.duration_to) {
            if from.earliest() > to.latest() {
                return Err(invalid(format!("duration starts ({from}) after it ends ({to})")));
            }
        }
        if let (Some(start), Some(end)) = (self.year_start, self.year_end) {
            if start > end {
                return Err(invalid(format!("year_start {start} is after year_end {end}")));
            }
        }
        if !self.institutions.is_empty() && self.institution_count as usize != self.institutions.len() {
            return Err(invalid(format!(
                "institution_count {} does not match {} institutions",
                self.institution_count,
                self.institutions.len()
            )));
        }
        Ok(())
    }
}
