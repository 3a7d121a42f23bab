use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::record::{Country, ProjectRecord, Status};
use super::Corpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Germany,
    /// Germany, Austria and Switzerland: the whole corpus.
    #[default]
    Dach,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Germany => "germany",
            Region::Dach => "dach",
        }
    }

    pub fn admits(self, country: Country) -> bool {
        match self {
            Region::Germany => country == Country::Germany,
            Region::Dach => true,
        }
    }
}

impl FromStr for Region {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "germany" => Ok(Region::Germany),
            "dach" => Ok(Region::Dach),
            other => Err(format!("unknown region {other:?}")),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CorpusFilter {
    pub status: Option<Status>,
    pub region: Region,
    pub year_from: Option<i32>,
    pub year_to: Option<i32>,
}

impl CorpusFilter {
    pub fn validate(&self) -> Result<()> {
        match (self.year_from, self.year_to) {
            (Some(from), Some(to)) if from > to => Err(Error::InvalidFilter(format!(
                "year_from {from} is after year_to {to}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn has_year_bounds(&self) -> bool {
        self.year_from.is_some() || self.year_to.is_some()
    }

    pub fn matches(&self, record: &ProjectRecord) -> bool {
        if self.status.is_some_and(|status| status != record.status) {
            return false;
        }
        if !self.region.admits(record.country) {
            return false;
        }
        if self.has_year_bounds() {
            let Some(year) = record.year_end else {
                return false;
            };
            if self.year_from.is_some_and(|from| year < from) || self.year_to.is_some_and(|to| year > to) {
                return false;
            }
        }
        true
    }
}

/// Records matching `filter`, ascending by id.
pub fn filter_records<'a>(corpus: &'a Corpus, filter: &CorpusFilter) -> Result<Vec<&'a ProjectRecord>> {
    filter.validate()?;
    Ok(corpus.records().filter(|record| filter.matches(record)).collect())
}
