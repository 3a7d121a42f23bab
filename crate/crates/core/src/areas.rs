use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tsv::{read_table, table_error};

pub const DEFAULT_AREAS: &str = include_str!("../config/areas.tsv");

/// The twelve disciplinary areas of the social-science classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DisciplinaryArea {
    SocialSciencesAndHumanities,
    Sociology,
    PopulationScience,
    PoliticalScience,
    Education,
    Psychology,
    CommunicationSciences,
    Economics,
    SocialPolicy,
    LabourMarketResearch,
    InterdisciplinarySubjects,
    History,
}

impl DisciplinaryArea {
    pub const ALL: [DisciplinaryArea; 12] = [
        DisciplinaryArea::SocialSciencesAndHumanities,
        DisciplinaryArea::Sociology,
        DisciplinaryArea::PopulationScience,
        DisciplinaryArea::PoliticalScience,
        DisciplinaryArea::Education,
        DisciplinaryArea::Psychology,
        DisciplinaryArea::CommunicationSciences,
        DisciplinaryArea::Economics,
        DisciplinaryArea::SocialPolicy,
        DisciplinaryArea::LabourMarketResearch,
        DisciplinaryArea::InterdisciplinarySubjects,
        DisciplinaryArea::History,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DisciplinaryArea::SocialSciencesAndHumanities => "Social Sciences and Humanities",
            DisciplinaryArea::Sociology => "Sociology",
            DisciplinaryArea::PopulationScience => "Population Science",
            DisciplinaryArea::PoliticalScience => "Political Science",
            DisciplinaryArea::Education => "Education",
            DisciplinaryArea::Psychology => "Psychology",
            DisciplinaryArea::CommunicationSciences => "Communication Sciences",
            DisciplinaryArea::Economics => "Economics",
            DisciplinaryArea::SocialPolicy => "Social Policy",
            DisciplinaryArea::LabourMarketResearch => "Labour market and occupational research",
            DisciplinaryArea::InterdisciplinarySubjects => "Interdisciplinary Subjects",
            DisciplinaryArea::History => "History",
        }
    }
}

impl FromStr for DisciplinaryArea {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|area| area.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown disciplinary area {s:?}"))
    }
}

impl fmt::Display for DisciplinaryArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for DisciplinaryArea {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for DisciplinaryArea {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Classification strings to areas. Unknown classifications stay unmapped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaMapping {
    entries: HashMap<String, DisciplinaryArea>,
}

impl AreaMapping {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut entries: HashMap<String, DisciplinaryArea> = DisciplinaryArea::ALL
            .into_iter()
            .map(|area| (area.label().to_lowercase(), area))
            .collect();
        for row in read_table(text, origin, &["classification", "area"])? {
            let [classification, area] = <[String; 2]>::try_from(row.fields).expect("column count checked");
            let area = DisciplinaryArea::from_str(&area).map_err(|e| table_error(origin, row.line, e))?;
            entries.insert(classification.to_lowercase(), area);
        }
        Ok(Self { entries })
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_AREAS, "areas.tsv").expect("bundled area mapping is valid")
    }

    pub fn lookup(&self, classification: &str) -> Option<DisciplinaryArea> {
        self.entries.get(&classification.trim().to_lowercase()).copied()
    }
}
