use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::warning::Warning;

/// The nine values of the multi-assignable "type of research" attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResearchTypeFlag {
    ContractResearch,
    ThirdPartyFunded,
    InHouse,
    Expertise,
    DoctoralProject,
    HabilitationProject,
    OtherExamThesis,
    Other,
    Unspecified,
}

impl ResearchTypeFlag {
    pub const ALL: [ResearchTypeFlag; 9] = [
        ResearchTypeFlag::ContractResearch,
        ResearchTypeFlag::ThirdPartyFunded,
        ResearchTypeFlag::InHouse,
        ResearchTypeFlag::Expertise,
        ResearchTypeFlag::DoctoralProject,
        ResearchTypeFlag::HabilitationProject,
        ResearchTypeFlag::OtherExamThesis,
        ResearchTypeFlag::Other,
        ResearchTypeFlag::Unspecified,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ResearchTypeFlag::ContractResearch => "contract_research",
            ResearchTypeFlag::ThirdPartyFunded => "third_party_funded",
            ResearchTypeFlag::InHouse => "in_house",
            ResearchTypeFlag::Expertise => "expertise",
            ResearchTypeFlag::DoctoralProject => "doctoral_project",
            ResearchTypeFlag::HabilitationProject => "habilitation_project",
            ResearchTypeFlag::OtherExamThesis => "other_exam_thesis",
            ResearchTypeFlag::Other => "other",
            ResearchTypeFlag::Unspecified => "unspecified",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ResearchTypeFlag::ContractResearch => "Contract research",
            ResearchTypeFlag::ThirdPartyFunded => "Third-party funded research",
            ResearchTypeFlag::InHouse => "In-house project",
            ResearchTypeFlag::Expertise => "Expertise",
            ResearchTypeFlag::DoctoralProject => "Doctoral project",
            ResearchTypeFlag::HabilitationProject => "Habilitation project",
            ResearchTypeFlag::OtherExamThesis => "Other exam thesis",
            ResearchTypeFlag::Other => "Other",
            ResearchTypeFlag::Unspecified => "Unspecified",
        }
    }
}

impl FromStr for ResearchTypeFlag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|flag| flag.as_str() == s)
            .ok_or_else(|| format!("unknown research type flag {s:?}"))
    }
}

impl fmt::Display for ResearchTypeFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FundingType {
    InHouse,
    ThirdParty,
    Contract,
}

impl FundingType {
    pub const ALL: [FundingType; 3] = [FundingType::InHouse, FundingType::ThirdParty, FundingType::Contract];

    pub fn as_str(self) -> &'static str {
        match self {
            FundingType::InHouse => "in_house",
            FundingType::ThirdParty => "third_party",
            FundingType::Contract => "contract",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FundingType::InHouse => "In-house project",
            FundingType::ThirdParty => "Third-party funded research",
            FundingType::Contract => "Contract research",
        }
    }
}

impl FromStr for FundingType {
    type Err = String;

    /// Accepts the identifiers plus the German surface forms seen in
    /// derived `Förderart` values.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "in_house" | "eigenprojekt" => Ok(FundingType::InHouse),
            "third_party" | "gefördert" => Ok(FundingType::ThirdParty),
            "contract" | "auftragsforschung" => Ok(FundingType::Contract),
            other => Err(format!("unknown funding type {other:?}")),
        }
    }
}

impl fmt::Display for FundingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualificationType {
    Doctoral,
    Habilitation,
}

impl QualificationType {
    pub const ALL: [QualificationType; 2] = [QualificationType::Doctoral, QualificationType::Habilitation];

    pub fn as_str(self) -> &'static str {
        match self {
            QualificationType::Doctoral => "doctoral",
            QualificationType::Habilitation => "habilitation",
        }
    }
}

impl FromStr for QualificationType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "doctoral" | "dissertation" => Ok(QualificationType::Doctoral),
            "habilitation" => Ok(QualificationType::Habilitation),
            other => Err(format!("unknown qualification type {other:?}")),
        }
    }
}

impl fmt::Display for QualificationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn derive_funding(research_types: &BTreeSet<ResearchTypeFlag>) -> BTreeSet<FundingType> {
    research_types
        .iter()
        .filter_map(|flag| match flag {
            ResearchTypeFlag::InHouse => Some(FundingType::InHouse),
            ResearchTypeFlag::ThirdPartyFunded => Some(FundingType::ThirdParty),
            ResearchTypeFlag::ContractResearch => Some(FundingType::Contract),
            _ => None,
        })
        .collect()
}

/// Doctoral wins over habilitation when both flags are set; that case also
/// returns a warning.
pub fn derive_qualification(
    research_types: &BTreeSet<ResearchTypeFlag>,
    subject: &str,
) -> (Option<QualificationType>, Option<Warning>) {
    let doctoral = research_types.contains(&ResearchTypeFlag::DoctoralProject);
    let habilitation = research_types.contains(&ResearchTypeFlag::HabilitationProject);
    match (doctoral, habilitation) {
        (true, true) => (
            Some(QualificationType::Doctoral),
            Some(Warning::QualificationConflict {
                subject: subject.to_owned(),
            }),
        ),
        (true, false) => (Some(QualificationType::Doctoral), None),
        (false, true) => (Some(QualificationType::Habilitation), None),
        (false, false) => (None, None),
    }
}
