//! The four field indicators: research activity, disciplinary area, type of
//! funding and qualification. Every per-year count keys on the completion
//! year (`year_end`); funding counts are absolute only.

mod query;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use query::{run_query, IndicatorQuery, IndicatorResult, QueryOutcome, ResolvedFilter};

use crate::areas::{AreaMapping, DisciplinaryArea};
use crate::corpus::ProjectRecord;
use crate::schema::{FundingType, QualificationType};

/// Bucket for records whose main classification is empty.
pub const MISSING_CLASSIFICATION: &str = "(missing)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Activity,
    Discipline,
    Funding,
    Qualification,
}

impl Indicator {
    pub const ALL: [Indicator; 4] = [
        Indicator::Activity,
        Indicator::Discipline,
        Indicator::Funding,
        Indicator::Qualification,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Indicator::Activity => "activity",
            Indicator::Discipline => "discipline",
            Indicator::Funding => "funding",
            Indicator::Qualification => "qualification",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Indicator::Activity => "Research activity",
            Indicator::Discipline => "Disciplinary area",
            Indicator::Funding => "Type of funding",
            Indicator::Qualification => "Qualification",
        }
    }

    pub fn default_granularity(self) -> Granularity {
        match self {
            Indicator::Activity | Indicator::Qualification => Granularity::PerYear,
            Indicator::Discipline | Indicator::Funding => Granularity::Total,
        }
    }

    pub fn supports(self, granularity: Granularity) -> bool {
        match self {
            Indicator::Activity => granularity == Granularity::PerYear,
            Indicator::Discipline => granularity == Granularity::Total,
            Indicator::Funding | Indicator::Qualification => true,
        }
    }
}

impl FromStr for Indicator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|indicator| indicator.as_str() == s)
            .ok_or_else(|| format!("unknown indicator {s:?}"))
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    Total,
    PerYear,
}

impl Granularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Total => "total",
            Granularity::PerYear => "per_year",
        }
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "total" => Ok(Granularity::Total),
            "per_year" => Ok(Granularity::PerYear),
            other => Err(format!("unknown granularity {other:?}")),
        }
    }
}

/// An inclusive, non-empty span of years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YearRange {
    pub from: i32,
    pub to: i32,
}

impl YearRange {
    pub fn new(from: i32, to: i32) -> Option<Self> {
        (from <= to).then_some(Self { from, to })
    }

    pub fn contains(self, year: i32) -> bool {
        (self.from..=self.to).contains(&year)
    }

    pub fn years(self) -> impl Iterator<Item = i32> {
        self.from..=self.to
    }
}

/// Counts for every year of a contiguous range, zero-filled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct YearSeries {
    pub year_from: i32,
    pub year_to: i32,
    pub counts: BTreeMap<i32, u64>,
}

impl YearSeries {
    pub fn zeros(range: YearRange) -> Self {
        Self {
            year_from: range.from,
            year_to: range.to,
            counts: range.years().map(|year| (year, 0)).collect(),
        }
    }

    pub fn range(&self) -> YearRange {
        YearRange {
            from: self.year_from,
            to: self.year_to,
        }
    }

    /// Adds one to `year` if it lies in the range.
    fn bump(&mut self, year: i32) {
        if let Some(count) = self.counts.get_mut(&year) {
            *count += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Several year series over one shared range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiSeries {
    pub year_from: i32,
    pub year_to: i32,
    pub series: BTreeMap<String, YearSeries>,
}

impl MultiSeries {
    fn zeros<'a>(range: YearRange, labels: impl IntoIterator<Item = &'a str>) -> Self {
        Self {
            year_from: range.from,
            year_to: range.to,
            series: labels
                .into_iter()
                .map(|label| (label.to_owned(), YearSeries::zeros(range)))
                .collect(),
        }
    }

    fn bump(&mut self, label: &str, year: i32) {
        if let Some(series) = self.series.get_mut(label) {
            series.bump(year);
        }
    }
}

/// Absolute counts per category. No relative figures are derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributionResult {
    pub counts: BTreeMap<String, u64>,
    /// Distinct projects contributing at least one count.
    pub total_projects: u64,
    /// Classifications the area mapping does not know (discipline only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unmapped: Option<BTreeMap<String, u64>>,
}

impl DistributionResult {
    fn zeros<'a>(labels: impl IntoIterator<Item = &'a str>) -> Self {
        Self {
            counts: labels.into_iter().map(|label| (label.to_owned(), 0)).collect(),
            total_projects: 0,
            unmapped: None,
        }
    }

    pub fn sum(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Completed projects per year.
pub fn research_activity(records: &[&ProjectRecord], range: YearRange) -> YearSeries {
    let mut series = YearSeries::zeros(range);
    for year in records.iter().filter_map(|r| r.year_end) {
        series.bump(year);
    }
    series
}

/// Projects per disciplinary area, via the record's main classification.
pub fn disciplinary_area(records: &[&ProjectRecord], mapping: &AreaMapping) -> DistributionResult {
    let mut result = DistributionResult::zeros(DisciplinaryArea::ALL.iter().map(|a| a.label()));
    let mut unmapped: BTreeMap<String, u64> = BTreeMap::new();
    for record in records {
        match mapping.lookup(&record.main_classification) {
            Some(area) => {
                *result.counts.get_mut(area.label()).expect("all areas present") += 1;
                result.total_projects += 1;
            }
            None => {
                let key = match record.main_classification.trim() {
                    "" => MISSING_CLASSIFICATION.to_owned(),
                    other => other.to_owned(),
                };
                *unmapped.entry(key).or_default() += 1;
            }
        }
    }
    result.unmapped = Some(unmapped);
    result
}

/// One count per funding type a project carries; projects with several types
/// count under each.
pub fn funding_totals(records: &[&ProjectRecord]) -> DistributionResult {
    let mut result = DistributionResult::zeros(FundingType::ALL.iter().map(|f| f.as_str()));
    for record in records {
        for funding in &record.funding_types {
            *result.counts.get_mut(funding.as_str()).expect("all types present") += 1;
        }
        if !record.funding_types.is_empty() {
            result.total_projects += 1;
        }
    }
    result
}

pub fn funding_per_year(records: &[&ProjectRecord], range: YearRange) -> MultiSeries {
    let mut result = MultiSeries::zeros(range, FundingType::ALL.iter().map(|f| f.as_str()));
    for record in records {
        let Some(year) = record.year_end else { continue };
        for funding in &record.funding_types {
            result.bump(funding.as_str(), year);
        }
    }
    result
}

/// Doctoral and habilitation theses per completion year.
pub fn qualification_per_year(records: &[&ProjectRecord], range: YearRange) -> MultiSeries {
    let mut result = MultiSeries::zeros(range, QualificationType::ALL.iter().map(|q| q.as_str()));
    for record in records {
        if let (Some(qualification), Some(year)) = (record.qualification, record.year_end) {
            result.bump(qualification.as_str(), year);
        }
    }
    result
}

pub fn qualification_totals(records: &[&ProjectRecord]) -> DistributionResult {
    let mut result = DistributionResult::zeros(QualificationType::ALL.iter().map(|q| q.as_str()));
    for qualification in records.iter().filter_map(|r| r.qualification) {
        *result.counts.get_mut(qualification.as_str()).expect("both types present") += 1;
        result.total_projects += 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, year_end: Option<i32>) -> ProjectRecord {
        let mut record = ProjectRecord::empty(id);
        record.year_end = year_end;
        record
    }

    fn refs(records: &[ProjectRecord]) -> Vec<&ProjectRecord> {
        records.iter().collect()
    }

    fn range(from: i32, to: i32) -> YearRange {
        YearRange::new(from, to).unwrap()
    }

    #[test]
    fn activity_counts_completion_years() {
        let records = [record("a", Some(1995)), record("b", Some(1995)), record("c", Some(1996)), record("d", None)];
        let series = research_activity(&refs(&records), range(1995, 1996));
        assert_eq!(series.counts, BTreeMap::from([(1995, 2), (1996, 1)]));
    }

    #[test]
    fn empty_activity_is_zero_filled() {
        let series = research_activity(&[], range(1995, 2009));
        assert_eq!(series.counts.len(), 15);
        assert_eq!(series.total(), 0);
    }

    #[test]
    fn activity_slices_add_up() {
        let records: Vec<_> = (0..60).map(|i| record(&i.to_string(), Some(1990 + i % 20))).collect();
        let records = refs(&records);
        let whole = research_activity(&records, range(1995, 2005));
        let left = research_activity(&records, range(1995, 1999));
        let right = research_activity(&records, range(2000, 2005));
        for year in range(1995, 2005).years() {
            let part = left.counts.get(&year).or(right.counts.get(&year)).unwrap();
            assert_eq!(whole.counts[&year], *part);
        }
    }

    #[test]
    fn discipline_maps_german_classification() {
        let mut r = record("a", Some(2005));
        r.main_classification = "Erziehungswissenschaft".into();
        let result = disciplinary_area(&[&r], &AreaMapping::builtin());
        assert_eq!(result.counts["Education"], 1);
        assert_eq!(result.sum(), 1);
        assert_eq!(result.counts.len(), 12);
        assert_eq!(result.unmapped, Some(BTreeMap::new()));
    }

    #[test]
    fn discipline_surfaces_unmapped_values() {
        let mut a = record("a", None);
        a.main_classification = "Bildungswesen Sekundarstufe I".into();
        let b = record("b", None);
        let result = disciplinary_area(&[&a, &b], &AreaMapping::builtin());
        assert_eq!(result.sum(), 0);
        assert_eq!(result.total_projects, 0);
        assert_eq!(
            result.unmapped.unwrap(),
            BTreeMap::from([
                (MISSING_CLASSIFICATION.to_string(), 1),
                ("Bildungswesen Sekundarstufe I".to_string(), 1)
            ])
        );
        let empty = disciplinary_area(&[], &AreaMapping::builtin());
        assert!(empty.counts.values().all(|&c| c == 0));
    }

    #[test]
    fn funding_counts_every_type() {
        let mut r = record("a", Some(2000));
        r.funding_types = [FundingType::InHouse, FundingType::Contract].into();
        let result = funding_totals(&[&r]);
        assert_eq!(
            result.counts,
            BTreeMap::from([("contract".into(), 1), ("in_house".into(), 1), ("third_party".into(), 0)])
        );
        assert_eq!(result.total_projects, 1);
        assert_eq!(result.sum(), 2);

        let none = funding_totals(&[&record("b", None)]);
        assert_eq!(none.sum(), 0);
        assert_eq!(none.total_projects, 0);
    }

    #[test]
    fn funding_per_year_keys_on_year_end() {
        let mut r = record("a", Some(2001));
        r.funding_types = [FundingType::ThirdParty].into();
        let result = funding_per_year(&[&r], range(2000, 2002));
        assert_eq!(result.series.len(), 3);
        assert_eq!(result.series["third_party"].counts[&2001], 1);
        assert_eq!(result.series["in_house"].total(), 0);
    }

    #[test]
    fn qualification_series() {
        let mut r = record("a", Some(2005));
        r.qualification = Some(QualificationType::Doctoral);
        let result = qualification_per_year(&[&r], range(2004, 2006));
        assert_eq!(result.series["doctoral"].counts, BTreeMap::from([(2004, 0), (2005, 1), (2006, 0)]));
        assert_eq!(result.series["habilitation"].total(), 0);

        let none = qualification_per_year(&[&record("b", Some(2005))], range(2004, 2006));
        assert!(none.series.values().all(|s| s.total() == 0));
        assert_eq!(qualification_totals(&[&r]).counts["doctoral"], 1);
    }

    #[test]
    fn granularity_matrix() {
        assert!(!Indicator::Activity.supports(Granularity::Total));
        assert!(!Indicator::Discipline.supports(Granularity::PerYear));
        assert!(Indicator::Funding.supports(Granularity::Total));
        assert!(Indicator::Funding.supports(Granularity::PerYear));
    }
}
