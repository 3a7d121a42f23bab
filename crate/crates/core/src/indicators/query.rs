use serde::Serialize;

use super::{
    disciplinary_area, funding_per_year, funding_totals, qualification_per_year, qualification_totals,
    research_activity, DistributionResult, Granularity, Indicator, MultiSeries, YearRange, YearSeries,
};
use crate::areas::AreaMapping;
use crate::corpus::{filter_records, Corpus, CorpusFilter, ProjectRecord, Region, Status};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndicatorQuery {
    pub indicator: Indicator,
    pub filter: CorpusFilter,
    pub granularity: Granularity,
}

impl IndicatorQuery {
    pub fn new(indicator: Indicator, filter: CorpusFilter) -> Self {
        Self {
            indicator,
            filter,
            granularity: indicator.default_granularity(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.indicator.supports(self.granularity) {
            return Err(Error::InvalidFilter(format!(
                "indicator {} does not support granularity {}",
                self.indicator,
                self.granularity.as_str()
            )));
        }
        self.filter.validate()
    }
}

/// The filter as actually applied. Without explicit bounds the year range is
/// the span of completion years in the filtered set (the whole period);
/// `empty_range` marks a filtered set with no completion years at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResolvedFilter {
    pub status: Option<Status>,
    pub region: Region,
    pub year_from: Option<i32>,
    pub year_to: Option<i32>,
    pub whole_period: bool,
    pub empty_range: bool,
}

impl ResolvedFilter {
    pub fn range(&self) -> Option<YearRange> {
        YearRange::new(self.year_from?, self.year_to?)
    }

    /// Echo for an unfiltered view of the corpus.
    pub fn unfiltered(corpus: &Corpus) -> Self {
        let summary = corpus.summary();
        Self {
            status: None,
            region: Region::Dach,
            year_from: summary.min_year_end,
            year_to: summary.max_year_end,
            whole_period: true,
            empty_range: summary.min_year_end.is_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IndicatorResult {
    YearSeries(YearSeries),
    MultiSeries(MultiSeries),
    Distribution(DistributionResult),
    /// A per-year indicator over a set with nothing to place on the time axis.
    EmptyRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryOutcome {
    pub indicator: Indicator,
    pub granularity: Granularity,
    pub filter: ResolvedFilter,
    pub result: IndicatorResult,
}

/// Filters the corpus, resolves the year range and computes the indicator.
pub fn run_query(corpus: &Corpus, query: &IndicatorQuery, areas: &AreaMapping) -> Result<QueryOutcome> {
    query.validate()?;
    let filter = query.filter;
    let records = filter_records(corpus, &filter)?;
    let resolved = resolve_range(&filter, &records);

    let result = match (query.indicator, query.granularity) {
        (Indicator::Discipline, _) => IndicatorResult::Distribution(disciplinary_area(&records, areas)),
        (Indicator::Funding, Granularity::Total) => IndicatorResult::Distribution(funding_totals(&records)),
        (Indicator::Qualification, Granularity::Total) => {
            IndicatorResult::Distribution(qualification_totals(&records))
        }
        (indicator, Granularity::PerYear) => match resolved.range() {
            None => IndicatorResult::EmptyRange,
            Some(range) => match indicator {
                Indicator::Activity => IndicatorResult::YearSeries(research_activity(&records, range)),
                Indicator::Funding => IndicatorResult::MultiSeries(funding_per_year(&records, range)),
                Indicator::Qualification => IndicatorResult::MultiSeries(qualification_per_year(&records, range)),
                Indicator::Discipline => unreachable!("handled above"),
            },
        },
        (Indicator::Activity, Granularity::Total) => unreachable!("rejected by validate"),
    };

    Ok(QueryOutcome {
        indicator: query.indicator,
        granularity: query.granularity,
        filter: resolved,
        result,
    })
}

fn resolve_range(filter: &CorpusFilter, records: &[&ProjectRecord]) -> ResolvedFilter {
    let years = || records.iter().filter_map(|r| r.year_end);
    let year_from = filter.year_from.or_else(|| years().min());
    let year_to = filter.year_to.or_else(|| years().max());
    let empty_range = year_from.is_none() || year_to.is_none();
    ResolvedFilter {
        status: filter.status,
        region: filter.region,
        year_from: if empty_range { None } else { year_from },
        year_to: if empty_range { None } else { year_to },
        whole_period: !filter.has_year_bounds(),
        empty_range,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Country;

    fn corpus(years: &[i32]) -> Corpus {
        Corpus::from_records(years.iter().enumerate().map(|(i, &year)| {
            let mut record = ProjectRecord::empty(format!("r{i:03}"));
            record.year_end = Some(year);
            record.status = Status::Completed;
            record.country = Country::Germany;
            record
        }))
        .unwrap()
    }

    fn activity(filter: CorpusFilter) -> IndicatorQuery {
        IndicatorQuery::new(Indicator::Activity, filter)
    }

    #[test]
    fn whole_period_spans_filtered_years() {
        let corpus = corpus(&[1995, 2001, 2006, 2006, 2009]);
        let filter = CorpusFilter {
            status: Some(Status::Completed),
            region: Region::Germany,
            ..Default::default()
        };
        let outcome = run_query(&corpus, &activity(filter), &AreaMapping::builtin()).unwrap();
        assert_eq!(outcome.filter.range(), YearRange::new(1995, 2009));
        assert!(outcome.filter.whole_period);
        let IndicatorResult::YearSeries(series) = outcome.result else { panic!() };
        assert_eq!((series.year_from, series.year_to), (1995, 2009));
        assert_eq!(series.counts[&2006], 2);
    }

    #[test]
    fn explicit_bounds_are_echoed() {
        let corpus = corpus(&[1995, 2009]);
        let filter = CorpusFilter {
            year_from: Some(2000),
            year_to: Some(2004),
            ..Default::default()
        };
        let outcome = run_query(&corpus, &activity(filter), &AreaMapping::builtin()).unwrap();
        let IndicatorResult::YearSeries(series) = outcome.result else { panic!() };
        assert_eq!((series.year_from, series.year_to), (2000, 2004));
        assert_eq!(series.total(), 0);
        assert!(!outcome.filter.whole_period);
    }

    #[test]
    fn one_sided_bound_resolves_the_other_side() {
        let corpus = corpus(&[1995, 2001, 2009]);
        let filter = CorpusFilter {
            year_from: Some(2000),
            ..Default::default()
        };
        let outcome = run_query(&corpus, &activity(filter), &AreaMapping::builtin()).unwrap();
        assert_eq!(outcome.filter.range(), YearRange::new(2000, 2009));
    }

    #[test]
    fn empty_set_gives_empty_range_marker() {
        let outcome = run_query(&Corpus::new(), &activity(CorpusFilter::default()), &AreaMapping::builtin()).unwrap();
        assert_eq!(outcome.result, IndicatorResult::EmptyRange);
        assert!(outcome.filter.empty_range);
        assert_eq!(outcome.filter.year_from, None);
    }

    #[test]
    fn queries_are_deterministic() {
        let corpus = corpus(&[1995, 2001, 2006]);
        let query = IndicatorQuery::new(Indicator::Funding, CorpusFilter::default());
        let a = run_query(&corpus, &query, &AreaMapping::builtin()).unwrap();
        let b = run_query(&corpus, &query, &AreaMapping::builtin()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_granularity_is_rejected() {
        let mut query = activity(CorpusFilter::default());
        query.granularity = Granularity::Total;
        assert!(run_query(&Corpus::new(), &query, &AreaMapping::builtin()).is_err());
    }
}
