//! Request resolution and response bodies shared by the HTTP service and the
//! local CLI, so both print the same bytes for the same question.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::areas::{AreaMapping, DisciplinaryArea};
use crate::canonical::to_canonical_json;
use crate::chart::{emit_chart, render_svg, ChartKind, ChartSpec};
use crate::corpus::{load_corpus, AttributeMap, Corpus, CorpusFilter, Region, Status};
use crate::indicators::{run_query, Granularity, Indicator, IndicatorQuery, IndicatorResult, ResolvedFilter};
use crate::schema::{FundingType, QualificationType, ResearchTypeFlag};

/// Accepted range for `from` and `to`.
pub const MIN_YEAR: i32 = 1000;
pub const MAX_YEAR: i32 = 9999;

/// A loaded corpus together with its content hash.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub id: String,
    pub corpus: Corpus,
    pub areas: AreaMapping,
    pub attributes: AttributeMap,
}

impl Snapshot {
    pub fn new(corpus: Corpus, id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            corpus,
            areas: AreaMapping::builtin(),
            attributes: AttributeMap::builtin(),
        }
    }

    pub fn load(path: &Path) -> crate::Result<Self> {
        let (corpus, id) = load_corpus(path)?;
        Ok(Self::new(corpus, id))
    }
}

/// Raw query parameters. Everything is a string so parsing never fails
/// before we can name the offending parameter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiRequest {
    #[serde(default)]
    pub status: Option<String>,
    #[serde(default)]
    pub region: Option<String>,
    #[serde(default)]
    pub from: Option<String>,
    #[serde(default)]
    pub to: Option<String>,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub granularity: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    NotFound,
    Validation,
}

impl ErrorClass {
    pub fn http_status(self) -> u16 {
        match self {
            ErrorClass::NotFound => 404,
            ErrorClass::Validation => 400,
        }
    }
}

/// Serialises as `{"error": ..., "parameter": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{error}")]
pub struct ApiError {
    #[serde(skip)]
    pub class: ErrorClass,
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
}

impl ApiError {
    pub fn not_found(message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::NotFound,
            error: message.into(),
            parameter: None,
        }
    }

    pub fn invalid(parameter: &str, message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::Validation,
            error: message.into(),
            parameter: Some(parameter.to_owned()),
        }
    }

    pub fn body(&self) -> String {
        to_canonical_json(self).expect("error bodies serialise")
    }
}

fn parse_param<T: FromStr<Err = String>>(name: &str, raw: Option<&str>) -> Result<Option<T>, ApiError> {
    match raw.map(str::trim) {
        None | Some("") => Ok(None),
        Some(value) => value.parse().map(Some).map_err(|e: String| ApiError::invalid(name, e)),
    }
}

fn parse_year(name: &str, raw: Option<&str>) -> Result<Option<i32>, ApiError> {
    match raw.map(str::trim) {
        None | Some("") => Ok(None),
        Some(value) => match value.parse::<i32>() {
            Ok(year) if (MIN_YEAR..=MAX_YEAR).contains(&year) => Ok(Some(year)),
            _ => Err(ApiError::invalid(
                name,
                format!("{name} must be a year between {MIN_YEAR} and {MAX_YEAR}, got {value:?}"),
            )),
        },
    }
}

pub fn parse_indicator(id: &str) -> Result<Indicator, ApiError> {
    id.parse().map_err(|_| ApiError::not_found(format!("unknown indicator {id:?}")))
}

fn resolve_filter(params: &ApiRequest) -> Result<CorpusFilter, ApiError> {
    let filter = CorpusFilter {
        status: parse_param::<Status>("status", params.status.as_deref())?,
        region: parse_param::<Region>("region", params.region.as_deref())?.unwrap_or_default(),
        year_from: parse_year("from", params.from.as_deref())?,
        year_to: parse_year("to", params.to.as_deref())?,
    };
    if let (Some(from), Some(to)) = (filter.year_from, filter.year_to) {
        if from > to {
            return Err(ApiError::invalid("from", format!("from ({from}) must not be after to ({to})")));
        }
    }
    Ok(filter)
}

fn check_granularity(indicator: Indicator, granularity: Granularity) -> Result<(), ApiError> {
    if indicator.supports(granularity) {
        Ok(())
    } else {
        Err(ApiError::invalid(
            "granularity",
            format!("indicator {indicator} has no {} granularity", granularity.as_str()),
        ))
    }
}

/// Query for the indicator endpoint. `kind` is ignored here.
pub fn resolve_query(indicator_id: &str, params: &ApiRequest) -> Result<IndicatorQuery, ApiError> {
    let indicator = parse_indicator(indicator_id)?;
    let filter = resolve_filter(params)?;
    let granularity = parse_param::<Granularity>("granularity", params.granularity.as_deref())?
        .unwrap_or(indicator.default_granularity());
    check_granularity(indicator, granularity)?;
    Ok(IndicatorQuery {
        indicator,
        filter,
        granularity,
    })
}

/// Query and chart kind for the chart endpoint. Time-series kinds need
/// per-year data and the others need totals; an explicit granularity must
/// agree with the kind.
pub fn resolve_chart(indicator_id: &str, params: &ApiRequest) -> Result<(IndicatorQuery, ChartKind), ApiError> {
    let indicator = parse_indicator(indicator_id)?;
    let filter = resolve_filter(params)?;
    let allowed = ChartKind::allowed_for(indicator);
    let kind = parse_param::<ChartKind>("kind", params.kind.as_deref())?.unwrap_or(allowed[0]);
    if !allowed.contains(&kind) {
        let names: Vec<&str> = allowed.iter().map(|k| k.as_str()).collect();
        return Err(ApiError::invalid(
            "kind",
            format!("chart kind {kind} is not offered for {indicator}; use one of {}", names.join(", ")),
        ));
    }
    let needed = if kind.is_timeseries() {
        Granularity::PerYear
    } else {
        Granularity::Total
    };
    if let Some(granularity) = parse_param::<Granularity>("granularity", params.granularity.as_deref())? {
        if granularity != needed {
            return Err(ApiError::invalid(
                "granularity",
                format!("chart kind {kind} needs {} granularity", needed.as_str()),
            ));
        }
    }
    check_granularity(indicator, needed)?;
    Ok((
        IndicatorQuery {
            indicator,
            filter,
            granularity: needed,
        },
        kind,
    ))
}

#[derive(Debug, Serialize)]
struct SummaryBody<'a> {
    snapshot: &'a str,
    filter: ResolvedFilter,
    record_count: usize,
    year_span: Option<[i32; 2]>,
    by_status: BTreeMap<&'static str, usize>,
    by_country: BTreeMap<&'static str, usize>,
}

pub fn summary_body(snapshot: &Snapshot) -> String {
    let summary = snapshot.corpus.summary();
    let mut by_status = BTreeMap::new();
    let mut by_country = BTreeMap::new();
    for record in snapshot.corpus.records() {
        *by_status.entry(record.status.as_str()).or_default() += 1;
        *by_country.entry(record.country.as_str()).or_default() += 1;
    }
    let body = SummaryBody {
        snapshot: &snapshot.id,
        filter: ResolvedFilter::unfiltered(&snapshot.corpus),
        record_count: summary.record_count,
        year_span: summary.min_year_end.zip(summary.max_year_end).map(|(a, b)| [a, b]),
        by_status,
        by_country,
    };
    to_canonical_json(&body).expect("summary serialises")
}

#[derive(Debug, Serialize)]
struct IndicatorBody<'a> {
    snapshot: &'a str,
    indicator: Indicator,
    granularity: Granularity,
    filter: ResolvedFilter,
    result: &'a IndicatorResult,
}

pub fn indicator_body(snapshot: &Snapshot, query: &IndicatorQuery) -> Result<String, ApiError> {
    let outcome =
        run_query(&snapshot.corpus, query, &snapshot.areas).map_err(|e| ApiError::invalid("filter", e.to_string()))?;
    let body = IndicatorBody {
        snapshot: &snapshot.id,
        indicator: outcome.indicator,
        granularity: outcome.granularity,
        filter: outcome.filter,
        result: &outcome.result,
    };
    Ok(to_canonical_json(&body).expect("indicator body serialises"))
}

pub fn chart_spec(snapshot: &Snapshot, query: &IndicatorQuery, kind: ChartKind) -> Result<ChartSpec, ApiError> {
    let outcome =
        run_query(&snapshot.corpus, query, &snapshot.areas).map_err(|e| ApiError::invalid("filter", e.to_string()))?;
    emit_chart(&outcome, kind).map_err(|e| ApiError::invalid("kind", e.to_string()))
}

#[derive(Debug, Serialize)]
struct ChartBody<'a> {
    snapshot: &'a str,
    filter: Option<ResolvedFilter>,
    chart: &'a ChartSpec,
}

pub fn chart_body(snapshot: &Snapshot, query: &IndicatorQuery, kind: ChartKind) -> Result<String, ApiError> {
    let spec = chart_spec(snapshot, query, kind)?;
    let body = ChartBody {
        snapshot: &snapshot.id,
        filter: spec.meta,
        chart: &spec,
    };
    Ok(to_canonical_json(&body).expect("chart body serialises"))
}

pub fn chart_svg(snapshot: &Snapshot, query: &IndicatorQuery, kind: ChartKind) -> Result<String, ApiError> {
    chart_spec(snapshot, query, kind).map(|spec| render_svg(&spec))
}

#[derive(Debug, Serialize)]
struct Labelled {
    id: &'static str,
    label: &'static str,
}

#[derive(Debug, Serialize)]
struct IndicatorMeta {
    id: Indicator,
    title: &'static str,
    default_granularity: Granularity,
    granularities: Vec<Granularity>,
    chart_kinds: &'static [ChartKind],
}

#[derive(Debug, Serialize)]
struct SchemaBody<'a> {
    snapshot: &'a str,
    filter: ResolvedFilter,
    attributes: BTreeMap<&'static str, Vec<String>>,
    disciplinary_areas: Vec<&'static str>,
    funding_types: Vec<Labelled>,
    qualification_types: Vec<&'static str>,
    research_types: Vec<Labelled>,
    indicators: Vec<IndicatorMeta>,
    statuses: Vec<&'static str>,
    regions: Vec<&'static str>,
}

/// Labels and option lists a client needs to build its controls.
pub fn schema_body(snapshot: &Snapshot) -> String {
    let body = SchemaBody {
        snapshot: &snapshot.id,
        filter: ResolvedFilter::unfiltered(&snapshot.corpus),
        attributes: snapshot.attributes.entries(),
        disciplinary_areas: DisciplinaryArea::ALL.iter().map(|a| a.label()).collect(),
        funding_types: FundingType::ALL
            .iter()
            .map(|f| Labelled {
                id: f.as_str(),
                label: f.label(),
            })
            .collect(),
        qualification_types: QualificationType::ALL
            .iter()
            .map(|q| q.as_str())
            .collect(),
        research_types: ResearchTypeFlag::ALL
            .iter()
            .map(|f| Labelled {
                id: f.as_str(),
                label: f.label(),
            })
            .collect(),
        indicators: Indicator::ALL
            .iter()
            .map(|&indicator| IndicatorMeta {
                id: indicator,
                title: indicator.title(),
                default_granularity: indicator.default_granularity(),
                granularities: [Granularity::Total, Granularity::PerYear]
                    .into_iter()
                    .filter(|g| indicator.supports(*g))
                    .collect(),
                chart_kinds: ChartKind::allowed_for(indicator),
            })
            .collect(),
        statuses: [Status::Completed, Status::Starting, Status::Current]
            .iter()
            .map(|s| s.as_str())
            .collect(),
        regions: [Region::Germany, Region::Dach].iter().map(|r| r.as_str()).collect(),
    };
    to_canonical_json(&body).expect("schema serialises")
}
