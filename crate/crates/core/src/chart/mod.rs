//! Renderer-agnostic chart specifications. Geometry for the proportional
//! kinds (pie, donut, treemap, bubble, tag cloud) is computed here so every
//! client draws the same picture; bars and lines carry data only.

mod svg;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use svg::render_svg;

use crate::indicators::{DistributionResult, Indicator, IndicatorResult, MultiSeries, QueryOutcome, ResolvedFilter, YearSeries};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;

/// Twelve fixed colours, handed out in category order.
pub const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f",
    "#bab0ac", "#86bcb6", "#d37295",
];

pub const TAG_SIZE_MIN: f64 = 12.0;
pub const TAG_SIZE_MAX: f64 = 48.0;

const PIE_RADIUS: f64 = 200.0;
const DONUT_INNER_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    Bar,
    LineSeries,
    Pie,
    Donut,
    Treemap,
    Bubble,
    Tagcloud,
}

impl ChartKind {
    pub const ALL: [ChartKind; 7] = [
        ChartKind::Bar,
        ChartKind::LineSeries,
        ChartKind::Pie,
        ChartKind::Donut,
        ChartKind::Treemap,
        ChartKind::Bubble,
        ChartKind::Tagcloud,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChartKind::Bar => "bar",
            ChartKind::LineSeries => "line_series",
            ChartKind::Pie => "pie",
            ChartKind::Donut => "donut",
            ChartKind::Treemap => "treemap",
            ChartKind::Bubble => "bubble",
            ChartKind::Tagcloud => "tagcloud",
        }
    }

    pub fn is_timeseries(self) -> bool {
        matches!(self, ChartKind::Bar | ChartKind::LineSeries)
    }

    /// Chart kinds offered for each indicator.
    pub fn allowed_for(indicator: Indicator) -> &'static [ChartKind] {
        match indicator {
            Indicator::Activity | Indicator::Qualification => &[ChartKind::Bar, ChartKind::LineSeries],
            Indicator::Discipline => &[
                ChartKind::Tagcloud,
                ChartKind::Pie,
                ChartKind::Donut,
                ChartKind::Treemap,
                ChartKind::Bubble,
            ],
            Indicator::Funding => &[
                ChartKind::Pie,
                ChartKind::Donut,
                ChartKind::Treemap,
                ChartKind::Bubble,
                ChartKind::LineSeries,
            ],
        }
    }
}

impl FromStr for ChartKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|kind| kind.as_str() == s)
            .ok_or_else(|| format!("unknown chart kind {s:?}"))
    }
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Series {
    pub label: String,
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Mark {
    /// Angles in degrees, clockwise from twelve o'clock.
    Slice {
        label: String,
        value: u64,
        start_angle: f64,
        end_angle: f64,
        cx: f64,
        cy: f64,
        outer_radius: f64,
        inner_radius: f64,
    },
    Rect {
        label: String,
        value: u64,
        x: f64,
        y: f64,
        width: f64,
        height: f64,
    },
    Circle {
        label: String,
        value: u64,
        cx: f64,
        cy: f64,
        r: f64,
    },
    Word {
        label: String,
        value: u64,
        size: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub title: String,
    pub width: f64,
    pub height: f64,
    /// Years (ascending) or categories (count descending, then label).
    pub categories: Vec<String>,
    pub series: Vec<Series>,
    pub style: BTreeMap<String, String>,
    pub marks: Vec<Mark>,
    pub empty: bool,
    pub meta: Option<ResolvedFilter>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("chart kind {kind} cannot show {what}")]
    Incompatible { kind: ChartKind, what: &'static str },
    #[error("chart kind {kind} is not offered for indicator {indicator}")]
    NotOffered { kind: ChartKind, indicator: Indicator },
}

impl ChartSpec {
    fn new(kind: ChartKind, title: &str) -> Self {
        Self {
            kind,
            title: title.to_owned(),
            width: WIDTH,
            height: HEIGHT,
            categories: Vec::new(),
            series: Vec::new(),
            style: BTreeMap::new(),
            marks: Vec::new(),
            empty: true,
            meta: None,
        }
    }

    fn assign_colors<'a>(&mut self, labels: impl IntoIterator<Item = &'a str>) {
        self.style = labels
            .into_iter()
            .zip(PALETTE.iter().cycle())
            .map(|(label, color)| (label.to_owned(), (*color).to_owned()))
            .collect();
    }
}

/// Years along x, one series per label. `Bar` over several series draws
/// grouped bars.
pub fn emit_timeseries(result: &IndicatorResult, kind: ChartKind, title: &str) -> Result<ChartSpec, ChartError> {
    if !kind.is_timeseries() {
        return Err(ChartError::Incompatible {
            kind,
            what: "a time series",
        });
    }
    let mut spec = ChartSpec::new(kind, title);
    let (years, series): (Vec<i32>, Vec<(&str, &YearSeries)>) = match result {
        IndicatorResult::EmptyRange => return Ok(spec),
        IndicatorResult::YearSeries(series) => (series.counts.keys().copied().collect(), vec![("count", series)]),
        IndicatorResult::MultiSeries(MultiSeries {
            year_from,
            year_to,
            series,
        }) => (
            (*year_from..=*year_to).collect(),
            series.iter().map(|(label, s)| (label.as_str(), s)).collect(),
        ),
        IndicatorResult::Distribution(_) => {
            return Err(ChartError::Incompatible {
                kind,
                what: "a distribution",
            })
        }
    };
    spec.categories = years.iter().map(i32::to_string).collect();
    spec.series = series
        .iter()
        .map(|(label, s)| Series {
            label: (*label).to_owned(),
            values: years.iter().map(|y| s.counts.get(y).copied().unwrap_or(0)).collect(),
        })
        .collect();
    spec.assign_colors(series.iter().map(|(label, _)| *label));
    spec.empty = years.is_empty();
    Ok(spec)
}

/// Non-zero categories, count descending then label ascending.
fn ordered_categories(result: &DistributionResult) -> Vec<(&str, u64)> {
    let mut categories: Vec<(&str, u64)> = result
        .counts
        .iter()
        .filter(|(_, &count)| count > 0)
        .map(|(label, &count)| (label.as_str(), count))
        .collect();
    categories.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    categories
}

fn distribution_frame(result: &DistributionResult, kind: ChartKind, title: &str) -> (ChartSpec, Vec<(String, u64)>) {
    let mut spec = ChartSpec::new(kind, title);
    let categories: Vec<(String, u64)> = ordered_categories(result)
        .into_iter()
        .map(|(label, count)| (label.to_owned(), count))
        .collect();
    spec.categories = categories.iter().map(|(label, _)| label.clone()).collect();
    spec.series = vec![Series {
        label: "count".to_owned(),
        values: categories.iter().map(|(_, count)| *count).collect(),
    }];
    spec.assign_colors(categories.iter().map(|(label, _)| label.as_str()));
    spec.empty = categories.is_empty();
    if spec.empty {
        spec.series.clear();
    }
    (spec, categories)
}

pub fn emit_distribution(result: &DistributionResult, kind: ChartKind, title: &str) -> Result<ChartSpec, ChartError> {
    let (mut spec, categories) = distribution_frame(result, kind, title);
    let total: u64 = categories.iter().map(|(_, count)| count).sum();
    spec.marks = match kind {
        ChartKind::Pie | ChartKind::Donut => {
            let inner = if kind == ChartKind::Donut {
                PIE_RADIUS * DONUT_INNER_RATIO
            } else {
                0.0
            };
            pie_slices(&categories, total, inner)
        }
        ChartKind::Treemap => treemap(&categories, total),
        ChartKind::Bubble => bubbles(&categories),
        ChartKind::Tagcloud => return Ok(emit_tagcloud(result, title)),
        ChartKind::Bar | ChartKind::LineSeries => {
            return Err(ChartError::Incompatible {
                kind,
                what: "a distribution",
            })
        }
    };
    Ok(spec)
}

fn pie_slices(categories: &[(String, u64)], total: u64, inner_radius: f64) -> Vec<Mark> {
    let mut start = 0.0;
    categories
        .iter()
        .map(|(label, count)| {
            let sweep = 360.0 * *count as f64 / total as f64;
            let mark = Mark::Slice {
                label: label.clone(),
                value: *count,
                start_angle: start,
                end_angle: start + sweep,
                cx: WIDTH / 2.0,
                cy: HEIGHT / 2.0,
                outer_radius: PIE_RADIUS,
                inner_radius,
            };
            start += sweep;
            mark
        })
        .collect()
}

/// Slice-and-dice: each category takes its share of the remaining rectangle,
/// cutting along x and y in turn.
fn treemap(categories: &[(String, u64)], total: u64) -> Vec<Mark> {
    let (mut x, mut y, mut width, mut height) = (0.0, 0.0, WIDTH, HEIGHT);
    let mut remaining = total;
    let mut marks = Vec::with_capacity(categories.len());
    for (index, (label, count)) in categories.iter().enumerate() {
        let last = index + 1 == categories.len();
        let share = if last { 1.0 } else { *count as f64 / remaining as f64 };
        let horizontal = index % 2 == 0;
        let (w, h) = if horizontal {
            (width * share, height)
        } else {
            (width, height * share)
        };
        marks.push(Mark::Rect {
            label: label.clone(),
            value: *count,
            x,
            y,
            width: w,
            height: h,
        });
        if horizontal {
            x += w;
            width -= w;
        } else {
            y += h;
            height -= h;
        }
        remaining -= count;
    }
    marks
}

/// Row-major grid; the largest bubble fills most of its cell and areas scale
/// with counts.
fn bubbles(categories: &[(String, u64)]) -> Vec<Mark> {
    let n = categories.len();
    if n == 0 {
        return Vec::new();
    }
    let columns = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(columns);
    let cell = (WIDTH / columns as f64).min(HEIGHT / rows as f64);
    let max_radius = cell / 2.0 * 0.9;
    let max_count = categories.iter().map(|(_, c)| *c).max().unwrap_or(1) as f64;
    categories
        .iter()
        .enumerate()
        .map(|(index, (label, count))| Mark::Circle {
            label: label.clone(),
            value: *count,
            cx: (index % columns) as f64 * cell + cell / 2.0,
            cy: (index / columns) as f64 * cell + cell / 2.0,
            r: max_radius * (*count as f64 / max_count).sqrt(),
        })
        .collect()
}

/// Font sizes scale linearly from the smallest to the largest non-zero count;
/// equal counts all get the middle size.
pub fn emit_tagcloud(result: &DistributionResult, title: &str) -> ChartSpec {
    let (mut spec, categories) = distribution_frame(result, ChartKind::Tagcloud, title);
    let min = categories.iter().map(|(_, c)| *c).min().unwrap_or(0);
    let max = categories.iter().map(|(_, c)| *c).max().unwrap_or(0);
    spec.marks = categories
        .iter()
        .map(|(label, count)| Mark::Word {
            label: label.clone(),
            value: *count,
            size: tag_size(*count, min, max),
        })
        .collect();
    spec
}

pub fn tag_size(count: u64, min: u64, max: u64) -> f64 {
    if max == min {
        (TAG_SIZE_MIN + TAG_SIZE_MAX) / 2.0
    } else {
        TAG_SIZE_MIN + (count - min) as f64 / (max - min) as f64 * (TAG_SIZE_MAX - TAG_SIZE_MIN)
    }
}

/// Chart for a computed query, carrying its resolved filter.
pub fn emit_chart(outcome: &QueryOutcome, kind: ChartKind) -> Result<ChartSpec, ChartError> {
    if !ChartKind::allowed_for(outcome.indicator).contains(&kind) {
        return Err(ChartError::NotOffered {
            kind,
            indicator: outcome.indicator,
        });
    }
    let title = outcome.indicator.title();
    let mut spec = match (&outcome.result, kind) {
        (IndicatorResult::Distribution(result), ChartKind::Tagcloud) => emit_tagcloud(result, title),
        (IndicatorResult::Distribution(result), _) => emit_distribution(result, kind, title)?,
        (result, _) => emit_timeseries(result, kind, title)?,
    };
    spec.meta = Some(outcome.filter);
    Ok(spec)
}
