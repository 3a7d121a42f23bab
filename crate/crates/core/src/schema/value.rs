use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::wikitext::PageName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeKind {
    String,
    Page,
    Number,
    Date,
}

impl AttributeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AttributeKind::String => "string",
            AttributeKind::Page => "page",
            AttributeKind::Number => "number",
            AttributeKind::Date => "date",
        }
    }
}

impl FromStr for AttributeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "string" | "text" => Ok(AttributeKind::String),
            "page" => Ok(AttributeKind::Page),
            "number" => Ok(AttributeKind::Number),
            "date" => Ok(AttributeKind::Date),
            other => Err(format!("unknown attribute kind {other:?}")),
        }
    }
}

/// A calendar date, or a bare year when month and day are unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DateValue {
    Day(NaiveDate),
    Year(i32),
}

impl DateValue {
    pub fn year(self) -> i32 {
        match self {
            DateValue::Day(date) => date.year(),
            DateValue::Year(year) => year,
        }
    }

    /// First day the value could denote.
    pub fn earliest(self) -> NaiveDate {
        match self {
            DateValue::Day(date) => date,
            DateValue::Year(year) => NaiveDate::from_ymd_opt(year, 1, 1).expect("four-digit year"),
        }
    }

    /// Last day the value could denote.
    pub fn latest(self) -> NaiveDate {
        match self {
            DateValue::Day(date) => date,
            DateValue::Year(year) => NaiveDate::from_ymd_opt(year, 12, 31).expect("four-digit year"),
        }
    }
}

impl FromStr for DateValue {
    type Err = String;

    /// Accepts `YYYY/MM/DD`, `YYYY-MM-DD` and bare `YYYY`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let is_year = |part: &str| part.len() == 4 && part.bytes().all(|b| b.is_ascii_digit());
        if is_year(s) {
            return Ok(DateValue::Year(s.parse().expect("four ascii digits")));
        }
        let separator = if s.contains('/') { '/' } else { '-' };
        let parts: Vec<&str> = s.split(separator).collect();
        let digits = |part: &str, len: usize| {
            (1..=len).contains(&part.len()) && part.bytes().all(|b| b.is_ascii_digit())
        };
        match parts.as_slice() {
            [y, m, d] if is_year(y) && digits(m, 2) && digits(d, 2) => NaiveDate::from_ymd_opt(
                y.parse().expect("digits"),
                m.parse().expect("digits"),
                d.parse().expect("digits"),
            )
            .map(DateValue::Day)
            .ok_or_else(|| format!("{s:?} is not a calendar date")),
            _ => Err(format!("{s:?} is not a date")),
        }
    }
}

impl fmt::Display for DateValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DateValue::Day(date) => write!(f, "{}", date.format("%Y-%m-%d")),
            DateValue::Year(year) => write!(f, "{year:04}"),
        }
    }
}

impl Serialize for DateValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DateValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A fact value; the variant always matches the attribute's declared kind.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Value {
    String(String),
    Page(PageName),
    Number(f64),
    Date(DateValue),
}

impl Value {
    pub fn parse(kind: AttributeKind, raw: &str) -> Result<Self, String> {
        let raw = raw.trim();
        match kind {
            AttributeKind::String => Ok(Value::String(raw.to_owned())),
            AttributeKind::Page => raw.parse().map(Value::Page).map_err(|e| e.to_string()),
            AttributeKind::Number => parse_number(raw).map(Value::Number),
            AttributeKind::Date => raw.parse().map(Value::Date),
        }
    }

    pub fn kind(&self) -> AttributeKind {
        match self {
            Value::String(_) => AttributeKind::String,
            Value::Page(_) => AttributeKind::Page,
            Value::Number(_) => AttributeKind::Number,
            Value::Date(_) => AttributeKind::Date,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::String(s) => Some(s),
            Value::Page(p) => Some(p.local_name()),
            _ => None,
        }
    }

    /// The value as a whole number, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Value::Number(n) if n.fract() == 0.0 && n.abs() < 1e15 => Some(*n as i64),
            Value::String(s) => s.trim().parse().ok(),
            _ => None,
        }
    }

    pub fn as_date(&self) -> Option<DateValue> {
        match self {
            Value::Date(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::String(s) => f.write_str(s),
            Value::Page(p) => write!(f, "{p}"),
            Value::Number(n) => write!(f, "{n}"),
            Value::Date(d) => write!(f, "{d}"),
        }
    }
}

fn parse_number(raw: &str) -> Result<f64, String> {
    // Rust's float grammar also admits "inf" and "NaN"; wiki numbers do not.
    let plain = !raw.is_empty()
        && raw
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    match raw.parse::<f64>() {
        Ok(n) if plain && n.is_finite() => Ok(n),
        _ => Err(format!("{raw:?} is not a number")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn date_formats() {
        let expected = DateValue::Day(NaiveDate::from_ymd_opt(2005, 7, 15).unwrap());
        assert_eq!("2005/07/15".parse::<DateValue>().unwrap(), expected);
        assert_eq!("2005-07-15".parse::<DateValue>().unwrap(), expected);
        assert_eq!("2005".parse::<DateValue>().unwrap(), DateValue::Year(2005));
        assert_eq!(DateValue::Year(2005).year(), 2005);
        for bad in ["2005/13/01", "2005-02-30", "15 Juli 2005", "05/07/15", "", "2005/07-15"] {
            assert!(bad.parse::<DateValue>().is_err(), "{bad}");
        }
    }

    #[test]
    fn bare_year_bounds() {
        let year = DateValue::Year(2004);
        assert_eq!(year.earliest().to_string(), "2004-01-01");
        assert_eq!(year.latest().to_string(), "2004-12-31");
    }

    #[test]
    fn numbers() {
        assert_eq!(Value::parse(AttributeKind::Number, " 2005 ").unwrap(), Value::Number(2005.0));
        assert_eq!(Value::parse(AttributeKind::Number, "-1.5e2").unwrap(), Value::Number(-150.0));
        for bad in ["abc", "inf", "NaN", "", "1,5", "2005a"] {
            assert!(Value::parse(AttributeKind::Number, bad).is_err(), "{bad}");
        }
        assert_eq!(Value::Number(2005.0).as_integer(), Some(2005));
        assert_eq!(Value::Number(2005.5).as_integer(), None);
    }

    #[test]
    fn page_values() {
        let value = Value::parse(AttributeKind::Page, "Category:MoBi").unwrap();
        assert_eq!(value.to_string(), "Category:MoBi");
        assert!(Value::parse(AttributeKind::Page, " ").is_err());
    }

    fn arb_value() -> impl Strategy<Value = Value> {
        prop_oneof![
            "[a-zA-Z0-9 äö]{0,12}".prop_map(|s| Value::String(s.trim().to_string())),
            "[a-zA-Z][a-zA-Z0-9 ]{0,10}".prop_map(|s| Value::Page(PageName::main(&s).unwrap())),
            (-1.0e9f64..1.0e9).prop_map(Value::Number),
            (1000i32..=9999).prop_map(|y| Value::Date(DateValue::Year(y))),
            (1000i32..=9999, 1u32..=12, 1u32..=28).prop_map(|(y, m, d)| {
                Value::Date(DateValue::Day(NaiveDate::from_ymd_opt(y, m, d).unwrap()))
            }),
        ]
    }

    proptest! {
        #[test]
        fn rendered_values_reparse_under_their_kind(value in arb_value()) {
            let reparsed = Value::parse(value.kind(), &value.to_string()).unwrap();
            prop_assert_eq!(reparsed, value);
        }
    }
}
