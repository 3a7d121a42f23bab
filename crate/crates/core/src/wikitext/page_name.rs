use std::fmt;
use std::str::FromStr;

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Characters left untouched when a page name becomes a file name.
const FILE_NAME_SET: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'_')
    .remove(b'.')
    .remove(b'~');

pub const PAGE_FILE_EXTENSION: &str = "wiki";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Namespace {
    Main,
    Category,
    Attribute,
    Template,
}

impl Namespace {
    pub fn prefix(self) -> Option<&'static str> {
        match self {
            Namespace::Main => None,
            Namespace::Category => Some("Category"),
            Namespace::Attribute => Some("Attribute"),
            Namespace::Template => Some("Template"),
        }
    }

    /// Case-insensitive lookup of a namespace prefix. `Property` is accepted
    /// as an alias of `Attribute`.
    pub fn from_prefix(prefix: &str) -> Option<Self> {
        match prefix.trim().to_ascii_lowercase().as_str() {
            "category" => Some(Namespace::Category),
            "attribute" | "property" => Some(Namespace::Attribute),
            "template" => Some(Namespace::Template),
            _ => None,
        }
    }
}

/// A namespaced page name. Rendered as `Namespace:local_name`, or just
/// `local_name` in the main namespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PageName {
    namespace: Namespace,
    local_name: String,
}

impl PageName {
    pub fn new(namespace: Namespace, local_name: &str) -> Result<Self, Error> {
        let local_name = local_name.trim();
        if local_name.is_empty() {
            return Err(Error::InvalidPageName("empty local name".into()));
        }
        if namespace == Namespace::Main {
            // A main-namespace name that looks prefixed would not survive a
            // render/parse round trip.
            if let Some((prefix, _)) = local_name.split_once(':') {
                if Namespace::from_prefix(prefix).is_some() {
                    return Err(Error::InvalidPageName(format!(
                        "main-namespace name {local_name:?} carries a reserved prefix"
                    )));
                }
            }
        }
        Ok(Self {
            namespace,
            local_name: local_name.to_owned(),
        })
    }

    pub fn main(local_name: &str) -> Result<Self, Error> {
        Self::new(Namespace::Main, local_name)
    }

    pub fn namespace(&self) -> Namespace {
        self.namespace
    }

    pub fn local_name(&self) -> &str {
        &self.local_name
    }

    pub fn to_file_name(&self) -> String {
        format!(
            "{}.{PAGE_FILE_EXTENSION}",
            utf8_percent_encode(&self.to_string(), FILE_NAME_SET)
        )
    }

    /// Inverse of [`PageName::to_file_name`]. Returns `None` for files
    /// without the page extension.
    pub fn from_file_name(file_name: &str) -> Option<Result<Self, Error>> {
        let stem = file_name.strip_suffix(&format!(".{PAGE_FILE_EXTENSION}"))?;
        let decoded = match percent_decode_str(stem).decode_utf8() {
            Ok(decoded) => decoded,
            Err(_) => {
                return Some(Err(Error::InvalidPageName(format!(
                    "file name {file_name:?} does not decode to UTF-8"
                ))))
            }
        };
        Some(decoded.parse())
    }
}

impl fmt::Display for PageName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.namespace.prefix() {
            Some(prefix) => write!(f, "{prefix}:{}", self.local_name),
            None => f.write_str(&self.local_name),
        }
    }
}

impl FromStr for PageName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((prefix, rest)) = s.split_once(':') {
            if let Some(namespace) = Namespace::from_prefix(prefix) {
                return Self::new(namespace, rest);
            }
        }
        Self::new(Namespace::Main, s)
    }
}

impl Serialize for PageName {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PageName {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
