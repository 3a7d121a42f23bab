use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;

use serde::Serialize;

use super::flags::ResearchTypeFlag;
use super::value::AttributeKind;
use crate::error::{Error, Result};
use crate::tsv::{read_table, table_error};

pub const DEFAULT_SCHEMA: &str = include_str!("../../config/schema.tsv");
pub const DEFAULT_RULES: &str = include_str!("../../config/rules.tsv");
pub const DEFAULT_SYNONYMS: &str = include_str!("../../config/synonyms.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttributeDecl {
    pub name: String,
    pub kind: AttributeKind,
    pub multivalued: bool,
}

impl AttributeDecl {
    pub fn new(name: impl Into<String>, kind: AttributeKind, multivalued: bool) -> Self {
        Self {
            name: name.into(),
            kind,
            multivalued,
        }
    }
}

/// Attribute declarations keyed by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schema {
    decls: BTreeMap<String, AttributeDecl>,
}

impl Schema {
    pub fn new(decls: impl IntoIterator<Item = AttributeDecl>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for decl in decls {
            if map.contains_key(&decl.name) {
                return Err(Error::Rules(format!("attribute {:?} declared twice", decl.name)));
            }
            map.insert(decl.name.clone(), decl);
        }
        Ok(Self { decls: map })
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut decls = BTreeMap::new();
        for row in read_table(text, origin, &["name", "kind", "multivalued"])? {
            let [name, kind, multivalued] = <[String; 3]>::try_from(row.fields).expect("column count checked");
            if name.is_empty() {
                return Err(table_error(origin, row.line, "empty attribute name"));
            }
            let kind = AttributeKind::from_str(&kind).map_err(|e| table_error(origin, row.line, e))?;
            let multivalued = match multivalued.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => true,
                "false" | "no" | "0" => false,
                other => return Err(table_error(origin, row.line, format!("bad multivalued flag {other:?}"))),
            };
            if decls.contains_key(&name) {
                return Err(table_error(origin, row.line, format!("attribute {name:?} declared twice")));
            }
            decls.insert(name.clone(), AttributeDecl { name, kind, multivalued });
        }
        Ok(Self { decls })
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_SCHEMA, "schema.tsv").expect("bundled schema is valid")
    }

    pub fn get(&self, name: &str) -> Option<&AttributeDecl> {
        self.decls.get(name)
    }

    /// Declared kind, or string for undeclared attributes.
    pub fn kind_of(&self, name: &str) -> AttributeKind {
        self.decls.get(name).map_or(AttributeKind::String, |d| d.kind)
    }

    pub fn decls(&self) -> impl Iterator<Item = &AttributeDecl> {
        self.decls.values()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    YearOfDate,
    FundingMapping,
    QualificationMapping,
    CountOfValues,
}

impl FromStr for Transform {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "year_of_date" => Ok(Transform::YearOfDate),
            "funding_mapping" => Ok(Transform::FundingMapping),
            "qualification_mapping" => Ok(Transform::QualificationMapping),
            "count_of_values" => Ok(Transform::CountOfValues),
            other => Err(format!("unknown transform {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationRule {
    pub target_attribute: String,
    pub source_attribute: String,
    pub transform: Transform,
}

impl DerivationRule {
    pub fn new(target: impl Into<String>, source: impl Into<String>, transform: Transform) -> Self {
        Self {
            target_attribute: target.into(),
            source_attribute: source.into(),
            transform,
        }
    }
}

/// A validated, acyclic list of derivation rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<DerivationRule>,
}

impl RuleSet {
    pub fn new(rules: Vec<DerivationRule>) -> Result<Self> {
        let targets: BTreeSet<&str> = rules.iter().map(|r| r.target_attribute.as_str()).collect();
        if targets.len() != rules.len() {
            return Err(Error::Rules("a target attribute is derived by more than one rule".into()));
        }
        for rule in &rules {
            if rule.target_attribute == rule.source_attribute {
                return Err(Error::Rules(format!(
                    "rule for {:?} derives the attribute from itself",
                    rule.target_attribute
                )));
            }
            if targets.contains(rule.source_attribute.as_str()) {
                return Err(Error::Rules(format!(
                    "derived attribute {:?} is used as a source",
                    rule.source_attribute
                )));
            }
        }
        Ok(Self { rules })
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for row in read_table(text, origin, &["target", "source", "transform"])? {
            let [target, source, transform] = <[String; 3]>::try_from(row.fields).expect("column count checked");
            if target.is_empty() || source.is_empty() {
                return Err(table_error(origin, row.line, "empty attribute name"));
            }
            let transform = Transform::from_str(&transform).map_err(|e| table_error(origin, row.line, e))?;
            rules.push(DerivationRule::new(target, source, transform));
        }
        Self::new(rules)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_RULES, "rules.tsv").expect("bundled rules are valid")
    }

    pub fn rules(&self) -> &[DerivationRule] {
        &self.rules
    }
}

/// Maps raw "type of research" strings onto flags, case-insensitively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynonymTable {
    forms: HashMap<String, ResearchTypeFlag>,
}

impl SynonymTable {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut forms: HashMap<String, ResearchTypeFlag> = ResearchTypeFlag::ALL
            .into_iter()
            .flat_map(|flag| [(flag.as_str().to_lowercase(), flag), (flag.label().to_lowercase(), flag)])
            .collect();
        for row in read_table(text, origin, &["surface_form", "flag"])? {
            let [surface, flag] = <[String; 2]>::try_from(row.fields).expect("column count checked");
            let flag = ResearchTypeFlag::from_str(&flag).map_err(|e| table_error(origin, row.line, e))?;
            forms.insert(surface.to_lowercase(), flag);
        }
        Ok(Self { forms })
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_SYNONYMS, "synonyms.tsv").expect("bundled synonyms are valid")
    }

    pub fn lookup(&self, raw: &str) -> Option<ResearchTypeFlag> {
        self.forms.get(&raw.trim().to_lowercase()).copied()
    }
}
