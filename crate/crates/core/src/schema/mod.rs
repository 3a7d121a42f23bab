//! Typed attributes: binding annotations to facts and deriving indicator
//! attributes from source attributes.

mod flags;
mod tables;
mod value;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

pub use flags::{derive_funding, derive_qualification, FundingType, QualificationType, ResearchTypeFlag};
pub use tables::{
    AttributeDecl, DerivationRule, RuleSet, Schema, SynonymTable, Transform, DEFAULT_RULES, DEFAULT_SCHEMA,
    DEFAULT_SYNONYMS,
};
pub use value::{AttributeKind, DateValue, Value};

use crate::warning::Warning;
use crate::wikitext::{Namespace, NodeKind, PageAst, PageName};

/// Attribute under which category membership is recorded.
pub const CATEGORY_ATTRIBUTE: &str = "category";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fact {
    pub subject: PageName,
    pub attribute: String,
    pub value: Value,
}

impl Fact {
    pub fn new(subject: PageName, attribute: impl Into<String>, value: Value) -> Self {
        Self {
            subject,
            attribute: attribute.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FactsWithWarnings {
    pub facts: Vec<Fact>,
    pub warnings: Vec<Warning>,
}

/// Turns annotations and category links into typed facts. Annotations whose
/// value does not parse under the declared kind are dropped with one
/// warning each.
pub fn bind_facts(ast: &PageAst, schema: &Schema) -> FactsWithWarnings {
    let mut out = FactsWithWarnings::default();
    for node in &ast.nodes {
        match &node.kind {
            NodeKind::Annotation {
                attribute,
                raw_value,
                ..
            } => {
                let kind = schema.kind_of(attribute);
                match Value::parse(kind, raw_value) {
                    Ok(value) => out.facts.push(Fact::new(ast.name.clone(), attribute.clone(), value)),
                    Err(_) => out.warnings.push(Warning::TypeMismatch {
                        attribute: attribute.clone(),
                        kind: kind.as_str().to_owned(),
                        raw_value: raw_value.clone(),
                    }),
                }
            }
            NodeKind::CategoryLink { category } => {
                // The parser guarantees a non-empty trimmed name.
                let page = PageName::new(Namespace::Category, category).expect("non-empty category");
                out.facts
                    .push(Fact::new(ast.name.clone(), CATEGORY_ATTRIBUTE, Value::Page(page)));
            }
            NodeKind::TextRun { .. } | NodeKind::Transclusion { .. } => {}
        }
    }
    out
}

/// Flags named by the string values of `attribute`. Unknown surface forms
/// are skipped.
pub fn research_types<'a>(
    facts: impl IntoIterator<Item = &'a Fact>,
    attribute: &str,
    synonyms: &SynonymTable,
) -> BTreeSet<ResearchTypeFlag> {
    facts
        .into_iter()
        .filter(|fact| fact.attribute == attribute)
        .filter_map(|fact| fact.value.as_str())
        .filter_map(|raw| synonyms.lookup(raw))
        .collect()
}

/// Returns the input facts followed by derived ones. A rule never fires for
/// a subject that already has explicit facts for the rule's target.
pub fn derive_fields(facts: &[Fact], rules: &RuleSet, synonyms: &SynonymTable) -> FactsWithWarnings {
    let mut by_subject: BTreeMap<&PageName, Vec<&Fact>> = BTreeMap::new();
    for fact in facts {
        by_subject.entry(&fact.subject).or_default().push(fact);
    }

    let mut derived = Vec::new();
    let mut warnings = Vec::new();
    for (subject, subject_facts) in by_subject {
        for rule in rules.rules() {
            if subject_facts.iter().any(|f| f.attribute == rule.target_attribute) {
                continue;
            }
            let sources: Vec<&Fact> = subject_facts
                .iter()
                .copied()
                .filter(|f| f.attribute == rule.source_attribute)
                .collect();
            if sources.is_empty() {
                continue;
            }
            let emit = |value: Value| Fact::new(subject.clone(), rule.target_attribute.clone(), value);
            match rule.transform {
                Transform::YearOfDate => {
                    let years: BTreeSet<i32> = sources.iter().filter_map(|f| f.value.as_date()).map(DateValue::year).collect();
                    derived.extend(years.into_iter().map(|year| emit(Value::Number(f64::from(year)))));
                }
                Transform::CountOfValues => {
                    derived.push(emit(Value::Number(sources.len() as f64)));
                }
                Transform::FundingMapping => {
                    let flags = research_types(sources.iter().copied(), &rule.source_attribute, synonyms);
                    derived.extend(
                        derive_funding(&flags)
                            .into_iter()
                            .map(|funding| emit(Value::String(funding.as_str().to_owned()))),
                    );
                }
                Transform::QualificationMapping => {
                    let flags = research_types(sources.iter().copied(), &rule.source_attribute, synonyms);
                    let (qualification, warning) = derive_qualification(&flags, &subject.to_string());
                    warnings.extend(warning);
                    derived.extend(qualification.map(|q| emit(Value::String(q.as_str().to_owned()))));
                }
            }
        }
    }

    let mut out = facts.to_vec();
    out.extend(derived);
    FactsWithWarnings { facts: out, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wikitext::{parse_page, PageSource};
    use chrono::NaiveDate;
    use proptest::prelude::*;

    fn subject() -> PageName {
        PageName::main("Schule und Betrieb").unwrap()
    }

    fn bind(markup: &str) -> FactsWithWarnings {
        let ast = parse_page(&PageSource::new(subject(), markup)).ast;
        bind_facts(&ast, &Schema::builtin())
    }

    fn fact(attribute: &str, value: Value) -> Fact {
        Fact::new(subject(), attribute, value)
    }

    #[test]
    fn binds_numbers_under_declared_kind() {
        let bound = bind("[[Jahrgang ende::2005]]");
        assert_eq!(bound.facts, vec![fact("Jahrgang ende", Value::Number(2005.0))]);
        assert!(bound.warnings.is_empty());
    }

    #[test]
    fn mismatched_values_are_ignored_with_one_warning() {
        let bound = bind("[[Jahrgang ende::abc]]");
        assert!(bound.facts.is_empty());
        assert_eq!(
            bound.warnings,
            vec![Warning::TypeMismatch {
                attribute: "Jahrgang ende".into(),
                kind: "number".into(),
                raw_value: "abc".into()
            }]
        );
    }

    #[test]
    fn empty_ast_binds_nothing() {
        let bound = bind("just prose");
        assert!(bound.facts.is_empty());
        assert!(bound.warnings.is_empty());
    }

    #[test]
    fn binds_dates_and_categories() {
        let bound = bind("[[Laufzeit Bis::2005-07-15]] [[Category: MoBi]] [[Undeclared::x y]]");
        assert_eq!(
            bound.facts,
            vec![
                fact(
                    "Laufzeit Bis",
                    Value::Date(DateValue::Day(NaiveDate::from_ymd_opt(2005, 7, 15).unwrap()))
                ),
                fact(CATEGORY_ATTRIBUTE, Value::Page("Category:MoBi".parse().unwrap())),
                fact("Undeclared", Value::String("x y".into())),
            ]
        );
    }

    #[test]
    fn year_of_date_and_counts() {
        let facts = bind(
            "[[Laufzeit Bis::2005/07/15]][[Forschungseinrichtung::A]][[Forschungseinrichtung::B]]",
        )
        .facts;
        let derived = derive_fields(&facts, &RuleSet::builtin(), &SynonymTable::builtin());
        assert!(derived.facts.contains(&fact("Jahrgang ende", Value::Number(2005.0))));
        assert!(derived
            .facts
            .contains(&fact("Forschungseinrichtungs counter", Value::Number(2.0))));
        // No start date, so no start year.
        assert!(!derived.facts.iter().any(|f| f.attribute == "Jahrgang start"));
    }

    #[test]
    fn derive_on_empty_input_is_empty() {
        let derived = derive_fields(&[], &RuleSet::builtin(), &SynonymTable::builtin());
        assert!(derived.facts.is_empty());
        assert!(derived.warnings.is_empty());
    }

    #[test]
    fn explicit_target_facts_are_kept() {
        let facts = bind("[[Laufzeit Bis::2005/07/15]][[Jahrgang ende::2007]]").facts;
        let derived = derive_fields(&facts, &RuleSet::builtin(), &SynonymTable::builtin());
        let years: Vec<_> = derived
            .facts
            .iter()
            .filter(|f| f.attribute == "Jahrgang ende")
            .map(|f| f.value.clone())
            .collect();
        assert_eq!(years, vec![Value::Number(2007.0)]);
    }

    #[test]
    fn funding_and_qualification_mappings() {
        let facts = bind("[[Forschungsart::gefördert]][[Forschungsart::Dissertation]][[Forschungsart::Habilitation]]").facts;
        let derived = derive_fields(&facts, &RuleSet::builtin(), &SynonymTable::builtin());
        assert!(derived.facts.contains(&fact("Förderart", Value::String("third_party".into()))));
        assert!(derived.facts.contains(&fact("Qualifikation", Value::String("doctoral".into()))));
        assert_eq!(derived.warnings.len(), 1);
        assert_eq!(derived.warnings[0].kind(), "qualification_conflict");
    }

    fn sorted_debug(facts: &[Fact]) -> Vec<String> {
        let mut keys: Vec<String> = facts.iter().map(|f| format!("{f:?}")).collect();
        keys.sort();
        keys
    }

    proptest! {
        #[test]
        fn derivation_ignores_fact_order(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let facts = bind(
                "[[Laufzeit Von::2004/09/15]][[Laufzeit Bis::2005]][[Forschungsart::Eigenprojekt]]\
                 [[Forschungsart::Auftragsforschung]][[Forschungseinrichtung::A]][[Forschungseinrichtung::B]]\
                 [[Forschungseinrichtung::C]][[Forschungsart::Habilitation]]",
            ).facts;
            let mut shuffled = facts.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let rules = RuleSet::builtin();
            let synonyms = SynonymTable::builtin();
            let a = derive_fields(&facts, &rules, &synonyms);
            let b = derive_fields(&shuffled, &rules, &synonyms);
            prop_assert_eq!(sorted_debug(&a.facts), sorted_debug(&b.facts));
            prop_assert_eq!(a.warnings, b.warnings);
        }

        #[test]
        fn bound_facts_reparse_under_declared_kind(values in prop::collection::vec("[0-9a-z/\\-]{0,10}", 0..8)) {
            let schema = Schema::builtin();
            let attrs = ["Jahrgang ende", "Laufzeit Von", "Titel", "Forschungseinrichtungs counter"];
            let markup: String = values
                .iter()
                .enumerate()
                .map(|(i, v)| format!("[[{}::{}]]", attrs[i % attrs.len()], v))
                .collect();
            let bound = bind(&markup);
            prop_assert_eq!(bound.facts.len() + bound.warnings.len(), values.len());
            for fact in &bound.facts {
                let kind = schema.kind_of(&fact.attribute);
                prop_assert_eq!(fact.value.kind(), kind);
                prop_assert_eq!(Value::parse(kind, &fact.value.to_string()).unwrap(), fact.value.clone());
            }
        }
    }
}
