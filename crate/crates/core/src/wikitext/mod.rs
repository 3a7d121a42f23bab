//! Semantic-wiki markup: page names, a lossless parser and template
//! expansion.

mod expand;
mod page_name;
mod parser;

pub use expand::{
    expand_templates, substitute_parameters, Expanded, TemplateDefinition, TemplateMap,
    DEFAULT_MAX_DEPTH,
};
pub use page_name::{Namespace, PageName, PAGE_FILE_EXTENSION};
pub use parser::{parse_page, AstNode, NodeKind, PageAst, PageSource, Parsed, Span};
