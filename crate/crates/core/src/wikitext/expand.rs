use std::collections::BTreeMap;

use super::parser::{find_brace_close, find_top_level, parse_markup, AstNode, NodeKind, PageAst, Span};
use crate::warning::Warning;

pub const DEFAULT_MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateDefinition {
    pub name: String,
    pub body: String,
}

impl TemplateDefinition {
    pub fn new(name: impl Into<String>, body: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            body: body.into(),
        }
    }
}

/// Templates keyed by local name (without the `Template:` prefix).
pub type TemplateMap = BTreeMap<String, TemplateDefinition>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expanded {
    pub ast: PageAst,
    pub warnings: Vec<Warning>,
}

/// Replaces transclusions with the parsed bodies of their templates,
/// recursively up to `max_depth` layers. Nodes produced by a template carry
/// the span of the outermost transclusion they came from.
pub fn expand_templates(ast: &PageAst, templates: &TemplateMap, max_depth: usize) -> Expanded {
    let mut expander = Expander {
        templates,
        max_depth,
        nodes: Vec::with_capacity(ast.nodes.len()),
        warnings: Vec::new(),
    };
    expander.expand(&ast.nodes, 0, None);
    Expanded {
        ast: PageAst {
            name: ast.name.clone(),
            nodes: expander.nodes,
        },
        warnings: expander.warnings,
    }
}

struct Expander<'a> {
    templates: &'a TemplateMap,
    max_depth: usize,
    nodes: Vec<AstNode>,
    warnings: Vec<Warning>,
}

impl Expander<'_> {
    fn expand(&mut self, nodes: &[AstNode], depth: usize, origin: Option<Span>) {
        for node in nodes {
            let span = origin.unwrap_or(node.span);
            let NodeKind::Transclusion {
                template,
                arguments,
                source,
            } = &node.kind
            else {
                self.nodes.push(AstNode {
                    kind: node.kind.clone(),
                    span,
                });
                continue;
            };
            let Some(definition) = self.templates.get(template) else {
                self.warnings.push(Warning::UnknownTemplate {
                    template: template.clone(),
                });
                self.literal(source, span);
                continue;
            };
            if depth >= self.max_depth {
                self.warnings.push(Warning::DepthExceeded {
                    template: template.clone(),
                    max_depth: self.max_depth,
                });
                self.literal(source, span);
                continue;
            }
            let body = substitute_parameters(&definition.body, arguments);
            let (inner, warnings) = parse_markup(&body);
            self.warnings.extend(warnings);
            self.expand(&inner, depth + 1, Some(span));
        }
    }

    fn literal(&mut self, source: &str, span: Span) {
        self.nodes.push(AstNode {
            kind: NodeKind::TextRun {
                text: source.to_owned(),
            },
            span,
        });
    }
}

/// Substitutes `{{{name}}}` and `{{{name|default}}}` placeholders. Unbound
/// placeholders without a default are left as written.
pub fn substitute_parameters(body: &str, arguments: &[(String, String)]) -> String {
    let mut out = String::with_capacity(body.len());
    let mut pos = 0;
    while let Some(found) = body[pos..].find("{{{") {
        let open = pos + found;
        out.push_str(&body[pos..open]);
        let Some(end) = find_brace_close(body, open).filter(|&end| body[..end].ends_with("}}}")) else {
            out.push_str("{{{");
            pos = open + 3;
            continue;
        };
        let inner = &body[open + 3..end - 3];
        let (name, default) = match find_top_level(inner, b'|') {
            Some(bar) => (&inner[..bar], Some(&inner[bar + 1..])),
            None => (inner, None),
        };
        let name = substitute_parameters(name, arguments);
        let bound = arguments
            .iter()
            .rev()
            .find(|(key, _)| key == name.trim())
            .map(|(_, value)| value.clone());
        match (bound, default) {
            (Some(value), _) => out.push_str(&value),
            (None, Some(default)) => out.push_str(&substitute_parameters(default, arguments)),
            (None, None) => out.push_str(&body[open..end]),
        }
        pos = end;
    }
    out.push_str(&body[pos..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wikitext::{parse_page, PageName, PageSource};

    fn page(markup: &str) -> PageAst {
        parse_page(&PageSource::new(PageName::main("P").unwrap(), markup)).ast
    }

    fn templates(entries: &[(&str, &str)]) -> TemplateMap {
        entries
            .iter()
            .map(|(name, body)| (name.to_string(), TemplateDefinition::new(*name, *body)))
            .collect()
    }

    #[test]
    fn template_annotation_is_substituted() {
        let ast = page("Intro {{Template:Jahrgang|2005}}");
        let map = templates(&[("Jahrgang", "[[Jahrgang ende::{{{1}}}]]")]);
        let expanded = expand_templates(&ast, &map, DEFAULT_MAX_DEPTH);
        assert!(expanded.warnings.is_empty());
        assert_eq!(
            expanded.ast.annotations().collect::<Vec<_>>(),
            vec![("Jahrgang ende", "2005")]
        );
        // Expanded nodes point at the transclusion in the page.
        assert_eq!(expanded.ast.nodes[1].span, ast.nodes[1].span);
    }

    #[test]
    fn no_transclusions_is_identity() {
        let ast = page("plain [[a::b]] [[Category:C]]");
        let expanded = expand_templates(&ast, &TemplateMap::new(), DEFAULT_MAX_DEPTH);
        assert_eq!(expanded.ast, ast);
        assert!(expanded.warnings.is_empty());
    }

    #[test]
    fn self_transclusion_stops_at_max_depth() {
        let ast = page("{{Loop}}");
        let map = templates(&[("Loop", "[[layer::x]]{{Loop}}")]);
        let expanded = expand_templates(&ast, &map, 3);
        assert_eq!(expanded.ast.annotations().count(), 3);
        assert_eq!(
            expanded.warnings,
            vec![Warning::DepthExceeded {
                template: "Loop".into(),
                max_depth: 3
            }]
        );
        assert_eq!(
            expanded.ast.nodes.last().unwrap().kind,
            NodeKind::TextRun {
                text: "{{Loop}}".into()
            }
        );
    }

    #[test]
    fn unknown_template_becomes_literal_text() {
        let ast = page("a {{Missing|1}} b");
        let expanded = expand_templates(&ast, &TemplateMap::new(), DEFAULT_MAX_DEPTH);
        let texts: String = expanded
            .ast
            .nodes
            .iter()
            .map(|n| match &n.kind {
                NodeKind::TextRun { text } => text.as_str(),
                _ => panic!("only text expected"),
            })
            .collect();
        assert_eq!(texts, "a {{Missing|1}} b");
        assert_eq!(
            expanded.warnings,
            vec![Warning::UnknownTemplate {
                template: "Missing".into()
            }]
        );
    }

    #[test]
    fn expansion_is_idempotent() {
        let ast = page("{{A|v=3}} {{Missing}} {{Loop}}");
        let map = templates(&[
            ("A", "[[n::{{{v}}}]] {{B|{{{v}}}}}"),
            ("B", "[[m::{{{1}}}]]"),
            ("Loop", "{{Loop}}"),
        ]);
        let once = expand_templates(&ast, &map, 4);
        let twice = expand_templates(&once.ast, &map, 4);
        assert_eq!(once.ast, twice.ast);
        assert!(twice.warnings.is_empty());
        assert_eq!(
            once.ast.annotations().collect::<Vec<_>>(),
            vec![("n", "3"), ("m", "3")]
        );
    }

    #[test]
    fn parameter_substitution() {
        let args = vec![("1".to_string(), "x".to_string()), ("k".to_string(), "y".to_string())];
        assert_eq!(substitute_parameters("{{{1}}}-{{{k}}}", &args), "x-y");
        assert_eq!(substitute_parameters("{{{2|dflt}}}", &args), "dflt");
        assert_eq!(substitute_parameters("{{{2|{{{k}}}}}}", &args), "y");
        assert_eq!(substitute_parameters("{{{3}}}", &args), "{{{3}}}");
        assert_eq!(substitute_parameters("{{{ k }}}", &args), "y");
        assert_eq!(substitute_parameters("open {{{ only", &args), "open {{{ only");
        // Later duplicates win.
        let dup = vec![("1".to_string(), "a".to_string()), ("1".to_string(), "b".to_string())];
        assert_eq!(substitute_parameters("{{{1}}}", &dup), "b");
    }

    #[test]
    fn fully_bound_template_has_no_placeholders() {
        let body = "[[Jahrgang ende::{{{1}}}]] [[Jahrgang start::{{{start}}}]]";
        let args = vec![("1".to_string(), "2005".to_string()), ("start".to_string(), "2004".to_string())];
        let out = substitute_parameters(body, &args);
        assert!(!out.contains("{{{"));
    }
}
