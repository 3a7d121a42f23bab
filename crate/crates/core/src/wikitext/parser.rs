use serde::Serialize;

use super::PageName;
use crate::warning::Warning;

/// Byte range into the markup a node was parsed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn slice<'a>(&self, markup: &'a str) -> &'a str {
        &markup[self.start..self.end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NodeKind {
    TextRun {
        text: String,
    },
    CategoryLink {
        category: String,
    },
    Annotation {
        attribute: String,
        raw_value: String,
        display_override: Option<String>,
    },
    Transclusion {
        template: String,
        /// Positional arguments are keyed `1`, `2`, ... in order of appearance.
        arguments: Vec<(String, String)>,
        /// The literal `{{...}}` text, kept so an unexpandable transclusion can
        /// fall back to it.
        source: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AstNode {
    #[serde(flatten)]
    pub kind: NodeKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageAst {
    pub name: PageName,
    pub nodes: Vec<AstNode>,
}

impl PageAst {
    pub fn annotations(&self) -> impl Iterator<Item = (&str, &str)> {
        self.nodes.iter().filter_map(|node| match &node.kind {
            NodeKind::Annotation {
                attribute,
                raw_value,
                ..
            } => Some((attribute.as_str(), raw_value.as_str())),
            _ => None,
        })
    }

    pub fn has_transclusions(&self) -> bool {
        self.nodes
            .iter()
            .any(|node| matches!(node.kind, NodeKind::Transclusion { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageSource {
    pub name: PageName,
    pub markup: String,
}

impl PageSource {
    pub fn new(name: PageName, markup: impl Into<String>) -> Self {
        Self {
            name,
            markup: markup.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub ast: PageAst,
    pub warnings: Vec<Warning>,
}

/// Parses a page. Never fails: anything not recognised stays in text runs.
pub fn parse_page(source: &PageSource) -> Parsed {
    let (nodes, warnings) = parse_markup(&source.markup);
    Parsed {
        ast: PageAst {
            name: source.name.clone(),
            nodes,
        },
        warnings,
    }
}

pub(crate) fn parse_markup(markup: &str) -> (Vec<AstNode>, Vec<Warning>) {
    let mut parser = Parser {
        markup,
        nodes: Vec::new(),
        warnings: Vec::new(),
        text_start: 0,
    };
    parser.run();
    (parser.nodes, parser.warnings)
}

struct Parser<'a> {
    markup: &'a str,
    nodes: Vec<AstNode>,
    warnings: Vec<Warning>,
    text_start: usize,
}

impl Parser<'_> {
    fn run(&mut self) {
        let bytes = self.markup.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let rest = &bytes[pos..];
            if rest.starts_with(b"[[") {
                pos = self.link(pos);
            } else if rest.starts_with(b"{{{") {
                // Parameter placeholders only mean something inside a template
                // body; on a page they are literal text.
                match find_brace_close(self.markup, pos) {
                    Some(end) => pos = end,
                    None => {
                        self.unterminated("{{{", pos);
                        pos += 3;
                    }
                }
            } else if rest.starts_with(b"{{") {
                pos = self.transclusion(pos);
            } else {
                pos += 1;
            }
        }
        self.flush_text(bytes.len());
    }

    fn link(&mut self, open: usize) -> usize {
        let inner_start = open + 2;
        let Some(close) = self.markup[inner_start..].find("]]").map(|i| inner_start + i) else {
            self.unterminated("[[", open);
            return inner_start;
        };
        let inner = &self.markup[inner_start..close];
        if inner.contains("[[") {
            self.unterminated("[[", open);
            return inner_start;
        }
        let end = close + 2;
        if let Some(kind) = classify_link(inner) {
            self.push(kind, Span::new(open, end));
        }
        end
    }

    fn transclusion(&mut self, open: usize) -> usize {
        let Some(end) = find_brace_close(self.markup, open) else {
            self.unterminated("{{", open);
            return open + 2;
        };
        let source = &self.markup[open..end];
        if let Some(kind) = classify_transclusion(source) {
            self.push(kind, Span::new(open, end));
        }
        end
    }

    fn unterminated(&mut self, token: &str, offset: usize) {
        self.warnings.push(Warning::Unterminated {
            token: token.to_owned(),
            offset,
        });
    }

    fn push(&mut self, kind: NodeKind, span: Span) {
        self.flush_text(span.start);
        self.nodes.push(AstNode { kind, span });
        self.text_start = span.end;
    }

    fn flush_text(&mut self, end: usize) {
        if end > self.text_start {
            let span = Span::new(self.text_start, end);
            self.nodes.push(AstNode {
                kind: NodeKind::TextRun {
                    text: span.slice(self.markup).to_owned(),
                },
                span,
            });
        }
        self.text_start = end;
    }
}

/// Interprets the inside of `[[...]]`. Plain wiki links yield `None` and
/// remain text.
fn classify_link(inner: &str) -> Option<NodeKind> {
    if let Some((attribute, rest)) = inner.split_once("::") {
        let attribute = attribute.trim();
        if attribute.is_empty() {
            return None;
        }
        let (value, display) = match rest.split_once('|') {
            Some((value, display)) => (value, Some(display.trim().to_owned())),
            None => (rest, None),
        };
        return Some(NodeKind::Annotation {
            attribute: attribute.to_owned(),
            raw_value: value.trim().to_owned(),
            display_override: display,
        });
    }
    let (prefix, rest) = inner.split_once(':')?;
    if !prefix.trim().eq_ignore_ascii_case("category") {
        return None;
    }
    // `[[Category:Name|sort key]]`
    let category = rest.split('|').next().unwrap_or_default().trim();
    if category.is_empty() {
        return None;
    }
    Some(NodeKind::CategoryLink {
        category: category.to_owned(),
    })
}

fn classify_transclusion(source: &str) -> Option<NodeKind> {
    let inner = &source[2..source.len() - 2];
    let mut parts = split_top_level(inner, b'|').into_iter();
    let head = parts.next()?.trim();
    let template = match head.split_once(':') {
        Some((prefix, rest)) if prefix.trim().eq_ignore_ascii_case("template") => rest.trim(),
        _ => head,
    };
    if template.is_empty() {
        return None;
    }
    let mut positional = 0usize;
    let arguments = parts
        .map(|part| match find_top_level(part, b'=') {
            Some(eq) => (part[..eq].trim().to_owned(), part[eq + 1..].trim().to_owned()),
            None => {
                positional += 1;
                (positional.to_string(), part.to_owned())
            }
        })
        .collect();
    Some(NodeKind::Transclusion {
        template: template.to_owned(),
        arguments,
        source: source.to_owned(),
    })
}

/// Given `open` pointing at `{{` or `{{{`, returns the offset just past the
/// matching close. Nested transclusions and placeholders are balanced.
pub(crate) fn find_brace_close(s: &str, open: usize) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut stack: Vec<u8> = Vec::new();
    let mut pos = open;
    loop {
        if pos >= bytes.len() {
            return None;
        }
        let rest = &bytes[pos..];
        let top = stack.last().copied();
        if rest.starts_with(b"{{{") {
            stack.push(3);
            pos += 3;
        } else if rest.starts_with(b"{{") {
            stack.push(2);
            pos += 2;
        } else if top == Some(3) && rest.starts_with(b"}}}") {
            stack.pop();
            pos += 3;
        } else if top == Some(2) && rest.starts_with(b"}}") {
            stack.pop();
            pos += 2;
        } else {
            pos += 1;
        }
        if stack.is_empty() {
            return Some(pos);
        }
    }
}

/// Finds `needle` outside any nested `{{...}}`, `{{{...}}}` or `[[...]]`.
pub(crate) fn find_top_level(s: &str, needle: u8) -> Option<usize> {
    top_level_positions(s, needle).next()
}

pub(crate) fn split_top_level(s: &str, sep: u8) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut start = 0;
    for pos in top_level_positions(s, sep) {
        parts.push(&s[start..pos]);
        start = pos + 1;
    }
    parts.push(&s[start..]);
    parts
}

fn top_level_positions(s: &str, needle: u8) -> impl Iterator<Item = usize> + '_ {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut links = 0usize;
    std::iter::from_fn(move || {
        while pos < bytes.len() {
            let rest = &bytes[pos..];
            if rest.starts_with(b"{{") {
                match find_brace_close(s, pos) {
                    Some(end) => pos = end,
                    None => pos += 2,
                }
            } else if rest.starts_with(b"[[") {
                links += 1;
                pos += 2;
            } else if links > 0 && rest.starts_with(b"]]") {
                links -= 1;
                pos += 2;
            } else {
                let here = pos;
                pos += 1;
                if links == 0 && bytes[here] == needle {
                    return Some(here);
                }
            }
        }
        None
    })
}
