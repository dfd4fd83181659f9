//! Uniform syntax trees for Java and Python.
//!
//! Sources are parsed with tree-sitter grammars and lowered into a small
//! arena of [`SyntaxNode`]s whose kinds come from the closed [`NodeKind`]
//! vocabulary. Comments never appear in the tree; they are kept aside as
//! positioned [`CommentToken`]s and related back to the tree through
//! [`ParsedFile::neighbors`].

mod kind;
mod span;

use std::cell::RefCell;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use tree_sitter::{Node, Parser};

pub use kind::{Language, NodeKind};
pub use span::{LineIndex, SourceSpan};

/// Files above this size are skipped.
pub const MAX_FILE_BYTES: usize = 2 * 1024 * 1024;

/// Share of the file that may sit inside grammar error nodes before the
/// parse is abandoned.
const MAX_ERROR_FRACTION: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unparsable file: {0}")]
    Unparsable(String),
    #[error("file too large ({0} bytes)")]
    TooLarge(usize),
}

/// Corpus-unique identifier of a source file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FileId(pub u32);

impl fmt::Display for FileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxNode {
    pub id: NodeId,
    pub kind: NodeKind,
    /// Node type name reported by the grammar.
    pub grammar_kind: String,
    pub span: SourceSpan,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommentStyle {
    Line,
    Block,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentToken {
    pub span: SourceSpan,
    pub style: CommentStyle,
    /// Original text including delimiters.
    pub raw_text: String,
    pub file_id: FileId,
}

#[derive(Debug, Clone)]
pub struct ParsedFile {
    pub file_id: FileId,
    pub language: Language,
    pub text: String,
    nodes: Vec<SyntaxNode>,
    pub comments: Vec<CommentToken>,
    pub line_index: LineIndex,
}

/// Syntax elements around a position.
#[derive(Debug, Clone, Copy)]
pub struct Neighbors<'a> {
    pub left: Option<&'a SyntaxNode>,
    pub right: Option<&'a SyntaxNode>,
    pub parent: &'a SyntaxNode,
}

impl ParsedFile {
    pub fn root(&self) -> &SyntaxNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> &SyntaxNode {
        &self.nodes[id.0]
    }

    /// All nodes in pre-order.
    pub fn nodes(&self) -> &[SyntaxNode] {
        &self.nodes
    }

    /// Source text covered by a span.
    pub fn slice(&self, span: &SourceSpan) -> &str {
        let start = self.line_index.byte_of(&self.text, span.start_offset);
        let end = self.line_index.byte_of(&self.text, span.end_offset);
        &self.text[start..end]
    }

    /// Text of a 1-based line without its terminator.
    pub fn line_text(&self, line: usize) -> Option<&str> {
        let start = self.line_index.line_start_byte(line)?;
        let end = self.line_index.line_start_byte(line + 1).unwrap_or(self.text.len());
        if start > self.text.len() {
            return None;
        }
        Some(self.text[start..end].trim_end_matches(['\n', '\r']))
    }

    pub fn line_count(&self) -> usize {
        self.line_index.line_count()
    }

    pub fn depth(&self, id: NodeId) -> usize {
        let mut depth = 0;
        let mut cur = self.node(id).parent;
        while let Some(p) = cur {
            depth += 1;
            cur = self.node(p).parent;
        }
        depth
    }

    /// Neighboring syntax elements of `pos`.
    ///
    /// `left` is the element ending nearest before `pos` (longest on ties),
    /// `right` the element starting nearest after it (longest on ties), and
    /// `parent` the smallest element containing it. Whitespace and comments
    /// in between are skipped implicitly because they are not nodes.
    pub fn neighbors(&self, pos: &SourceSpan) -> Neighbors<'_> {
        let mut left: Option<&SyntaxNode> = None;
        let mut right: Option<&SyntaxNode> = None;
        let mut parent = self.root();

        for node in &self.nodes[1..] {
            let span = &node.span;
            if span.is_empty() {
                continue;
            }
            if span.end_offset <= pos.start_offset {
                let better = match left {
                    None => true,
                    Some(cur) => {
                        span.end_offset > cur.span.end_offset
                            || (span.end_offset == cur.span.end_offset && span.len() > cur.span.len())
                    }
                };
                if better {
                    left = Some(node);
                }
            } else if span.start_offset >= pos.end_offset {
                let better = match right {
                    None => true,
                    Some(cur) => {
                        span.start_offset < cur.span.start_offset
                            || (span.start_offset == cur.span.start_offset && span.len() > cur.span.len())
                    }
                };
                if better {
                    right = Some(node);
                }
            } else if span.contains(pos) && span.len() <= parent.span.len() {
                // pre-order: on equal length the later node is the deeper one
                parent = node;
            }
        }
        Neighbors { left, right, parent }
    }
}

/// All comment tokens of the given files, ordered by file id and offset.
pub fn enumerate_comments(files: &[ParsedFile]) -> impl Iterator<Item = (FileId, &CommentToken)> {
    let mut ordered: Vec<&ParsedFile> = files.iter().collect();
    ordered.sort_by_key(|f| f.file_id);
    ordered
        .into_iter()
        .flat_map(|f| f.comments.iter().map(move |c| (f.file_id, c)))
}

/// Parses raw bytes, replacing invalid UTF-8.
pub fn parse_bytes(bytes: &[u8], language: Language, file_id: FileId) -> Result<ParsedFile, ParseError> {
    if bytes.len() > MAX_FILE_BYTES {
        return Err(ParseError::TooLarge(bytes.len()));
    }
    parse_source(&String::from_utf8_lossy(bytes), language, file_id)
}

pub fn parse_source(text: &str, language: Language, file_id: FileId) -> Result<ParsedFile, ParseError> {
    if text.len() > MAX_FILE_BYTES {
        return Err(ParseError::TooLarge(text.len()));
    }
    if text.contains('\0') {
        return Err(ParseError::Unparsable("binary content".into()));
    }

    let tree = with_parser(language, |parser| parser.parse(text, None))
        .ok_or_else(|| ParseError::Unparsable("parser gave no tree".into()))?;
    let ts_root = tree.root_node();

    if ts_root.has_error() {
        let error_bytes = error_bytes(ts_root);
        let significant = text.bytes().filter(|b| !b.is_ascii_whitespace()).count().max(1);
        if ts_root.is_error() || error_bytes as f64 / significant as f64 > MAX_ERROR_FRACTION {
            return Err(ParseError::Unparsable(format!(
                "{error_bytes} of {significant} bytes in syntax errors"
            )));
        }
    }

    let line_index = LineIndex::new(text);
    let mut builder = Builder {
        text,
        language,
        file_id,
        line_index: &line_index,
        nodes: Vec::new(),
        edges: Vec::new(),
        comments: Vec::new(),
    };
    builder.lower(ts_root);
    let Builder {
        mut nodes,
        edges,
        mut comments,
        ..
    } = builder;
    finish_spans(&mut nodes, &edges, text, &line_index);

    comments.sort_by_key(|c| c.span.start_offset);
    Ok(ParsedFile {
        file_id,
        language,
        text: text.to_string(),
        nodes,
        comments,
        line_index,
    })
}

fn with_parser<R>(language: Language, f: impl FnOnce(&mut Parser) -> R) -> R {
    thread_local! {
        static JAVA: RefCell<Parser> = RefCell::new(new_parser(Language::Java));
        static PYTHON: RefCell<Parser> = RefCell::new(new_parser(Language::Python));
    }
    let key = match language {
        Language::Java => &JAVA,
        Language::Python => &PYTHON,
    };
    key.with(|p| {
        let mut parser = p.borrow_mut();
        parser.reset();
        f(&mut parser)
    })
}

fn new_parser(language: Language) -> Parser {
    let mut parser = Parser::new();
    let grammar = match language {
        Language::Java => tree_sitter_java::LANGUAGE,
        Language::Python => tree_sitter_python::LANGUAGE,
    };
    parser
        .set_language(&grammar.into())
        .expect("bundled grammar is compatible");
    parser
}

fn is_comment(node: &Node) -> bool {
    matches!(node.kind(), "comment" | "line_comment" | "block_comment")
}

/// Bytes covered by outermost error nodes.
fn error_bytes(root: Node) -> usize {
    let mut total = 0;
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.is_error() {
            total += node.end_byte() - node.start_byte();
            continue;
        }
        if !node.has_error() {
            continue;
        }
        let mut cursor = node.walk();
        stack.extend(node.children(&mut cursor));
    }
    total
}

/// Byte extents of the unnamed, non-comment tokens directly under a node.
#[derive(Debug, Clone, Copy, Default)]
struct TokenEdges {
    first: Option<usize>,
    last: Option<usize>,
}

struct Builder<'a> {
    text: &'a str,
    language: Language,
    file_id: FileId,
    line_index: &'a LineIndex,
    nodes: Vec<SyntaxNode>,
    edges: Vec<TokenEdges>,
    comments: Vec<CommentToken>,
}

impl Builder<'_> {
    /// Flattens the grammar tree into the arena in pre-order. Spans are
    /// provisional until [`finish_spans`] trims comments off the edges.
    fn lower(&mut self, ts_root: Node) {
        let mut stack: Vec<(Node, Option<NodeId>)> = vec![(ts_root, None)];
        while let Some((ts_node, parent)) = stack.pop() {
            if is_comment(&ts_node) {
                self.push_comment(ts_node);
                continue;
            }
            if ts_node.is_missing() {
                continue;
            }
            if !ts_node.is_named() {
                if let Some(p) = parent {
                    let edges = &mut self.edges[p.0];
                    edges.first = Some(
                        edges
                            .first
                            .map_or(ts_node.start_byte(), |b| b.min(ts_node.start_byte())),
                    );
                    edges.last = Some(edges.last.map_or(ts_node.end_byte(), |b| b.max(ts_node.end_byte())));
                }
                continue;
            }

            let id = NodeId(self.nodes.len());
            let kind = if parent.is_none() {
                NodeKind::Root
            } else {
                NodeKind::from_grammar(self.language, ts_node.kind())
            };
            self.nodes.push(SyntaxNode {
                id,
                kind,
                grammar_kind: ts_node.kind().to_string(),
                span: self
                    .line_index
                    .span(self.text, ts_node.start_byte(), ts_node.end_byte()),
                children: Vec::new(),
                parent,
            });
            self.edges.push(TokenEdges::default());
            if let Some(p) = parent {
                self.nodes[p.0].children.push(id);
            }

            let mut cursor = ts_node.walk();
            let children: Vec<Node> = ts_node.children(&mut cursor).collect();
            for child in children.into_iter().rev() {
                stack.push((child, Some(id)));
            }
        }
    }

    fn push_comment(&mut self, node: Node) {
        let raw_text = self.text[node.start_byte()..node.end_byte()].to_string();
        let style = if node.kind() == "block_comment" {
            CommentStyle::Block
        } else {
            CommentStyle::Line
        };
        self.comments.push(CommentToken {
            span: self.line_index.span(self.text, node.start_byte(), node.end_byte()),
            style,
            raw_text,
            file_id: self.file_id,
        });
    }
}

/// Recomputes every node span as the hull of its non-comment content, so
/// that a comment trailing a block never counts as part of the block.
/// The root always spans the whole file.
fn finish_spans(nodes: &mut [SyntaxNode], edges: &[TokenEdges], text: &str, index: &LineIndex) {
    // children follow their parent in pre-order, so walking backwards
    // visits every child before its parent
    for i in (1..nodes.len()).rev() {
        if nodes[i].children.is_empty() && edges[i].first.is_none() {
            continue;
        }
        let mut start: Option<SourceSpan> = None;
        let mut end: Option<SourceSpan> = None;
        for &child in &nodes[i].children {
            let span = nodes[child.0].span;
            if start.is_none_or(|s| span.start_offset < s.start_offset) {
                start = Some(span);
            }
            if end.is_none_or(|e| span.end_offset > e.end_offset) {
                end = Some(span);
            }
        }
        if let Some(first) = edges[i].first {
            let span = index.span(text, first, first);
            if start.is_none_or(|s| span.start_offset < s.start_offset) {
                start = Some(span);
            }
        }
        if let Some(last) = edges[i].last {
            let span = index.span(text, last, last);
            if end.is_none_or(|e| span.end_offset > e.end_offset) {
                end = Some(span);
            }
        }
        if let (Some(s), Some(e)) = (start, end) {
            let node = &mut nodes[i].span;
            node.start_offset = s.start_offset;
            node.start_line = s.start_line;
            node.start_col = s.start_col;
            node.end_offset = e.end_offset;
            node.end_line = e.end_line;
            node.end_col = e.end_col;
        }
    }
    if let Some(root) = nodes.first_mut() {
        root.span = index.span(text, 0, text.len());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn java(src: &str) -> ParsedFile {
        parse_source(src, Language::Java, FileId(0)).unwrap()
    }

    fn python(src: &str) -> ParsedFile {
        parse_source(src, Language::Python, FileId(0)).unwrap()
    }

    #[test]
    fn java_statement_with_line_comment() {
        let file = java("int x = 1; // one\n");
        assert!(file.nodes().iter().any(|n| n.kind == NodeKind::VariableDeclaration));
        assert_eq!(file.comments.len(), 1);
        let c = &file.comments[0];
        assert_eq!(c.style, CommentStyle::Line);
        assert_eq!(c.raw_text, "// one");
        assert_eq!((c.span.start_line, c.span.start_col), (1, 11));
    }

    #[test]
    fn empty_file() {
        let file = java("");
        assert_eq!(file.root().span.start_offset, 0);
        assert_eq!(file.root().span.end_offset, 0);
        assert!(file.comments.is_empty());
        assert_eq!(file.root().kind, NodeKind::Root);
    }

    #[test]
    fn python_comment_recovered() {
        let file = python("x = 0  # init\n");
        assert_eq!(file.comments.len(), 1);
        assert_eq!(file.comments[0].raw_text, "# init");
        assert_eq!(file.comments[0].span.start_col, 7);
    }

    #[test]
    fn left_neighbor_is_whole_statement() {
        let src = "class A {\n  void f() {\n    thread.join();  // Let the job finish.\n  }\n}\n";
        let file = java(src);
        let n = file.neighbors(&file.comments[0].span);
        let left = n.left.unwrap();
        assert_eq!(left.kind, NodeKind::ExpressionStatement);
        assert_eq!(file.slice(&left.span), "thread.join();");
        assert_eq!(n.parent.kind, NodeKind::Block);
    }

    #[test]
    fn left_neighbor_of_inner_block_comment_is_the_literal() {
        let src = "class A {\n  void f() {\n    c.query(uri, DOWNLOAD, null /* selection */);\n  }\n}\n";
        let file = java(src);
        let n = file.neighbors(&file.comments[0].span);
        assert_eq!(file.slice(&n.left.unwrap().span), "null");
    }

    #[test]
    fn first_line_comment_has_no_left() {
        let file = java("// header\nclass A {}\n");
        let n = file.neighbors(&file.comments[0].span);
        assert!(n.left.is_none());
        assert_eq!(n.parent.kind, NodeKind::Root);
        assert_eq!(n.right.unwrap().grammar_kind, "class_declaration");
    }

    #[test]
    fn trailing_python_comment_is_not_part_of_block() {
        let src = "def f(a):\n    if a:\n        foo()\n        # trailing\n    bar()\n";
        let file = python(src);
        let n = file.neighbors(&file.comments[0].span);
        assert_eq!(n.left.unwrap().kind, NodeKind::If);
        assert_eq!(n.right.unwrap().kind, NodeKind::Expr);
        assert_eq!(n.parent.kind, NodeKind::Block);
        for node in file.nodes() {
            assert!(!node.span.overlaps(&file.comments[0].span) || node.span.contains(&file.comments[0].span));
        }
    }

    #[test]
    fn enumerate_orders_by_file_then_offset() {
        let a = parse_source("/* a */\nint x; // b\n", Language::Java, FileId(1)).unwrap();
        let b = parse_source("// c\n", Language::Java, FileId(0)).unwrap();
        let none = parse_source("int y;\n", Language::Java, FileId(2)).unwrap();
        let files = vec![a, b, none];
        let texts: Vec<&str> = enumerate_comments(&files).map(|(_, c)| c.raw_text.as_str()).collect();
        assert_eq!(texts, ["// c", "/* a */", "// b"]);
    }

    #[test]
    fn garbage_is_unparsable() {
        let err = parse_source("}}}} ))) ((( {{{{ ;;; )))", Language::Java, FileId(0)).unwrap_err();
        assert!(matches!(err, ParseError::Unparsable(_)));
        assert!(matches!(
            parse_bytes(&vec![b' '; MAX_FILE_BYTES + 1], Language::Java, FileId(0)),
            Err(ParseError::TooLarge(_))
        ));
    }

    #[test]
    fn comments_never_inside_string_literals() {
        let file = java("class A { String s = \"// not a comment\"; /* real */ }\n");
        assert_eq!(file.comments.len(), 1);
        assert_eq!(file.comments[0].raw_text, "/* real */");
    }
}
