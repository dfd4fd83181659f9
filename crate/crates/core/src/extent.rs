//! Grouping of comment tokens into extents with B/I tags.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::syntax::{CommentStyle, CommentToken, FileId, Neighbors, ParsedFile, SourceSpan, SyntaxNode};
use crate::tree::{Dataset, FeatureKind, FeatureSpec, FeatureVector, ModelError, TreeError, TreeModel};

/// Value used for distances when there is no previous comment or no left
/// element.
pub const DISTANCE_SENTINEL: i64 = 9999;

/// Categorical value for an absent neighbor or an empty text field.
pub const ABSENT: &str = "∅";

pub const EXTENT_TASK: &str = "extent";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IobTag {
    B,
    I,
}

impl IobTag {
    pub fn as_str(self) -> &'static str {
        match self {
            IobTag::B => "B",
            IobTag::I => "I",
        }
    }
}

impl fmt::Display for IobTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IobTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "B" => Ok(IobTag::B),
            "I" => Ok(IobTag::I),
            other => Err(format!("unknown IOB tag `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase")]
pub struct ExtentFeatures {
    pub delta_rows: i64,
    pub delta_cols: i64,
    pub delta_left: i64,
    pub left_syntax: String,
    pub right_syntax: String,
    pub parent_syntax: String,
    /// Non-whitespace source text between the previous comment and this one.
    pub code_between: bool,
}

pub fn extent_feature_specs() -> Vec<FeatureSpec> {
    vec![
        FeatureSpec::new("DeltaRows", FeatureKind::Numeric),
        FeatureSpec::new("DeltaCols", FeatureKind::Numeric),
        FeatureSpec::new("DeltaLeft", FeatureKind::Numeric),
        FeatureSpec::new("LeftSyntax", FeatureKind::Categorical),
        FeatureSpec::new("RightSyntax", FeatureKind::Categorical),
        FeatureSpec::new("ParentSyntax", FeatureKind::Categorical),
        FeatureSpec::new("CodeBetween", FeatureKind::Boolean),
    ]
}

fn is_extent_feature(name: &str) -> bool {
    extent_feature_specs().iter().any(|f| f.name == name)
}

impl ExtentFeatures {
    pub fn to_vector(&self) -> FeatureVector {
        FeatureVector::new()
            .with("DeltaRows", self.delta_rows)
            .with("DeltaCols", self.delta_cols)
            .with("DeltaLeft", self.delta_left)
            .with("LeftSyntax", self.left_syntax.as_str())
            .with("RightSyntax", self.right_syntax.as_str())
            .with("ParentSyntax", self.parent_syntax.as_str())
            .with("CodeBetween", self.code_between)
    }
}

pub(crate) fn kind_name(node: Option<&SyntaxNode>) -> String {
    node.map_or_else(|| ABSENT.to_string(), |n| n.kind.as_str().to_string())
}

/// Features of comment token `index`, relative to token `index - 1` of the
/// same file regardless of any code between them.
pub fn compute_extent_features(file: &ParsedFile, index: usize) -> ExtentFeatures {
    let comment = &file.comments[index];
    let Neighbors { left, right, parent } = file.neighbors(&comment.span);
    let (delta_rows, delta_cols, code_between) = match index.checked_sub(1) {
        None => (DISTANCE_SENTINEL, DISTANCE_SENTINEL, false),
        Some(p) => {
            let prev = &file.comments[p];
            let gap = SourceSpan {
                start_offset: prev.span.end_offset,
                end_offset: comment.span.start_offset,
                ..prev.span
            };
            (
                comment.span.start_line as i64 - prev.span.end_line as i64,
                comment.span.start_col as i64 - prev.span.start_col as i64,
                !file.slice(&gap).trim().is_empty(),
            )
        }
    };
    ExtentFeatures {
        delta_rows,
        delta_cols,
        delta_left: left.map_or(DISTANCE_SENTINEL, |l| {
            comment.span.start_col as i64 - l.span.end_col as i64
        }),
        left_syntax: kind_name(left),
        right_syntax: kind_name(right),
        parent_syntax: kind_name(Some(parent)),
        code_between,
    }
}

/// Tokens whose tag is fixed without consulting a model: the first token of
/// a file, every block comment, and any token right after a block comment.
pub fn is_forced_begin(file: &ParsedFile, index: usize) -> bool {
    index == 0
        || file.comments[index].style == CommentStyle::Block
        || file.comments[index - 1].style == CommentStyle::Block
}

/// The deterministic merge rule: a token continues the previous extent iff
/// both are line comments starting in the same column on adjacent lines with
/// nothing but whitespace between them.
pub fn rule_tags(file: &ParsedFile) -> Vec<IobTag> {
    (0..file.comments.len())
        .map(|i| {
            if is_forced_begin(file, i) {
                return IobTag::B;
            }
            let prev = &file.comments[i - 1];
            let cur = &file.comments[i];
            let gap = SourceSpan {
                start_offset: prev.span.end_offset,
                end_offset: cur.span.start_offset,
                ..prev.span
            };
            if cur.span.start_col == prev.span.start_col
                && cur.span.start_line == prev.span.end_line + 1
                && file.slice(&gap).trim().is_empty()
            {
                IobTag::I
            } else {
                IobTag::B
            }
        })
        .collect()
}

/// Tags every comment token of `file` using an extent model.
pub fn tag_extents(file: &ParsedFile, model: &TreeModel) -> Result<Vec<IobTag>, ModelError> {
    model.check_features(is_extent_feature)?;
    Ok((0..file.comments.len())
        .map(|i| {
            if is_forced_begin(file, i) {
                IobTag::B
            } else {
                let fv = compute_extent_features(file, i).to_vector();
                match model.classify(&fv).0 {
                    "I" => IobTag::I,
                    _ => IobTag::B,
                }
            }
        })
        .collect())
}

/// Feature vectors and tags for the model-decided tokens of one file.
pub fn extent_examples(file: &ParsedFile, tags: &[IobTag]) -> Vec<(FeatureVector, IobTag)> {
    (0..file.comments.len())
        .filter(|&i| !is_forced_begin(file, i))
        .map(|i| (compute_extent_features(file, i).to_vector(), tags[i]))
        .collect()
}

pub fn extent_dataset<'a>(
    tagged: impl IntoIterator<Item = (&'a ParsedFile, &'a [IobTag])>,
) -> Result<Dataset, TreeError> {
    let mut ds = Dataset::new(extent_feature_specs(), vec!["B".into(), "I".into()])?;
    for (file, tags) in tagged {
        for (fv, tag) in extent_examples(file, tags) {
            ds.push(fv, tag.as_str())?;
        }
    }
    Ok(ds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommentExtent {
    pub file_id: FileId,
    /// Index of the first token in the file's comment list.
    pub first_token: usize,
    pub tokens: Vec<CommentToken>,
    pub text: String,
    pub span: SourceSpan,
    /// True when nothing but delimiters and decoration remains.
    pub decorative: bool,
}

impl CommentExtent {
    pub fn token_range(&self) -> std::ops::Range<usize> {
        self.first_token..self.first_token + self.tokens.len()
    }

    /// Left of the first token, right of the last, parent of the whole hull.
    pub fn neighbors<'f>(&self, file: &'f ParsedFile) -> Neighbors<'f> {
        let first = self.tokens.first().expect("extent nonempty");
        let last = self.tokens.last().expect("extent nonempty");
        Neighbors {
            left: file.neighbors(&first.span).left,
            right: file.neighbors(&last.span).right,
            parent: file.neighbors(&self.span).parent,
        }
    }
}

/// Splits the file's comment tokens into extents at every `B` tag.
///
/// Panics if `tags` does not have one entry per token.
pub fn merge_extents(file: &ParsedFile, tags: &[IobTag]) -> Vec<CommentExtent> {
    assert_eq!(tags.len(), file.comments.len(), "one tag per comment token");
    let mut extents = Vec::new();
    let mut start = 0;
    for i in 1..=tags.len() {
        if i == tags.len() || tags[i] == IobTag::B {
            if i > start {
                extents.push(extent_from_tokens(file, start..i));
            }
            start = i;
        }
    }
    extents
}

/// The extent made of the file's comment tokens in `range`.
///
/// Panics if the range is empty or out of bounds.
pub fn extent_from_tokens(file: &ParsedFile, range: std::ops::Range<usize>) -> CommentExtent {
    let start = range.start;
    let tokens = file.comments[range].to_vec();
    let span = tokens[1..].iter().fold(tokens[0].span, |acc, t| acc.hull(&t.span));
    let text = normalize_tokens(&tokens);
    CommentExtent {
        file_id: file.file_id,
        first_token: start,
        decorative: text.is_empty(),
        tokens,
        text,
        span,
    }
}

/// The extent made of every comment token inside `span`, if any.
pub fn extent_at(file: &ParsedFile, span: &SourceSpan) -> Option<CommentExtent> {
    let start = file.comments.iter().position(|c| span.contains(&c.span))?;
    let len = file.comments[start..]
        .iter()
        .take_while(|c| span.contains(&c.span))
        .count();
    Some(extent_from_tokens(file, start..start + len))
}

/// IOB tags that reproduce the given extents; tokens outside every extent
/// start their own.
pub fn tags_from_extents(file: &ParsedFile, spans: &[SourceSpan]) -> Vec<IobTag> {
    let mut tags = vec![IobTag::B; file.comments.len()];
    for span in spans {
        let mut inside = file
            .comments
            .iter()
            .enumerate()
            .filter(|(_, c)| span.contains(&c.span))
            .map(|(i, _)| i);
        if inside.next().is_some() {
            for i in inside {
                tags[i] = IobTag::I;
            }
        }
    }
    tags
}

pub fn normalize_tokens(tokens: &[CommentToken]) -> String {
    let mut words: Vec<&str> = Vec::new();
    let stripped: Vec<&str> = tokens.iter().map(strip_delimiters).collect();
    for body in &stripped {
        for line in body.lines() {
            words.extend(strip_decoration(line).split_whitespace());
        }
    }
    words.join(" ")
}

fn strip_delimiters(token: &CommentToken) -> &str {
    let raw = token.raw_text.as_str();
    match token.style {
        CommentStyle::Block => {
            let inner = raw.strip_prefix("/*").unwrap_or(raw);
            inner.strip_suffix("*/").unwrap_or(inner)
        }
        CommentStyle::Line => raw.strip_prefix("//").or_else(|| raw.strip_prefix('#')).unwrap_or(raw),
    }
}

/// Drops a leading run of `* - = / #` when it is followed by whitespace or
/// ends the line.
fn strip_decoration(line: &str) -> &str {
    let line = line.trim_start();
    let rest = line.trim_start_matches(['*', '-', '=', '/', '#']);
    if rest.len() < line.len() && rest.chars().next().is_none_or(char::is_whitespace) {
        rest.trim_start()
    } else {
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_source, Language};

    fn java(text: &str) -> ParsedFile {
        parse_source(text, Language::Java, FileId(0)).unwrap()
    }

    #[test]
    fn consecutive_line_comments_same_column() {
        let f = java("class A {\n  // one\n  // two\n}\n");
        let feats = compute_extent_features(&f, 1);
        assert_eq!(feats.delta_rows, 1);
        assert_eq!(feats.delta_cols, 0);
        assert!(!feats.code_between);
    }

    #[test]
    fn first_comment_uses_sentinels() {
        let f = java("// header\nclass A {}\n");
        let feats = compute_extent_features(&f, 0);
        assert_eq!(feats.delta_rows, DISTANCE_SENTINEL);
        assert_eq!(feats.delta_cols, DISTANCE_SENTINEL);
        assert_eq!(feats.delta_left, DISTANCE_SENTINEL);
        assert_eq!(feats.left_syntax, ABSENT);
        assert_eq!(feats.parent_syntax, "Root");
    }

    #[test]
    fn delta_left_for_inline_comment() {
        let src = "int value = 12345;  // x\n";
        assert_eq!(src.find("//"), Some(20));
        let f = java(src);
        let feats = compute_extent_features(&f, 0);
        assert_eq!(feats.delta_left, 2);
        assert_eq!(feats.left_syntax, "VariableDeclaration");
    }

    #[test]
    fn code_between_blocks_continuation() {
        let f = java("class A { void f() {\n  // a\n  g();\n  // b\n}}\n");
        assert!(compute_extent_features(&f, 1).code_between);
        assert_eq!(rule_tags(&f), [IobTag::B, IobTag::B]);
    }

    #[test]
    fn rule_groups_one_sentence_over_two_lines() {
        let f = java("class A { void f() {\n  // This is still\n  // one sentence.\n  g();\n}}\n");
        assert_eq!(rule_tags(&f), [IobTag::B, IobTag::I]);
        let extents = merge_extents(&f, &rule_tags(&f));
        assert_eq!(extents.len(), 1);
        assert_eq!(extents[0].text, "This is still one sentence.");
        assert_eq!(extents[0].span.start_line, 2);
        assert_eq!(extents[0].span.end_line, 3);
    }

    #[test]
    fn consecutive_but_separate_comments() {
        // line 4 trails code; line 5 opens a new explanation at another column
        let src =
            "class A {\n  void f() {\n    int n = 0;\n    n++; // count it\n    // now reset\n    n = 0;\n  }\n}\n";
        let f = java(src);
        assert_eq!(f.comments[0].span.start_line, 4);
        assert_eq!(f.comments[1].span.start_line, 5);
        assert_eq!(rule_tags(&f), [IobTag::B, IobTag::B]);
    }

    #[test]
    fn block_comments_stand_alone() {
        let f = java("class A {\n  /* a */\n  // b\n  // c\n}\n");
        assert_eq!(rule_tags(&f), [IobTag::B, IobTag::B, IobTag::I]);
        assert!(is_forced_begin(&f, 1));
    }

    #[test]
    fn merge_partitions_tokens() {
        let f = java("class A {\n  // a\n  // b\n  // c\n}\n");
        let ex = merge_extents(&f, &[IobTag::B, IobTag::I, IobTag::B]);
        assert_eq!(ex.iter().map(|e| e.tokens.len()).collect::<Vec<_>>(), [2, 1]);
        assert_eq!(ex[1].token_range(), 2..3);
        let singles = merge_extents(&f, &[IobTag::B; 3]);
        assert_eq!(singles.len(), 3);
    }

    #[test]
    fn block_text_normalization() {
        let f = java("class A {\n  /* Copy  the\n   * array. */\n}\n");
        let ex = merge_extents(&f, &rule_tags(&f));
        assert_eq!(ex[0].text, "Copy the array.");
        assert!(!ex[0].decorative);
    }

    #[test]
    fn decoration_only_is_decorative() {
        let f = java("class A {\n  //-----------\n  /*****/\n}\n");
        let ex = merge_extents(&f, &[IobTag::B, IobTag::B]);
        assert!(ex.iter().all(|e| e.decorative && e.text.is_empty()));
    }

    #[test]
    fn decoration_needs_following_space() {
        assert_eq!(strip_decoration(" * item"), "item");
        assert_eq!(strip_decoration("-1 means none"), "-1 means none");
        assert_eq!(strip_decoration("==="), "");
        let f = java("class A {\n  //CHECKSTYLE:OFF\n}\n");
        assert_eq!(merge_extents(&f, &[IobTag::B])[0].text, "CHECKSTYLE:OFF");
        let p = parse_source("## Section\nx = 1\n", Language::Python, FileId(0)).unwrap();
        assert_eq!(merge_extents(&p, &[IobTag::B])[0].text, "Section");
    }

    #[test]
    fn extent_neighbors_span_the_run() {
        let f = java("class A { void f() {\n  g();\n  // a\n  // b\n  h();\n}}\n");
        let ex = merge_extents(&f, &rule_tags(&f));
        let n = ex[0].neighbors(&f);
        assert_eq!(f.slice(&n.left.unwrap().span), "g();");
        assert_eq!(f.slice(&n.right.unwrap().span), "h();");
        assert_eq!(n.parent.kind.as_str(), "Block");
    }

    #[test]
    fn model_reproduces_rule_and_rejects_foreign_features() {
        let src = "class A { void f() {\n  // a\n  // b\n  g(); // c\n  // d\n  h();\n    // e\n  // f\n}}\n";
        let f = java(src);
        let tags = rule_tags(&f);
        let ds = extent_dataset([(&f, tags.as_slice())]).unwrap();
        let model = TreeModel::train(EXTENT_TASK, &ds, 1).unwrap();
        assert_eq!(tag_extents(&f, &model).unwrap(), tags);

        let mut foreign = model.clone();
        foreign
            .features
            .push(FeatureSpec::new("WordFirst", FeatureKind::Categorical));
        assert!(matches!(
            tag_extents(&f, &foreign),
            Err(ModelError::ModelFeatureMismatch(_))
        ));
    }

    #[test]
    fn extents_round_trip_through_spans() {
        let f = java("class A {\n  // one\n  // two\n  int x; // three\n  /* four */\n}\n");
        let ex = merge_extents(&f, &rule_tags(&f));
        let spans: Vec<SourceSpan> = ex.iter().map(|e| e.span).collect();
        assert_eq!(tags_from_extents(&f, &spans), rule_tags(&f));
        for e in &ex {
            assert_eq!(extent_at(&f, &e.span).as_ref(), Some(e));
        }
    }
}
