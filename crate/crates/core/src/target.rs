//! What each comment extent talks about: the preceding element, the next
//! one, the enclosing one, or the comment itself.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::category::is_category_feature;
use crate::extent::CommentExtent;
use crate::nlp::looks_like_code;
use crate::syntax::{NodeKind, ParsedFile, SourceSpan, SyntaxNode};
use crate::tree::{FeatureVector, ModelError, TreeModel};

pub const TARGET_TASK: &str = "target";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TargetLabel {
    Left,
    Right,
    Parent,
    InPlace,
}

impl TargetLabel {
    pub const ALL: [TargetLabel; 4] = [
        TargetLabel::Left,
        TargetLabel::Right,
        TargetLabel::Parent,
        TargetLabel::InPlace,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TargetLabel::Left => "Left",
            TargetLabel::Right => "Right",
            TargetLabel::Parent => "Parent",
            TargetLabel::InPlace => "InPlace",
        }
    }

    pub fn names() -> Vec<String> {
        Self::ALL.iter().map(|l| l.as_str().to_string()).collect()
    }
}

impl fmt::Display for TargetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TargetLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect::<String>()
            .to_lowercase();
        match key.as_str() {
            "left" => Ok(TargetLabel::Left),
            "right" => Ok(TargetLabel::Right),
            "parent" => Ok(TargetLabel::Parent),
            "inplace" => Ok(TargetLabel::InPlace),
            _ => Err(format!("unknown target `{s}`")),
        }
    }
}

impl TryFrom<String> for TargetLabel {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<TargetLabel> for String {
    fn from(l: TargetLabel) -> String {
        l.as_str().to_string()
    }
}

/// Applies a target model to the same feature vector the category model uses.
pub fn classify_target(fv: &FeatureVector, model: &TreeModel) -> Result<(TargetLabel, f64), ModelError> {
    model.check_features(is_category_feature)?;
    let (label, confidence) = model.classify(fv);
    let label = label.parse().map_err(|_| ModelError::UnknownLabel(label.to_string()))?;
    Ok((label, confidence))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetResolution {
    pub label: TargetLabel,
    /// Absent for in-place targets.
    pub span: Option<SourceSpan>,
    pub node_kind: Option<NodeKind>,
    pub confidence: f64,
    /// Set for a left target more than one line above the comment.
    pub low_confidence: bool,
}

impl TargetResolution {
    fn in_place(confidence: f64) -> Self {
        TargetResolution {
            label: TargetLabel::InPlace,
            span: None,
            node_kind: None,
            confidence,
            low_confidence: false,
        }
    }
}

/// True when the text between `from` and `to` is whitespace or comments only.
fn gap_is_blank(file: &ParsedFile, from: usize, to: usize) -> bool {
    if from >= to {
        return true;
    }
    let mut pos = from;
    let mut covered = file
        .comments
        .iter()
        .map(|c| (c.span.start_offset, c.span.end_offset))
        .filter(|&(s, e)| e > from && s < to)
        .collect::<Vec<_>>();
    covered.sort_unstable();
    let chars: Vec<char> = file.text.chars().skip(from).take(to - from).collect();
    let blank = |a: usize, b: usize| chars[a - from..b - from].iter().all(|c| c.is_whitespace());
    for (s, e) in covered {
        let s = s.max(from);
        if s > pos && !blank(pos, s) {
            return false;
        }
        pos = pos.max(e.min(to));
    }
    pos >= to || blank(pos, to)
}

/// Finds the concrete element for `label`. Left and right candidates must
/// sit inside the enclosing element with nothing but whitespace and comments
/// in between; otherwise the target falls back to in-place with confidence 0.
pub fn resolve_target_span(file: &ParsedFile, extent: &CommentExtent, label: TargetLabel) -> TargetResolution {
    let neighbors = extent.neighbors(file);
    let parent = neighbors.parent;
    let inside = |n: &&SyntaxNode| parent.span.contains(&n.span) && n.id != parent.id;
    let found = |node: &SyntaxNode| TargetResolution {
        label,
        span: Some(node.span),
        node_kind: Some(node.kind),
        confidence: 1.0,
        low_confidence: false,
    };
    match label {
        TargetLabel::InPlace => TargetResolution::in_place(1.0),
        TargetLabel::Parent => found(parent),
        TargetLabel::Left => match neighbors.left.filter(inside) {
            Some(node) if gap_is_blank(file, node.span.end_offset, extent.span.start_offset) => {
                let mut r = found(node);
                r.low_confidence = extent.span.start_line > node.span.end_line + 1;
                r
            }
            _ => TargetResolution::in_place(0.0),
        },
        TargetLabel::Right => match neighbors.right.filter(inside) {
            Some(node) if gap_is_blank(file, extent.span.end_offset, node.span.start_offset) => found(node),
            _ => TargetResolution::in_place(0.0),
        },
    }
}

/// Classifies and resolves in one step; the resolution carries the model's
/// leaf confidence unless it fell back.
pub fn resolve_target(
    file: &ParsedFile,
    extent: &CommentExtent,
    fv: &FeatureVector,
    model: &TreeModel,
) -> Result<TargetResolution, ModelError> {
    let (label, confidence) = classify_target(fv, model)?;
    let mut r = resolve_target_span(file, extent, label);
    if r.confidence > 0.0 {
        r.confidence = confidence;
    }
    Ok(r)
}

fn is_code_line(line: &str) -> bool {
    let t = line.trim();
    !t.is_empty()
        && !t.starts_with("//")
        && !t.starts_with("/*")
        && !t.starts_with('*')
        && !t.starts_with('#')
        && t.chars().any(|c| c.is_alphanumeric())
}

fn char_prefix(line: &str, cols: usize) -> &str {
    match line.char_indices().nth(cols) {
        Some((b, _)) => &line[..b],
        None => line,
    }
}

fn char_suffix(line: &str, cols: usize) -> &str {
    match line.char_indices().nth(cols) {
        Some((b, _)) => &line[b..],
        None => "",
    }
}

/// Deterministic target label from the layout around an extent, used to
/// label corpora that have no human target annotations. `None` marks an
/// irregular layout that is left out of training.
pub fn bootstrap_target(file: &ParsedFile, extent: &CommentExtent) -> Option<TargetLabel> {
    if looks_like_code(&extent.text) {
        return Some(TargetLabel::InPlace);
    }
    let span = &extent.span;
    let first_line = file.line_text(span.start_line).unwrap_or_default();
    let before = char_prefix(first_line, span.start_col).trim();
    if !before.is_empty() {
        if before.ends_with(['{', ':']) {
            return Some(TargetLabel::Parent);
        }
        return Some(TargetLabel::Left);
    }
    let last_line = file.line_text(span.end_line).unwrap_or_default();
    if is_code_line(char_suffix(last_line, span.end_col)) {
        return Some(TargetLabel::Right);
    }
    let next = (span.end_line + 1..=file.line_count())
        .filter_map(|l| file.line_text(l))
        .find(|l| !l.trim().is_empty())?;
    is_code_line(next).then_some(TargetLabel::Right)
}
