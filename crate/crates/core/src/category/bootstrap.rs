use crate::extent::CommentExtent;
use crate::nlp::{looks_like_code, PosTag, TaggedText};
use crate::syntax::{NodeKind, ParsedFile};
use crate::target::TargetLabel;

use super::CategoryLabel;

const DIRECTIVE_MARKERS: &[&str] = &[
    "checkstyle:",
    "noinspection",
    "nopmd",
    "$non-nls",
    "pylint:",
    "noqa",
    "type: ignore",
    "fmt: off",
    "fmt: on",
    "-*- coding",
    "@formatter:",
    "nosonar",
    "pragma",
];

const INSTRUCTION_MARKERS: &[&str] = &["todo", "fixme", "xxx", "hack"];

const META_MARKERS: &[&str] = &[
    "@author",
    "copyright",
    "license",
    "licensed",
    "@since",
    "@version",
    "created by",
];

const GUIDE_MARKERS: &[&str] = &[
    "@see",
    "see ",
    "refer to",
    "http://",
    "https://",
    "{@link",
    "for details",
    "for more",
];

const INTERFACE_MARKERS: &[&str] = &[
    "@param",
    "@return",
    "@throws",
    "@exception",
    ":param",
    ":return",
    ":raises",
];

const PRECONDITION_OPENERS: &[&str] = &[
    "if",
    "when",
    "unless",
    "because",
    "since",
    "otherwise",
    "only",
    "unable",
    "cannot",
    "can't",
    "in",
    "as",
    "avoid",
    "to",
    "error",
    "invalid",
    "must",
    "need",
    "needed",
    "required",
    "make",
];

/// Deterministic category for corpora without human labels, from keywords,
/// text shape and the extent's target.
pub fn bootstrap_category(
    file: &ParsedFile,
    extent: &CommentExtent,
    tagged: &TaggedText,
    target: Option<TargetLabel>,
) -> CategoryLabel {
    let text = extent.text.as_str();
    let lower = text.to_lowercase();
    let raw = extent
        .tokens
        .iter()
        .map(|t| t.raw_text.to_lowercase())
        .collect::<Vec<_>>()
        .join("\n");

    if extent.decorative || !text.chars().any(char::is_alphanumeric) {
        return CategoryLabel::VisualCue;
    }
    if DIRECTIVE_MARKERS.iter().any(|m| raw.contains(m)) {
        return CategoryLabel::Directive;
    }
    if looks_like_code(text) {
        return CategoryLabel::CommentOut;
    }
    let first = tagged.first_word();
    let first_word = first.map_or("", |t| t.lower.as_str());
    if INSTRUCTION_MARKERS.contains(&first_word.trim_end_matches(':')) {
        return CategoryLabel::Instruction;
    }
    if META_MARKERS.iter().any(|m| lower.contains(m)) {
        return CategoryLabel::MetaInformation;
    }
    if INTERFACE_MARKERS.iter().any(|m| lower.contains(m)) {
        return CategoryLabel::Interface;
    }
    if GUIDE_MARKERS
        .iter()
        .any(|m| lower.starts_with(m) || lower.contains(&format!(" {m}")))
    {
        return CategoryLabel::Guide;
    }
    if PRECONDITION_OPENERS.contains(&first_word) {
        return CategoryLabel::Precondition;
    }
    let first_tag = first.map(|t| t.pos);
    if first_tag.is_some_and(|t| matches!(t, PosTag::Vb | PosTag::Vbz | PosTag::Vbp | PosTag::Vbg)) {
        return CategoryLabel::Postcondition;
    }
    let left_kind = extent.neighbors(file).left.map(|n| n.kind);
    let describes_value = target == Some(TargetLabel::Left)
        && matches!(
            left_kind,
            Some(NodeKind::VariableDeclaration | NodeKind::ExpressionStatement | NodeKind::Expr)
        );
    if describes_value || first_tag.is_some_and(|t| matches!(t, PosTag::Dt | PosTag::Cd | PosTag::Jj) || t.is_noun()) {
        return CategoryLabel::ValueDescription;
    }
    CategoryLabel::Uncategorized
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extent::{merge_extents, rule_tags};
    use crate::nlp::analyze;
    use crate::syntax::{parse_source, FileId, Language};
    use crate::target::bootstrap_target;

    fn label(body: &str) -> CategoryLabel {
        let src = format!("class A {{ void f() {{\n  int n = 0;\n  {body}\n  g(n);\n}}}}\n");
        let file = parse_source(&src, Language::Java, FileId(0)).unwrap();
        let ex = merge_extents(&file, &rule_tags(&file));
        let target = bootstrap_target(&file, &ex[0]);
        bootstrap_category(&file, &ex[0], &analyze(&ex[0].text), target)
    }

    #[test]
    fn keyword_categories() {
        assert_eq!(label("//CHECKSTYLE:OFF"), CategoryLabel::Directive);
        assert_eq!(label("// TODO Auto-generated catch block"), CategoryLabel::Instruction);
        assert_eq!(label("//System.out.println(n);"), CategoryLabel::CommentOut);
        assert_eq!(label("// -------------"), CategoryLabel::VisualCue);
        assert_eq!(label("// @author someone"), CategoryLabel::MetaInformation);
        assert_eq!(label("// see Foo#bar for details"), CategoryLabel::Guide);
    }

    #[test]
    fn shape_categories() {
        assert_eq!(label("// create some test data"), CategoryLabel::Postcondition);
        assert_eq!(
            label("// Unable to find the specified document."),
            CategoryLabel::Precondition
        );
        assert_eq!(label("// maximum number of retries"), CategoryLabel::ValueDescription);
    }
}
