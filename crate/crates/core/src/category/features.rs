use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::extent::{kind_name, CommentExtent, ABSENT};
use crate::nlp::{PosTag, TaggedText};
use crate::syntax::{Neighbors, ParsedFile};
use crate::tree::{FeatureKind, FeatureSpec, FeatureVector, TreeModel};

pub const DEFAULT_WORD_CAP: usize = 200;

const POS_ANY: &str = "PosTagAny:";
const WORD_ANY: &str = "WordAny:";

/// Words and tags expanded into per-item boolean features.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVocabulary {
    pub words: Vec<String>,
    pub tags: Vec<String>,
}

impl FeatureVocabulary {
    pub fn with_words(words: Vec<String>) -> Self {
        FeatureVocabulary {
            words,
            tags: PosTag::word_tags().iter().map(|t| t.as_str().to_string()).collect(),
        }
    }

    /// The vocabulary a trained model was built with.
    pub fn from_model(model: &TreeModel) -> Self {
        let tags = model
            .features
            .iter()
            .filter_map(|f| f.name.strip_prefix(POS_ANY))
            .map(str::to_string)
            .collect();
        FeatureVocabulary {
            words: model.vocabulary_words(),
            tags,
        }
    }
}

fn is_word(token: &str) -> bool {
    token.chars().any(char::is_alphanumeric)
}

/// The `cap` words found in the most extents; ties go to the
/// lexicographically smaller word.
pub fn build_vocabulary<'a>(texts: impl IntoIterator<Item = &'a TaggedText>, cap: usize) -> FeatureVocabulary {
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for text in texts {
        let words: BTreeSet<&str> = text
            .tokens
            .iter()
            .map(|t| t.lower.as_str())
            .filter(|w| is_word(w))
            .collect();
        for w in words {
            *df.entry(w.to_string()).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(String, usize)> = df.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    FeatureVocabulary::with_words(ranked.into_iter().take(cap).map(|(w, _)| w).collect())
}

pub fn category_feature_specs(vocab: &FeatureVocabulary) -> Vec<FeatureSpec> {
    let mut specs = vec![
        FeatureSpec::new("LeftSyntax", FeatureKind::Categorical),
        FeatureSpec::new("RightSyntax", FeatureKind::Categorical),
        FeatureSpec::new("ParentSyntax", FeatureKind::Categorical),
        FeatureSpec::new("HasSymbol", FeatureKind::Boolean),
        FeatureSpec::new("PosTagFirst", FeatureKind::Categorical),
        FeatureSpec::new("WordFirst", FeatureKind::Categorical),
    ];
    specs.extend(
        vocab
            .tags
            .iter()
            .map(|t| FeatureSpec::new(format!("{POS_ANY}{t}"), FeatureKind::Boolean)),
    );
    specs.extend(
        vocab
            .words
            .iter()
            .map(|w| FeatureSpec::new(format!("{WORD_ANY}{w}"), FeatureKind::Boolean)),
    );
    specs
}

/// Whether a feature name belongs to the comment-text feature schema.
pub fn is_category_feature(name: &str) -> bool {
    match name {
        "LeftSyntax" | "RightSyntax" | "ParentSyntax" | "HasSymbol" | "PosTagFirst" | "WordFirst" => true,
        _ => {
            if let Some(tag) = name.strip_prefix(POS_ANY) {
                tag.parse::<PosTag>().is_ok_and(|t| !t.is_punctuation())
            } else {
                name.strip_prefix(WORD_ANY).is_some_and(|w| !w.is_empty())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFeatures {
    pub left_syntax: String,
    pub right_syntax: String,
    pub parent_syntax: String,
    pub has_symbol: bool,
    pub pos_tag_first: String,
    pub word_first: String,
    /// Vocabulary tags present in the text.
    pub pos_tags: BTreeSet<String>,
    /// Vocabulary words present in the text.
    pub words: BTreeSet<String>,
}

impl CategoryFeatures {
    pub fn from_parts(neighbors: &Neighbors<'_>, tagged: &TaggedText, vocab: &FeatureVocabulary) -> Self {
        let first = tagged.first_word();
        let present_tags: BTreeSet<&str> = tagged.tokens.iter().map(|t| t.pos.as_str()).collect();
        let present_words: BTreeSet<&str> = tagged.tokens.iter().map(|t| t.lower.as_str()).collect();
        CategoryFeatures {
            left_syntax: kind_name(neighbors.left),
            right_syntax: kind_name(neighbors.right),
            parent_syntax: kind_name(Some(neighbors.parent)),
            has_symbol: tagged.has_symbol,
            pos_tag_first: first.map_or(ABSENT.to_string(), |t| t.pos.as_str().to_string()),
            word_first: first.map_or(ABSENT.to_string(), |t| t.lower.clone()),
            pos_tags: vocab
                .tags
                .iter()
                .filter(|t| present_tags.contains(t.as_str()))
                .cloned()
                .collect(),
            words: vocab
                .words
                .iter()
                .filter(|w| present_words.contains(w.as_str()))
                .cloned()
                .collect(),
        }
    }

    /// Expands into the flat vector for `vocab`, one boolean per vocabulary
    /// tag and word.
    pub fn to_vector(&self, vocab: &FeatureVocabulary) -> FeatureVector {
        let mut fv = FeatureVector::new()
            .with("LeftSyntax", self.left_syntax.as_str())
            .with("RightSyntax", self.right_syntax.as_str())
            .with("ParentSyntax", self.parent_syntax.as_str())
            .with("HasSymbol", self.has_symbol)
            .with("PosTagFirst", self.pos_tag_first.as_str())
            .with("WordFirst", self.word_first.as_str());
        for t in &vocab.tags {
            fv.insert(format!("{POS_ANY}{t}"), self.pos_tags.contains(t));
        }
        for w in &vocab.words {
            fv.insert(format!("{WORD_ANY}{w}"), self.words.contains(w));
        }
        fv
    }
}

pub fn build_feature_vector(
    file: &ParsedFile,
    extent: &CommentExtent,
    tagged: &TaggedText,
    vocab: &FeatureVocabulary,
) -> CategoryFeatures {
    CategoryFeatures::from_parts(&extent.neighbors(file), tagged, vocab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extent::{merge_extents, rule_tags};
    use crate::nlp::analyze;
    use crate::syntax::{parse_source, FileId, Language};

    #[test]
    fn vocabulary_by_extent_frequency() {
        let texts: Vec<TaggedText> = ["todo fix", "TODO later", "todo: x", "fix fix fix"]
            .iter()
            .map(|t| analyze(t))
            .collect();
        let v = build_vocabulary(&texts, 2);
        assert_eq!(v.words, ["todo", "fix"]);
        assert_eq!(v.tags.len(), 36);
        // "later" and "x" tie at one extent each; the smaller one wins
        let v = build_vocabulary(&texts, 3);
        assert_eq!(v.words[2], "later");
        assert!(!build_vocabulary(&[analyze(". , ;")], 5).words.iter().any(|w| w == "."));
    }

    #[test]
    fn rare_word_excluded_at_cap() {
        let mut texts: Vec<TaggedText> = (0..500)
            .map(|i| analyze(&format!("w{:03} w{:03} common", i % 250, (i + 1) % 250)))
            .collect();
        texts.push(analyze("rare"));
        let v = build_vocabulary(&texts, 200);
        assert_eq!(v.words.len(), 200);
        assert_eq!(v.words[0], "common");
        assert!(!v.words.iter().any(|w| w == "rare"));
    }

    #[test]
    fn features_for_instruction_text() {
        let tagged = analyze("TODO Auto-generated catch block");
        let vocab = FeatureVocabulary::with_words(vec!["todo".into(), "block".into(), "zzz".into()]);
        let src =
            "class A { void f() { try { g(); } catch (Exception e) {\n // TODO Auto-generated catch block\n } } }\n";
        let file = parse_source(src, Language::Java, FileId(0)).unwrap();
        let ex = merge_extents(&file, &rule_tags(&file));
        let f = build_feature_vector(&file, &ex[0], &tagged, &vocab);
        assert_eq!(f.word_first, "todo");
        assert!(!f.has_symbol);
        assert_eq!(f.parent_syntax, "Block");
        let fv = f.to_vector(&vocab);
        assert_eq!(fv.get("WordAny:todo"), Some(&true.into()));
        assert_eq!(fv.get("WordAny:zzz"), Some(&false.into()));
        assert_eq!(fv.get("PosTagAny:NN"), Some(&true.into()));
        assert_eq!(fv.names().count(), 6 + 36 + 3);
        // idempotent
        assert_eq!(build_feature_vector(&file, &ex[0], &tagged, &vocab), f);
    }

    #[test]
    fn imperative_after_assignment() {
        let src = "class A { void f() {\n  n = 0;\n  // clear the ring buffer.\n}}\n";
        let file = parse_source(src, Language::Java, FileId(0)).unwrap();
        let ex = merge_extents(&file, &rule_tags(&file));
        let vocab = FeatureVocabulary::with_words(vec![]);
        let f = build_feature_vector(&file, &ex[0], &analyze(&ex[0].text), &vocab);
        assert_eq!(f.pos_tag_first, "VB");
        assert_eq!(f.left_syntax, "ExpressionStatement");
        assert_eq!(f.right_syntax, ABSENT);
    }

    #[test]
    fn empty_text_uses_absent_marker() {
        let vocab = FeatureVocabulary::with_words(vec![]);
        let src = "class A {\n  //-----\n}\n";
        let file = parse_source(src, Language::Java, FileId(0)).unwrap();
        let ex = merge_extents(&file, &rule_tags(&file));
        assert!(ex[0].decorative);
        let f = build_feature_vector(&file, &ex[0], &analyze(&ex[0].text), &vocab);
        assert_eq!(f.pos_tag_first, ABSENT);
        assert_eq!(f.word_first, ABSENT);
    }

    #[test]
    fn schema_membership() {
        assert!(is_category_feature("PosTagAny:VBZ"));
        assert!(!is_category_feature("PosTagAny:XX"));
        assert!(is_category_feature("WordAny:buffer"));
        assert!(!is_category_feature("WordAny:"));
        assert!(!is_category_feature("DeltaRows"));
        let vocab = FeatureVocabulary::with_words(vec!["a".into()]);
        assert!(category_feature_specs(&vocab)
            .iter()
            .all(|s| is_category_feature(&s.name)));
    }
}
