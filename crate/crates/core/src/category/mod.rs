//! Comment categories, their feature vectors, and cross-language model
//! adaptation.

mod bootstrap;
mod features;
mod mapping;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::tree::{FeatureVector, ModelError, TreeModel};

pub use bootstrap::bootstrap_category;
pub use features::{
    build_feature_vector, build_vocabulary, category_feature_specs, is_category_feature, CategoryFeatures,
    FeatureVocabulary, DEFAULT_WORD_CAP,
};
pub use mapping::{map_syntax_features, KindMapping, MappingError, SYNTAX_FEATURES};

pub const CATEGORY_TASK: &str = "category";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CategoryLabel {
    Postcondition,
    Precondition,
    ValueDescription,
    Instruction,
    Guide,
    Interface,
    MetaInformation,
    CommentOut,
    Directive,
    VisualCue,
    Uncategorized,
}

impl CategoryLabel {
    /// Menu order used everywhere labels are listed.
    pub const ALL: [CategoryLabel; 11] = [
        CategoryLabel::Postcondition,
        CategoryLabel::Precondition,
        CategoryLabel::ValueDescription,
        CategoryLabel::Instruction,
        CategoryLabel::Guide,
        CategoryLabel::Interface,
        CategoryLabel::MetaInformation,
        CategoryLabel::CommentOut,
        CategoryLabel::Directive,
        CategoryLabel::VisualCue,
        CategoryLabel::Uncategorized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CategoryLabel::Postcondition => "Postcondition",
            CategoryLabel::Precondition => "Precondition",
            CategoryLabel::ValueDescription => "ValueDescription",
            CategoryLabel::Instruction => "Instruction",
            CategoryLabel::Guide => "Guide",
            CategoryLabel::Interface => "Interface",
            CategoryLabel::MetaInformation => "MetaInformation",
            CategoryLabel::CommentOut => "CommentOut",
            CategoryLabel::Directive => "Directive",
            CategoryLabel::VisualCue => "VisualCue",
            CategoryLabel::Uncategorized => "Uncategorized",
        }
    }

    /// One-line annotation guideline.
    pub fn guideline(self) -> &'static str {
        match self {
            CategoryLabel::Postcondition => "Says what the target code does or what is true once it has run.",
            CategoryLabel::Precondition => "Says why the target code is there or what must hold before it runs.",
            CategoryLabel::ValueDescription => "Tells what a value stands for, like the meaning of a variable.",
            CategoryLabel::Instruction => "Asks a developer to do something, such as a TODO note.",
            CategoryLabel::Guide => "Points the reader to other code or documentation for details.",
            CategoryLabel::Interface => "Documents how callers should use an API.",
            CategoryLabel::MetaInformation => "Records who wrote the code or under which license it ships.",
            CategoryLabel::CommentOut => "Program code that has been disabled by commenting it.",
            CategoryLabel::Directive => "Text meant for a tool, such as a checker switch or pragma.",
            CategoryLabel::VisualCue => "Separators and markers that only structure the file visually.",
            CategoryLabel::Uncategorized => "Fits none of the other categories.",
        }
    }

    /// Two-letter abbreviation used in compact tables.
    pub fn short(self) -> &'static str {
        match self {
            CategoryLabel::Postcondition => "Po",
            CategoryLabel::Precondition => "Pr",
            CategoryLabel::ValueDescription => "Va",
            CategoryLabel::Instruction => "In",
            CategoryLabel::Guide => "Gu",
            CategoryLabel::Interface => "If",
            CategoryLabel::MetaInformation => "Me",
            CategoryLabel::CommentOut => "Co",
            CategoryLabel::Directive => "Di",
            CategoryLabel::VisualCue => "Vi",
            CategoryLabel::Uncategorized => "Un",
        }
    }

    pub fn names() -> Vec<String> {
        Self::ALL.iter().map(|l| l.as_str().to_string()).collect()
    }
}

impl fmt::Display for CategoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CategoryLabel {
    type Err = String;

    /// Accepts the canonical names plus spaced and abbreviated spellings,
    /// case-insensitively. `Metadata` is the same label as `MetaInformation`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect::<String>()
            .to_lowercase();
        let label = match key.as_str() {
            "postcondition" | "po" => CategoryLabel::Postcondition,
            "precondition" | "pr" => CategoryLabel::Precondition,
            "valuedescription" | "valuedescr" | "va" => CategoryLabel::ValueDescription,
            "instruction" | "in" => CategoryLabel::Instruction,
            "guide" | "gu" => CategoryLabel::Guide,
            "interface" | "if" => CategoryLabel::Interface,
            "metainformation" | "metadata" | "me" => CategoryLabel::MetaInformation,
            "commentout" | "commentedout" | "co" => CategoryLabel::CommentOut,
            "directive" | "di" => CategoryLabel::Directive,
            "visualcue" | "vi" => CategoryLabel::VisualCue,
            "uncategorized" | "un" => CategoryLabel::Uncategorized,
            _ => return Err(format!("unknown category `{s}`")),
        };
        Ok(label)
    }
}

impl TryFrom<String> for CategoryLabel {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CategoryLabel> for String {
    fn from(l: CategoryLabel) -> String {
        l.as_str().to_string()
    }
}

/// Applies a category model to a feature vector.
pub fn classify_category(fv: &FeatureVector, model: &TreeModel) -> Result<(CategoryLabel, f64), ModelError> {
    model.check_features(is_category_feature)?;
    let (label, confidence) = model.classify(fv);
    let label = label.parse().map_err(|_| ModelError::UnknownLabel(label.to_string()))?;
    Ok((label, confidence))
}
