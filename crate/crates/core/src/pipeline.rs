//! End-to-end processing of one parsed file: extents, then target and
//! category for each extent.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::category::{
    build_feature_vector, build_vocabulary, category_feature_specs, classify_category, CategoryLabel,
    FeatureVocabulary, CATEGORY_TASK,
};
use crate::extent::{merge_extents, rule_tags, tag_extents, CommentExtent, EXTENT_TASK};
use crate::nlp::{analyze, is_non_english, TaggedText};
use crate::syntax::ParsedFile;
use crate::target::{resolve_target, TargetResolution, TARGET_TASK};
use crate::tree::{Dataset, ModelError, TreeError, TreeModel};

/// The trained models of the pipeline. Without an extent model, extents
/// come from the merge rule.
#[derive(Debug, Clone)]
pub struct Models {
    pub extent: Option<TreeModel>,
    pub target: TreeModel,
    pub category: TreeModel,
    target_vocab: FeatureVocabulary,
    category_vocab: FeatureVocabulary,
}

impl Models {
    pub fn new(extent: Option<TreeModel>, target: TreeModel, category: TreeModel) -> Result<Self, ModelError> {
        if let Some(m) = &extent {
            m.expect_task(EXTENT_TASK)?;
        }
        target.expect_task(TARGET_TASK)?;
        category.expect_task(CATEGORY_TASK)?;
        Ok(Models {
            target_vocab: FeatureVocabulary::from_model(&target),
            category_vocab: FeatureVocabulary::from_model(&category),
            extent,
            target,
            category,
        })
    }

    pub fn load(extent: Option<&Path>, target: &Path, category: &Path) -> Result<Self, ModelError> {
        let extent = extent.map(TreeModel::load).transpose()?;
        Self::new(extent, TreeModel::load(target)?, TreeModel::load(category)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtentClassification {
    pub target: TargetResolution,
    pub category: CategoryLabel,
    pub category_confidence: f64,
}

/// Groups the file's comment tokens into extents.
pub fn segment(file: &ParsedFile, extent_model: Option<&TreeModel>) -> Result<Vec<CommentExtent>, ModelError> {
    let tags = match extent_model {
        Some(m) => tag_extents(file, m)?,
        None => rule_tags(file),
    };
    Ok(merge_extents(file, &tags))
}

/// Target and category of one extent. Text that is mostly non-English is
/// Uncategorized without consulting the category tree.
pub fn classify_extent(
    file: &ParsedFile,
    extent: &CommentExtent,
    models: &Models,
) -> Result<ExtentClassification, ModelError> {
    let tagged = analyze(&extent.text);
    let target_fv = build_feature_vector(file, extent, &tagged, &models.target_vocab).to_vector(&models.target_vocab);
    let target = resolve_target(file, extent, &target_fv, &models.target)?;
    let (category, category_confidence) = if is_non_english(&extent.text) {
        (CategoryLabel::Uncategorized, 1.0)
    } else {
        let fv = build_feature_vector(file, extent, &tagged, &models.category_vocab).to_vector(&models.category_vocab);
        classify_category(&fv, &models.category)?
    };
    Ok(ExtentClassification {
        target,
        category,
        category_confidence,
    })
}

pub fn classify_file(
    file: &ParsedFile,
    models: &Models,
) -> Result<Vec<(CommentExtent, ExtentClassification)>, ModelError> {
    segment(file, models.extent.as_ref())?
        .into_iter()
        .map(|e| {
            let c = classify_extent(file, &e, models)?;
            Ok((e, c))
        })
        .collect()
}

/// A labeled extent for training the target or category tree.
pub struct LabeledExtent<'a> {
    pub file: &'a ParsedFile,
    pub extent: CommentExtent,
    pub label: String,
}

/// Builds the vocabulary from the training texts, then one example per
/// labeled extent.
pub fn text_dataset(
    labels: Vec<String>,
    items: &[LabeledExtent<'_>],
    word_cap: usize,
) -> Result<(Dataset, FeatureVocabulary), TreeError> {
    let tagged: Vec<TaggedText> = items.iter().map(|i| analyze(&i.extent.text)).collect();
    let vocab = build_vocabulary(&tagged, word_cap);
    let mut ds = Dataset::new(category_feature_specs(&vocab), labels)?;
    for (item, t) in items.iter().zip(&tagged) {
        let fv = build_feature_vector(item.file, &item.extent, t, &vocab).to_vector(&vocab);
        ds.push(fv, &item.label)?;
    }
    Ok((ds, vocab))
}
