use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{train_c45, Dataset, FeatureSpec, FeatureVector, RuleSet, TreeError, TreeNode};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model references unknown features: {}", .0.join(", "))]
    ModelFeatureMismatch(Vec<String>),
    #[error("model predicts unknown label `{0}`")]
    UnknownLabel(String),
    #[error("model was trained for task `{found}`, expected `{expected}`")]
    WrongTask { expected: String, found: String },
    #[error("unsupported model format version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub min_examples: usize,
    pub examples: usize,
    pub label_counts: std::collections::BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A trained tree with its feature declarations, label set and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub format_version: u32,
    pub task: String,
    pub features: Vec<FeatureSpec>,
    pub labels: Vec<String>,
    pub tree: TreeNode,
    pub metadata: TrainingMetadata,
}

impl TreeModel {
    pub fn train(task: &str, dataset: &Dataset, min_examples: usize) -> Result<Self, ModelError> {
        let tree = train_c45(dataset, min_examples)?;
        Ok(TreeModel {
            format_version: MODEL_FORMAT_VERSION,
            task: task.to_string(),
            features: dataset.features().to_vec(),
            labels: dataset.labels().to_vec(),
            tree,
            metadata: TrainingMetadata {
                min_examples,
                examples: dataset.len(),
                label_counts: dataset.label_counts(),
                seed: None,
                note: None,
            },
        })
    }

    pub fn classify(&self, fv: &FeatureVector) -> (&str, f64) {
        self.tree.classify(fv)
    }

    pub fn to_rules(&self) -> RuleSet {
        self.tree.to_rules()
    }

    pub fn expect_task(&self, task: &str) -> Result<(), ModelError> {
        if self.task == task {
            Ok(())
        } else {
            Err(ModelError::WrongTask {
                expected: task.to_string(),
                found: self.task.clone(),
            })
        }
    }

    /// Fails if any declared or tested feature is not accepted by `known`.
    pub fn check_features(&self, known: impl Fn(&str) -> bool) -> Result<(), ModelError> {
        let mut unknown: Vec<String> = self
            .features
            .iter()
            .map(|f| f.name.as_str())
            .chain(self.tree.referenced_features())
            .filter(|name| !known(name))
            .map(str::to_string)
            .collect();
        unknown.sort();
        unknown.dedup();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(ModelError::ModelFeatureMismatch(unknown))
        }
    }

    /// Words of the declared `WordAny:<word>` features, in declaration order.
    pub fn vocabulary_words(&self) -> Vec<String> {
        self.features
            .iter()
            .filter_map(|f| f.name.strip_prefix("WordAny:"))
            .map(str::to_string)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn rules_path(path: &Path) -> PathBuf {
        let mut name = path.file_stem().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(".rules.txt");
        path.with_file_name(name)
    }

    /// Writes the model document and its `.rules.txt` dump next to it.
    pub fn save(&self, path: &Path) -> Result<PathBuf, ModelError> {
        let io_err = |p: &Path| {
            let p = p.to_path_buf();
            move |source| ModelError::Io { path: p, source }
        };
        fs::write(path, self.to_json() + "\n").map_err(io_err(path))?;
        let rules = Self::rules_path(path);
        let text = format!(
            "# task: {}\n# labels: {}\n{}",
            self.task,
            self.labels.join(", "),
            self.to_rules()
        );
        fs::write(&rules, text).map_err(io_err(&rules))?;
        Ok(rules)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let model: TreeModel = serde_json::from_str(&text).map_err(|source| ModelError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(ModelError::UnsupportedVersion(model.format_version));
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::FeatureKind;

    fn model() -> TreeModel {
        let mut ds = Dataset::new(
            vec![
                FeatureSpec::new("HasSymbol", FeatureKind::Boolean),
                FeatureSpec::new("WordAny:todo", FeatureKind::Boolean),
            ],
            vec!["A".into(), "B".into()],
        )
        .unwrap();
        for (s, l) in [(true, "A"), (true, "A"), (false, "B"), (false, "B")] {
            ds.push(FeatureVector::new().with("HasSymbol", s).with("WordAny:todo", false), l)
                .unwrap();
        }
        TreeModel::train("category", &ds, 2).unwrap()
    }

    #[test]
    fn save_and_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("category.json");
        let m = model();
        let rules = m.save(&path).unwrap();
        assert_eq!(rules, dir.path().join("category.rules.txt"));
        assert!(fs::read_to_string(&rules).unwrap().contains("HasSymbol = true"));
        assert_eq!(TreeModel::load(&path).unwrap(), m);
    }

    #[test]
    fn feature_check_reports_unknown_names() {
        let m = model();
        assert!(m.check_features(|_| true).is_ok());
        match m.check_features(|n| n == "HasSymbol") {
            Err(ModelError::ModelFeatureMismatch(names)) => assert_eq!(names, ["WordAny:todo"]),
            other => panic!("{other:?}"),
        }
        assert_eq!(m.vocabulary_words(), ["todo"]);
        assert!(m.expect_task("target").is_err());
    }

    #[test]
    fn rejects_future_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let mut m = model();
        m.format_version = 99;
        fs::write(&path, m.to_json()).unwrap();
        assert!(matches!(
            TreeModel::load(&path),
            Err(ModelError::UnsupportedVersion(99))
        ));
    }
}
