//! C4.5 decision trees over mixed categorical, numeric and boolean
//! features, with export to flat if-then rules.

mod model;
mod rules;
mod train;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use model::{ModelError, TrainingMetadata, TreeModel, MODEL_FORMAT_VERSION};
pub use rules::{Condition, Rule, RuleSet, Test};
pub use train::{entropy, gain_ratio, information_gain, partition_gain_ratio, train_c45, DEFAULT_MIN_EXAMPLES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("split information is zero")]
    UndefinedSplit,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("duplicate or empty feature name `{0}`")]
    BadFeatureName(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("label `{0}` is not in the declared label set")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Categorical,
    Numeric,
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

impl FeatureSpec {
    pub fn new(name: impl Into<String>, kind: FeatureKind) -> Self {
        FeatureSpec {
            name: name.into(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureValue {
    Boolean(bool),
    Numeric(i64),
    Categorical(String),
}

impl FeatureValue {
    pub fn kind(&self) -> FeatureKind {
        match self {
            FeatureValue::Boolean(_) => FeatureKind::Boolean,
            FeatureValue::Numeric(_) => FeatureKind::Numeric,
            FeatureValue::Categorical(_) => FeatureKind::Categorical,
        }
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Boolean(b) => write!(f, "{b}"),
            FeatureValue::Numeric(n) => write!(f, "{n}"),
            FeatureValue::Categorical(s) => f.write_str(s),
        }
    }
}

impl From<bool> for FeatureValue {
    fn from(b: bool) -> Self {
        FeatureValue::Boolean(b)
    }
}

impl From<i64> for FeatureValue {
    fn from(n: i64) -> Self {
        FeatureValue::Numeric(n)
    }
}

impl From<&str> for FeatureValue {
    fn from(s: &str) -> Self {
        FeatureValue::Categorical(s.to_string())
    }
}

impl From<String> for FeatureValue {
    fn from(s: String) -> Self {
        FeatureValue::Categorical(s)
    }
}

/// Named feature values; absent names are missing values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub BTreeMap<String, FeatureValue>);

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<FeatureValue>) -> Self {
        self.insert(name, value);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<FeatureValue>) {
        self.0.insert(name.into(), value.into());
    }

    pub fn get(&self, name: &str) -> Option<&FeatureValue> {
        self.0.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: FeatureVector,
    pub label: String,
}

/// Labeled examples over a declared feature schema and closed label set.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<FeatureSpec>,
    labels: Vec<String>,
    examples: Vec<Example>,
}

impl Dataset {
    pub fn new(features: Vec<FeatureSpec>, labels: Vec<String>) -> Result<Self, TreeError> {
        let mut seen = BTreeSet::new();
        for f in &features {
            if f.name.is_empty() || !seen.insert(f.name.as_str()) {
                return Err(TreeError::BadFeatureName(f.name.clone()));
            }
        }
        Ok(Dataset {
            features,
            labels,
            examples: Vec::new(),
        })
    }

    pub fn push(&mut self, features: FeatureVector, label: impl Into<String>) -> Result<(), TreeError> {
        let label = label.into();
        if !self.labels.contains(&label) {
            return Err(TreeError::UnknownLabel(label));
        }
        self.examples.push(Example { features, label });
        Ok(())
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn feature(&self, name: &str) -> Option<&FeatureSpec> {
        self.features.iter().find(|f| f.name == name)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn label_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.examples {
            *counts.entry(e.label.clone()).or_insert(0) += 1;
        }
        counts
    }
}

/// How a split node routes an example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SplitTest {
    /// One child per listed value, in order.
    Categorical { values: Vec<String> },
    /// Children are `[value <= threshold, value > threshold]`.
    Numeric { threshold: f64 },
    /// Children are `[false, true]`.
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        label: String,
        support: usize,
        distribution: BTreeMap<String, usize>,
    },
    Split {
        feature: String,
        test: SplitTest,
        children: Vec<TreeNode>,
        /// Child receiving missing or unseen values.
        majority_child: usize,
    },
}

impl TreeNode {
    /// Index of the child that `fv` routes to at this split, falling back to
    /// the majority child when the value is missing or cannot be routed.
    pub fn route(&self, fv: &FeatureVector) -> Option<usize> {
        let TreeNode::Split {
            feature,
            test,
            majority_child,
            ..
        } = self
        else {
            return None;
        };
        let branch = match (test, fv.get(feature)) {
            (SplitTest::Categorical { values }, Some(FeatureValue::Categorical(v))) => {
                values.iter().position(|x| x == v)
            }
            (SplitTest::Numeric { threshold }, Some(FeatureValue::Numeric(n))) => {
                Some(if (*n as f64) <= *threshold { 0 } else { 1 })
            }
            (SplitTest::Boolean, Some(FeatureValue::Boolean(b))) => Some(usize::from(*b)),
            _ => None,
        };
        Some(branch.unwrap_or(*majority_child))
    }

    /// Predicted label and the leaf's majority fraction.
    pub fn classify(&self, fv: &FeatureVector) -> (&str, f64) {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf {
                    label,
                    support,
                    distribution,
                } => {
                    let hits = distribution.get(label).copied().unwrap_or(0);
                    let confidence = if *support == 0 {
                        1.0
                    } else {
                        hits as f64 / *support as f64
                    };
                    return (label, confidence);
                }
                TreeNode::Split { children, .. } => {
                    let idx = node.route(fv).expect("split routes");
                    node = &children[idx];
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { children, .. } => 1 + children.iter().map(TreeNode::node_count).sum::<usize>(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { children, .. } => children.iter().map(TreeNode::leaf_count).sum(),
        }
    }

    /// Depth in edges; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { children, .. } => 1 + children.iter().map(TreeNode::depth).max().unwrap_or(0),
        }
    }

    /// Names of all features tested anywhere in the tree.
    pub fn referenced_features(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if let TreeNode::Split { feature, children, .. } = node {
                out.insert(feature.as_str());
                stack.extend(children);
            }
        }
        out
    }

    pub fn to_rules(&self) -> RuleSet {
        rules::to_rules(self)
    }
}
