use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::extent::ABSENT;
use crate::syntax::NodeKind;
use crate::tree::{SplitTest, TreeModel, TreeNode};

/// Features whose categorical values are syntax kind names.
pub const SYNTAX_FEATURES: [&str; 3] = ["LeftSyntax", "RightSyntax", "ParentSyntax"];

const JAVA_TO_PYTHON: &str = include_str!("../../resources/java_to_python.tsv");

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("mapping line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mapping is not injective: {0}")]
    NotInjective(String),
    #[error("syntax kind `{0}` has no mapping")]
    UnmappedKind(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// A renaming of syntax kinds between languages.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KindMapping {
    pairs: BTreeMap<String, String>,
}

impl KindMapping {
    /// Parses `From<TAB>To` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, MappingError> {
        let mut pairs = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split('\t').map(str::trim);
            let (Some(from), Some(to), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(MappingError::Parse {
                    line: line_no,
                    message: "expected two tab-separated columns".into(),
                });
            };
            for kind in [from, to] {
                kind.parse::<NodeKind>()
                    .map_err(|message| MappingError::Parse { line: line_no, message })?;
            }
            if pairs.insert(from.to_string(), to.to_string()).is_some() {
                return Err(MappingError::Parse {
                    line: line_no,
                    message: format!("`{from}` mapped twice"),
                });
            }
            if !targets.insert(to.to_string()) {
                return Err(MappingError::NotInjective(format!("`{to}` is the image of two kinds")));
            }
        }
        Ok(KindMapping { pairs })
    }

    pub fn load(path: &Path) -> Result<Self, MappingError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// The bundled Java to Python table.
    pub fn java_to_python() -> Self {
        Self::parse(JAVA_TO_PYTHON).expect("bundled mapping is valid")
    }

    pub fn get(&self, kind: &str) -> Option<&str> {
        self.pairs.get(kind).map(String::as_str)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Image of one kind name. Shared kinds and the absent marker map to
    /// themselves.
    fn apply(&self, kind: &str) -> Result<String, MappingError> {
        if let Some(to) = self.get(kind) {
            return Ok(to.to_string());
        }
        if kind == ABSENT {
            return Ok(kind.to_string());
        }
        match kind.parse::<NodeKind>() {
            Ok(k) if k.language().is_none() => Ok(kind.to_string()),
            _ => Err(MappingError::UnmappedKind(kind.to_string())),
        }
    }
}

/// Rewrites the values tested on syntax features; every other test, the
/// tree shape and the feature declarations stay as they are.
pub fn map_syntax_features(model: &TreeModel, mapping: &KindMapping) -> Result<TreeModel, MappingError> {
    let mut out = model.clone();
    rewrite(&mut out.tree, mapping)?;
    Ok(out)
}

fn rewrite(node: &mut TreeNode, mapping: &KindMapping) -> Result<(), MappingError> {
    if let TreeNode::Split {
        feature,
        test,
        children,
        ..
    } = node
    {
        if SYNTAX_FEATURES.contains(&feature.as_str()) {
            if let SplitTest::Categorical { values } = test {
                let mapped = values.iter().map(|v| mapping.apply(v)).collect::<Result<Vec<_>, _>>()?;
                let distinct: BTreeSet<&String> = mapped.iter().collect();
                if distinct.len() != mapped.len() {
                    return Err(MappingError::NotInjective(format!(
                        "values of `{feature}` collide after mapping: {}",
                        mapped.join(", ")
                    )));
                }
                *values = mapped;
            }
        }
        for child in children {
            rewrite(child, mapping)?;
        }
    }
    Ok(())
}
