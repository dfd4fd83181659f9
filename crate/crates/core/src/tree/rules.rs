use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FeatureValue, FeatureVector, SplitTest, TreeNode};

/// A single feature test along a root-to-leaf path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Test {
    Equals {
        value: String,
    },
    /// Matches any categorical value outside `values`.
    NotIn {
        values: Vec<String>,
    },
    AtMost {
        threshold: f64,
    },
    Above {
        threshold: f64,
    },
    Is {
        value: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub feature: String,
    pub test: Test,
    /// Whether an absent (or differently typed) value satisfies the test.
    pub accepts_missing: bool,
}

impl Condition {
    pub fn matches(&self, fv: &FeatureVector) -> bool {
        match (&self.test, fv.get(&self.feature)) {
            (Test::Equals { value }, Some(FeatureValue::Categorical(v))) => v == value,
            (Test::NotIn { values }, Some(FeatureValue::Categorical(v))) => !values.contains(v),
            (Test::AtMost { threshold }, Some(FeatureValue::Numeric(n))) => (*n as f64) <= *threshold,
            (Test::Above { threshold }, Some(FeatureValue::Numeric(n))) => (*n as f64) > *threshold,
            (Test::Is { value }, Some(FeatureValue::Boolean(b))) => b == value,
            _ => self.accepts_missing,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.test {
            Test::Equals { value } => write!(f, "{} = {}", self.feature, value)?,
            Test::NotIn { values } => write!(f, "{} not in {{{}}}", self.feature, values.join(", "))?,
            Test::AtMost { threshold } => write!(f, "{} <= {}", self.feature, threshold)?,
            Test::Above { threshold } => write!(f, "{} > {}", self.feature, threshold)?,
            Test::Is { value } => write!(f, "{} = {}", self.feature, value)?,
        }
        if self.accepts_missing {
            f.write_str(" (or missing)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub conditions: Vec<Condition>,
    pub label: String,
    pub support: usize,
    pub confidence: f64,
}

impl Rule {
    pub fn matches(&self, fv: &FeatureVector) -> bool {
        self.conditions.iter().all(|c| c.matches(fv))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conditions.is_empty() {
            f.write_str("always")?;
        } else {
            f.write_str("if ")?;
            for (i, c) in self.conditions.iter().enumerate() {
                if i > 0 {
                    f.write_str(" and ")?;
                }
                write!(f, "{c}")?;
            }
        }
        write!(
            f,
            " then {}  [support {}, confidence {:.3}]",
            self.label, self.support, self.confidence
        )
    }
}

/// Flat if-then rules, one per leaf, in depth-first leaf order. Exactly one
/// rule matches any input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
}

impl RuleSet {
    pub fn classify(&self, fv: &FeatureVector) -> Option<(&str, f64)> {
        self.rules
            .iter()
            .find(|r| r.matches(fv))
            .map(|r| (r.label.as_str(), r.confidence))
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, rule) in self.rules.iter().enumerate() {
            writeln!(f, "{:>4}: {rule}", i + 1)?;
        }
        Ok(())
    }
}

pub(super) fn to_rules(tree: &TreeNode) -> RuleSet {
    let mut rules = Vec::new();
    let mut path = Vec::new();
    walk(tree, &mut path, &mut rules);
    RuleSet { rules }
}

fn walk(node: &TreeNode, path: &mut Vec<Condition>, out: &mut Vec<Rule>) {
    match node {
        TreeNode::Leaf {
            label,
            support,
            distribution,
        } => {
            let hits = distribution.get(label).copied().unwrap_or(0);
            out.push(Rule {
                conditions: path.clone(),
                label: label.clone(),
                support: *support,
                confidence: if *support == 0 {
                    1.0
                } else {
                    hits as f64 / *support as f64
                },
            });
        }
        TreeNode::Split {
            feature,
            test,
            children,
            majority_child,
        } => {
            for (i, child) in children.iter().enumerate() {
                let is_default = i == *majority_child;
                let branch = match test {
                    SplitTest::Categorical { values } if is_default => Test::NotIn {
                        values: values
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| *j != i)
                            .map(|(_, v)| v.clone())
                            .collect(),
                    },
                    SplitTest::Categorical { values } => Test::Equals {
                        value: values[i].clone(),
                    },
                    SplitTest::Numeric { threshold } if i == 0 => Test::AtMost { threshold: *threshold },
                    SplitTest::Numeric { threshold } => Test::Above { threshold: *threshold },
                    SplitTest::Boolean => Test::Is { value: i == 1 },
                };
                path.push(Condition {
                    feature: feature.clone(),
                    test: branch,
                    accepts_missing: is_default,
                });
                walk(child, path, out);
                path.pop();
            }
        }
    }
}
