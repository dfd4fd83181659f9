use std::collections::{BTreeMap, BTreeSet};

use super::{Dataset, FeatureKind, FeatureValue, SplitTest, TreeError, TreeNode};

pub const DEFAULT_MIN_EXAMPLES: usize = 10;

// Gains and ratios within this of each other are treated as equal.
const EPS: f64 = 1e-12;

/// Base-2 entropy of a count vector.
pub fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

/// Information gain of a partition; each part is a per-label count vector.
pub fn information_gain(parts: &[Vec<usize>]) -> f64 {
    let width = parts.iter().map(Vec::len).max().unwrap_or(0);
    let mut parent = vec![0usize; width];
    for part in parts {
        for (i, c) in part.iter().enumerate() {
            parent[i] += c;
        }
    }
    let total: usize = parent.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let remainder: f64 = parts
        .iter()
        .map(|p| {
            let n: usize = p.iter().sum();
            n as f64 / total as f64 * entropy(p)
        })
        .sum();
    entropy(&parent) - remainder
}

/// Gain ratio of a partition given as per-part label counts.
pub fn partition_gain_ratio(parts: &[Vec<usize>]) -> Result<f64, TreeError> {
    let sizes: Vec<usize> = parts.iter().map(|p| p.iter().sum()).collect();
    let split_info = entropy(&sizes);
    if split_info <= EPS {
        return Err(TreeError::UndefinedSplit);
    }
    Ok(information_gain(parts) / split_info)
}

/// Gain ratio of splitting `dataset` on `feature` with `test`. Examples whose
/// value is missing or cannot be routed join the largest part.
pub fn gain_ratio(dataset: &Dataset, feature: &str, test: &SplitTest) -> Result<f64, TreeError> {
    if dataset.feature(feature).is_none() {
        return Err(TreeError::UnknownFeature(feature.to_string()));
    }
    let trainer = Trainer::new(dataset, 1);
    let all: Vec<usize> = (0..dataset.len()).collect();
    let parts = trainer.partition(&all, feature, test);
    partition_gain_ratio(&trainer.part_counts(&parts))
}

/// Grows a C4.5 tree. A node becomes a leaf when it holds fewer than
/// `min_examples` examples, is pure, or has no split with positive gain.
pub fn train_c45(dataset: &Dataset, min_examples: usize) -> Result<TreeNode, TreeError> {
    if dataset.is_empty() {
        return Err(TreeError::EmptyDataset);
    }
    let trainer = Trainer::new(dataset, min_examples);
    let all: Vec<usize> = (0..dataset.len()).collect();
    Ok(trainer.grow(&all))
}

struct Trainer<'a> {
    dataset: &'a Dataset,
    label_of: Vec<usize>,
    global: Vec<usize>,
    min_examples: usize,
}

struct Best {
    feature: String,
    test: SplitTest,
    ratio: f64,
}

impl<'a> Trainer<'a> {
    fn new(dataset: &'a Dataset, min_examples: usize) -> Self {
        let labels = dataset.labels();
        let label_of: Vec<usize> = dataset
            .examples()
            .iter()
            .map(|e| labels.iter().position(|l| *l == e.label).expect("label declared"))
            .collect();
        let mut global = vec![0; labels.len()];
        for &l in &label_of {
            global[l] += 1;
        }
        Trainer {
            dataset,
            label_of,
            global,
            min_examples,
        }
    }

    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.global.len()];
        for &i in idx {
            counts[self.label_of[i]] += 1;
        }
        counts
    }

    fn part_counts(&self, parts: &[Vec<usize>]) -> Vec<Vec<usize>> {
        parts.iter().map(|p| self.counts(p)).collect()
    }

    fn value(&self, i: usize, feature: &str) -> Option<&FeatureValue> {
        self.dataset.examples()[i].features.get(feature)
    }

    fn partition(&self, idx: &[usize], feature: &str, test: &SplitTest) -> Vec<Vec<usize>> {
        let arity = match test {
            SplitTest::Categorical { values } => values.len(),
            SplitTest::Numeric { .. } | SplitTest::Boolean => 2,
        };
        let mut parts = vec![Vec::new(); arity];
        let mut missing = Vec::new();
        for &i in idx {
            let branch = match (test, self.value(i, feature)) {
                (SplitTest::Categorical { values }, Some(FeatureValue::Categorical(v))) => {
                    values.iter().position(|x| x == v)
                }
                (SplitTest::Numeric { threshold }, Some(FeatureValue::Numeric(n))) => {
                    Some(if (*n as f64) <= *threshold { 0 } else { 1 })
                }
                (SplitTest::Boolean, Some(FeatureValue::Boolean(b))) => Some(usize::from(*b)),
                _ => None,
            };
            match branch {
                Some(b) => parts[b].push(i),
                None => missing.push(i),
            }
        }
        if !missing.is_empty() {
            let largest = largest_part(&parts);
            parts[largest].extend(missing);
            parts[largest].sort_unstable();
        }
        parts
    }

    fn candidates(&self, idx: &[usize], feature: &str, kind: FeatureKind) -> Vec<SplitTest> {
        match kind {
            FeatureKind::Categorical => {
                let values: BTreeSet<&str> = idx
                    .iter()
                    .filter_map(|&i| match self.value(i, feature) {
                        Some(FeatureValue::Categorical(v)) => Some(v.as_str()),
                        _ => None,
                    })
                    .collect();
                if values.len() < 2 {
                    return Vec::new();
                }
                vec![SplitTest::Categorical {
                    values: values.into_iter().map(str::to_string).collect(),
                }]
            }
            FeatureKind::Numeric => {
                let values: BTreeSet<i64> = idx
                    .iter()
                    .filter_map(|&i| match self.value(i, feature) {
                        Some(FeatureValue::Numeric(n)) => Some(*n),
                        _ => None,
                    })
                    .collect();
                let values: Vec<i64> = values.into_iter().collect();
                values
                    .windows(2)
                    .map(|w| SplitTest::Numeric {
                        threshold: (w[0] as f64 + w[1] as f64) / 2.0,
                    })
                    .collect()
            }
            FeatureKind::Boolean => {
                let mut seen = [false; 2];
                for &i in idx {
                    if let Some(FeatureValue::Boolean(b)) = self.value(i, feature) {
                        seen[usize::from(*b)] = true;
                    }
                }
                if seen[0] && seen[1] {
                    vec![SplitTest::Boolean]
                } else {
                    Vec::new()
                }
            }
        }
    }

    fn best_split(&self, idx: &[usize]) -> Option<Best> {
        let mut best: Option<Best> = None;
        for spec in self.dataset.features() {
            for test in self.candidates(idx, &spec.name, spec.kind) {
                let parts = self.partition(idx, &spec.name, &test);
                let counts = self.part_counts(&parts);
                let gain = information_gain(&counts);
                if gain <= EPS {
                    continue;
                }
                let Ok(ratio) = partition_gain_ratio(&counts) else {
                    continue;
                };
                if best.as_ref().is_none_or(|b| ratio > b.ratio + EPS) {
                    best = Some(Best {
                        feature: spec.name.clone(),
                        test,
                        ratio,
                    });
                }
            }
        }
        best
    }

    fn leaf(&self, idx: &[usize]) -> TreeNode {
        let counts = self.counts(idx);
        let labels = self.dataset.labels();
        let winner = (0..counts.len())
            .max_by(|&a, &b| {
                counts[a]
                    .cmp(&counts[b])
                    .then(self.global[a].cmp(&self.global[b]))
                    .then_with(|| labels[b].cmp(&labels[a]))
            })
            .expect("label set nonempty");
        let distribution: BTreeMap<String, usize> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(l, &c)| (labels[l].clone(), c))
            .collect();
        TreeNode::Leaf {
            label: labels[winner].clone(),
            support: idx.len(),
            distribution,
        }
    }

    fn grow(&self, idx: &[usize]) -> TreeNode {
        let counts = self.counts(idx);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if idx.len() < self.min_examples || pure {
            return self.leaf(idx);
        }
        let Some(best) = self.best_split(idx) else {
            return self.leaf(idx);
        };
        let parts = self.partition(idx, &best.feature, &best.test);
        let majority_child = largest_part(&parts);
        let children = parts
            .iter()
            .map(|p| {
                if p.is_empty() {
                    // an empty side inherits the parent's majority
                    self.leaf(idx)
                } else {
                    self.grow(p)
                }
            })
            .collect();
        TreeNode::Split {
            feature: best.feature,
            test: best.test,
            children,
            majority_child,
        }
    }
}

fn largest_part(parts: &[Vec<usize>]) -> usize {
    parts
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
        .map_or(0, |(i, _)| i)
}
