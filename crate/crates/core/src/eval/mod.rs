//! Classifier scores, inter-annotator agreement and distribution distance.

mod agreement;
mod kl;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use agreement::{cohens_kappa, fleiss_kappa, AgreementTable};
pub use kl::{kl_divergence, kl_from_counts, smoothed_distribution, DEFAULT_SMOOTHING};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("agreement is undefined: expected agreement is 1 but observed agreement is {observed}")]
    DegenerateAgreement { observed: f64 },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid agreement table: {0}")]
    InvalidTable(String),
    #[error("label `{0}` is not in the label set")]
    UnknownLabel(String),
}

/// Precision, recall and their harmonic mean; each is 0 when undefined.
pub fn precision_recall_f1(tp: u64, predicted: u64, actual: u64) -> (f64, f64, f64) {
    let ratio = |n: u64, d: u64| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    let p = ratio(tp, predicted);
    let r = ratio(tp, actual);
    let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f1)
}

/// Counts of (actual, predicted) pairs; rows are actual labels, columns
/// predicted ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelScore {
    pub label: String,
    pub tp: u64,
    pub predicted: u64,
    pub actual: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        ConfusionMatrix {
            labels,
            counts: vec![vec![0; n]; n],
        }
    }

    /// Builds a matrix from explicit counts, rows actual.
    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, EvalError> {
        if counts.len() != labels.len() || counts.iter().any(|r| r.len() != labels.len()) {
            return Err(EvalError::InvalidTable("counts must be square over the labels".into()));
        }
        Ok(ConfusionMatrix { labels, counts })
    }

    pub fn from_pairs<'a>(
        labels: Vec<String>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, EvalError> {
        let mut m = ConfusionMatrix::new(labels);
        for (actual, predicted) in pairs {
            m.add(actual, predicted)?;
        }
        Ok(m)
    }

    fn index(&self, label: &str) -> Result<usize, EvalError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| EvalError::UnknownLabel(label.to_string()))
    }

    pub fn add(&mut self, actual: &str, predicted: &str) -> Result<(), EvalError> {
        let (a, p) = (self.index(actual)?, self.index(predicted)?);
        self.counts[a][p] += 1;
        Ok(())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn get(&self, actual: usize, predicted: usize) -> u64 {
        self.counts[actual][predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn actual_count(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn predicted_count(&self, j: usize) -> u64 {
        self.counts.iter().map(|r| r[j]).sum()
    }

    pub fn accuracy(&self) -> Result<f64, EvalError> {
        match self.total() {
            0 => Err(EvalError::EmptyMatrix),
            t => Ok(self.trace() as f64 / t as f64),
        }
    }

    pub fn scores(&self) -> Vec<LabelScore> {
        (0..self.labels.len())
            .map(|i| {
                let (tp, predicted, actual) = (self.counts[i][i], self.predicted_count(i), self.actual_count(i));
                let (precision, recall, f1) = precision_recall_f1(tp, predicted, actual);
                LabelScore {
                    label: self.labels[i].clone(),
                    tp,
                    predicted,
                    actual,
                    precision,
                    recall,
                    f1,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub matrix: ConfusionMatrix,
    pub total: u64,
    pub accuracy: f64,
    pub scores: Vec<LabelScore>,
}

impl EvalReport {
    pub fn new(matrix: ConfusionMatrix) -> Result<Self, EvalError> {
        Ok(EvalReport {
            total: matrix.total(),
            accuracy: matrix.accuracy()?,
            scores: matrix.scores(),
            matrix,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text: the matrix with row totals and predicted totals, then
    /// one precision/recall/F1 line per label.
    pub fn to_text(&self) -> String {
        let m = &self.matrix;
        let n = m.labels.len();
        let name_w = m
            .labels
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max("Predicted".len());
        let cell_w = m.labels.iter().map(|l| l.len()).max().unwrap_or(0).max(6);
        let mut out = String::new();
        let _ = write!(out, "{:<name_w$}", "");
        for l in &m.labels {
            let _ = write!(out, " {l:>cell_w$}");
        }
        let _ = writeln!(out, " {:>cell_w$}", "Actual");
        for i in 0..n {
            let _ = write!(out, "{:<name_w$}", m.labels[i]);
            for j in 0..n {
                let _ = write!(out, " {:>cell_w$}", m.counts[i][j]);
            }
            let _ = writeln!(out, " {:>cell_w$}", m.actual_count(i));
        }
        let _ = write!(out, "{:<name_w$}", "Predicted");
        for j in 0..n {
            let _ = write!(out, " {:>cell_w$}", m.predicted_count(j));
        }
        let _ = writeln!(out, " {:>cell_w$}", m.total());
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<name_w$} {:>16} {:>16} {:>6}",
            "Label", "Precision", "Recall", "F1"
        );
        for s in &self.scores {
            let p = format!("{:.2} ({}/{})", s.precision, s.tp, s.predicted);
            let r = format!("{:.2} ({}/{})", s.recall, s.tp, s.actual);
            let _ = writeln!(out, "{:<name_w$} {p:>16} {r:>16} {:>6.2}", s.label, s.f1);
        }
        let _ = writeln!(out, "accuracy {:.3} ({}/{})", self.accuracy, m.trace(), m.total());
        out
    }
}

/// Count of each label in `labels`, in the order of `order`; labels outside
/// `order` are rejected.
pub fn label_counts<'a>(order: &[String], labels: impl IntoIterator<Item = &'a str>) -> Result<Vec<u64>, EvalError> {
    let index: HashMap<&str, usize> = order.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut counts = vec![0; order.len()];
    for l in labels {
        let i = index.get(l).ok_or_else(|| EvalError::UnknownLabel(l.to_string()))?;
        counts[*i] += 1;
    }
    Ok(counts)
}
