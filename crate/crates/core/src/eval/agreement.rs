use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::EvalError;

const EPS: f64 = 1e-12;

/// Cohen's kappa over paired labels from two raters.
pub fn cohens_kappa<L: Ord>(pairs: &[(L, L)]) -> Result<f64, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::InvalidTable("no rating pairs".into()));
    }
    let n = pairs.len() as f64;
    let mut a: BTreeMap<&L, f64> = BTreeMap::new();
    let mut b: BTreeMap<&L, f64> = BTreeMap::new();
    let mut agree = 0.0;
    for (x, y) in pairs {
        *a.entry(x).or_default() += 1.0;
        *b.entry(y).or_default() += 1.0;
        if x == y {
            agree += 1.0;
        }
    }
    let p_o = agree / n;
    let p_e: f64 = a
        .iter()
        .map(|(l, ca)| ca / n * b.get(l).copied().unwrap_or(0.0) / n)
        .sum();
    chance_corrected(p_o, p_e)
}

fn chance_corrected(observed: f64, expected: f64) -> Result<f64, EvalError> {
    if (1.0 - expected).abs() < EPS {
        if (1.0 - observed).abs() < EPS {
            return Ok(1.0);
        }
        return Err(EvalError::DegenerateAgreement { observed });
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Items by categories matrix of how many raters chose each category, with
/// the same number of raters on every item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementTable {
    counts: Vec<Vec<u64>>,
    raters: u64,
}

impl AgreementTable {
    pub fn new(counts: Vec<Vec<u64>>) -> Result<Self, EvalError> {
        let first = counts
            .first()
            .ok_or_else(|| EvalError::InvalidTable("no items".into()))?;
        let width = first.len();
        let raters: u64 = first.iter().sum();
        if raters < 2 {
            return Err(EvalError::InvalidTable(
                "at least two raters per item are required".into(),
            ));
        }
        for (i, row) in counts.iter().enumerate() {
            if row.len() != width {
                return Err(EvalError::InvalidTable(format!(
                    "item {i} has {} categories, expected {width}",
                    row.len()
                )));
            }
            let sum: u64 = row.iter().sum();
            if sum != raters {
                return Err(EvalError::InvalidTable(format!(
                    "item {i} has {sum} ratings, expected {raters}"
                )));
            }
        }
        Ok(AgreementTable { counts, raters })
    }

    /// One row per item from the labels each rater chose; categories are the
    /// sorted union of all labels.
    pub fn from_ratings<L: Ord + Clone>(items: &[Vec<L>]) -> Result<Self, EvalError> {
        let cats: Vec<L> = items
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let counts = items
            .iter()
            .map(|labels| {
                cats.iter()
                    .map(|c| labels.iter().filter(|l| *l == c).count() as u64)
                    .collect()
            })
            .collect();
        Self::new(counts)
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn raters(&self) -> u64 {
        self.raters
    }

    pub fn items(&self) -> usize {
        self.counts.len()
    }
}

/// Fleiss' kappa for a fixed number of raters per item.
pub fn fleiss_kappa(table: &AgreementTable) -> Result<f64, EvalError> {
    let n = table.raters as f64;
    let items = table.counts.len() as f64;
    let width = table.counts[0].len();
    let p_bar = table
        .counts
        .iter()
        .map(|row| row.iter().map(|&c| (c * c.saturating_sub(1)) as f64).sum::<f64>() / (n * (n - 1.0)))
        .sum::<f64>()
        / items;
    let p_e: f64 = (0..width)
        .map(|j| {
            let p_j = table.counts.iter().map(|r| r[j]).sum::<u64>() as f64 / (items * n);
            p_j * p_j
        })
        .sum();
    chance_corrected(p_bar, p_e)
}
