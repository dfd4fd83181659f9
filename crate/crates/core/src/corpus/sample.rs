use std::collections::HashMap;

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CommentRecord, CorpusError};

pub const DEFAULT_PER_FILE_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub size: usize,
    pub per_file_cap: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub records: Vec<CommentRecord>,
    pub spec: SampleSpec,
    /// Fewer records were available than requested.
    pub insufficient: bool,
}

/// Shuffles all records with the seeded generator and keeps the first
/// `size`, skipping any record whose file already has `per_file_cap` picks.
/// The result does not depend on the order of `records`.
pub fn sample_comments(records: &[CommentRecord], spec: SampleSpec) -> Result<Sample, CorpusError> {
    if spec.per_file_cap == 0 {
        return Err(CorpusError::InvalidSample("per-file cap must be at least 1".into()));
    }
    let mut order: Vec<&CommentRecord> = records.iter().collect();
    order.sort_by(|a, b| (&a.project, &a.path, a.span.start_offset).cmp(&(&b.project, &b.path, b.span.start_offset)));
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));

    let mut per_file: HashMap<(&str, &str), usize> = HashMap::new();
    let mut picked = Vec::with_capacity(spec.size);
    for r in order {
        if picked.len() == spec.size {
            break;
        }
        let n = per_file.entry(r.file_key()).or_insert(0);
        if *n < spec.per_file_cap {
            *n += 1;
            picked.push(r.clone());
        }
    }
    let insufficient = picked.len() < spec.size;
    if insufficient {
        warn!("only {} of {} requested comments available", picked.len(), spec.size);
    }
    Ok(Sample {
        records: picked,
        spec,
        insufficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Snippet;
    use crate::syntax::{Language, SourceSpan};

    fn record(path: &str, line: usize) -> CommentRecord {
        CommentRecord {
            id: format!("p:{path}:{line}:0"),
            project: "p".into(),
            path: path.into(),
            language: Language::Java,
            span: SourceSpan {
                start_offset: line * 10,
                end_offset: line * 10 + 5,
                start_line: line,
                end_line: line,
                start_col: 0,
                end_col: 5,
            },
            text: format!("c{line}"),
            target: None,
            target_span: None,
            category: None,
            annotator: None,
            elapsed_ms: None,
            snippet: Snippet {
                first_line: line,
                lines: vec![],
            },
        }
    }

    fn spec(size: usize, seed: u64) -> SampleSpec {
        SampleSpec {
            size,
            per_file_cap: DEFAULT_PER_FILE_CAP,
            seed,
        }
    }

    #[test]
    fn cap_applies_per_file() {
        let recs: Vec<_> = (1..=5).map(|l| record("A.java", l)).collect();
        let s = sample_comments(&recs, spec(5, 7)).unwrap();
        assert_eq!(s.records.len(), 3);
        assert!(s.insufficient);
    }

    #[test]
    fn zero_size_and_determinism() {
        let recs: Vec<_> = (1..=40).map(|l| record(&format!("F{}.java", l % 7), l)).collect();
        assert!(sample_comments(&recs, spec(0, 1)).unwrap().records.is_empty());
        let a = sample_comments(&recs, spec(10, 42)).unwrap();
        let mut reversed = recs.clone();
        reversed.reverse();
        let b = sample_comments(&reversed, spec(10, 42)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.records, sample_comments(&recs, spec(10, 43)).unwrap().records);
    }

    #[test]
    fn zero_cap_rejected() {
        let s = SampleSpec {
            size: 1,
            per_file_cap: 0,
            seed: 0,
        };
        assert!(sample_comments(&[], s).is_err());
    }
}
