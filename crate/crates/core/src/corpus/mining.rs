use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CommentRecord, CorpusError, Store};
use crate::category::CategoryLabel;
use crate::extent::extent_at;
use crate::nlp::{analyze, extract_verb_noun_pairs, lemma};
use crate::pipeline::{classify_extent, Models};
use crate::syntax::{parse_bytes, FileId, ParseError};

/// Runs target and category classification on each record, re-reading its
/// source file. Output order and length match the input.
pub fn classify_records(
    store: &Store,
    records: &[CommentRecord],
    models: &Models,
) -> Result<Vec<CommentRecord>, CorpusError> {
    let summary = store.summary()?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<(&str, &str), usize> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        let g = *index.entry(r.file_key()).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    let classified = groups
        .par_iter()
        .map(|members| {
            let first = &records[members[0]];
            let root = &summary
                .project(&first.project)
                .ok_or_else(|| CorpusError::UnknownProject(first.project.clone()))?
                .root;
            let path = root.join(&first.path);
            let bytes = fs::read(&path).map_err(CorpusError::io(&path))?;
            let file = parse_bytes(&bytes, first.language, FileId(0)).map_err(|e| CorpusError::Unparsable {
                path: path.clone(),
                message: match e {
                    ParseError::Unparsable(m) => m,
                    other => other.to_string(),
                },
            })?;
            members
                .iter()
                .map(|&i| {
                    let mut r = records[i].clone();
                    let extent = extent_at(&file, &r.span).ok_or_else(|| CorpusError::MissingExtent {
                        path: path.clone(),
                        line: r.span.start_line,
                    })?;
                    let c = classify_extent(&file, &extent, models)?;
                    r.target = Some(c.target.label);
                    r.target_span = c.target.span;
                    r.category = Some(c.category);
                    Ok((i, r))
                })
                .collect::<Result<Vec<_>, CorpusError>>()
        })
        .collect::<Result<Vec<_>, CorpusError>>()?;
    let mut out: Vec<Option<CommentRecord>> = vec![None; records.len()];
    for (i, r) in classified.into_iter().flatten() {
        out[i] = Some(r);
    }
    Ok(out.into_iter().map(|r| r.expect("every record classified")).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectStats {
    pub project: String,
    pub comments: usize,
    pub counts: BTreeMap<CategoryLabel, usize>,
    pub ratios: BTreeMap<CategoryLabel, f64>,
}

/// Share of each category per project over records that carry a category,
/// most commented project first. Projects without such records are left out.
pub fn category_stats(records: &[CommentRecord]) -> Vec<ProjectStats> {
    let mut by_project: BTreeMap<&str, BTreeMap<CategoryLabel, usize>> = BTreeMap::new();
    for r in records {
        if let Some(c) = r.category {
            *by_project.entry(&r.project).or_default().entry(c).or_insert(0) += 1;
        }
    }
    let mut stats: Vec<ProjectStats> = by_project
        .into_iter()
        .map(|(project, found)| {
            let comments: usize = found.values().sum();
            let counts: BTreeMap<CategoryLabel, usize> = CategoryLabel::ALL
                .iter()
                .map(|l| (*l, found.get(l).copied().unwrap_or(0)))
                .collect();
            let ratios = counts.iter().map(|(l, n)| (*l, *n as f64 / comments as f64)).collect();
            ProjectStats {
                project: project.to_string(),
                comments,
                counts,
                ratios,
            }
        })
        .collect();
    stats.sort_by(|a, b| b.comments.cmp(&a.comments).then_with(|| a.project.cmp(&b.project)));
    stats
}

pub fn project_category_stats(store: &Store, models: &Models) -> Result<Vec<ProjectStats>, CorpusError> {
    Ok(category_stats(&classify_records(store, &store.all_records()?, models)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCount {
    pub verb: String,
    pub noun: String,
    /// Projects with at least one extent containing the pair.
    pub projects: usize,
}

/// Verb and noun pairs in extents of `category`, counted once per project,
/// most widespread first and ties in lexicographic order.
pub fn verb_noun_counts(records: &[CommentRecord], category: CategoryLabel) -> Vec<PairCount> {
    let mut seen: BTreeSet<(&str, (String, String))> = BTreeSet::new();
    for r in records.iter().filter(|r| r.category == Some(category)) {
        for pair in extract_verb_noun_pairs(&analyze(&r.text)) {
            seen.insert((r.project.as_str(), pair));
        }
    }
    let mut counts: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (_, pair) in seen {
        *counts.entry(pair).or_insert(0) += 1;
    }
    let mut ranked: Vec<PairCount> = counts
        .into_iter()
        .map(|((verb, noun), projects)| PairCount { verb, noun, projects })
        .collect();
    ranked.sort_by(|a, b| {
        b.projects
            .cmp(&a.projects)
            .then_with(|| (&a.verb, &a.noun).cmp(&(&b.verb, &b.noun)))
    });
    ranked
}

pub fn mine_verb_noun(store: &Store, models: &Models, category: CategoryLabel) -> Result<Vec<PairCount>, CorpusError> {
    Ok(verb_noun_counts(
        &classify_records(store, &store.all_records()?, models)?,
        category,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrepHit {
    pub record: CommentRecord,
    /// Source text of the resolved target.
    pub target_text: Option<String>,
}

fn word_keys(word: &str) -> (String, Option<String>) {
    let lower = word.to_lowercase();
    let lemma = analyze(word).first_word().map(lemma);
    (lower, lemma)
}

/// Classified records of `category` whose text contains every word, compared
/// case-insensitively on surface form or lemma.
pub fn grep_records<'a>(
    records: &'a [CommentRecord],
    category: CategoryLabel,
    words: &[String],
) -> Vec<&'a CommentRecord> {
    if words.is_empty() {
        return Vec::new();
    }
    let wanted: Vec<(String, Option<String>)> = words.iter().map(|w| word_keys(w)).collect();
    records
        .iter()
        .filter(|r| r.category == Some(category))
        .filter(|r| {
            let tagged = analyze(&r.text);
            let keys: Vec<(String, String)> = tagged.tokens.iter().map(|t| (t.lower.clone(), lemma(t))).collect();
            wanted.iter().all(|(lower, lem)| {
                keys.iter()
                    .any(|(l, m)| l == lower || lem.as_ref().is_some_and(|lem| lem == m))
            })
        })
        .collect()
}

pub fn grep_classified(
    store: &Store,
    models: &Models,
    category: CategoryLabel,
    words: &[String],
) -> Result<Vec<GrepHit>, CorpusError> {
    let classified = classify_records(store, &store.all_records()?, models)?;
    let mut sources: HashMap<String, String> = HashMap::new();
    grep_records(&classified, category, words)
        .into_iter()
        .map(|r| {
            let target_text = match &r.target_span {
                None => None,
                Some(span) => {
                    let path = store.source_path(r)?;
                    let key = path.to_string_lossy().to_string();
                    if !sources.contains_key(&key) {
                        let bytes = fs::read(&path).map_err(CorpusError::io(&path))?;
                        sources.insert(key.clone(), String::from_utf8_lossy(&bytes).into_owned());
                    }
                    let text = &sources[&key];
                    Some(text.chars().skip(span.start_offset).take(span.len()).collect())
                }
            };
            Ok(GrepHit {
                record: r.clone(),
                target_text,
            })
        })
        .collect()
}
