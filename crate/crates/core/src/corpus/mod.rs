//! Project manifests, the on-disk record store, ingestion, sampling and
//! mining over classified comments.

mod ingest;
mod mining;
mod sample;
mod store;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::CategoryLabel;
use crate::extent::CommentExtent;
use crate::syntax::{Language, ParsedFile, SourceSpan};
use crate::target::TargetLabel;
use crate::tree::ModelError;

pub use ingest::{fetch_project, ingest, IngestOptions, CACHE_ENV, DEFAULT_CACHE_DIR};
pub use mining::{
    category_stats, classify_records, grep_classified, grep_records, mine_verb_noun, project_category_stats,
    verb_noun_counts, GrepHit, PairCount, ProjectStats,
};
pub use sample::{sample_comments, Sample, SampleSpec, DEFAULT_PER_FILE_CAP};
pub use store::{read_records, write_records, CorpusSummary, FailedProject, ProjectSummary, Store};

/// Lines of context kept on each side of a comment.
pub const SNIPPET_CONTEXT: usize = 4;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("fetching `{project}` failed: {message}")]
    FetchFailed { project: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Json {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("no project `{0}` in the store")]
    UnknownProject(String),
    #[error("{path}: no comment at line {line} (source changed since ingest?)")]
    MissingExtent { path: PathBuf, line: usize },
    #[error("{path}: {message}")]
    Unparsable { path: PathBuf, message: String },
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl CorpusError {
    pub(crate) fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
        move |source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "location", rename_all = "lowercase")]
pub enum Origin {
    Local(PathBuf),
    Remote(String),
}

impl Origin {
    pub fn parse(s: &str, base: &Path) -> Origin {
        let remote = s.contains("://") || s.starts_with("git@") || s.ends_with(".git");
        if remote {
            Origin::Remote(s.to_string())
        } else {
            let p = Path::new(s);
            Origin::Local(if p.is_absolute() { p.to_path_buf() } else { base.join(p) })
        }
    }
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Origin::Local(p) => write!(f, "{}", p.display()),
            Origin::Remote(u) => f.write_str(u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectRef {
    pub name: String,
    pub origin: Origin,
    /// Restricts ingestion to one language; both when absent.
    pub language: Option<Language>,
    pub revision: Option<String>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "."
        && name != ".."
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

/// Parses `name<TAB>origin[<TAB>revision]` lines. Blank lines and lines
/// starting with `#` are skipped; relative local paths resolve against
/// `base`.
pub fn parse_manifest(text: &str, base: &Path, language: Option<Language>) -> Result<Vec<ProjectRef>, CorpusError> {
    let mut projects: Vec<ProjectRef> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let err = |message: String| CorpusError::Manifest { line: i + 1, message };
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if !(2..=3).contains(&cols.len()) || cols[1].is_empty() {
            return Err(err("expected name<TAB>origin[<TAB>revision]".into()));
        }
        let name = cols[0];
        if !valid_name(name) {
            return Err(err(format!(
                "project name `{name}` may only use letters, digits, `-`, `_` and `.`"
            )));
        }
        if projects.iter().any(|p| p.name == name) {
            return Err(err(format!("duplicate project name `{name}`")));
        }
        projects.push(ProjectRef {
            name: name.to_string(),
            origin: Origin::parse(cols[1], base),
            language,
            revision: cols.get(2).filter(|r| !r.is_empty()).map(|r| r.to_string()),
        });
    }
    Ok(projects)
}

/// Source lines around a comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snippet {
    /// 1-based line number of `lines[0]`.
    pub first_line: usize,
    pub lines: Vec<String>,
}

impl Snippet {
    pub fn around(file: &ParsedFile, span: &SourceSpan) -> Snippet {
        let first_line = span.start_line.saturating_sub(SNIPPET_CONTEXT).max(1);
        let last_line = (span.end_line + SNIPPET_CONTEXT).min(file.line_count());
        let lines = (first_line..=last_line)
            .map(|l| file.line_text(l).unwrap_or_default().to_string())
            .collect();
        Snippet { first_line, lines }
    }
}

/// One comment extent with its location, optional labels and context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommentRecord {
    pub id: String,
    pub project: String,
    /// Path relative to the project root, `/`-separated.
    pub path: String,
    pub language: Language,
    pub span: SourceSpan,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_span: Option<SourceSpan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<CategoryLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub snippet: Snippet,
}

impl CommentRecord {
    pub fn from_extent(project: &str, path: &str, file: &ParsedFile, extent: &CommentExtent) -> CommentRecord {
        CommentRecord {
            id: format!("{project}:{path}:{}:{}", extent.span.start_line, extent.span.start_col),
            project: project.to_string(),
            path: path.to_string(),
            language: file.language,
            span: extent.span,
            text: extent.text.clone(),
            target: None,
            target_span: None,
            category: None,
            annotator: None,
            elapsed_ms: None,
            snippet: Snippet::around(file, &extent.span),
        }
    }

    /// Key grouping records of one source file.
    pub fn file_key(&self) -> (&str, &str) {
        (&self.project, &self.path)
    }
}
