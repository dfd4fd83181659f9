use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use log::{info, warn};
use rayon::prelude::*;
use walkdir::WalkDir;

use super::{CommentRecord, CorpusError, CorpusSummary, FailedProject, Origin, ProjectRef, ProjectSummary, Store};
use crate::category::bootstrap_category;
use crate::nlp::analyze;
use crate::pipeline::segment;
use crate::syntax::{parse_bytes, FileId, Language, ParseError};
use crate::target::bootstrap_target;
use crate::tree::TreeModel;

/// Environment variable naming the clone cache directory.
pub const CACHE_ENV: &str = "COMMENT_LENS_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".comment-lens-cache";

#[derive(Debug, Clone)]
pub struct IngestOptions<'a> {
    pub cache_dir: PathBuf,
    /// Extent model; the merge rule when absent.
    pub extent_model: Option<&'a TreeModel>,
    /// Attach heuristic target and category labels to every record.
    pub bootstrap_labels: bool,
}

impl Default for IngestOptions<'_> {
    fn default() -> Self {
        IngestOptions {
            cache_dir: std::env::var_os(CACHE_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
            extent_model: None,
            bootstrap_labels: false,
        }
    }
}

fn git(args: &[&str], project: &str) -> Result<(), CorpusError> {
    let out = Command::new("git")
        .args(args)
        .env("GIT_TERMINAL_PROMPT", "0")
        .output()
        .map_err(|e| CorpusError::FetchFailed {
            project: project.to_string(),
            message: format!("cannot run git: {e}"),
        })?;
    if out.status.success() {
        Ok(())
    } else {
        Err(CorpusError::FetchFailed {
            project: project.to_string(),
            message: String::from_utf8_lossy(&out.stderr).trim().to_string(),
        })
    }
}

/// Clones a remote project into the cache, or reuses an earlier clone.
pub fn fetch_project(project: &ProjectRef, cache_dir: &Path) -> Result<PathBuf, CorpusError> {
    let url = match &project.origin {
        Origin::Local(p) => {
            return if p.is_dir() {
                Ok(p.clone())
            } else {
                Err(CorpusError::FetchFailed {
                    project: project.name.clone(),
                    message: format!("{} is not a directory", p.display()),
                })
            }
        }
        Origin::Remote(url) => url,
    };
    let dest = cache_dir.join(&project.name);
    let dest_s = dest.to_string_lossy().to_string();
    if !dest.join(".git").is_dir() {
        fs::create_dir_all(cache_dir).map_err(CorpusError::io(cache_dir))?;
        match &project.revision {
            None => git(&["clone", "--quiet", "--depth", "1", url, &dest_s], &project.name)?,
            Some(_) => git(&["clone", "--quiet", url, &dest_s], &project.name)?,
        }
    }
    if let Some(rev) = &project.revision {
        git(&["-C", &dest_s, "checkout", "--quiet", rev], &project.name)?;
    }
    Ok(dest)
}

fn source_files(root: &Path, language: Option<Language>) -> Vec<(PathBuf, Language)> {
    WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'))
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .filter_map(|e| {
            let lang = Language::from_extension(e.path().extension()?.to_str()?)?;
            language.is_none_or(|l| l == lang).then(|| (e.into_path(), lang))
        })
        .collect()
}

enum FileOutcome {
    Parsed {
        sloc: usize,
        comments: usize,
        records: Vec<CommentRecord>,
    },
    Unparsable,
    TooLarge,
}

fn process_file(
    project: &str,
    root: &Path,
    path: &Path,
    language: Language,
    id: usize,
    opts: &IngestOptions<'_>,
) -> Result<FileOutcome, CorpusError> {
    let bytes = fs::read(path).map_err(CorpusError::io(path))?;
    let file = match parse_bytes(&bytes, language, FileId(id as u32)) {
        Ok(f) => f,
        Err(ParseError::TooLarge(_)) => return Ok(FileOutcome::TooLarge),
        Err(ParseError::Unparsable(msg)) => {
            warn!("{}: skipped, {msg}", path.display());
            return Ok(FileOutcome::Unparsable);
        }
    };
    let rel = path
        .strip_prefix(root)
        .unwrap_or(path)
        .components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/");
    let records = segment(&file, opts.extent_model)?
        .iter()
        .map(|e| {
            let mut r = CommentRecord::from_extent(project, &rel, &file, e);
            if opts.bootstrap_labels {
                let target = bootstrap_target(&file, e);
                r.target = target;
                r.category = Some(bootstrap_category(&file, e, &analyze(&e.text), target));
            }
            r
        })
        .collect();
    Ok(FileOutcome::Parsed {
        sloc: file.line_count(),
        comments: file.comments.len(),
        records,
    })
}

fn ingest_project(
    project: &ProjectRef,
    store: &Store,
    opts: &IngestOptions<'_>,
) -> Result<ProjectSummary, CorpusError> {
    let root = fetch_project(project, &opts.cache_dir)?;
    let root = root.canonicalize().map_err(CorpusError::io(&root))?;
    let files = source_files(&root, project.language);
    let outcomes = files
        .par_iter()
        .enumerate()
        .map(|(i, (path, lang))| process_file(&project.name, &root, path, *lang, i, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut summary = ProjectSummary {
        name: project.name.clone(),
        origin: project.origin.to_string(),
        revision: project.revision.clone(),
        root,
        files: 0,
        sloc: 0,
        comments: 0,
        extents: 0,
        unparsable: 0,
        skipped: 0,
    };
    let mut records = Vec::new();
    for o in outcomes {
        match o {
            FileOutcome::Parsed {
                sloc,
                comments,
                records: r,
            } => {
                summary.files += 1;
                summary.sloc += sloc;
                summary.comments += comments;
                summary.extents += r.len();
                records.extend(r);
            }
            FileOutcome::Unparsable => summary.unparsable += 1,
            FileOutcome::TooLarge => summary.skipped += 1,
        }
    }
    store.write_project(&project.name, &records)?;
    info!(
        "{}: {} files, {} lines, {} comments, {} extents",
        summary.name, summary.files, summary.sloc, summary.comments, summary.extents
    );
    Ok(summary)
}

/// Processes every project into the store. A project that cannot be fetched
/// is recorded as failed and the run continues; other errors abort it.
pub fn ingest(projects: &[ProjectRef], store: &Store, opts: &IngestOptions<'_>) -> Result<CorpusSummary, CorpusError> {
    let mut summary = CorpusSummary::default();
    for p in projects {
        match ingest_project(p, store, opts) {
            Ok(s) => summary.projects.push(s),
            Err(e @ CorpusError::FetchFailed { .. }) => {
                warn!("{e}");
                summary.failed.push(FailedProject {
                    name: p.name.clone(),
                    error: e.to_string(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    store.write_summary(&summary)?;
    Ok(summary)
}
