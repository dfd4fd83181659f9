use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CommentRecord, CorpusError};

const SUMMARY_FILE: &str = "summary.json";
const RECORDS_FILE: &str = "records.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub name: String,
    pub origin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revision: Option<String>,
    /// Directory the files were read from.
    pub root: PathBuf,
    pub files: usize,
    /// Physical lines of all parsed files.
    pub sloc: usize,
    /// Comment tokens.
    pub comments: usize,
    pub extents: usize,
    pub unparsable: usize,
    /// Files over the size limit.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedProject {
    pub name: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub projects: Vec<ProjectSummary>,
    #[serde(default)]
    pub failed: Vec<FailedProject>,
}

impl CorpusSummary {
    pub fn project(&self, name: &str) -> Option<&ProjectSummary> {
        self.projects.iter().find(|p| p.name == name)
    }
}

/// A corpus directory: `<project>/records.jsonl` per project plus
/// `summary.json`.
#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn create(root: &Path) -> Result<Store, CorpusError> {
        fs::create_dir_all(root).map_err(CorpusError::io(root))?;
        Ok(Store {
            root: root.to_path_buf(),
        })
    }

    pub fn open(root: &Path) -> Result<Store, CorpusError> {
        let summary = root.join(SUMMARY_FILE);
        if !summary.is_file() {
            return Err(CorpusError::Io {
                path: summary,
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a corpus store"),
            });
        }
        Ok(Store {
            root: root.to_path_buf(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn summary(&self) -> Result<CorpusSummary, CorpusError> {
        let path = self.root.join(SUMMARY_FILE);
        let text = fs::read_to_string(&path).map_err(CorpusError::io(&path))?;
        serde_json::from_str(&text).map_err(|source| CorpusError::Json { path, line: 1, source })
    }

    pub fn write_summary(&self, summary: &CorpusSummary) -> Result<(), CorpusError> {
        let path = self.root.join(SUMMARY_FILE);
        let text = serde_json::to_string_pretty(summary).expect("summary serializes") + "\n";
        fs::write(&path, text).map_err(CorpusError::io(&path))
    }

    pub fn records_path(&self, project: &str) -> PathBuf {
        self.root.join(project).join(RECORDS_FILE)
    }

    pub fn records(&self, project: &str) -> Result<Vec<CommentRecord>, CorpusError> {
        let path = self.records_path(project);
        if !path.is_file() {
            return Err(CorpusError::UnknownProject(project.to_string()));
        }
        read_records(&path)
    }

    /// Records of every project, in summary order.
    pub fn all_records(&self) -> Result<Vec<CommentRecord>, CorpusError> {
        let mut out = Vec::new();
        for p in self.summary()?.projects {
            out.extend(self.records(&p.name)?);
        }
        Ok(out)
    }

    pub fn write_project(&self, project: &str, records: &[CommentRecord]) -> Result<(), CorpusError> {
        let dir = self.root.join(project);
        fs::create_dir_all(&dir).map_err(CorpusError::io(&dir))?;
        write_records(&self.records_path(project), records)
    }

    /// Absolute path of a record's source file.
    pub fn source_path(&self, record: &CommentRecord) -> Result<PathBuf, CorpusError> {
        let summary = self.summary()?;
        let project = summary
            .project(&record.project)
            .ok_or_else(|| CorpusError::UnknownProject(record.project.clone()))?;
        Ok(project.root.join(&record.path))
    }
}

/// Reads newline-delimited records; blank lines are skipped.
pub fn read_records(path: &Path) -> Result<Vec<CommentRecord>, CorpusError> {
    let file = fs::File::open(path).map_err(CorpusError::io(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(CorpusError::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| CorpusError::Json {
            path: path.to_path_buf(),
            line: i + 1,
            source,
        })?);
    }
    Ok(out)
}

pub fn write_records(path: &Path, records: &[CommentRecord]) -> Result<(), CorpusError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(CorpusError::io(dir))?;
    }
    let file = fs::File::create(path).map_err(CorpusError::io(path))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r).expect("record serializes");
        w.write_all(b"\n").map_err(CorpusError::io(path))?;
    }
    w.flush().map_err(CorpusError::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extent::{merge_extents, rule_tags};
    use crate::syntax::{parse_source, FileId, Language};

    #[test]
    fn records_round_trip() {
        let file = parse_source("class A {\n  // one\n  int x; // two\n}\n", Language::Java, FileId(0)).unwrap();
        let mut records: Vec<CommentRecord> = merge_extents(&file, &rule_tags(&file))
            .iter()
            .map(|e| CommentRecord::from_extent("p", "A.java", &file, e))
            .collect();
        records[0].category = Some(crate::category::CategoryLabel::Postcondition);
        records[0].elapsed_ms = Some(1200);
        let dir = tempfile::tempdir().unwrap();
        let store = Store::create(dir.path()).unwrap();
        store.write_project("p", &records).unwrap();
        store
            .write_summary(&CorpusSummary {
                projects: vec![ProjectSummary {
                    name: "p".into(),
                    origin: "here".into(),
                    revision: None,
                    root: "/src/p".into(),
                    files: 1,
                    sloc: 4,
                    comments: 2,
                    extents: 2,
                    unparsable: 0,
                    skipped: 0,
                }],
                failed: vec![],
            })
            .unwrap();
        let reopened = Store::open(dir.path()).unwrap();
        assert_eq!(reopened.all_records().unwrap(), records);
        assert_eq!(
            reopened.source_path(&records[0]).unwrap(),
            PathBuf::from("/src/p/A.java")
        );
        assert!(matches!(reopened.records("q"), Err(CorpusError::UnknownProject(_))));
    }

    #[test]
    fn open_requires_summary() {
        let dir = tempfile::tempdir().unwrap();
        assert!(Store::open(dir.path()).is_err());
    }
}
