use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::align::{align, edge_diff, Alignment, EdgeDiff};
use crate::classifier::{classify_aligned, ClassifyError, FaultClass, FaultClassSet};
use crate::flowgraph::{build_graph, import_graph, BuildError, FlowGraph, FormatError};
use crate::minij::{parse_source, FrontendError};

/// One faulty/fixed pair to classify. Paths are resolved against the
/// manifest's directory; a `.json` path is read as an interchange graph,
/// anything else as a MiniJ source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultEntry {
    pub project: String,
    pub id: String,
    pub faulty: PathBuf,
    pub fixed: PathBuf,
    pub method: String,
    pub expected: Option<BTreeSet<FaultClass>>,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed manifest {path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error("entry {entry}: field `{field}`: {message}")]
    Entry {
        entry: String,
        field: &'static str,
        message: String,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    project: String,
    id: String,
    faulty: PathBuf,
    fixed: PathBuf,
    method: String,
    #[serde(default)]
    expected: Option<BTreeSet<FaultClass>>,
}

/// Reads and validates a manifest: ids are unique and every referenced
/// file exists. Entries keep their manifest order.
pub fn load_manifest(path: &Path) -> Result<Vec<FaultEntry>, ManifestError> {
    let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.into(),
        source,
    })?;
    let raw: Vec<RawEntry> = serde_json::from_str(&text).map_err(|e| ManifestError::Json {
        path: path.into(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new("."));

    let mut seen = BTreeMap::new();
    let mut out = Vec::with_capacity(raw.len());
    for (i, r) in raw.into_iter().enumerate() {
        let err = |field, message: String| ManifestError::Entry {
            entry: r.id.clone(),
            field,
            message,
        };
        if r.id.is_empty() {
            return Err(ManifestError::Entry {
                entry: format!("#{i}"),
                field: "id",
                message: "empty id".into(),
            });
        }
        if let Some(first) = seen.insert(r.id.clone(), i) {
            return Err(err("id", format!("duplicate of entry #{first}")));
        }
        if r.expected.as_ref().is_some_and(|e| e.is_empty()) {
            return Err(err("expected", "empty class list".into()));
        }
        let faulty = base.join(&r.faulty);
        let fixed = base.join(&r.fixed);
        for (field, p) in [("faulty", &faulty), ("fixed", &fixed)] {
            if !p.is_file() {
                return Err(err(field, format!("no such file {}", p.display())));
            }
        }
        out.push(FaultEntry {
            project: r.project,
            id: r.id,
            faulty,
            fixed,
            method: r.method,
            expected: r.expected,
        });
    }
    Ok(out)
}

#[derive(Debug, Error)]
pub enum EntryError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Frontend {
        path: PathBuf,
        source: FrontendError,
    },
    #[error("{path}: {source}")]
    Build { path: PathBuf, source: BuildError },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Loads one side of an entry as a flow graph.
pub fn load_graph(path: &Path, method: &str) -> Result<FlowGraph, EntryError> {
    let text = std::fs::read_to_string(path).map_err(|source| EntryError::Io {
        path: path.into(),
        source,
    })?;
    if path.extension().is_some_and(|e| e == "json") {
        return import_graph(&text).map_err(|source| EntryError::Format {
            path: path.into(),
            source,
        });
    }
    let program = parse_source(&text).map_err(|source| EntryError::Frontend {
        path: path.into(),
        source,
    })?;
    build_graph(&program, method)
        .map(|b| b.graph)
        .map_err(|source| EntryError::Build {
            path: path.into(),
            source,
        })
}

/// Everything computed while classifying an entry.
#[derive(Debug, Clone)]
pub struct EntryAnalysis {
    pub faulty: FlowGraph,
    pub fixed: FlowGraph,
    pub alignment: Alignment,
    pub diff: EdgeDiff,
    pub classes: FaultClassSet,
}

impl FaultEntry {
    pub fn load(&self) -> Result<(FlowGraph, FlowGraph), EntryError> {
        Ok((
            load_graph(&self.faulty, &self.method)?,
            load_graph(&self.fixed, &self.method)?,
        ))
    }

    pub fn analyze(&self) -> Result<EntryAnalysis, EntryError> {
        let (faulty, fixed) = self.load()?;
        let alignment = align(&faulty, &fixed);
        let diff = edge_diff(&faulty, &fixed, &alignment);
        let classes = classify_aligned(&faulty, &fixed, &alignment, &diff)?;
        Ok(EntryAnalysis {
            faulty,
            fixed,
            alignment,
            diff,
            classes,
        })
    }

    pub fn classify(&self) -> Result<FaultClassSet, EntryError> {
        self.analyze().map(|a| a.classes)
    }
}
