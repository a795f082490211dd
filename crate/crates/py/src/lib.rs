//! Python module `ffc`: flow graphs, alignment, classification and label
//! statistics.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use ffc_core::align as core_align;
use ffc_core::classifier::{self, FaultClass, FaultType};
use ffc_core::dataset::{self, LabelRow};
use ffc_core::flowgraph::{self, build_graph};
use ffc_core::minij::parse_source;
use ffc_core::stats;

/// `(id, kind, label, defs, uses)`
type NodeTuple = (u32, String, String, Vec<String>, Vec<String>);
/// `(entry id, classes, error)`
type EntryOutcome = (String, Option<Vec<String>>, Option<String>);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Combined control-/data-flow graph of one method.
#[pyclass(frozen, module = "ffc")]
struct FlowGraph {
    inner: flowgraph::FlowGraph,
}

#[pymethods]
impl FlowGraph {
    /// Builds the graph of `method` from MiniJ source text.
    #[staticmethod]
    fn from_source(source: &str, method: &str) -> PyResult<Self> {
        let program = parse_source(source).map_err(value_error)?;
        let built = build_graph(&program, method).map_err(value_error)?;
        Ok(FlowGraph { inner: built.graph })
    }

    /// Reads an interchange JSON graph; invalid graphs raise ValueError.
    #[staticmethod]
    fn from_interchange(text: &str) -> PyResult<Self> {
        flowgraph::import_graph(text)
            .map(|inner| FlowGraph { inner })
            .map_err(value_error)
    }

    fn to_interchange(&self) -> String {
        flowgraph::to_interchange(&self.inner)
    }

    fn to_dot(&self) -> String {
        flowgraph::to_dot(&self.inner)
    }

    #[getter]
    fn entry(&self) -> u32 {
        self.inner.entry
    }

    #[getter]
    fn exit(&self) -> u32 {
        self.inner.exit
    }

    /// `(id, kind, label, defs, uses)` per node, by id.
    fn nodes(&self) -> Vec<NodeTuple> {
        self.inner
            .nodes
            .values()
            .map(|n| {
                let vars = |s: &std::collections::BTreeSet<flowgraph::Variable>| {
                    s.iter().map(|v| v.as_str().to_string()).collect()
                };
                (
                    n.id,
                    n.kind.as_str().to_string(),
                    n.label.clone(),
                    vars(&n.defs),
                    vars(&n.uses),
                )
            })
            .collect()
    }

    /// `(src, dst, kind)` control-flow edges.
    fn cfg_edges(&self) -> Vec<(u32, u32, String)> {
        self.inner
            .cfg
            .iter()
            .map(|e| (e.src, e.dst, e.kind.to_string()))
            .collect()
    }

    /// `(def, use, variable)` data-flow edges.
    fn dfg_edges(&self) -> Vec<(u32, u32, String)> {
        self.inner
            .dfg
            .iter()
            .map(|e| (e.def, e.use_node, e.var.as_str().to_string()))
            .collect()
    }

    fn validate(&self) -> PyResult<()> {
        flowgraph::validate(&self.inner).map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.inner.nodes.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "FlowGraph(nodes={}, cfg_edges={}, dfg_edges={})",
            self.inner.nodes.len(),
            self.inner.cfg.len(),
            self.inner.dfg.len()
        )
    }
}

/// Parses MiniJ source and returns the syntax tree as JSON.
#[pyfunction]
fn parse(source: &str) -> PyResult<String> {
    let program = parse_source(source).map_err(value_error)?;
    serde_json::to_string(&program).map_err(value_error)
}

/// Node alignment of two graphs as JSON.
#[pyfunction]
fn align(faulty: &FlowGraph, fixed: &FlowGraph) -> String {
    core_align::align(&faulty.inner, &fixed.inner)
        .to_json()
        .to_string()
}

/// Edges that change under the alignment, as JSON.
#[pyfunction]
fn edge_diff(faulty: &FlowGraph, fixed: &FlowGraph) -> String {
    let a = core_align::align(&faulty.inner, &fixed.inner);
    core_align::edge_diff(&faulty.inner, &fixed.inner, &a)
        .to_json()
        .to_string()
}

/// Fault classes with their evidence nodes (`f3` faulty, `r5` fixed).
/// Raises ValueError when the graphs differ but no class applies.
#[pyfunction]
fn classify(faulty: &FlowGraph, fixed: &FlowGraph) -> PyResult<BTreeMap<String, Vec<String>>> {
    let set = classifier::classify(&faulty.inner, &fixed.inner).map_err(value_error)?;
    Ok(set
        .evidence()
        .iter()
        .map(|(c, refs)| {
            (
                c.as_str().to_string(),
                refs.iter().map(|r| r.to_string()).collect(),
            )
        })
        .collect())
}

fn parse_classes(classes: Vec<String>) -> PyResult<Vec<FaultClass>> {
    classes
        .iter()
        .map(|c| c.parse::<FaultClass>().map_err(value_error))
        .collect()
}

/// `pure-CF`, `pure-DF` or `mixed`; None for an empty list.
#[pyfunction]
fn fault_type(classes: Vec<String>) -> PyResult<Option<&'static str>> {
    Ok(FaultType::of(parse_classes(classes)?).map(FaultType::as_str))
}

/// Classifies every entry of a manifest: `(id, classes or None, error or None)`.
#[pyfunction]
fn classify_manifest(path: PathBuf) -> PyResult<Vec<EntryOutcome>> {
    let entries = dataset::load_manifest(&path).map_err(value_error)?;
    Ok(entries
        .iter()
        .map(|e| match e.classify() {
            Ok(set) => (
                e.id.clone(),
                Some(
                    set.classes()
                        .iter()
                        .map(|c| c.as_str().to_string())
                        .collect(),
                ),
                None,
            ),
            Err(err) => (e.id.clone(), None, Some(err.to_string())),
        })
        .collect())
}

/// `(project, id, classes)` rows of a label CSV.
#[pyfunction]
fn read_labels(path: PathBuf) -> PyResult<Vec<(String, String, Vec<String>)>> {
    let rows = dataset::read_labels(&path).map_err(|e| match e {
        dataset::LabelError::Io(io) => PyOSError::new_err(io.to_string()),
        other => value_error(other),
    })?;
    Ok(rows
        .into_iter()
        .map(|r| {
            (
                r.project,
                r.id,
                r.classes.iter().map(|c| c.as_str().to_string()).collect(),
            )
        })
        .collect())
}

fn rows_from(rows: Vec<(String, String, Vec<String>)>) -> PyResult<Vec<LabelRow>> {
    rows.into_iter()
        .map(|(p, id, c)| Ok(LabelRow::new(p, id, parse_classes(c)?)))
        .collect()
}

/// Frequency table CSV of `(project, id, classes)` rows.
#[pyfunction]
#[pyo3(signature = (rows, by_project = false))]
fn frequencies_csv(rows: Vec<(String, String, Vec<String>)>, by_project: bool) -> PyResult<String> {
    Ok(stats::frequencies(&rows_from(rows)?, by_project)
        .map_err(value_error)?
        .to_csv())
}

/// Co-occurrence matrix CSV of `(project, id, classes)` rows.
#[pyfunction]
fn cooccurrence_csv(rows: Vec<(String, String, Vec<String>)>) -> PyResult<String> {
    Ok(stats::cooccurrence(&rows_from(rows)?).to_csv())
}

/// `(pure-CF, pure-DF, mixed)` percentages, rounded half up to one decimal.
#[pyfunction]
fn percent_partition(rows: Vec<(String, String, Vec<String>)>) -> PyResult<(f64, f64, f64)> {
    let p = stats::percent_partition(&rows_from(rows)?).map_err(value_error)?;
    Ok((
        p.pure_cf as f64 / 10.0,
        p.pure_df as f64 / 10.0,
        p.mixed as f64 / 10.0,
    ))
}

#[pymodule]
fn ffc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<FlowGraph>()?;
    m.add(
        "FAULT_CLASSES",
        FaultClass::ALL.map(|c| c.as_str()).to_vec(),
    )?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(align, m)?)?;
    m.add_function(wrap_pyfunction!(edge_diff, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(fault_type, m)?)?;
    m.add_function(wrap_pyfunction!(classify_manifest, m)?)?;
    m.add_function(wrap_pyfunction!(read_labels, m)?)?;
    m.add_function(wrap_pyfunction!(frequencies_csv, m)?)?;
    m.add_function(wrap_pyfunction!(cooccurrence_csv, m)?)?;
    m.add_function(wrap_pyfunction!(percent_partition, m)?)?;
    Ok(())
}
