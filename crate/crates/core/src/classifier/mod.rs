//! Assignment of the eight flow-graph fault classes to a faulty/fixed pair.
//!
//! Control-flow classes: `order` (statements in the wrong sequence), `jump`
//! (a single edge with the wrong target), `call` (wrong, missing or
//! extraneous call), `pred` (wrong condition), `guard` (missing or
//! extraneous predicate around existing code) and `block` (missing or
//! extraneous predicate together with the code it guards). Data-flow
//! classes: `def` (wrong or missing write) and `use` (read from the wrong
//! location). A fault may carry several classes.

mod detect;
mod model;
mod structure;

use std::collections::BTreeSet;

pub use model::*;

use crate::align::{align, edge_diff, Alignment, EdgeDiff};
use crate::flowgraph::FlowGraph;
use detect::Pipeline;

/// Classifies a faulty/fixed pair. Identical graphs give the empty set; a
/// difference that no detector explains is reported as
/// [`ClassifyError::UnclassifiedDiff`].
pub fn classify(faulty: &FlowGraph, fixed: &FlowGraph) -> Result<FaultClassSet, ClassifyError> {
    let a = align(faulty, fixed);
    let d = edge_diff(faulty, fixed, &a);
    classify_aligned(faulty, fixed, &a, &d)
}

/// [`classify`] with a precomputed alignment and edge diff.
pub fn classify_aligned(
    faulty: &FlowGraph,
    fixed: &FlowGraph,
    a: &Alignment,
    d: &EdgeDiff,
) -> Result<FaultClassSet, ClassifyError> {
    if a.is_identity() && d.is_empty() {
        return Ok(FaultClassSet::new());
    }
    let mut p = Pipeline::new(faulty, fixed, a, d);
    p.run_through(FaultClass::Use);
    if p.result.is_empty() {
        return Err(ClassifyError::UnclassifiedDiff {
            deleted: a.deleted.len(),
            inserted: a.inserted.len(),
            modified: a.modified().count(),
            changed_edges: d.cfg_changed.len() + d.dfg_changed.len(),
        });
    }
    Ok(p.result)
}

fn detect(
    class: FaultClass,
    faulty: &FlowGraph,
    fixed: &FlowGraph,
    a: &Alignment,
) -> Option<BTreeSet<EvidenceRef>> {
    let d = edge_diff(faulty, fixed, a);
    let mut p = Pipeline::new(faulty, fixed, a, &d);
    p.run_through(class);
    p.result.evidence().get(&class).cloned()
}

macro_rules! detectors {
    ($($(#[$doc:meta])* $name:ident => $class:ident;)*) => {$(
        $(#[$doc])*
        ///
        /// Earlier detectors in the pipeline run first so their masking applies.
        pub fn $name(faulty: &FlowGraph, fixed: &FlowGraph, a: &Alignment) -> Option<BTreeSet<EvidenceRef>> {
            detect(FaultClass::$class, faulty, fixed, a)
        }
    )*};
}

detectors! {
    /// Inserted or deleted predicate whose whole guarded region is new too.
    detect_block => Block;
    /// Inserted or deleted predicate guarding nodes that exist on both sides.
    detect_guard => Guard;
    /// Changed condition on an unchanged branching structure.
    detect_pred => Pred;
    /// Same straight-line nodes in a different sequence.
    detect_order => Order;
    /// A single edge landing at a different place.
    detect_jump => Jump;
    /// Inserted, deleted or retargeted call.
    detect_call => Call;
    /// Wrong value, wrong location, or missing definition.
    detect_def => Def;
    /// Read from the wrong, already existing, location.
    detect_use => Use;
}
