//! Combined control-flow / data-flow graphs.
//!
//! Nodes are statements, predicates and call-parameter nodes between a
//! distinguished entry and exit. Jumps exist only as edges. Def-use edges
//! come from a reaching-definitions fixpoint over the control flow.

mod build;
mod dataflow;
mod dot;
mod interchange;
mod model;

pub use build::{build_cfg, BuildError};
pub use dataflow::{
    build_dfg, def_use_edges, reaching_definitions, Def, ReachingDefs, UndefinedUse,
};
pub use dot::to_dot;
pub use interchange::{import_graph, to_interchange, validate, FormatError};
pub use model::*;

use crate::minij::Program;

/// A fully built graph together with the uses no definition reaches.
#[derive(Debug, Clone)]
pub struct BuiltGraph {
    pub graph: FlowGraph,
    pub undefined_uses: Vec<UndefinedUse>,
}

/// Control flow plus def-use edges for `method`.
pub fn build_graph(program: &Program, method: &str) -> Result<BuiltGraph, BuildError> {
    let mut graph = build_cfg(program, method)?;
    let undefined_uses = build_dfg(&mut graph);
    Ok(BuiltGraph {
        graph,
        undefined_uses,
    })
}
