//! Flow-graph based fault classification.
//!
//! The pipeline: MiniJ source ([`minij`]) is lowered into a combined
//! control-/data-flow graph ([`flowgraph`]); the faulty and fixed graphs of a
//! fault entry are aligned ([`align`]) and the differences are assigned to
//! the eight fault classes ([`classifier`]). [`dataset`] and [`stats`] handle
//! corpora and label statistics.

pub mod align;
pub mod classifier;
pub mod dataset;
pub mod flowgraph;
pub mod minij;
pub mod stats;
