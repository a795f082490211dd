//! Fault-entry manifests, label files, and agreement between automated and
//! reference labels.

mod agreement;
mod labels;
mod manifest;

pub use agreement::{compare, AgreementReport, EntryAgreement, Relation};
pub use labels::{
    read_labels, read_labels_with, write_labels, write_labels_to, ColumnMap, LabelError, LabelRow,
    LABEL_HEADER,
};
pub use manifest::{
    load_graph, load_manifest, EntryAnalysis, EntryError, FaultEntry, ManifestError,
};
