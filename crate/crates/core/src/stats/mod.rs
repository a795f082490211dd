//! Dataset statistics over label rows: class frequencies, fault-type
//! partition, classes-per-fault distribution and class co-occurrence.
//!
//! Counting is done on integers; percentages and means are only rounded
//! when formatted.

mod cooccur;
mod distribution;
mod frequency;
mod table1;

use thiserror::Error;

pub use cooccur::{cooccurrence, CooccurrenceMatrix};
pub use distribution::{distribution, Distribution, Summary};
pub use frequency::{frequencies, percent_partition, FrequencyRow, FrequencyTable, Partition};
pub use table1::{is_table1_header, read_table1, Table1, Table1Row};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("no label rows")]
    Empty,
    #[error("line {line}: {message}")]
    Table1 { line: u64, message: String },
    #[error("column `{column}`: project rows sum to {sum}, the total row says {stated}")]
    Inconsistent {
        column: String,
        sum: u64,
        stated: u64,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `numerator / denominator` as a percentage in tenths, rounded half up.
pub fn percent_tenths(numerator: u64, denominator: u64) -> u64 {
    (2000 * numerator + denominator) / (2 * denominator)
}

/// Formats a tenths value as `12.3`.
pub fn format_tenths(t: u64) -> String {
    format!("{}.{}", t / 10, t % 10)
}
