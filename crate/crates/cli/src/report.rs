//! Output formatting for classification and agreement reports.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use ffc_core::classifier::{ClassificationRecord, FaultClass};
use ffc_core::dataset::{
    AgreementReport, EntryAnalysis, FaultEntry, LabelRow, Relation, LABEL_HEADER,
};

use crate::Format;

/// ANSI colouring for text reports, enabled by `FFC_COLOR=1`.
#[derive(Clone, Copy)]
pub struct Paint(bool);

impl Paint {
    pub fn from_env() -> Self {
        Paint(std::env::var("FFC_COLOR").is_ok_and(|v| v == "1"))
    }

    fn wrap(self, code: &str, s: &str) -> String {
        if self.0 {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }
}

#[derive(Serialize)]
pub struct ClassifyOutput {
    #[serde(flatten)]
    pub record: ClassificationRecord,
    #[serde(skip)]
    pub project: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alignment: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_diff: Option<serde_json::Value>,
}

impl ClassifyOutput {
    pub fn new(entry: &FaultEntry, a: &EntryAnalysis, emit_alignment: bool) -> Self {
        ClassifyOutput {
            record: ClassificationRecord::new(entry.id.clone(), &a.classes),
            project: entry.project.clone(),
            alignment: emit_alignment.then(|| a.alignment.to_json()),
            edge_diff: emit_alignment.then(|| a.diff.to_json()),
        }
    }
}

pub fn write_classifications(
    out: &mut impl Write,
    records: &[ClassifyOutput],
    format: Format,
    paint: Paint,
) -> Result<()> {
    match format {
        Format::Json => {
            for r in records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            // not through the label writer: identical graphs give rows with no class
            writeln!(out, "{}", LABEL_HEADER.join(","))?;
            for r in records {
                let row = LabelRow::new(
                    r.project.clone(),
                    label_id(&r.project, &r.record.entry),
                    r.record.classes.iter().copied(),
                );
                let flags: Vec<String> = row.flags().iter().map(u8::to_string).collect();
                writeln!(out, "{},{},{}", row.project, row.id, flags.join(","))?;
            }
        }
        Format::Text => {
            for r in records {
                let classes: Vec<String> = r
                    .record
                    .classes
                    .iter()
                    .map(|c| paint.wrap(class_colour(*c), c.as_str()))
                    .collect();
                let kind = r.record.fault_type.map_or("-", |t| t.as_str());
                writeln!(
                    out,
                    "{:<14}{:<8}{}",
                    r.record.entry,
                    kind,
                    classes.join(" ")
                )?;
            }
        }
    }
    Ok(())
}

fn label_id(project: &str, entry: &str) -> String {
    entry
        .strip_prefix(project)
        .and_then(|s| s.strip_prefix('-'))
        .unwrap_or(entry)
        .to_string()
}

fn class_colour(c: FaultClass) -> &'static str {
    if c.is_control_flow() {
        "36"
    } else {
        "35"
    }
}

pub fn agreement_text(r: &AgreementReport, paint: Paint) -> String {
    let mut out = String::new();
    for e in &r.entries {
        let code = match e.relation {
            Relation::Exact | Relation::Superset => "32",
            Relation::Subset | Relation::Overlap => "33",
            _ => "31",
        };
        let join = |s: &Option<std::collections::BTreeSet<FaultClass>>| {
            s.iter()
                .flatten()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!(
            "{:<14}{:<22}expected {:<18}actual {}\n",
            e.id,
            paint.wrap(code, e.relation.as_str()),
            join(&e.expected),
            join(&e.actual)
        ));
        if let Some(m) = &e.message {
            out.push_str(&format!("{:<14}{m}\n", ""));
        }
    }
    out.push_str(&r.summary());
    out
}
