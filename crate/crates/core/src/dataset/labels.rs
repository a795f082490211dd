use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::classifier::{FaultClass, FaultClassSet};

pub const LABEL_HEADER: [&str; 10] = [
    "project", "id", "order", "jump", "call", "pred", "guard", "block", "def", "use",
];

/// One labelled fault: at least one class is always set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabelRow {
    pub project: String,
    pub id: String,
    pub classes: BTreeSet<FaultClass>,
}

impl LabelRow {
    pub fn new(
        project: impl Into<String>,
        id: impl Into<String>,
        classes: impl IntoIterator<Item = FaultClass>,
    ) -> Self {
        LabelRow {
            project: project.into(),
            id: id.into(),
            classes: classes.into_iter().collect(),
        }
    }

    /// Row for an entry id such as `Lang-62`, split into project and number
    /// when the id carries the project prefix.
    pub fn from_classes(project: &str, entry_id: &str, set: &FaultClassSet) -> Self {
        let id = entry_id
            .strip_prefix(project)
            .and_then(|s| s.strip_prefix('-'))
            .unwrap_or(entry_id);
        LabelRow::new(project, id, set.classes())
    }

    /// The `Project-Id` form used by manifests.
    pub fn entry_id(&self) -> String {
        if self.id.starts_with(&format!("{}-", self.project)) {
            self.id.clone()
        } else {
            format!("{}-{}", self.project, self.id)
        }
    }

    pub fn flags(&self) -> [u8; 8] {
        FaultClass::ALL.map(|c| u8::from(self.classes.contains(&c)))
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LabelError {
    fn at(line: u64, message: impl Into<String>) -> Self {
        LabelError::Row {
            line,
            message: message.into(),
        }
    }
}

/// Maps the label schema's column names to the names used by an external
/// file. Columns not listed keep their own name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(transparent)]
pub struct ColumnMap(pub BTreeMap<String, String>);

impl ColumnMap {
    pub fn load(path: &Path) -> Result<Self, LabelError> {
        let text = std::fs::read_to_string(path)?;
        let map: ColumnMap = serde_json::from_str(&text)
            .map_err(|e| LabelError::at(0, format!("column map: {e}")))?;
        if let Some(k) = map.0.keys().find(|k| !LABEL_HEADER.contains(&k.as_str())) {
            return Err(LabelError::at(
                0,
                format!("column map: unknown column `{k}`"),
            ));
        }
        Ok(map)
    }

    fn external<'a>(&'a self, ours: &'a str) -> &'a str {
        self.0.get(ours).map(String::as_str).unwrap_or(ours)
    }
}

pub fn read_labels(path: &Path) -> Result<Vec<LabelRow>, LabelError> {
    read_labels_with(std::fs::File::open(path)?, &ColumnMap::default())
}

/// Parses a label CSV. Extra columns are ignored; every flag must be 0 or 1
/// and every row must set at least one flag.
pub fn read_labels_with(
    input: impl Read,
    columns: &ColumnMap,
) -> Result<Vec<LabelRow>, LabelError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = rdr
        .headers()
        .map_err(|e| LabelError::at(1, e.to_string()))?
        .clone();
    let index: Vec<usize> = LABEL_HEADER
        .iter()
        .map(|&name| {
            let ext = columns.external(name);
            header
                .iter()
                .position(|h| h == ext)
                .ok_or_else(|| LabelError::at(1, format!("missing column `{ext}`")))
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec =
            rec.map_err(|e| LabelError::at(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(index[i]).unwrap_or("");
        let mut classes = BTreeSet::new();
        for (k, class) in FaultClass::ALL.into_iter().enumerate() {
            match field(k + 2) {
                "0" => {}
                "1" => {
                    classes.insert(class);
                }
                other => {
                    return Err(LabelError::at(
                        line,
                        format!("flag `{class}` must be 0 or 1, found `{other}`"),
                    ))
                }
            }
        }
        if classes.is_empty() {
            return Err(LabelError::at(line, "no fault class set"));
        }
        rows.push(LabelRow {
            project: field(0).to_string(),
            id: field(1).to_string(),
            classes,
        });
    }
    Ok(rows)
}

pub fn write_labels(rows: &[LabelRow], path: &Path) -> Result<(), LabelError> {
    let mut file = std::fs::File::create(path)?;
    write_labels_to(rows, &mut file)
}

pub fn write_labels_to(rows: &[LabelRow], out: impl Write) -> Result<(), LabelError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| LabelError::Io(e.into());
    w.write_record(LABEL_HEADER).map_err(io)?;
    for r in rows {
        let flags = r.flags().map(|f| f.to_string());
        w.write_record(
            [r.project.as_str(), r.id.as_str()]
                .into_iter()
                .chain(flags.iter().map(String::as_str)),
        )
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use FaultClass::*;

    fn read(text: &str) -> Result<Vec<LabelRow>, LabelError> {
        read_labels_with(text.as_bytes(), &ColumnMap::default())
    }

    #[test]
    fn jump_row() {
        let rows = read("project,id,order,jump,call,pred,guard,block,def,use\n\"Lang\",\"62\",0,1,0,0,0,0,0,0\n").unwrap();
        assert_eq!(rows, vec![LabelRow::new("Lang", "62", [Jump])]);
        assert_eq!(rows[0].entry_id(), "Lang-62");
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let rows = vec![
            LabelRow::new("Lang", "7", [Jump, Guard]),
            LabelRow::new("Math", "46", [Def]),
            LabelRow::new("Jsoup", "57", [Call, Use]),
        ];
        let mut buf = Vec::new();
        write_labels_to(&rows, &mut buf).unwrap();
        let back = read_labels_with(buf.as_slice(), &ColumnMap::default()).unwrap();
        assert_eq!(back, rows);
        let mut again = Vec::new();
        write_labels_to(&back, &mut again).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn all_zero_row_rejected_with_line() {
        let err = read("project,id,order,jump,call,pred,guard,block,def,use\nA,1,0,0,0,0,0,0,1,0\nA,2,0,0,0,0,0,0,0,0\n")
            .unwrap_err();
        assert!(matches!(err, LabelError::Row { line: 3, .. }), "{err}");
    }

    #[test]
    fn malformed_flag_rejected() {
        let err =
            read("project,id,order,jump,call,pred,guard,block,def,use\nA,1,0,2,0,0,0,0,1,0\n")
                .unwrap_err();
        assert!(err.to_string().contains("jump"), "{err}");
    }

    #[test]
    fn external_column_names() {
        let map = ColumnMap(
            [("id", "bug"), ("project", "proj"), ("use", "wrong_use")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        );
        let text = "proj,bug,extra,order,jump,call,pred,guard,block,def,wrong_use\nJsoup,57,x,0,0,1,0,0,0,0,1\n";
        let rows = read_labels_with(text.as_bytes(), &map).unwrap();
        assert_eq!(rows, vec![LabelRow::new("Jsoup", "57", [Call, Use])]);
    }

    #[test]
    fn missing_column_reported() {
        let err = read("project,id,order\nA,1,1\n").unwrap_err();
        assert!(err.to_string().contains("jump"), "{err}");
    }

    #[test]
    fn from_classes_splits_entry_id() {
        let mut s = FaultClassSet::new();
        s.insert(Jump, []);
        assert_eq!(
            LabelRow::from_classes("Lang", "Lang-62", &s),
            LabelRow::new("Lang", "62", [Jump])
        );
        assert_eq!(
            LabelRow::from_classes("X", "other", &s).entry_id(),
            "X-other"
        );
    }
}
