use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::labels::LabelRow;
use super::manifest::{EntryError, FaultEntry};
use crate::classifier::{ClassifyError, FaultClass, FaultClassSet};

/// How an automated class set relates to the reference set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Exact,
    Superset,
    Subset,
    Overlap,
    Disjoint,
    /// The graphs differ but no class applies.
    Unclassified,
    /// No reference row, or the entry could not be loaded.
    Error,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::Exact,
        Relation::Superset,
        Relation::Subset,
        Relation::Overlap,
        Relation::Disjoint,
        Relation::Unclassified,
        Relation::Error,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Exact => "exact",
            Relation::Superset => "superset",
            Relation::Subset => "subset",
            Relation::Overlap => "overlap",
            Relation::Disjoint => "disjoint",
            Relation::Unclassified => "unclassified",
            Relation::Error => "error",
        }
    }

    /// Relation of `actual` to `expected`.
    pub fn between(expected: &BTreeSet<FaultClass>, actual: &BTreeSet<FaultClass>) -> Relation {
        if actual.is_empty() {
            Relation::Unclassified
        } else if actual == expected {
            Relation::Exact
        } else if actual.is_superset(expected) {
            Relation::Superset
        } else if actual.is_subset(expected) {
            Relation::Subset
        } else if actual.is_disjoint(expected) {
            Relation::Disjoint
        } else {
            Relation::Overlap
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryAgreement {
    pub id: String,
    pub expected: Option<BTreeSet<FaultClass>>,
    pub actual: Option<BTreeSet<FaultClass>>,
    pub relation: Relation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    /// Sorted by entry id.
    pub entries: Vec<EntryAgreement>,
    pub counts: BTreeMap<Relation, usize>,
}

fn join(set: &Option<BTreeSet<FaultClass>>) -> String {
    set.iter()
        .flatten()
        .map(|c| c.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

impl AgreementReport {
    /// Assembles a report from per-entry outcomes, in any order.
    pub fn from_outcomes<'a>(
        outcomes: impl IntoIterator<Item = (&'a FaultEntry, Result<FaultClassSet, EntryError>)>,
        reference: &[LabelRow],
    ) -> Self {
        let by_id: BTreeMap<String, &LabelRow> =
            reference.iter().map(|r| (r.entry_id(), r)).collect();
        let mut entries: Vec<EntryAgreement> = outcomes
            .into_iter()
            .map(|(entry, outcome)| {
                let expected = by_id.get(&entry.id).map(|r| r.classes.clone());
                let (actual, relation, message) = match (&expected, outcome) {
                    (_, Err(EntryError::Classify(e @ ClassifyError::UnclassifiedDiff { .. }))) => {
                        (None, Relation::Unclassified, Some(e.to_string()))
                    }
                    (_, Err(e)) => (None, Relation::Error, Some(e.to_string())),
                    (None, Ok(set)) => (
                        Some(set.class_set()),
                        Relation::Error,
                        Some("no reference row".to_string()),
                    ),
                    (Some(exp), Ok(set)) => {
                        let act = set.class_set();
                        (Some(act.clone()), Relation::between(exp, &act), None)
                    }
                };
                EntryAgreement {
                    id: entry.id.clone(),
                    expected,
                    actual,
                    relation,
                    message,
                }
            })
            .collect();
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        let mut counts: BTreeMap<Relation, usize> = Relation::ALL.iter().map(|&r| (r, 0)).collect();
        for e in &entries {
            *counts.get_mut(&e.relation).unwrap() += 1;
        }
        AgreementReport { entries, counts }
    }

    pub fn count(&self, relation: Relation) -> usize {
        self.counts.get(&relation).copied().unwrap_or(0)
    }

    /// Entries whose automated set contains the reference set.
    pub fn exact_or_superset(&self) -> usize {
        self.count(Relation::Exact) + self.count(Relation::Superset)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "relation", "expected", "actual"])
            .expect("in-memory write");
        for e in &self.entries {
            w.write_record([
                e.id.as_str(),
                e.relation.as_str(),
                &join(&e.expected),
                &join(&e.actual),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
    }

    pub fn summary(&self) -> String {
        let n = self.entries.len();
        let mut out = format!(
            "{} entries, {} exact or superset\n",
            n,
            self.exact_or_superset()
        );
        for r in Relation::ALL {
            out.push_str(&format!("  {:<13}{}\n", r.as_str(), self.count(r)));
        }
        out
    }
}

/// Classifies each entry and compares it with its reference row.
pub fn compare(entries: &[FaultEntry], reference: &[LabelRow]) -> AgreementReport {
    AgreementReport::from_outcomes(entries.iter().map(|e| (e, e.classify())), reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use FaultClass::*;

    fn set(c: &[FaultClass]) -> BTreeSet<FaultClass> {
        c.iter().copied().collect()
    }

    #[test]
    fn relations() {
        assert_eq!(
            Relation::between(&set(&[Jump]), &set(&[Jump])),
            Relation::Exact
        );
        assert_eq!(
            Relation::between(&set(&[Jump]), &set(&[Jump, Def])),
            Relation::Superset
        );
        assert_eq!(
            Relation::between(&set(&[Jump, Def]), &set(&[Def])),
            Relation::Subset
        );
        assert_eq!(
            Relation::between(&set(&[Jump, Use]), &set(&[Def, Use])),
            Relation::Overlap
        );
        assert_eq!(
            Relation::between(&set(&[Jump]), &set(&[Def])),
            Relation::Disjoint
        );
        assert_eq!(
            Relation::between(&set(&[Jump]), &set(&[])),
            Relation::Unclassified
        );
    }

    fn entry(id: &str) -> FaultEntry {
        FaultEntry {
            project: "P".into(),
            id: id.into(),
            faulty: "f".into(),
            fixed: "r".into(),
            method: "m".into(),
            expected: None,
        }
    }

    fn classes(c: &[FaultClass]) -> FaultClassSet {
        let mut s = FaultClassSet::new();
        for &x in c {
            s.insert(x, []);
        }
        s
    }

    #[test]
    fn report_is_sorted_and_counts_partition() {
        let (a, b, c) = (entry("P-2"), entry("P-1"), entry("P-3"));
        let reference = vec![
            LabelRow::new("P", "1", [Jump]),
            LabelRow::new("P", "2", [Def]),
        ];
        let report = AgreementReport::from_outcomes(
            [
                (&a, Ok(classes(&[Jump]))),
                (&b, Ok(classes(&[Jump]))),
                (&c, Ok(classes(&[Def]))),
            ],
            &reference,
        );
        let ids: Vec<_> = report.entries.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["P-1", "P-2", "P-3"]);
        assert_eq!(report.count(Relation::Exact), 1);
        assert_eq!(report.count(Relation::Disjoint), 1);
        assert_eq!(report.count(Relation::Error), 1);
        assert_eq!(report.counts.values().sum::<usize>(), 3);
        assert!(report
            .to_csv()
            .starts_with("id,relation,expected,actual\nP-1,exact,jump,jump\n"));
    }
}
