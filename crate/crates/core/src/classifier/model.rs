use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flowgraph::NodeId;

/// The eight flow-graph fault classes, in table column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaultClass {
    Order,
    Jump,
    Call,
    Pred,
    Guard,
    Block,
    Def,
    Use,
}

impl FaultClass {
    pub const ALL: [FaultClass; 8] = [
        FaultClass::Order,
        FaultClass::Jump,
        FaultClass::Call,
        FaultClass::Pred,
        FaultClass::Guard,
        FaultClass::Block,
        FaultClass::Def,
        FaultClass::Use,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FaultClass::Order => "order",
            FaultClass::Jump => "jump",
            FaultClass::Call => "call",
            FaultClass::Pred => "pred",
            FaultClass::Guard => "guard",
            FaultClass::Block => "block",
            FaultClass::Def => "def",
            FaultClass::Use => "use",
        }
    }

    pub fn is_control_flow(self) -> bool {
        !matches!(self, FaultClass::Def | FaultClass::Use)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FaultClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FaultClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FaultClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown fault class `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FaultType {
    #[serde(rename = "pure-CF")]
    PureCf,
    #[serde(rename = "pure-DF")]
    PureDf,
    #[serde(rename = "mixed")]
    Mixed,
}

impl FaultType {
    pub const ALL: [FaultType; 3] = [FaultType::PureCf, FaultType::PureDf, FaultType::Mixed];

    pub fn as_str(self) -> &'static str {
        match self {
            FaultType::PureCf => "pure-CF",
            FaultType::PureDf => "pure-DF",
            FaultType::Mixed => "mixed",
        }
    }

    /// Fault type of a non-empty class collection.
    pub fn of(classes: impl IntoIterator<Item = FaultClass>) -> Option<FaultType> {
        let (mut cf, mut df) = (false, false);
        for c in classes {
            if c.is_control_flow() {
                cf = true;
            } else {
                df = true;
            }
        }
        match (cf, df) {
            (true, false) => Some(FaultType::PureCf),
            (false, true) => Some(FaultType::PureDf),
            (true, true) => Some(FaultType::Mixed),
            (false, false) => None,
        }
    }
}

impl fmt::Display for FaultType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A node of the faulty (`f12`) or the fixed (`r7`) graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvidenceRef {
    Faulty(NodeId),
    Fixed(NodeId),
}

impl fmt::Display for EvidenceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvidenceRef::Faulty(id) => write!(f, "f{id}"),
            EvidenceRef::Fixed(id) => write!(f, "r{id}"),
        }
    }
}

impl FromStr for EvidenceRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad evidence reference `{s}`");
        let (side, num) = s.split_at_checked(1).ok_or_else(bad)?;
        let id: NodeId = num.parse().map_err(|_| bad())?;
        match side {
            "f" => Ok(EvidenceRef::Faulty(id)),
            "r" => Ok(EvidenceRef::Fixed(id)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for EvidenceRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EvidenceRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Assigned classes, each with the nodes that triggered it.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaultClassSet {
    evidence: BTreeMap<FaultClass, BTreeSet<EvidenceRef>>,
}

impl FaultClassSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, class: FaultClass, refs: impl IntoIterator<Item = EvidenceRef>) {
        self.evidence.entry(class).or_default().extend(refs);
    }

    pub fn contains(&self, class: FaultClass) -> bool {
        self.evidence.contains_key(&class)
    }

    pub fn is_empty(&self) -> bool {
        self.evidence.is_empty()
    }

    pub fn len(&self) -> usize {
        self.evidence.len()
    }

    /// Classes in table column order.
    pub fn classes(&self) -> Vec<FaultClass> {
        self.evidence.keys().copied().collect()
    }

    pub fn class_set(&self) -> BTreeSet<FaultClass> {
        self.evidence.keys().copied().collect()
    }

    pub fn evidence(&self) -> &BTreeMap<FaultClass, BTreeSet<EvidenceRef>> {
        &self.evidence
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(
        "graphs differ but no fault class applies ({deleted} deleted, {inserted} inserted, {modified} modified nodes, {changed_edges} changed edges)"
    )]
    UnclassifiedDiff {
        deleted: usize,
        inserted: usize,
        modified: usize,
        changed_edges: usize,
    },
    #[error("fault type of an empty class set")]
    EmptyClassSet,
}

pub fn fault_type(set: &FaultClassSet) -> Result<FaultType, ClassifyError> {
    FaultType::of(set.classes()).ok_or(ClassifyError::EmptyClassSet)
}

/// One classified fault entry as written by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub entry: String,
    pub classes: Vec<FaultClass>,
    pub fault_type: Option<FaultType>,
    pub evidence: BTreeMap<FaultClass, BTreeSet<EvidenceRef>>,
}

impl ClassificationRecord {
    pub fn new(entry: impl Into<String>, set: &FaultClassSet) -> Self {
        ClassificationRecord {
            entry: entry.into(),
            classes: set.classes(),
            fault_type: fault_type(set).ok(),
            evidence: set.evidence().clone(),
        }
    }
}
