use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub type NodeId = u32;

/// A memory location as seen by the data-flow analysis: a plain local, a
/// dotted field path (`this.runningState`), an array base (`swap[]`), or one
/// of the specials [`Variable::RET`] / [`Variable::EXC`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Variable(String);

impl Variable {
    pub const RET: &'static str = "<ret>";
    pub const EXC: &'static str = "<exc>";

    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(!name.is_empty());
        Variable(name)
    }

    pub fn ret() -> Self {
        Variable(Self::RET.into())
    }

    pub fn exc() -> Self {
        Variable(Self::EXC.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Field paths and array bases are updated weakly: writing them never
    /// kills earlier definitions.
    pub fn is_weak(&self) -> bool {
        self.0.contains('.') || self.0.ends_with("[]")
    }

    pub fn is_special(&self) -> bool {
        self.0 == Self::RET || self.0 == Self::EXC
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Variable {
    fn from(s: &str) -> Self {
        Variable::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Entry,
    Exit,
    Statement,
    Predicate,
    CallParam,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Entry => "entry",
            NodeKind::Exit => "exit",
            NodeKind::Statement => "statement",
            NodeKind::Predicate => "predicate",
            NodeKind::CallParam => "call-param",
        }
    }
}

impl FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "entry" => NodeKind::Entry,
            "exit" => NodeKind::Exit,
            "statement" => NodeKind::Statement,
            "predicate" => NodeKind::Predicate,
            "call-param" => NodeKind::CallParam,
            other => return Err(format!("unknown node kind `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub label: String,
    pub line: u32,
    pub defs: BTreeSet<Variable>,
    pub uses: BTreeSet<Variable>,
}

/// How control leaves the source node along an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchKind {
    Seq,
    True,
    False,
    Case,
    Fallthrough,
    Call,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JumpKind {
    Break,
    Continue,
    Return,
    Throw,
}

/// Edge kind: a branch kind, optionally realised by a jump statement.
/// Jumps are edges, never nodes; a jump placed directly on a predicate branch
/// keeps the branch (`true+jump-return`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKind {
    pub branch: BranchKind,
    pub jump: Option<JumpKind>,
}

impl EdgeKind {
    pub const SEQ: EdgeKind = EdgeKind {
        branch: BranchKind::Seq,
        jump: None,
    };

    pub fn new(branch: BranchKind) -> Self {
        EdgeKind { branch, jump: None }
    }

    pub fn jump(branch: BranchKind, jump: JumpKind) -> Self {
        EdgeKind {
            branch,
            jump: Some(jump),
        }
    }

    pub fn is_predicate_branch(self) -> bool {
        matches!(
            self.branch,
            BranchKind::True | BranchKind::False | BranchKind::Case
        )
    }
}

impl BranchKind {
    fn as_str(self) -> &'static str {
        match self {
            BranchKind::Seq => "seq",
            BranchKind::True => "true",
            BranchKind::False => "false",
            BranchKind::Case => "case",
            BranchKind::Fallthrough => "fallthrough",
            BranchKind::Call => "call",
        }
    }
}

impl JumpKind {
    fn as_str(self) -> &'static str {
        match self {
            JumpKind::Break => "jump-break",
            JumpKind::Continue => "jump-continue",
            JumpKind::Return => "jump-return",
            JumpKind::Throw => "jump-throw",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.branch, self.jump) {
            (b, None) => f.write_str(b.as_str()),
            (BranchKind::Seq, Some(j)) => f.write_str(j.as_str()),
            (b, Some(j)) => write!(f, "{}+{}", b.as_str(), j.as_str()),
        }
    }
}

impl FromStr for EdgeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let branch = |t: &str| {
            Some(match t {
                "seq" => BranchKind::Seq,
                "true" => BranchKind::True,
                "false" => BranchKind::False,
                "case" => BranchKind::Case,
                "fallthrough" => BranchKind::Fallthrough,
                "call" => BranchKind::Call,
                _ => return None,
            })
        };
        let jump = |t: &str| {
            Some(match t {
                "jump-break" => JumpKind::Break,
                "jump-continue" => JumpKind::Continue,
                "jump-return" => JumpKind::Return,
                "jump-throw" => JumpKind::Throw,
                _ => return None,
            })
        };
        let bad = || format!("unknown edge kind `{s}`");
        match s.split_once('+') {
            Some((b, j)) => Ok(EdgeKind {
                branch: branch(b).ok_or_else(bad)?,
                jump: Some(jump(j).ok_or_else(bad)?),
            }),
            None => match (branch(s), jump(s)) {
                (Some(b), _) => Ok(EdgeKind::new(b)),
                (None, Some(j)) => Ok(EdgeKind::jump(BranchKind::Seq, j)),
                _ => Err(bad()),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CfgEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DfgEdge {
    pub def: NodeId,
    pub use_node: NodeId,
    pub var: Variable,
}

/// The combined graph: statement nodes, control-flow edges and def-use
/// edges, with distinguished entry and exit nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowGraph {
    pub nodes: BTreeMap<NodeId, FlowNode>,
    pub cfg: Vec<CfgEdge>,
    pub dfg: Vec<DfgEdge>,
    pub entry: NodeId,
    pub exit: NodeId,
}

impl FlowGraph {
    pub fn node(&self, id: NodeId) -> &FlowNode {
        &self.nodes[&id]
    }

    pub fn out_edges(&self, id: NodeId) -> impl Iterator<Item = &CfgEdge> + '_ {
        self.cfg.iter().filter(move |e| e.src == id)
    }

    pub fn in_edges(&self, id: NodeId) -> impl Iterator<Item = &CfgEdge> + '_ {
        self.cfg.iter().filter(move |e| e.dst == id)
    }

    pub fn successors(&self, id: NodeId) -> Vec<NodeId> {
        self.out_edges(id).map(|e| e.dst).collect()
    }

    pub fn predecessors(&self, id: NodeId) -> Vec<NodeId> {
        self.in_edges(id).map(|e| e.src).collect()
    }

    /// Node ids in source order: entry first, exit last, the rest by
    /// `(line, id)`.
    pub fn source_order(&self) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = self
            .nodes
            .keys()
            .copied()
            .filter(|&id| id != self.entry && id != self.exit)
            .collect();
        ids.sort_by_key(|&id| (self.node(id).line, id));
        ids.insert(0, self.entry);
        ids.push(self.exit);
        ids
    }

    /// A `return expr` / `throw expr` node: the value-carrying half of a
    /// lowered jump. Identified structurally so imported graphs qualify too.
    pub fn is_jump_value(&self, id: NodeId) -> bool {
        let n = self.node(id);
        n.kind == NodeKind::Statement
            && !n.defs.is_empty()
            && n.defs.iter().all(Variable::is_special)
            && self
                .out_edges(id)
                .all(|e| matches!(e.kind.jump, Some(JumpKind::Return | JumpKind::Throw)))
    }

    pub fn statement_count(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }
}
