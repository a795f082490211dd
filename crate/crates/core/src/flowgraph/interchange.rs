//! JSON interchange format, so graphs produced by other frontends can be
//! classified too. Imports are validated against every flow-graph invariant.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dataflow::reaching_definitions;
use super::model::*;

/// A rejected interchange document, naming the offending element.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{element}: {message}")]
pub struct FormatError {
    pub element: String,
    pub message: String,
}

impl FormatError {
    fn new(element: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError {
            element: element.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    nodes: Vec<NodeRecord>,
    cfg: Vec<CfgRecord>,
    dfg: Vec<DfgRecord>,
    entry: NodeId,
    exit: NodeId,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRecord {
    id: NodeId,
    kind: String,
    label: String,
    line: u32,
    defs: Vec<String>,
    uses: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CfgRecord {
    src: NodeId,
    dst: NodeId,
    kind: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfgRecord {
    def: NodeId,
    #[serde(rename = "use")]
    use_node: NodeId,
    var: String,
}

/// Interchange JSON for `g`, pretty-printed with nodes in id order.
pub fn to_interchange(g: &FlowGraph) -> String {
    let mut cfg = g.cfg.clone();
    cfg.sort();
    let mut dfg = g.dfg.clone();
    dfg.sort();
    let doc = Document {
        nodes: g
            .nodes
            .values()
            .map(|n| NodeRecord {
                id: n.id,
                kind: n.kind.as_str().into(),
                label: n.label.clone(),
                line: n.line,
                defs: n.defs.iter().map(|v| v.to_string()).collect(),
                uses: n.uses.iter().map(|v| v.to_string()).collect(),
            })
            .collect(),
        cfg: cfg
            .iter()
            .map(|e| CfgRecord {
                src: e.src,
                dst: e.dst,
                kind: e.kind.to_string(),
            })
            .collect(),
        dfg: dfg
            .iter()
            .map(|e| DfgRecord {
                def: e.def,
                use_node: e.use_node,
                var: e.var.to_string(),
            })
            .collect(),
        entry: g.entry,
        exit: g.exit,
    };
    serde_json::to_string_pretty(&doc).expect("interchange document serializes")
}

fn variables(element: &str, names: &[String]) -> Result<BTreeSet<Variable>, FormatError> {
    let mut out = BTreeSet::new();
    for n in names {
        if n.is_empty() {
            return Err(FormatError::new(element, "empty variable name"));
        }
        if !out.insert(Variable::new(n.clone())) {
            return Err(FormatError::new(
                element,
                format!("variable `{n}` listed twice"),
            ));
        }
    }
    Ok(out)
}

/// Parses and validates an interchange document.
pub fn import_graph(text: &str) -> Result<FlowGraph, FormatError> {
    let doc: Document =
        serde_json::from_str(text).map_err(|e| FormatError::new("document", e.to_string()))?;

    let mut nodes = BTreeMap::new();
    for r in doc.nodes {
        let element = format!("node {}", r.id);
        let kind = r
            .kind
            .parse::<NodeKind>()
            .map_err(|m| FormatError::new(&element, m))?;
        let node = FlowNode {
            id: r.id,
            kind,
            label: r.label,
            line: r.line,
            defs: variables(&element, &r.defs)?,
            uses: variables(&element, &r.uses)?,
        };
        if nodes.insert(r.id, node).is_some() {
            return Err(FormatError::new(element, "duplicate node id"));
        }
    }

    let mut cfg = Vec::with_capacity(doc.cfg.len());
    for r in doc.cfg {
        let element = format!("cfg edge {}->{}", r.src, r.dst);
        let kind = r
            .kind
            .parse::<EdgeKind>()
            .map_err(|m| FormatError::new(&element, m))?;
        cfg.push(CfgEdge {
            src: r.src,
            dst: r.dst,
            kind,
        });
    }
    let dfg = doc
        .dfg
        .into_iter()
        .map(|r| DfgEdge {
            def: r.def,
            use_node: r.use_node,
            var: Variable::new(r.var),
        })
        .collect();

    let g = FlowGraph {
        nodes,
        cfg,
        dfg,
        entry: doc.entry,
        exit: doc.exit,
    };
    validate(&g)?;
    Ok(g)
}

/// Checks every structural invariant of a flow graph.
pub fn validate(g: &FlowGraph) -> Result<(), FormatError> {
    let node_el = |id: NodeId| format!("node {id}");
    let edge_el = |e: &CfgEdge| format!("cfg edge {}->{}", e.src, e.dst);

    for (id, want) in [(g.entry, NodeKind::Entry), (g.exit, NodeKind::Exit)] {
        match g.nodes.get(&id) {
            None => {
                return Err(FormatError::new(
                    node_el(id),
                    format!("{} node does not exist", want.as_str()),
                ))
            }
            Some(n) if n.kind != want => {
                return Err(FormatError::new(
                    node_el(id),
                    format!("expected kind {}", want.as_str()),
                ))
            }
            _ => {}
        }
    }
    for n in g.nodes.values() {
        let extra_terminal =
            matches!(n.kind, NodeKind::Entry | NodeKind::Exit) && n.id != g.entry && n.id != g.exit;
        if extra_terminal {
            return Err(FormatError::new(
                node_el(n.id),
                format!("second {} node", n.kind.as_str()),
            ));
        }
        if n.kind == NodeKind::Entry && !(n.defs.is_empty() && n.uses.is_empty()) {
            return Err(FormatError::new(
                node_el(n.id),
                "entry node has defs or uses",
            ));
        }
        if n.kind == NodeKind::Predicate && !n.defs.is_empty() {
            return Err(FormatError::new(node_el(n.id), "predicate node has defs"));
        }
    }

    let mut seen = BTreeSet::new();
    for e in &g.cfg {
        if !g.nodes.contains_key(&e.src) || !g.nodes.contains_key(&e.dst) {
            return Err(FormatError::new(edge_el(e), "endpoint does not exist"));
        }
        if !seen.insert(*e) {
            return Err(FormatError::new(edge_el(e), "duplicate edge"));
        }
        if e.dst == g.entry {
            return Err(FormatError::new(edge_el(e), "edge into entry"));
        }
    }

    for n in g.nodes.values() {
        let out: Vec<&CfgEdge> = g.out_edges(n.id).collect();
        let count = |b: BranchKind| out.iter().filter(|e| e.kind.branch == b).count();
        let ok = match n.kind {
            NodeKind::Exit => out.is_empty(),
            NodeKind::Predicate => {
                let (t, f, c) = (
                    count(BranchKind::True),
                    count(BranchKind::False),
                    count(BranchKind::Case),
                );
                f == 1 && ((t == 1 && c == 0) || (t == 0 && c >= 1)) && t + f + c == out.len()
            }
            _ => {
                out.len() == 1
                    && matches!(
                        out[0].kind.branch,
                        BranchKind::Seq | BranchKind::Fallthrough | BranchKind::Call
                    )
            }
        };
        if !ok {
            let kinds: Vec<String> = out.iter().map(|e| e.kind.to_string()).collect();
            return Err(FormatError::new(
                node_el(n.id),
                format!(
                    "{} node has out-edges [{}]",
                    n.kind.as_str(),
                    kinds.join(", ")
                ),
            ));
        }
    }

    let reach = |start: NodeId, forward: bool| {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            let next = if forward {
                g.successors(n)
            } else {
                g.predecessors(n)
            };
            for m in next {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen
    };
    let from_entry = reach(g.entry, true);
    let to_exit = reach(g.exit, false);
    for &id in g.nodes.keys() {
        if !from_entry.contains(&id) {
            return Err(FormatError::new(node_el(id), "not reachable from entry"));
        }
        if !to_exit.contains(&id) {
            return Err(FormatError::new(node_el(id), "cannot reach exit"));
        }
    }

    let rd = reaching_definitions(g);
    for e in &g.dfg {
        let element = format!("dfg edge {}->{} ({})", e.def, e.use_node, e.var);
        let (Some(d), Some(u)) = (g.nodes.get(&e.def), g.nodes.get(&e.use_node)) else {
            return Err(FormatError::new(element, "endpoint does not exist"));
        };
        if !d.defs.contains(&e.var) {
            return Err(FormatError::new(element, "variable not in defs of source"));
        }
        if !u.uses.contains(&e.var) {
            return Err(FormatError::new(element, "variable not in uses of target"));
        }
        if !rd[&e.use_node].contains(&(e.var.clone(), e.def)) {
            return Err(FormatError::new(element, "no definition-clear path"));
        }
    }
    Ok(())
}
