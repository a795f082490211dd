//! Reference def-use computation by explicit walk enumeration.
//!
//! Every walk from entry that visits each node at most twice is enumerated.
//! For each use at the end of such a walk, the walk is scanned backwards:
//! a strong variable is reached by its most recent definition only, a weak
//! (field or array) variable by every earlier definition. On acyclic graphs
//! this is plain path enumeration; on cyclic graphs it is path enumeration
//! over the twice-unrolled expansion, which suffices because any def-clear
//! path is the concatenation of two simple paths.

use std::collections::{BTreeMap, BTreeSet};

use ffc_core::flowgraph::{FlowGraph, NodeId};

/// (def node, use node, variable name)
pub type OracleEdge = (NodeId, NodeId, String);

fn is_weak(v: &str) -> bool {
    v.contains('.') || v.ends_with("[]")
}

pub fn dfg_by_walks(g: &FlowGraph) -> BTreeSet<OracleEdge> {
    let mut succ: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for e in &g.cfg {
        succ.entry(e.src).or_default().push(e.dst);
    }
    let mut out = BTreeSet::new();
    let mut walk = vec![g.entry];
    let mut visits: BTreeMap<NodeId, u8> = BTreeMap::from([(g.entry, 1)]);
    extend(g, &succ, &mut walk, &mut visits, &mut out);
    out
}

fn extend(
    g: &FlowGraph,
    succ: &BTreeMap<NodeId, Vec<NodeId>>,
    walk: &mut Vec<NodeId>,
    visits: &mut BTreeMap<NodeId, u8>,
    out: &mut BTreeSet<OracleEdge>,
) {
    let here = *walk.last().unwrap();
    record_uses(g, walk, out);
    for &next in succ.get(&here).map(Vec::as_slice).unwrap_or(&[]) {
        let count = visits.get(&next).copied().unwrap_or(0);
        if count >= 2 {
            continue;
        }
        visits.insert(next, count + 1);
        walk.push(next);
        extend(g, succ, walk, visits, out);
        walk.pop();
        visits.insert(next, count);
    }
}

fn record_uses(g: &FlowGraph, walk: &[NodeId], out: &mut BTreeSet<OracleEdge>) {
    let (&u, before) = walk.split_last().unwrap();
    for var in &g.nodes[&u].uses {
        let name = var.as_str();
        for &d in before.iter().rev() {
            if g.nodes[&d].defs.iter().any(|v| v.as_str() == name) {
                out.insert((d, u, name.to_string()));
                if !is_weak(name) {
                    break;
                }
            }
        }
    }
}

pub fn dfg_of(g: &FlowGraph) -> BTreeSet<OracleEdge> {
    g.dfg
        .iter()
        .map(|e| (e.def, e.use_node, e.var.to_string()))
        .collect()
}

pub fn is_acyclic(g: &FlowGraph) -> bool {
    let mut indeg: BTreeMap<NodeId, usize> = g.nodes.keys().map(|&k| (k, 0)).collect();
    for e in &g.cfg {
        *indeg.get_mut(&e.dst).unwrap() += 1;
    }
    let mut ready: Vec<NodeId> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&k, _)| k)
        .collect();
    let mut seen = 0;
    while let Some(n) = ready.pop() {
        seen += 1;
        for e in g.cfg.iter().filter(|e| e.src == n) {
            let d = indeg.get_mut(&e.dst).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.push(e.dst);
            }
        }
    }
    seen == g.nodes.len()
}
