use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::model::{DfgEdge, FlowGraph, NodeId, Variable};

/// A definition site: variable plus defining node.
pub type Def = (Variable, NodeId);

/// IN sets of the classic reaching-definitions analysis, keyed by node.
pub type ReachingDefs = BTreeMap<NodeId, BTreeSet<Def>>;

/// A use that no definition reaches. These read method parameters or fields,
/// which are taken to be defined on entry, so no DFG edge is drawn.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UndefinedUse {
    pub node: NodeId,
    pub var: Variable,
}

fn transfer(g: &FlowGraph, id: NodeId, input: &BTreeSet<Def>) -> BTreeSet<Def> {
    let node = g.node(id);
    let mut out: BTreeSet<Def> = input
        .iter()
        .filter(|(v, _)| v.is_weak() || !node.defs.contains(v))
        .cloned()
        .collect();
    out.extend(node.defs.iter().map(|v| (v.clone(), id)));
    out
}

/// Worklist fixpoint of IN(n) = ⋃ OUT(pred), OUT(n) = gen(n) ∪ (IN(n) − kill(n)).
pub fn reaching_definitions(g: &FlowGraph) -> ReachingDefs {
    let mut preds: BTreeMap<NodeId, Vec<NodeId>> =
        g.nodes.keys().map(|&id| (id, Vec::new())).collect();
    let mut succs: BTreeMap<NodeId, Vec<NodeId>> = preds.clone();
    for e in &g.cfg {
        preds.get_mut(&e.dst).unwrap().push(e.src);
        succs.get_mut(&e.src).unwrap().push(e.dst);
    }

    let mut ins: ReachingDefs = g.nodes.keys().map(|&id| (id, BTreeSet::new())).collect();
    let mut outs: ReachingDefs = g
        .nodes
        .keys()
        .map(|&id| (id, transfer(g, id, &BTreeSet::new())))
        .collect();
    let mut queued: BTreeSet<NodeId> = g.nodes.keys().copied().collect();
    let mut work: VecDeque<NodeId> = queued.iter().copied().collect();

    while let Some(id) = work.pop_front() {
        queued.remove(&id);
        let input: BTreeSet<Def> = preds[&id]
            .iter()
            .flat_map(|p| outs[p].iter().cloned())
            .collect();
        let output = transfer(g, id, &input);
        ins.insert(id, input);
        if output != outs[&id] {
            outs.insert(id, output);
            for &s in &succs[&id] {
                if queued.insert(s) {
                    work.push_back(s);
                }
            }
        }
    }
    ins
}

/// Def-use edges from reaching definitions, plus the uses nothing reaches.
pub fn def_use_edges(g: &FlowGraph, reach: &ReachingDefs) -> (Vec<DfgEdge>, Vec<UndefinedUse>) {
    let mut edges = Vec::new();
    let mut undefined = Vec::new();
    for (&id, node) in &g.nodes {
        for var in &node.uses {
            let before = edges.len();
            edges.extend(
                reach[&id]
                    .iter()
                    .filter(|(v, _)| v == var)
                    .map(|(v, d)| DfgEdge {
                        def: *d,
                        use_node: id,
                        var: v.clone(),
                    }),
            );
            if edges.len() == before {
                undefined.push(UndefinedUse {
                    node: id,
                    var: var.clone(),
                });
            }
        }
    }
    edges.sort();
    (edges, undefined)
}

/// Populates the DFG of `g`, returning the uses with no reaching definition.
pub fn build_dfg(g: &mut FlowGraph) -> Vec<UndefinedUse> {
    let reach = reaching_definitions(g);
    let (edges, undefined) = def_use_edges(g, &reach);
    g.dfg = edges;
    undefined
}
