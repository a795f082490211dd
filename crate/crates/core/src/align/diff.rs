use serde::Serialize;

use super::Alignment;
use crate::flowgraph::{BranchKind, CfgEdge, DfgEdge, FlowGraph};

/// Edges that do not survive the alignment. Each entry pairs a faulty edge
/// with the fixed edge that replaced it; a missing side means the edge only
/// exists in the other graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeDiff {
    pub cfg_changed: Vec<(Option<CfgEdge>, Option<CfgEdge>)>,
    pub dfg_changed: Vec<(Option<DfgEdge>, Option<DfgEdge>)>,
}

impl EdgeDiff {
    pub fn is_empty(&self) -> bool {
        self.cfg_changed.is_empty() && self.dfg_changed.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Cfg {
            src: u32,
            dst: u32,
            kind: String,
        }
        #[derive(Serialize)]
        struct Dfg<'a> {
            def: u32,
            #[serde(rename = "use")]
            use_node: u32,
            var: &'a str,
        }
        let cfg = |e: &Option<CfgEdge>| {
            e.map(|e| Cfg {
                src: e.src,
                dst: e.dst,
                kind: e.kind.to_string(),
            })
        };
        fn dfg(e: &Option<DfgEdge>) -> Option<Dfg<'_>> {
            e.as_ref().map(|e| Dfg {
                def: e.def,
                use_node: e.use_node,
                var: e.var.as_str(),
            })
        }
        serde_json::json!({
            "cfg_changed": self.cfg_changed.iter().map(|(f, r)| serde_json::json!({"faulty": cfg(f), "fixed": cfg(r)})).collect::<Vec<_>>(),
            "dfg_changed": self.dfg_changed.iter().map(|(f, r)| serde_json::json!({"faulty": dfg(f), "fixed": dfg(r)})).collect::<Vec<_>>(),
        })
    }
}

/// Out-edges of a non-predicate node are interchangeable whatever their
/// branch; predicate branches only pair with the same branch.
fn compatible(a: BranchKind, b: BranchKind) -> bool {
    let plain = |k| {
        matches!(
            k,
            BranchKind::Seq | BranchKind::Fallthrough | BranchKind::Call
        )
    };
    a == b || (plain(a) && plain(b))
}

pub fn edge_diff(faulty: &FlowGraph, fixed: &FlowGraph, a: &Alignment) -> EdgeDiff {
    let fwd = a.forward();

    let mut fixed_left: Vec<CfgEdge> = fixed.cfg.clone();
    let mut faulty_left = Vec::new();
    for e in &faulty.cfg {
        let mapped = fwd.get(&e.src).zip(fwd.get(&e.dst));
        let hit = mapped.and_then(|(&s, &d)| {
            fixed_left
                .iter()
                .position(|x| x.src == s && x.dst == d && x.kind == e.kind)
        });
        match hit {
            Some(i) => {
                fixed_left.remove(i);
            }
            None => faulty_left.push(*e),
        }
    }
    let mut cfg_changed = Vec::new();
    for e in faulty_left {
        let src = fwd.get(&e.src).copied();
        let dst = fwd.get(&e.dst).copied();
        let candidates: Vec<usize> = (0..fixed_left.len())
            .filter(|&i| {
                Some(fixed_left[i].src) == src
                    && compatible(fixed_left[i].kind.branch, e.kind.branch)
            })
            .collect();
        let pick = candidates
            .iter()
            .copied()
            .find(|&i| Some(fixed_left[i].dst) == dst)
            .or(candidates.first().copied());
        cfg_changed.push((Some(e), pick.map(|i| fixed_left.remove(i))));
    }
    cfg_changed.extend(fixed_left.into_iter().map(|e| (None, Some(e))));

    let mut fixed_left: Vec<DfgEdge> = fixed.dfg.clone();
    let mut faulty_left = Vec::new();
    for e in &faulty.dfg {
        let mapped = fwd.get(&e.def).zip(fwd.get(&e.use_node));
        let hit = mapped.and_then(|(&d, &u)| {
            fixed_left
                .iter()
                .position(|x| x.def == d && x.use_node == u && x.var == e.var)
        });
        match hit {
            Some(i) => {
                fixed_left.remove(i);
            }
            None => faulty_left.push(e.clone()),
        }
    }
    let mut dfg_changed = Vec::new();
    for e in faulty_left {
        let use_node = fwd.get(&e.use_node).copied();
        let pick = fixed_left
            .iter()
            .position(|x| Some(x.use_node) == use_node && x.var == e.var)
            .or_else(|| fixed_left.iter().position(|x| Some(x.use_node) == use_node));
        dfg_changed.push((Some(e), pick.map(|i| fixed_left.remove(i))));
    }
    dfg_changed.extend(fixed_left.into_iter().map(|e| (None, Some(e))));

    EdgeDiff {
        cfg_changed,
        dfg_changed,
    }
}
