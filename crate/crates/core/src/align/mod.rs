//! Node correspondence between the faulty and the fixed flow graph.
//!
//! Nodes with equal kind and normalized label are anchored by a longest
//! common subsequence over source order. Between consecutive anchors,
//! leftover nodes of the same kind are paired as modified, preferring pairs
//! whose labels share the most identifiers. Everything else is deleted
//! (faulty only) or inserted (fixed only).

mod diff;
mod label;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::flowgraph::{FlowGraph, NodeId, NodeKind};

pub use diff::{edge_diff, EdgeDiff};
pub use label::normalize_label;
use label::similarity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairStatus {
    Identical,
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodePair {
    pub faulty: NodeId,
    pub fixed: NodeId,
    pub status: PairStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Alignment {
    /// Sorted by faulty id.
    pub pairs: Vec<NodePair>,
    pub deleted: BTreeSet<NodeId>,
    pub inserted: BTreeSet<NodeId>,
}

impl Alignment {
    pub fn to_fixed(&self, faulty: NodeId) -> Option<NodeId> {
        self.pairs
            .iter()
            .find(|p| p.faulty == faulty)
            .map(|p| p.fixed)
    }

    pub fn to_faulty(&self, fixed: NodeId) -> Option<NodeId> {
        self.pairs
            .iter()
            .find(|p| p.fixed == fixed)
            .map(|p| p.faulty)
    }

    pub fn forward(&self) -> BTreeMap<NodeId, NodeId> {
        self.pairs.iter().map(|p| (p.faulty, p.fixed)).collect()
    }

    pub fn backward(&self) -> BTreeMap<NodeId, NodeId> {
        self.pairs.iter().map(|p| (p.fixed, p.faulty)).collect()
    }

    pub fn modified(&self) -> impl Iterator<Item = &NodePair> {
        self.pairs
            .iter()
            .filter(|p| p.status == PairStatus::Modified)
    }

    /// True when every node is paired identically.
    pub fn is_identity(&self) -> bool {
        self.deleted.is_empty()
            && self.inserted.is_empty()
            && self.pairs.iter().all(|p| p.status == PairStatus::Identical)
    }

    /// The same alignment seen from the other side.
    pub fn reversed(&self) -> Alignment {
        let mut pairs: Vec<NodePair> = self
            .pairs
            .iter()
            .map(|p| NodePair {
                faulty: p.fixed,
                fixed: p.faulty,
                status: p.status,
            })
            .collect();
        pairs.sort();
        Alignment {
            pairs,
            deleted: self.inserted.clone(),
            inserted: self.deleted.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("alignment serializes")
    }
}

type Key = (NodeKind, String);

fn keyed(g: &FlowGraph) -> (Vec<NodeId>, Vec<Key>) {
    let order = g.source_order();
    let keys = order
        .iter()
        .map(|&id| {
            let n = g.node(id);
            (n.kind, normalize_label(&n.label))
        })
        .collect();
    (order, keys)
}

/// Aligns `faulty` against `fixed`. The computation always runs in one
/// canonical orientation (the side with the smaller key sequence first), so
/// `align(r, f)` is exactly `align(f, r).reversed()`.
pub fn align(faulty: &FlowGraph, fixed: &FlowGraph) -> Alignment {
    let (fo, fk) = keyed(faulty);
    let (ro, rk) = keyed(fixed);
    if fk > rk {
        align_ordered(fixed, &ro, &rk, faulty, &fo, &fk).reversed()
    } else {
        align_ordered(faulty, &fo, &fk, fixed, &ro, &rk)
    }
}

fn align_ordered(
    a: &FlowGraph,
    a_order: &[NodeId],
    a_keys: &[Key],
    b: &FlowGraph,
    b_order: &[NodeId],
    b_keys: &[Key],
) -> Alignment {
    let anchors = lcs(a_keys, b_keys);
    let mut pairs: Vec<NodePair> = anchors
        .iter()
        .map(|&(i, j)| NodePair {
            faulty: a_order[i],
            fixed: b_order[j],
            status: PairStatus::Identical,
        })
        .collect();

    // gaps between consecutive anchors, with virtual anchors at both ends
    let mut bounds = vec![(usize::MAX, usize::MAX)];
    bounds.extend(anchors.iter().copied());
    bounds.push((a_keys.len(), b_keys.len()));
    for w in bounds.windows(2) {
        let (ai, bj) = w[0];
        let (a_start, b_start) = if ai == usize::MAX {
            (0, 0)
        } else {
            (ai + 1, bj + 1)
        };
        let a_gap: Vec<NodeId> = a_order[a_start..w[1].0].to_vec();
        let b_gap: Vec<NodeId> = b_order[b_start..w[1].1].to_vec();
        for (x, y) in pair_gap(a, &a_gap, b, &b_gap) {
            pairs.push(NodePair {
                faulty: x,
                fixed: y,
                status: PairStatus::Modified,
            });
        }
    }
    pairs.sort();

    let a_paired: BTreeSet<NodeId> = pairs.iter().map(|p| p.faulty).collect();
    let b_paired: BTreeSet<NodeId> = pairs.iter().map(|p| p.fixed).collect();
    Alignment {
        deleted: a_order
            .iter()
            .copied()
            .filter(|id| !a_paired.contains(id))
            .collect(),
        inserted: b_order
            .iter()
            .copied()
            .filter(|id| !b_paired.contains(id))
            .collect(),
        pairs,
    }
}

/// Index pairs of a longest common subsequence. Where several exist, each
/// match is taken as early as possible in both sequences.
fn lcs(a: &[Key], b: &[Key]) -> Vec<(usize, usize)> {
    let (n, m) = (a.len(), b.len());
    // suffix table: dp[i][j] = LCS length of a[i..], b[j..]
    let mut dp = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            dp[i][j] = if a[i] == b[j] {
                dp[i + 1][j + 1] + 1
            } else {
                dp[i + 1][j].max(dp[i][j + 1])
            };
        }
    }
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < n && j < m {
        if a[i] == b[j] {
            out.push((i, j));
            i += 1;
            j += 1;
        } else if dp[i + 1][j] >= dp[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Order-preserving pairing of same-kind nodes inside one gap: maximal
/// number of pairs, then maximal total label similarity.
fn pair_gap(
    a: &FlowGraph,
    a_gap: &[NodeId],
    b: &FlowGraph,
    b_gap: &[NodeId],
) -> Vec<(NodeId, NodeId)> {
    if a_gap.is_empty() || b_gap.is_empty() {
        return Vec::new();
    }
    let (n, m) = (a_gap.len(), b_gap.len());
    let score = |i: usize, j: usize| -> Option<(u32, u64)> {
        let (x, y) = (a.node(a_gap[i]), b.node(b_gap[j]));
        (x.kind == y.kind).then(|| (1, similarity(&x.label, &y.label)))
    };
    let mut dp = vec![vec![(0u32, 0u64); m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            let mut best = dp[i + 1][j].max(dp[i][j + 1]);
            if let Some((c, s)) = score(i, j) {
                let rest = dp[i + 1][j + 1];
                best = best.max((rest.0 + c, rest.1 + s));
            }
            dp[i][j] = best;
        }
    }
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < n && j < m {
        if let Some((c, s)) = score(i, j) {
            let rest = dp[i + 1][j + 1];
            if (rest.0 + c, rest.1 + s) == dp[i][j] {
                out.push((a_gap[i], b_gap[j]));
                i += 1;
                j += 1;
                continue;
            }
        }
        if dp[i + 1][j] == dp[i][j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowgraph::build_graph;
    use crate::minij::parse_source;

    fn graph(src: &str) -> FlowGraph {
        let p = parse_source(src).unwrap();
        build_graph(&p, &p.methods[0].name).unwrap().graph
    }

    fn label(g: &FlowGraph, id: NodeId) -> &str {
        &g.node(id).label
    }

    #[test]
    fn identity() {
        let g = graph("void m(c) { x = 1; if (c) { f(x); } }");
        let a = align(&g, &g);
        assert!(a.is_identity());
        assert_eq!(a.pairs.len(), g.nodes.len());
    }

    #[test]
    fn changed_predicate_is_modified() {
        let f = graph("int m() { if (dataset != null) { return result; } return 0; }");
        let r = graph("int m() { if (dataset == null) { return result; } return 0; }");
        let a = align(&f, &r);
        let modified: Vec<_> = a
            .modified()
            .map(|p| (label(&f, p.faulty), label(&r, p.fixed)))
            .collect();
        assert_eq!(
            modified,
            vec![("if (dataset != null)", "if (dataset == null)")]
        );
        assert!(a.deleted.is_empty() && a.inserted.is_empty());
    }

    #[test]
    fn kinds_must_agree_for_modification() {
        let f = graph("void m(c) { x = 1; y = 2; }");
        let r = graph("void m(c) { x = 1; if (c) { } y = 2; }");
        let a = align(&f, &r);
        assert_eq!(a.inserted.len(), 1);
        assert_eq!(label(&r, *a.inserted.first().unwrap()), "if (c)");
    }

    #[test]
    fn most_similar_candidate_wins() {
        let f = graph("void m(a, b) { result = a >>> b; }");
        let r = graph("void m(a, b) { l = a & 1; result = l >>> b; }");
        let a = align(&f, &r);
        let p = a.modified().next().unwrap();
        assert_eq!(label(&r, p.fixed), "result = l >>> b");
        assert_eq!(
            a.inserted.iter().map(|&i| label(&r, i)).collect::<Vec<_>>(),
            vec!["l = a & 1"]
        );
    }

    #[test]
    fn swapping_arguments_reverses_alignment() {
        let f = graph("void m(c) { a = 1; b = 2; if (c) { d = 3; } }");
        let r = graph("void m(c) { b = 2; a = 1; e = 4; }");
        assert_eq!(align(&r, &f), align(&f, &r).reversed());
        assert_eq!(align(&f, &r), align(&r, &f).reversed());
    }

    #[test]
    fn alignment_json_shape() {
        let g = graph("void m() { }");
        let v = align(&g, &g).to_json();
        assert_eq!(v["pairs"][0]["status"], "identical");
        assert!(v["deleted"].as_array().unwrap().is_empty());
    }
}
