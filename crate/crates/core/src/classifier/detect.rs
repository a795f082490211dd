//! The eight detectors and the pipeline that runs them.
//!
//! Detectors run in a fixed order. Nodes explained by a structural class
//! (a guard or block region, a reordered run) are masked so the later,
//! node-level rules do not count them a second time.

use std::collections::{BTreeMap, BTreeSet};

use super::model::{EvidenceRef, FaultClass, FaultClassSet};
use super::structure::*;
use crate::align::{normalize_label, Alignment, EdgeDiff, PairStatus};
use crate::flowgraph::{
    reaching_definitions, CfgEdge, FlowGraph, JumpKind, NodeId, NodeKind, ReachingDefs,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Faulty,
    Fixed,
}

impl Side {
    fn tag(self, id: NodeId) -> EvidenceRef {
        match self {
            Side::Faulty => EvidenceRef::Faulty(id),
            Side::Fixed => EvidenceRef::Fixed(id),
        }
    }
}

/// Classes a detector is responsible for, and the detector.
type Step<P> = (&'static [FaultClass], fn(&mut P));

pub(crate) struct Pipeline<'a> {
    f: &'a FlowGraph,
    r: &'a FlowGraph,
    diff: &'a EdgeDiff,
    /// faulty -> fixed, grows when the order detector reclaims moved nodes
    fwd: BTreeMap<NodeId, NodeId>,
    bwd: BTreeMap<NodeId, NodeId>,
    modified: Vec<(NodeId, NodeId)>,
    masked_f: BTreeSet<NodeId>,
    masked_r: BTreeSet<NodeId>,
    pub(crate) result: FaultClassSet,
}

impl<'a> Pipeline<'a> {
    pub(crate) fn new(
        f: &'a FlowGraph,
        r: &'a FlowGraph,
        a: &Alignment,
        diff: &'a EdgeDiff,
    ) -> Self {
        Pipeline {
            f,
            r,
            diff,
            fwd: a.forward(),
            bwd: a.backward(),
            modified: a
                .pairs
                .iter()
                .filter(|p| p.status == PairStatus::Modified)
                .map(|p| (p.faulty, p.fixed))
                .collect(),
            masked_f: BTreeSet::new(),
            masked_r: BTreeSet::new(),
            result: FaultClassSet::new(),
        }
    }

    /// Runs the detectors in order, stopping after the one responsible for
    /// `last`.
    pub(crate) fn run_through(&mut self, last: FaultClass) {
        let steps: [Step<Self>; 7] = [
            (
                &[FaultClass::Block, FaultClass::Guard],
                Self::predicate_existence,
            ),
            (&[FaultClass::Pred], Self::pred),
            (&[FaultClass::Order], Self::order),
            (&[FaultClass::Jump], Self::jump),
            (&[FaultClass::Call], Self::call),
            (&[FaultClass::Def], Self::def),
            (&[FaultClass::Use], Self::use_),
        ];
        for (classes, step) in steps {
            step(self);
            if classes.contains(&last) {
                break;
            }
        }
    }

    fn graph(&self, side: Side) -> &'a FlowGraph {
        match side {
            Side::Faulty => self.f,
            Side::Fixed => self.r,
        }
    }

    fn is_matched(&self, side: Side, id: NodeId) -> bool {
        match side {
            Side::Faulty => self.fwd.contains_key(&id),
            Side::Fixed => self.bwd.contains_key(&id),
        }
    }

    fn is_masked(&self, side: Side, id: NodeId) -> bool {
        match side {
            Side::Faulty => self.masked_f.contains(&id),
            Side::Fixed => self.masked_r.contains(&id),
        }
    }

    fn mask(&mut self, side: Side, ids: impl IntoIterator<Item = NodeId>) {
        match side {
            Side::Faulty => self.masked_f.extend(ids),
            Side::Fixed => self.masked_r.extend(ids),
        }
    }

    fn unmatched(&self, side: Side) -> Vec<NodeId> {
        let g = self.graph(side);
        g.nodes
            .keys()
            .copied()
            .filter(|&id| !self.is_matched(side, id))
            .collect()
    }

    /// Changed CFG edges as seen from one side.
    fn changed_edges(&self, side: Side) -> impl Iterator<Item = &CfgEdge> + '_ {
        self.diff
            .cfg_changed
            .iter()
            .filter_map(move |(f, r)| match side {
                Side::Faulty => f.as_ref(),
                Side::Fixed => r.as_ref(),
            })
    }

    /// block and guard: an inserted or deleted predicate, classified by
    /// whether the nodes it guards exist on the other side.
    fn predicate_existence(&mut self) {
        for side in [Side::Faulty, Side::Fixed] {
            let g = self.graph(side);
            let ipdom = immediate_post_dominators(g);
            for p in self.unmatched(side) {
                if g.node(p).kind != NodeKind::Predicate {
                    continue;
                }
                let region = guarded_region(g, p, &ipdom);
                let core: Vec<NodeId> = region
                    .iter()
                    .copied()
                    .filter(|&n| !g.is_jump_value(n))
                    .collect();
                let cond = condition_calls(g, p);
                let changed_jumps: Vec<NodeId> = self
                    .changed_edges(side)
                    .filter(|e| e.kind.jump.is_some() && (e.src == p || region.contains(&e.src)))
                    .map(|e| e.src)
                    .collect();

                let all_new = !core.is_empty() && core.iter().all(|&n| !self.is_matched(side, n));
                let guards_existing = core.iter().any(|&n| self.is_matched(side, n));
                let mut evidence: Vec<EvidenceRef> = vec![side.tag(p)];
                evidence.extend(cond.iter().map(|&c| side.tag(c)));
                if all_new {
                    evidence.extend(region.iter().map(|&n| side.tag(n)));
                    self.result.insert(FaultClass::Block, evidence);
                } else if guards_existing || !changed_jumps.is_empty() {
                    self.result.insert(FaultClass::Guard, evidence);
                    if !changed_jumps.is_empty() {
                        self.result
                            .insert(FaultClass::Jump, changed_jumps.iter().map(|&n| side.tag(n)));
                    }
                } else {
                    continue;
                }
                self.mask(side, region.iter().copied().chain(cond).chain([p]));
            }
        }
    }

    /// pred: a changed condition on an unchanged branching structure.
    fn pred(&mut self) {
        for &(x, y) in &self.modified {
            if self.f.node(x).kind != NodeKind::Predicate || self.is_masked(Side::Faulty, x) {
                continue;
            }
            let mut kf: Vec<String> = self.f.out_edges(x).map(|e| e.kind.to_string()).collect();
            let mut kr: Vec<String> = self.r.out_edges(y).map(|e| e.kind.to_string()).collect();
            kf.sort();
            kr.sort();
            if kf != kr {
                continue;
            }
            let same_targets = self.f.out_edges(x).all(|ef| {
                let lf = self.mapped_landings(Side::Faulty, ef.dst, None);
                self.r
                    .out_edges(y)
                    .filter(|er| er.kind == ef.kind)
                    .any(|er| !lf.is_disjoint(&self.mapped_landings(Side::Fixed, er.dst, None)))
            });
            if same_targets {
                self.result.insert(
                    FaultClass::Pred,
                    [EvidenceRef::Faulty(x), EvidenceRef::Fixed(y)],
                );
            }
        }
    }

    /// Landings expressed in fixed-graph ids so both sides compare directly.
    fn mapped_landings(
        &self,
        side: Side,
        dst: NodeId,
        jump: Option<JumpKind>,
    ) -> BTreeSet<Landing> {
        let g = self.graph(side);
        let matched = |n: NodeId| self.is_matched(side, n);
        landings(g, dst, jump, &matched)
            .into_iter()
            .map(|l| match (side, l) {
                (Side::Faulty, Landing::Node(n)) => Landing::Node(self.fwd[&n]),
                _ => l,
            })
            .collect()
    }

    /// order: a node deleted and re-inserted with the same label inside a
    /// straight-line run whose node set is otherwise unchanged.
    fn order(&mut self) {
        let key = |g: &FlowGraph, n: NodeId| (g.node(n).kind, normalize_label(&g.node(n).label));
        let mut free_r: Vec<NodeId> = self
            .r
            .source_order()
            .into_iter()
            .filter(|&n| !self.is_matched(Side::Fixed, n))
            .collect();
        let mut moved = Vec::new();
        for x in self.f.source_order() {
            if self.is_matched(Side::Faulty, x) || self.is_masked(Side::Faulty, x) {
                continue;
            }
            if let Some(k) = free_r
                .iter()
                .position(|&y| !self.is_masked(Side::Fixed, y) && key(self.f, x) == key(self.r, y))
            {
                moved.push((x, free_r.remove(k)));
            }
        }
        if moved.is_empty() {
            return;
        }

        let mut with_moved = self.fwd.clone();
        with_moved.extend(moved.iter().copied());
        for (x, y) in moved {
            let chain_f = straight_chain(self.f, x);
            let chain_r = straight_chain(self.r, y);
            let seq_f: Vec<NodeId> = chain_f
                .iter()
                .filter_map(|n| with_moved.get(n).copied())
                .collect();
            let set_r: BTreeSet<NodeId> = chain_r.iter().copied().collect();
            let seq_f: Vec<NodeId> = seq_f.into_iter().filter(|n| set_r.contains(n)).collect();
            let seq_r: Vec<NodeId> = chain_r
                .iter()
                .copied()
                .filter(|n| seq_f.contains(n))
                .collect();
            let same_set: BTreeSet<NodeId> = seq_f.iter().copied().collect();
            if seq_f.len() < 2 || seq_f == seq_r || same_set != seq_r.iter().copied().collect() {
                continue;
            }
            let mut evidence: Vec<EvidenceRef> =
                vec![EvidenceRef::Faulty(x), EvidenceRef::Fixed(y)];
            evidence.extend(chain_f.iter().map(|&n| EvidenceRef::Faulty(n)));
            self.result.insert(FaultClass::Order, evidence);
            self.fwd.insert(x, y);
            self.bwd.insert(y, x);
            let before_f = self.f.predecessors(chain_f[0]);
            let before_r = self.r.predecessors(chain_r[0]);
            self.mask(Side::Faulty, chain_f.into_iter().chain(before_f));
            self.mask(Side::Fixed, chain_r.into_iter().chain(before_r));
        }
    }

    /// jump: a matched node whose outgoing edge lands somewhere else.
    fn jump(&mut self) {
        let mut sources: BTreeSet<NodeId> = BTreeSet::new();
        for (ef, er) in &self.diff.cfg_changed {
            if let Some(e) = ef {
                sources.insert(e.src);
            }
            if let Some(e) = er {
                if let Some(&x) = self.bwd.get(&e.src) {
                    sources.insert(x);
                }
            }
        }
        let mut fired = Vec::new();
        for x in sources {
            let Some(&y) = self.fwd.get(&x) else { continue };
            if self.is_masked(Side::Faulty, x) || self.is_masked(Side::Fixed, y) {
                continue;
            }
            let node = self.f.node(x);
            if node.kind == NodeKind::Exit {
                continue;
            }
            if node.kind == NodeKind::Predicate {
                for ef in self.f.out_edges(x) {
                    let Some(er) = self
                        .r
                        .out_edges(y)
                        .find(|e| e.kind.branch == ef.kind.branch)
                    else {
                        continue;
                    };
                    if ef.kind.jump.is_none() && er.kind.jump.is_none() {
                        continue;
                    }
                    if self
                        .mapped_landings(Side::Faulty, ef.dst, ef.kind.jump)
                        .is_disjoint(&self.mapped_landings(Side::Fixed, er.dst, er.kind.jump))
                    {
                        fired.extend([EvidenceRef::Faulty(x), EvidenceRef::Fixed(y)]);
                    }
                }
                continue;
            }
            let (Some(ef), Some(er)) = (self.f.out_edges(x).next(), self.r.out_edges(y).next())
            else {
                continue;
            };
            if self
                .mapped_landings(Side::Faulty, ef.dst, ef.kind.jump)
                .is_disjoint(&self.mapped_landings(Side::Fixed, er.dst, er.kind.jump))
            {
                fired.extend([EvidenceRef::Faulty(x), EvidenceRef::Fixed(y)]);
            }
        }
        if !fired.is_empty() {
            self.result.insert(FaultClass::Jump, fired);
        }
    }

    /// call: an inserted, deleted or retargeted call. A missing call with
    /// arguments also lacks its parameter definitions, so it is a def too.
    fn call(&mut self) {
        for side in [Side::Faulty, Side::Fixed] {
            let g = self.graph(side);
            for n in self.unmatched(side) {
                if g.node(n).kind != NodeKind::CallParam || self.is_masked(side, n) {
                    continue;
                }
                self.result.insert(FaultClass::Call, [side.tag(n)]);
                if side == Side::Fixed && call_shape(&g.node(n).label).1 > 0 {
                    self.result.insert(FaultClass::Def, [side.tag(n)]);
                }
            }
        }
        for &(x, y) in &self.modified {
            let (nf, nr) = (self.f.node(x), self.r.node(y));
            if nf.kind != NodeKind::CallParam
                || self.is_masked(Side::Faulty, x)
                || self.is_masked(Side::Fixed, y)
            {
                continue;
            }
            let refs = [EvidenceRef::Faulty(x), EvidenceRef::Fixed(y)];
            if call_shape(&nf.label) != call_shape(&nr.label) {
                self.result.insert(FaultClass::Call, refs);
            } else {
                self.result.insert(FaultClass::Def, refs);
            }
        }
    }

    /// def: a wrong value, a wrong target location, or a missing or
    /// extraneous definition.
    fn def(&mut self) {
        let rd_r = reaching_definitions(self.r);
        for &(x, y) in &self.modified {
            let (nf, nr) = (self.f.node(x), self.r.node(y));
            if nf.kind != NodeKind::Statement
                || self.is_masked(Side::Faulty, x)
                || self.is_masked(Side::Fixed, y)
            {
                continue;
            }
            let same_target = nf.defs == nr.defs;
            let same_value = assignment_rhs(&normalize_label(&nf.label))
                == assignment_rhs(&normalize_label(&nr.label));
            // a changed read of an existing value is a use fault, not a def
            if same_target && !same_value && self.reads_existing_value(&rd_r, x, y) {
                continue;
            }
            if !(same_target && same_value) {
                self.result.insert(
                    FaultClass::Def,
                    [EvidenceRef::Faulty(x), EvidenceRef::Fixed(y)],
                );
            }
        }
        for side in [Side::Fixed, Side::Faulty] {
            let g = self.graph(side);
            for n in self.unmatched(side) {
                let node = g.node(n);
                if node.kind == NodeKind::Statement
                    && !node.defs.is_empty()
                    && !self.is_masked(side, n)
                {
                    self.result.insert(FaultClass::Def, [side.tag(n)]);
                }
            }
        }
    }

    /// Whether fixed node `y` reads a variable that faulty node `x` does not,
    /// whose value already exists in the faulty program: its reaching
    /// definition has a faulty counterpart, or it has none and so is a
    /// parameter or field defined at entry.
    fn reads_existing_value(&self, rd_r: &ReachingDefs, x: NodeId, y: NodeId) -> bool {
        let (nf, nr) = (self.f.node(x), self.r.node(y));
        nr.uses
            .difference(&nf.uses)
            .filter(|v| !v.is_special())
            .any(|v| {
                let mut defs = rd_r[&y]
                    .iter()
                    .filter(|(dv, _)| dv == v)
                    .map(|(_, d)| *d)
                    .peekable();
                defs.peek().is_none() || defs.any(|d| self.bwd.contains_key(&d))
            })
    }

    /// use: a matched node reads a variable in the fixed version whose
    /// value is already available in the faulty program.
    fn use_(&mut self) {
        let rd_r = reaching_definitions(self.r);
        let pairs: Vec<(NodeId, NodeId)> = self.fwd.iter().map(|(&x, &y)| (x, y)).collect();
        for (x, y) in pairs {
            if self.is_masked(Side::Faulty, x) || self.is_masked(Side::Fixed, y) {
                continue;
            }
            if self.reads_existing_value(&rd_r, x, y) {
                self.result.insert(
                    FaultClass::Use,
                    [EvidenceRef::Faulty(x), EvidenceRef::Fixed(y)],
                );
            }
        }
    }
}
