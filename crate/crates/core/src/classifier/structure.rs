//! Graph queries shared by the detectors.

use std::collections::{BTreeMap, BTreeSet};

use crate::flowgraph::{BranchKind, FlowGraph, JumpKind, NodeId, NodeKind, Variable};

/// Immediate post-dominator of every node except exit.
pub(crate) fn immediate_post_dominators(g: &FlowGraph) -> BTreeMap<NodeId, NodeId> {
    let all: BTreeSet<NodeId> = g.nodes.keys().copied().collect();
    let mut pdom: BTreeMap<NodeId, BTreeSet<NodeId>> = g
        .nodes
        .keys()
        .map(|&id| {
            (
                id,
                if id == g.exit {
                    BTreeSet::from([id])
                } else {
                    all.clone()
                },
            )
        })
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &id in g.nodes.keys().rev() {
            if id == g.exit {
                continue;
            }
            let mut next: Option<BTreeSet<NodeId>> = None;
            for s in g.successors(id) {
                next = Some(match next {
                    None => pdom[&s].clone(),
                    Some(acc) => acc.intersection(&pdom[&s]).copied().collect(),
                });
            }
            let mut next = next.unwrap_or_default();
            next.insert(id);
            if next != pdom[&id] {
                pdom.insert(id, next);
                changed = true;
            }
        }
    }
    let mut ipdom = BTreeMap::new();
    for (&id, set) in &pdom {
        let strict: BTreeSet<NodeId> = set.iter().copied().filter(|&d| d != id).collect();
        if let Some(&d) = strict.iter().find(|&&d| pdom[&d] == strict) {
            ipdom.insert(id, d);
        }
    }
    ipdom
}

/// Nodes whose execution depends on predicate `p`: everything reachable from
/// its successors before control rejoins at the immediate post-dominator.
pub(crate) fn guarded_region(
    g: &FlowGraph,
    p: NodeId,
    ipdom: &BTreeMap<NodeId, NodeId>,
) -> BTreeSet<NodeId> {
    let join = ipdom.get(&p).copied();
    let mut seen = BTreeSet::new();
    let mut stack = g.successors(p);
    while let Some(n) = stack.pop() {
        if n == p || Some(n) == join || n == g.exit || !seen.insert(n) {
            continue;
        }
        stack.extend(g.successors(n));
    }
    seen
}

/// Call nodes evaluated as part of predicate `p`'s condition: the chain of
/// value-producing calls feeding into it along call edges.
pub(crate) fn condition_calls(g: &FlowGraph, p: NodeId) -> Vec<NodeId> {
    let ret = Variable::ret();
    let mut out = Vec::new();
    let mut cur = p;
    loop {
        let ins: Vec<_> = g.in_edges(cur).collect();
        let [e] = ins.as_slice() else { break };
        let src = g.node(e.src);
        if e.kind.branch != BranchKind::Call
            || src.kind != NodeKind::CallParam
            || !src.defs.contains(&ret)
        {
            break;
        }
        if out.contains(&src.id) {
            break;
        }
        out.push(src.id);
        cur = src.id;
    }
    out
}

/// How a path leaves the method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Exit {
    Return,
    Throw,
}

/// A place control can arrive at: a matched node, or the exit together with
/// the way it was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Landing {
    Node(NodeId),
    Exit(Exit),
}

/// Landings reachable along edge `(src -> dst)` passing only through nodes
/// for which `matched` is false.
pub(crate) fn landings(
    g: &FlowGraph,
    dst: NodeId,
    jump: Option<JumpKind>,
    matched: &dyn Fn(NodeId) -> bool,
) -> BTreeSet<Landing> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let mut stack = vec![(dst, jump)];
    while let Some((n, jump)) = stack.pop() {
        if n == g.exit {
            out.insert(Landing::Exit(if jump == Some(JumpKind::Throw) {
                Exit::Throw
            } else {
                Exit::Return
            }));
        } else if matched(n) {
            out.insert(Landing::Node(n));
        } else if seen.insert(n) {
            stack.extend(g.out_edges(n).map(|e| (e.dst, e.kind.jump)));
        }
    }
    out
}

/// Maximal straight-line run of statement and call nodes through `n`.
pub(crate) fn straight_chain(g: &FlowGraph, n: NodeId) -> Vec<NodeId> {
    let plain = |id: NodeId| matches!(g.node(id).kind, NodeKind::Statement | NodeKind::CallParam);
    if !plain(n) {
        return vec![n];
    }
    let mut chain = vec![n];
    let mut cur = n;
    loop {
        let preds = g.predecessors(cur);
        let [p] = preds.as_slice() else { break };
        if !plain(*p) || g.successors(*p).len() != 1 || chain.contains(p) {
            break;
        }
        chain.insert(0, *p);
        cur = *p;
    }
    cur = n;
    loop {
        let succs = g.successors(cur);
        let [s] = succs.as_slice() else { break };
        if !plain(*s) || g.predecessors(*s).len() != 1 || chain.contains(s) {
            break;
        }
        chain.push(*s);
        cur = *s;
    }
    chain
}

/// Callee text and argument count of the outermost call in a call-node
/// label, e.g. `attributes.remove(attrKey)` gives `("attributes.remove", 1)`.
pub(crate) fn call_shape(label: &str) -> (String, usize) {
    let bytes: Vec<char> = label.chars().collect();
    if bytes.last() != Some(&')') {
        return (label.to_string(), 0);
    }
    // find the '(' matching the final ')', skipping string and char literals
    let mut depth = 0usize;
    let mut open = None;
    let mut i = bytes.len();
    let mut quote: Option<char> = None;
    while i > 0 {
        i -= 1;
        let c = bytes[i];
        if let Some(q) = quote {
            if c == q && (i == 0 || bytes[i - 1] != '\\') {
                quote = None;
            }
            continue;
        }
        match c {
            '"' | '\'' => quote = Some(c),
            ')' | ']' => depth += 1,
            '(' | '[' => {
                depth -= 1;
                if depth == 0 {
                    open = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let Some(open) = open else {
        return (label.to_string(), 0);
    };
    let target: String = bytes[..open].iter().collect();
    let inner: Vec<char> = bytes[open + 1..bytes.len() - 1].to_vec();
    if inner.iter().all(|c| c.is_whitespace()) {
        return (target, 0);
    }
    let mut depth = 0usize;
    let mut quote: Option<char> = None;
    let mut args = 1;
    let mut prev = ' ';
    for &c in &inner {
        if let Some(q) = quote {
            if c == q && prev != '\\' {
                quote = None;
            }
        } else {
            match c {
                '"' | '\'' => quote = Some(c),
                '(' | '[' => depth += 1,
                ')' | ']' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => args += 1,
                _ => {}
            }
        }
        prev = c;
    }
    (target, args)
}

/// Right-hand side of an assignment label. Compound operators stay part of
/// the value (`pos += c.length` gives `+= c.length`); labels that are not
/// assignments are returned whole.
pub(crate) fn assignment_rhs(label: &str) -> String {
    const OPS: &str = "+-*/%&|^<>!=";
    let chars: Vec<char> = label.chars().collect();
    let mut depth = 0i32;
    let mut quote: Option<char> = None;
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if let Some(q) = quote {
            if c == '\\' {
                k += 1;
            } else if c == q {
                quote = None;
            }
            k += 1;
            continue;
        }
        match c {
            '"' | '\'' => quote = Some(c),
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '=' if depth == 0 => {
                if chars.get(k + 1) == Some(&'=') {
                    k += 2;
                    continue;
                }
                let run_start = chars[..k]
                    .iter()
                    .rposition(|c| !OPS.contains(*c))
                    .map_or(0, |p| p + 1);
                let run: String = chars[run_start..k].iter().collect();
                let rest: String = chars[k + 1..].iter().collect();
                match run.as_str() {
                    "" => return rest.trim().to_string(),
                    "+" | "-" | "*" | "/" | "%" | "&" | "|" | "^" | "<<" | ">>" | ">>>" => {
                        return format!("{run}= {}", rest.trim());
                    }
                    _ => {}
                }
            }
            _ => {}
        }
        k += 1;
    }
    label.to_string()
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

    fn id(g: &FlowGraph, label: &str) -> NodeId {
        g.nodes.values().find(|n| n.label == label).unwrap().id
    }

    fn labels(g: &FlowGraph, ids: impl IntoIterator<Item = NodeId>) -> Vec<String> {
        ids.into_iter().map(|i| g.node(i).label.clone()).collect()
    }

    #[test]
    fn region_of_if_stops_at_join() {
        let g = graph("void m(c) { if (c) { x = 1; y = 2; } z = 3; }");
        let ipdom = immediate_post_dominators(&g);
        let p = id(&g, "if (c)");
        assert_eq!(ipdom[&p], id(&g, "z = 3"));
        assert_eq!(
            labels(&g, guarded_region(&g, p, &ipdom)),
            vec!["x = 1", "y = 2"]
        );
    }

    #[test]
    fn region_of_loop_includes_header_calls() {
        let g = graph("void m(n) { while (n.more()) { n = n.next(); } r = n; }");
        let ipdom = immediate_post_dominators(&g);
        let p = id(&g, "while (n.more())");
        let region = labels(&g, guarded_region(&g, p, &ipdom));
        assert_eq!(region, vec!["n.more()", "n.next()", "n = n.next()"]);
        assert_eq!(labels(&g, condition_calls(&g, p)), vec!["n.more()"]);
    }

    #[test]
    fn condition_calls_skip_statement_calls() {
        let g = graph("void m(a) { log(a); if (a.ok() || b.ok()) { } }");
        let p = id(&g, "if (a.ok() || b.ok())");
        assert_eq!(labels(&g, condition_calls(&g, p)), vec!["b.ok()", "a.ok()"]);
    }

    #[test]
    fn chains() {
        let g = graph("void m(c) { while (c != null) { t(c); n = c.next(); c = n; } }");
        let chain = straight_chain(&g, id(&g, "c.next()"));
        assert_eq!(
            labels(&g, chain),
            vec!["t(c)", "c.next()", "n = c.next()", "c = n"]
        );
    }

    #[test]
    fn landings_through_unmatched() {
        let g = graph("void m(c) { if (c) { throw new E(); } x = 1; }");
        let p = id(&g, "if (c)");
        let t = id(&g, "throw new E()");
        let matched = |n: NodeId| n != t;
        let e = g.out_edges(p).find(|e| e.dst == t).unwrap();
        assert_eq!(
            landings(&g, e.dst, e.kind.jump, &matched),
            BTreeSet::from([Landing::Exit(Exit::Throw)])
        );
    }

    #[test]
    fn call_shapes() {
        assert_eq!(
            call_shape("attributes.remove(attrKey)"),
            ("attributes.remove".into(), 1)
        );
        assert_eq!(call_shape("it.remove()"), ("it.remove".into(), 0));
        assert_eq!(call_shape("this(duration, null, null)"), ("this".into(), 3));
        assert_eq!(call_shape("f(g(a, b), \"x,)\", c[1])"), ("f".into(), 3));
        assert_eq!(
            call_shape("a.keySet().iterator()"),
            ("a.keySet().iterator".into(), 0)
        );
    }

    #[test]
    fn assignment_sides() {
        assert_eq!(assignment_rhs("swap[r] = r"), "r");
        assert_eq!(assignment_rhs("swapR = r"), "r");
        assert_eq!(assignment_rhs("pos += c.length"), "+= c.length");
        assert_eq!(assignment_rhs("x = a == b"), "a == b");
        assert_eq!(assignment_rhs("m[i == j] = 1"), "1");
        assert_eq!(assignment_rhs("return a"), "return a");
        assert_eq!(assignment_rhs("x >>>= 2"), ">>>= 2");
    }
}
