use std::fmt::Write;

use super::model::{FlowGraph, NodeKind};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: solid control-flow edges, dashed def-use edges.
pub fn to_dot(g: &FlowGraph) -> String {
    let mut out = String::from("digraph flowgraph {\n    node [fontname=\"monospace\"];\n");
    for n in g.nodes.values() {
        let shape = match n.kind {
            NodeKind::Entry | NodeKind::Exit => "oval",
            NodeKind::Predicate => "diamond",
            NodeKind::CallParam => "box, style=rounded",
            NodeKind::Statement => "box",
        };
        let _ = writeln!(
            out,
            "    n{} [label=\"{}: {}\", shape={}];",
            n.id,
            n.id,
            escape(&n.label),
            shape
        );
    }
    let mut cfg = g.cfg.clone();
    cfg.sort();
    for e in &cfg {
        let _ = writeln!(out, "    n{} -> n{} [label=\"{}\"];", e.src, e.dst, e.kind);
    }
    let mut dfg = g.dfg.clone();
    dfg.sort();
    for e in &dfg {
        let _ = writeln!(
            out,
            "    n{} -> n{} [label=\"{}\", style=dashed, color=blue];",
            e.def,
            e.use_node,
            escape(e.var.as_str())
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowgraph::build_graph;
    use crate::minij::parse_source;

    #[test]
    fn empty_method_has_two_nodes() {
        let p = parse_source("void m() { }").unwrap();
        let dot = to_dot(&build_graph(&p, "m").unwrap().graph);
        assert!(dot.starts_with("digraph flowgraph {"));
        assert_eq!(dot.matches("shape=").count(), 2);
        assert_eq!(dot.matches(" -> ").count(), 1);
    }

    #[test]
    fn labels_are_escaped() {
        let p = parse_source("void m() { s = \"a\\\"b\"; }").unwrap();
        let dot = to_dot(&build_graph(&p, "m").unwrap().graph);
        assert!(dot.contains(r#"s = \"a\\\"b\""#), "{dot}");
    }
}
